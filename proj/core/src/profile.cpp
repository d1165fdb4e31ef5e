#include "chorale/profile.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "chorale/errors.hpp"
#include "chorale/metrics.hpp"
#include "sha256.hpp"

namespace chorale {

namespace {

using nlohmann::json;

json distribution_to_json(const Distribution& d) {
  json entries = json::array();
  for (const auto& [v, m] : d.numeric_entries()) entries.push_back(json::array({v.str(), m}));
  for (const auto& [v, m] : d.categorical_entries()) entries.push_back(json::array({v, m}));
  return json{{"kind", std::string(to_string(d.kind()))}, {"entries", std::move(entries)}};
}

// Everything but the hash itself, in its serialized form.
json profile_body(const CorpusProfile& p) {
  json features = json::object();
  for (auto id : kFeatureIds) features[std::string(to_string(id))] = distribution_to_json(p.feature(id));
  return json{{"version", kProfileVersion},
              {"metric_convention", p.metric_convention},
              {"corpus_size", p.corpus_size},
              {"corpus_ids", p.corpus_ids},
              {"corpus_error_note_ratio", p.corpus_error_note_ratio},
              {"repeated_sequence_fallback", p.repeated_sequence_fallback},
              {"features", std::move(features)}};
}

[[noreturn]] void bad(const std::string& what) { throw ProfileFormatError("profile: " + what); }

Distribution distribution_from_json(const json& j, FeatureId id) {
  const std::string name(to_string(id));
  if (!j.is_object() || !j.contains("kind") || !j.contains("entries") || !j["entries"].is_array()) {
    bad("feature '" + name + "' needs kind and entries");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind != to_string(feature_kind(id))) bad("feature '" + name + "' has kind '" + kind + "'");
  try {
    if (feature_kind(id) == SupportKind::numeric) {
      std::vector<Distribution::NumericEntry> entries;
      for (const auto& e : j["entries"]) {
        entries.emplace_back(Rational::parse(e.at(0).get<std::string>()), e.at(1).get<double>());
      }
      return Distribution::from_masses(std::move(entries));
    }
    std::vector<Distribution::CategoricalEntry> entries;
    for (const auto& e : j["entries"]) entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
    return Distribution::from_masses(std::move(entries));
  } catch (const json::exception& e) {
    bad("feature '" + name + "': " + e.what());
  } catch (const Error& e) {
    bad("feature '" + name + "': " + e.what());
  }
}

}  // namespace

CorpusProfile build_profile(std::span<const Chorale> corpus) {
  if (corpus.size() < 2) {
    throw ProfileBuildError("a profile needs at least 2 chorales, got " + std::to_string(corpus.size()));
  }
  std::vector<FeatureObservations> per_chorale;
  per_chorale.reserve(corpus.size());
  for (const auto& c : corpus) {
    try {
      per_chorale.push_back(extract_observations(c));
    } catch (const Error& e) {
      throw ProfileBuildError("chorale '" + c.id() + "': " + e.what());
    }
  }

  FeatureObservations pooled;
  for (const auto& obs : per_chorale) {
    for (std::size_t f = 0; f < kFeatureIds.size(); ++f) {
      add_counts(pooled.numeric[f], obs.numeric[f]);
      add_counts(pooled.categorical[f], obs.categorical[f]);
    }
    pooled.parallel_error_count += obs.parallel_error_count;
    pooled.note_count += obs.note_count;
  }

  CorpusProfile profile;
  profile.corpus_size = static_cast<std::int64_t>(corpus.size());
  for (const auto& c : corpus) profile.corpus_ids.push_back(c.id());
  for (auto id : kFeatureIds) profile.features[static_cast<std::size_t>(id)] = pooled.distribution(id);
  profile.corpus_error_note_ratio =
      static_cast<double>(pooled.parallel_error_count) / static_cast<double>(pooled.note_count);

  const Distribution& repeats = profile.feature(FeatureId::repeated_sequence);
  if (repeats.empty()) throw ProfileBuildError("no chorale in the corpus has a repeated sequence");
  for (const auto& obs : per_chorale) {
    const auto d = obs.distribution(FeatureId::repeated_sequence);
    if (!d.empty()) profile.repeated_sequence_fallback = std::max(profile.repeated_sequence_fallback, wasserstein(d, repeats));
  }
  profile.content_hash = compute_content_hash(profile);
  return profile;
}

std::string compute_content_hash(const CorpusProfile& profile) {
  return "sha256:" + detail::sha256_hex(profile_body(profile).dump());
}

std::string write_profile_json(const CorpusProfile& profile) {
  json doc = profile_body(profile);
  doc["content_hash"] = profile.content_hash;
  return doc.dump(2) + "\n";
}

CorpusProfile parse_profile_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("expected an object");

  CorpusProfile p;
  try {
    if (doc.at("version").get<int>() != kProfileVersion) bad("unsupported version");
    p.metric_convention = doc.at("metric_convention").get<std::string>();
    p.corpus_size = doc.at("corpus_size").get<std::int64_t>();
    p.corpus_ids = doc.at("corpus_ids").get<std::vector<std::string>>();
    p.corpus_error_note_ratio = doc.at("corpus_error_note_ratio").get<double>();
    p.repeated_sequence_fallback = doc.at("repeated_sequence_fallback").get<double>();
    p.content_hash = doc.at("content_hash").get<std::string>();
    const json& features = doc.at("features");
    for (auto id : kFeatureIds) {
      p.features[static_cast<std::size_t>(id)] = distribution_from_json(features.at(std::string(to_string(id))), id);
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }

  if (p.metric_convention != kMetricConvention) {
    bad("metric convention '" + p.metric_convention + "' does not match '" + std::string(kMetricConvention) + "'");
  }
  if (p.corpus_size < 2) bad("corpus_size below 2");
  if (p.corpus_error_note_ratio < 0 || p.repeated_sequence_fallback < 0) bad("negative ratio or fallback");
  for (auto id : kFeatureIds) {
    if (id != FeatureId::parallel_errors && p.feature(id).empty()) bad("feature '" + std::string(to_string(id)) + "' is empty");
  }
  if (compute_content_hash(p) != p.content_hash) bad("content hash mismatch");
  return p;
}

}  // namespace chorale
