#include <algorithm>
#include <map>
#include <tuple>

#include "chorale/features.hpp"

namespace chorale {

namespace {

// Leftmost-greedy selection of non-overlapping occurrences from ascending starts.
std::vector<std::size_t> non_overlapping(const std::vector<std::size_t>& starts, std::size_t length) {
  std::vector<std::size_t> kept;
  for (auto s : starts) {
    if (kept.empty() || s >= kept.back() + length) kept.push_back(s);
  }
  return kept;
}

bool contains(std::span<const int> tokens, const RepeatMatch& outer, const RepeatMatch& inner) {
  auto o = tokens.subspan(outer.occurrence_starts.front(), outer.length);
  auto i = tokens.subspan(inner.occurrence_starts.front(), inner.length);
  return std::search(o.begin(), o.end(), i.begin(), i.end()) != o.end();
}

}  // namespace

std::vector<RepeatMatch> find_repeats(std::span<const int> tokens) {
  const std::size_t n = tokens.size();
  // match[i][j] (i < j): length of the longest common suffix of tokens[..i]
  // and tokens[..j]. Only the strict upper triangle is used.
  std::vector<std::vector<std::size_t>> match(n, std::vector<std::size_t>(n, 0));
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (tokens[i] == tokens[j]) match[i][j] = (i > 0 ? match[i - 1][j - 1] : 0) + 1;
    }
  }

  std::vector<RepeatMatch> candidates;
  for (std::size_t end = 0; end < n; ++end) {
    // Suffixes of tokens[..end] up to `seen_before` long occurred earlier, so
    // this end position is not their first occurrence.
    std::size_t seen_before = 0;
    for (std::size_t i = 0; i < end; ++i) seen_before = std::max(seen_before, match[i][end]);
    std::size_t seen_after = 0;
    for (std::size_t j = end + 1; j < n; ++j) seen_after = std::max(seen_after, match[end][j]);

    for (std::size_t len = std::max<std::size_t>(2, seen_before + 1); len <= seen_after; ++len) {
      std::vector<std::size_t> starts{end + 1 - len};
      for (std::size_t j = end + 1; j < n; ++j) {
        if (match[end][j] >= len) starts.push_back(j + 1 - len);
      }
      auto kept = non_overlapping(starts, len);
      if (kept.size() >= 2) candidates.push_back(RepeatMatch{len, std::move(kept)});
    }
  }

  std::vector<RepeatMatch> reported;
  for (const auto& c : candidates) {
    bool absorbed = std::any_of(candidates.begin(), candidates.end(), [&](const RepeatMatch& other) {
      return other.length > c.length && other.occurrence_starts.size() == c.occurrence_starts.size() &&
             contains(tokens, other, c);
    });
    if (!absorbed) reported.push_back(c);
  }
  std::sort(reported.begin(), reported.end());
  return reported;
}

std::vector<RepeatedPattern> find_repeated_patterns(const Voice& voice) {
  using TokenKey = std::tuple<Letter, int, Rational>;
  std::map<TokenKey, int> ids;
  std::vector<int> tokens;
  tokens.reserve(voice.events.size());
  for (const auto& e : voice.events) {
    auto [it, _] = ids.try_emplace(TokenKey{e.pitch.letter, e.pitch.alter, e.duration}, static_cast<int>(ids.size()));
    tokens.push_back(it->second);
  }

  std::vector<RepeatedPattern> patterns;
  for (const auto& m : find_repeats(tokens)) {
    RepeatedPattern p;
    p.voice = voice.label;
    p.token_length = m.length;
    p.occurrence_count = m.occurrence_starts.size();
    const auto first = m.occurrence_starts.front();
    for (std::size_t k = first; k < first + m.length; ++k) p.quarter_length += voice.events[k].duration;
    for (auto s : m.occurrence_starts) p.occurrence_onsets.push_back(voice.events[s].onset);
    patterns.push_back(std::move(p));
  }
  return patterns;
}

}  // namespace chorale
