#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "chorale/score.hpp"

namespace chorale::cli {

namespace fs = std::filesystem;

// Stable exit-code contract of every command.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUnusableInput = 2;

enum class OutputFormat { table, json };

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Worker cap from CHORALE_GRADER_THREADS, else the number of cores.
unsigned worker_count();

/// *.xml, *.musicxml and *.json directly inside `dir`, sorted by name.
std::vector<fs::path> list_chorale_files(const fs::path& dir);

struct LoadedSet {
  std::vector<Chorale> chorales;
  std::vector<fs::path> paths;  // parallel to chorales
  std::size_t failures = 0;
};

/// Parses every file (in parallel), keeps input order, and reports each
/// failure on `err`.
LoadedSet load_chorales(const std::vector<fs::path>& files, std::ostream& err);

int cmd_profile(const fs::path& dir, const fs::path& out_path, Streams io);
int cmd_grade(const std::vector<fs::path>& files, const fs::path& profile_path, OutputFormat format, Streams io);
int cmd_evaluate(const fs::path& dir_a, const fs::path& dir_b, const fs::path& profile_path, OutputFormat format,
                 Streams io);
int cmd_discriminate(const fs::path& pairs_manifest, const fs::path& profile_path, Streams io);
int cmd_corrupt(const fs::path& file, double rate, std::uint64_t seed, const fs::path& out_path, Streams io);
int cmd_convert(const fs::path& file, const fs::path& out_path, Streams io);

struct PairRow {
  fs::path real;
  fs::path other;
  std::size_t line = 0;
};

/// CSV with header `real,other`; relative paths resolve against the
/// manifest's directory. Malformed rows are reported on `err` and skipped.
std::vector<PairRow> read_pairs_manifest(const fs::path& manifest, std::ostream& err, std::size_t& skipped);

/// Full command-line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, Streams io);

}  // namespace chorale::cli
