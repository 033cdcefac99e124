#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace lamq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `lamq` command line with args[0] as the program name.
/// Failures print a single line to `err`, "error: usage: <message>" with
/// exit status 2 for flag problems or "error: runtime: <message>" with exit
/// status 1 for everything else.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ReproduceOptions {
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;
  std::size_t threads = 0;  // 0 selects the hardware concurrency
};

/// Generates the 125-sample synthetic Blast-Off set, runs every
/// (classifier, representation) cell under the subject holdout and the
/// 51-run random protocol, and writes into `out_dir`:
///   table_holdout.txt, table_random.txt, table_one_class.txt,
///   dataset_summary.json, reports/<protocol>/<model>_<rep>.json and
///   roc/<protocol>/<model>_<rep>.csv.
/// Everything is built in a staging directory and renamed into place at the
/// end. Throws lamq::Error with the failing stage named in the message.
void reproduce(const ReproduceOptions& options, std::ostream* log);

}  // namespace lamq::cli
