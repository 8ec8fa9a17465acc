#pragma once

/// Command-line front end: configuration, subcommand dispatch, registry
/// caching, audits, and machine-readable reports.
///
/// Subcommands: orbit, cycles, topology-audit, sigma-audit, recurrence,
/// pressure, report. Exit codes: 0 ok, 1 check failed, 2 orbit escaped,
/// 3 empty registry, 64 usage, 74 io. run_cli is in-process testable; the
/// binary is a thin wrapper around it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "collatz/dynamics.hpp"
#include "collatz/numeric.hpp"

namespace collatz::cli {

/// One resolved run: the map, the truncation bounds, orbit limits, output
/// shape, optional registry cache, and the battery seed. Topology-dependent
/// subcommands additionally require scan_bound doubled to fit inside the
/// carrier, so scanned points keep truncation-free neighborhoods.
struct RunConfig {
  dynamics::CollatzMap map = dynamics::CollatzMap::standard();
  Point carrier_bound = 128;
  std::uint64_t scan_bound = 64;
  dynamics::OrbitLimits limits;
  std::string format = "text";
  std::optional<std::filesystem::path> cache_path;
  std::uint64_t seed = 0;
  bool clip_subbasis = false;
};

/// Exit codes named for scripting against the tool.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kEscaped = 2,
  kEmptyRegistry = 3,
  kUsage = 64,
  kIo = 74,
};

/// Parses args (without the program name), runs one subcommand, and writes
/// results to out and notes/errors to err. Never throws; failures map to
/// the exit-code contract.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace collatz::cli
