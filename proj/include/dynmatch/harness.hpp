#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"
#include "dynmatch/kernel.hpp"
#include "dynmatch/params.hpp"

namespace dynmatch {

struct GenSpec {
  std::string kind = "random";  // random | sliding-window | delete-heavy | bipartite-random
  std::size_t n = 100;
  std::size_t events = 1000;
  std::uint64_t seed = 1;
  double density = 4;  // target average degree
};

/// Deterministic in the spec. Throws std::invalid_argument for impossible
/// parameterizations.
UpdateStream generate_stream(const GenSpec& spec);

enum class Algo { General, Kernel };

struct RunConfig {
  Algo algo = Algo::General;
  Rational eps{1, 4};
  std::optional<Rational> eps_dm;  // defaults to eps
  ParamOverrides overrides;
  std::optional<std::uint32_t> d;  // kernel degree cap
  std::optional<Rational> eps_k;
  std::optional<Rational> delta_k;
  std::size_t audit_every = 100;
  std::size_t oracle_every = 25;
  std::uint64_t seed = 0;
  bool audits = true;  // false: bench mode, no audits or oracle calls
};

struct RunOutcome {
  nlohmann::json report;
  int exit_code = 0;  // 0 ok, 2 audit or asserted-bound failure
};

/// Replays a stream through the configured pipeline with periodic audits and
/// oracle comparisons. Wall-clock data lives only under report["timing"].
RunOutcome run_stream(const RunConfig& cfg, const UpdateStream& stream);

/// The report with every timing field removed.
nlohmann::json without_timing(nlohmann::json report);

// CLI entry points. Exit codes: 0 ok, 1 I/O or parse error, 2 audit failure.
int cmd_gen(const GenSpec& spec, const std::string& out_path);
int cmd_run(const RunConfig& cfg, const std::string& stream_path, const std::string& stats_out);
int cmd_verify(const std::string& stream_path);
int cmd_bench(RunConfig cfg, const std::string& stream_path, std::size_t repeats, const std::string& stats_out);

}  // namespace dynmatch
