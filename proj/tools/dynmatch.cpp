// dynmatch: stream generation, replay with audits, validation and benchmarking.

#include <CLI11.hpp>
#include <iostream>

#include "dynmatch/harness.hpp"

using namespace dynmatch;

namespace {

Rational to_rational(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected p/q, an integer or a decimal, got '" + text + "'");
  }
}

struct AlgoFlags {
  std::string algo = "general";
  std::string eps = "1/4";
  std::string eps_dm, delta, gamma, skel_target, eps_k, delta_k;
  std::uint32_t d = 0;
  std::size_t audit_every = 100;
  std::size_t oracle_every = 25;
  std::uint64_t seed = 0;
  std::string stats_out = "-";

  void attach(CLI::App* app) {
    app->add_option("--algo", algo, "general or kernel")->check(CLI::IsMember({"general", "kernel"}));
    app->add_option("--eps", eps, "approximation parameter in (0,1)");
    app->add_option("--eps-dm", eps_dm, "matcher eps (defaults to --eps)");
    app->add_option("--delta", delta, "dirty-node budget override");
    app->add_option("--gamma", gamma, "laminar band override");
    app->add_option("--skel-target", skel_target, "skeleton degree target (default L^4)");
    app->add_option("--d", d, "kernel degree cap (default floor(sqrt n))");
    app->add_option("--eps-k", eps_k, "kernel eps (default 1/2000)");
    app->add_option("--delta-k", delta_k, "kernel delta (default 1/20)");
    app->add_option("--audit-every", audit_every, "audit cadence in events")->check(CLI::PositiveNumber);
    app->add_option("--oracle-every", oracle_every, "oracle cadence in events")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "recorded in the report");
    app->add_option("--stats-out", stats_out, "report path ('-' for stdout)");
  }

  RunConfig config() const {
    RunConfig c;
    c.algo = algo == "kernel" ? Algo::Kernel : Algo::General;
    c.eps = to_rational(eps, "--eps");
    if (!eps_dm.empty()) c.eps_dm = to_rational(eps_dm, "--eps-dm");
    if (!delta.empty()) c.overrides.delta = to_rational(delta, "--delta");
    if (!gamma.empty()) c.overrides.gamma = to_rational(gamma, "--gamma");
    if (!skel_target.empty()) c.overrides.skel_target = to_rational(skel_target, "--skel-target");
    if (d) c.d = d;
    if (!eps_k.empty()) c.eps_k = to_rational(eps_k, "--eps-k");
    if (!delta_k.empty()) c.delta_k = to_rational(delta_k, "--delta-k");
    c.audit_every = audit_every;
    c.oracle_every = oracle_every;
    c.seed = seed;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic approximate maximum matching toolkit"};
  app.require_subcommand(1);

  GenSpec gen;
  std::string gen_out = "-";
  auto* g = app.add_subcommand("gen", "generate an update stream");
  g->add_option("--kind", gen.kind, "random | sliding-window | delete-heavy | bipartite-random")
      ->check(CLI::IsMember({"random", "sliding-window", "delete-heavy", "bipartite-random"}));
  g->add_option("--n", gen.n, "node count")->required();
  g->add_option("--events", gen.events, "number of events")->required();
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--density", gen.density, "target average degree");
  g->add_option("-o,--out", gen_out, "output path ('-' for stdout)");

  std::string stream;
  AlgoFlags run_flags;
  auto* r = app.add_subcommand("run", "replay a stream with audits and oracle checks");
  r->add_option("stream", stream, "stream file")->required();
  run_flags.attach(r);

  std::string verify_path;
  auto* v = app.add_subcommand("verify", "validate a stream file");
  v->add_option("stream", verify_path, "stream file")->required();

  std::string bench_path;
  std::size_t repeats = 1;
  AlgoFlags bench_flags;
  auto* b = app.add_subcommand("bench", "replay without audits and report counters and timings");
  b->add_option("stream", bench_path, "stream file")->required();
  b->add_option("--repeats", repeats, "number of timed replays")->check(CLI::PositiveNumber);
  bench_flags.attach(b);

  try {
    app.parse(argc, argv);
    if (*g) return cmd_gen(gen, gen_out);
    if (*r) return cmd_run(run_flags.config(), stream, run_flags.stats_out);
    if (*v) return cmd_verify(verify_path);
    if (*b) return cmd_bench(bench_flags.config(), bench_path, repeats, bench_flags.stats_out);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return 1;
}
