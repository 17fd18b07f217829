#include "dynmatch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dynmatch/oracle.hpp"

namespace dynmatch {

namespace {

std::size_t matcher_degree_cap(const Params& p) {
  const double bound = std::floor(candidate_degree_bound(p));
  return static_cast<std::size_t>(std::min(bound, double(p.n)));
}

}  // namespace

GeneralPipeline::GeneralPipeline(const Params& params, const Rational& eps_dm)
    : params_(params),
      g_(params.n),
      partition_(params),
      skeletons_(static_cast<std::size_t>(params.L) + 1),
      candidates_(params.n),
      matcher_(params.n, matcher_degree_cap(params), eps_dm) {
  for (int i = 0; i <= params.L; ++i) {
    if (params.has_skeleton(i)) skeletons_[static_cast<std::size_t>(i)] = std::make_unique<LevelSkeleton>(params_, i);
  }
}

const LevelSkeleton* GeneralPipeline::skeleton(int level) const {
  if (level < 0 || level > params_.L) return nullptr;
  return skeletons_[static_cast<std::size_t>(level)].get();
}

void GeneralPipeline::apply(const UpdateEvent& ev) {
  g_.apply(ev);
  const ChangeLog log = partition_.update(g_, ev);

  // Consolidate: first source and final target per edge.
  std::map<EdgeKey, std::pair<int, int>> net;
  for (const BucketMove& m : log.bucket_moves) {
    auto [it, fresh] = net.try_emplace(m.e.key(), m.from, m.to);
    if (!fresh) it->second.second = m.to;
  }

  const int L = params_.L;
  std::vector<std::vector<Edge>> dels(static_cast<std::size_t>(L) + 1), ins(static_cast<std::size_t>(L) + 1);
  std::map<EdgeKey, int> cand;  // net membership change in X ∪ Y
  auto skeletal = [&](int lvl) { return lvl != kAbsent && lvl >= 0 && params_.has_skeleton(lvl); };
  auto in_y = [&](int lvl) { return lvl != kAbsent && lvl >= 0 && !params_.has_skeleton(lvl); };
  for (const auto& [key, ft] : net) {
    const auto [from, to] = ft;
    if (from == to) continue;
    const Edge e = Edge::from_key(key);
    if (skeletal(from)) dels[static_cast<std::size_t>(from)].push_back(e);
    if (skeletal(to)) ins[static_cast<std::size_t>(to)].push_back(e);
    if (in_y(from)) --cand[key];
    if (in_y(to)) ++cand[key];
  }
  for (int i = L; i >= 0; --i) {
    auto* sk = skeletons_[static_cast<std::size_t>(i)].get();
    if (!sk) continue;
    auto absorb = [&](const SkeletonDelta& d) {
      for (const Edge& x : d.x_removed) --cand[x.key()];
      for (const Edge& x : d.x_added) ++cand[x.key()];
    };
    for (const Edge& e : dels[static_cast<std::size_t>(i)]) absorb(sk->handle(e, false));
    for (const Edge& e : ins[static_cast<std::size_t>(i)]) absorb(sk->handle(e, true));
  }

  std::vector<Edge> gone, added;
  for (const auto& [key, c] : cand) {
    if (c < 0) gone.push_back(Edge::from_key(key));
    if (c > 0) added.push_back(Edge::from_key(key));
  }
  for (const Edge& e : gone) {
    candidates_.erase(e);
    matcher_.apply(e, false);
  }
  for (const Edge& e : added) {
    candidates_.insert(e);
    matcher_.apply(e, true);
  }
}

std::uint64_t GeneralPipeline::halving_checks() const {
  std::uint64_t c = 0;
  for (const auto& s : skeletons_) c += s ? s->halving_checks() : 0;
  return c;
}

std::uint64_t GeneralPipeline::halving_violations() const {
  std::uint64_t c = 0;
  for (const auto& s : skeletons_) c += s ? s->halving_violations() : 0;
  return c;
}

std::uint64_t GeneralPipeline::monotonicity_violations() const {
  std::uint64_t c = 0;
  for (const auto& s : skeletons_) c += s ? s->monotonicity_violations() : 0;
  return c;
}

WorkCounters GeneralPipeline::counters() const {
  WorkCounters w = partition_.counters();
  for (const auto& s : skeletons_) {
    if (s) w += s->counters();
  }
  w += matcher_.counters();
  return w;
}

AuditReport GeneralPipeline::audit() const {
  AuditReport r;
  r.merge(check_partition_invariants(partition_, g_), "partition/");
  for (const auto& s : skeletons_) {
    if (!s) continue;
    r.merge(check_skeleton_invariants(*s, &partition_.bucket(s->level())),
            "skeleton[" + std::to_string(s->level()) + "]/");
  }

  for (const char* c : {"candidate/from-scratch", "candidate/degree-bound", "matching/valid", "matching/within-candidates",
                        "skeleton/halving", "skeleton/monotonicity"}) {
    r.check(c);
  }
  std::unordered_set<EdgeKey> expect;
  for (int i = 0; i <= params_.L; ++i) {
    if (const auto* s = skeleton(i)) {
      for (EdgeKey k : s->layer(s->layers())) expect.insert(k);
    } else {
      for (EdgeKey k : partition_.bucket(i)) expect.insert(k);
    }
  }
  if (expect != candidates_.keys()) r.fail("candidate/from-scratch", "incremental X ∪ Y differs from recomputation");
  const double bound = candidate_degree_bound(params_);
  if (candidates_.max_degree() > bound) {
    r.fail("candidate/degree-bound", std::to_string(candidates_.max_degree()) + " > " + std::to_string(bound));
  }
  if (!is_valid_matching(matching(), g_)) r.fail("matching/valid", "maintained set is not a matching of G");
  for (const Edge& e : matching().edges()) {
    if (!candidates_.contains(e)) r.fail("matching/within-candidates", to_string(e));
  }
  if (halving_violations()) r.fail("skeleton/halving", std::to_string(halving_violations()) + " node-layer violations");
  if (monotonicity_violations()) {
    r.fail("skeleton/monotonicity", std::to_string(monotonicity_violations()) + " out-of-rebuild growth events");
  }
  return r;
}

KernelPipeline::KernelPipeline(std::size_t n, std::vector<std::uint8_t> side, const KernelConfig& cfg,
                               const Rational& eps_dm)
    : side_(side), g_(n), kernel_(n, std::move(side), cfg), matcher_(n, kernel_.d() + 2, eps_dm) {}

void KernelPipeline::apply(const UpdateEvent& ev) {
  g_.apply(ev);
  const KernelChangeLog log = kernel_.apply(ev);
  std::vector<Edge> gone, added;
  for (const Edge& e : log.touched) {
    const bool want = kernel_.in_kernel(e) || kernel_.in_residual(e);
    const bool have = fed_.count(e.key()) != 0;
    if (want && !have) added.push_back(e);
    if (!want && have) gone.push_back(e);
  }
  for (const Edge& e : gone) {
    fed_.erase(e.key());
    matcher_.apply(e, false);
  }
  for (const Edge& e : added) {
    fed_.insert(e.key());
    matcher_.apply(e, true);
  }
}

WorkCounters KernelPipeline::counters() const {
  WorkCounters w = kernel_.counters();
  w += matcher_.counters();
  return w;
}

AuditReport KernelPipeline::audit() const {
  AuditReport r;
  r.merge(check_kernel_invariants(kernel_, g_), "kernel/");
  r.check("matcher/edge-set");
  r.check("matching/valid");
  std::unordered_set<EdgeKey> expect;
  for (const Edge& e : kernel_.kernel_edges()) expect.insert(e.key());
  if (expect != fed_ || matcher_.edge_count() != fed_.size()) r.fail("matcher/edge-set", "matcher input differs from H ∪ M^r");
  if (!is_valid_matching(matching(), g_)) r.fail("matching/valid", "maintained set is not a matching of G");
  return r;
}

}  // namespace dynmatch
