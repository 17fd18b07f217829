#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dynmatch/candidate.hpp"
#include "dynmatch/degmatch.hpp"
#include "dynmatch/kernel.hpp"
#include "dynmatch/levels.hpp"
#include "dynmatch/skeleton.hpp"

namespace dynmatch {

/// General-graph pipeline: levels -> per-level skeletons -> X ∪ Y ->
/// bounded-degree matcher.
///
/// Each raw update goes through the level partition first. The resulting
/// bucket moves are consolidated per edge (first source, final target) and
/// delivered to skeleton levels as deletions/insertions, highest level first
/// and deletions before insertions within a level.
class GeneralPipeline {
 public:
  GeneralPipeline(const Params& params, const Rational& eps_dm);

  void apply(const UpdateEvent& ev);

  const DynamicGraph& graph() const { return g_; }
  const Params& params() const { return params_; }
  const LevelPartition& partition() const { return partition_; }
  /// nullptr for levels below L'.
  const LevelSkeleton* skeleton(int level) const;
  const CandidateEdgeSet& candidates() const { return candidates_; }
  const BoundedDegreeMatcher& matcher() const { return matcher_; }
  const Matching& matching() const { return matcher_.matching(); }

  std::uint64_t halving_checks() const;
  std::uint64_t halving_violations() const;
  std::uint64_t monotonicity_violations() const;
  WorkCounters counters() const;

  /// Full audit: partition, every skeleton level, candidate set against a
  /// from-scratch recomputation, its degree bound, and the matching.
  AuditReport audit() const;

 private:
  Params params_;
  DynamicGraph g_;
  LevelPartition partition_;
  std::vector<std::unique_ptr<LevelSkeleton>> skeletons_;  // index = level
  CandidateEdgeSet candidates_;
  BoundedDegreeMatcher matcher_;
};

/// Bipartite pipeline: kernel (T, H) + residual M^r -> bounded-degree matcher
/// on H ∪ M^r.
class KernelPipeline {
 public:
  KernelPipeline(std::size_t n, std::vector<std::uint8_t> side, const KernelConfig& cfg, const Rational& eps_dm);

  void apply(const UpdateEvent& ev);

  const DynamicGraph& graph() const { return g_; }
  const KernelState& kernel() const { return kernel_; }
  const BoundedDegreeMatcher& matcher() const { return matcher_; }
  const Matching& matching() const { return matcher_.matching(); }
  const std::vector<std::uint8_t>& side() const { return side_; }
  WorkCounters counters() const;
  AuditReport audit() const;

 private:
  std::vector<std::uint8_t> side_;
  DynamicGraph g_;
  KernelState kernel_;
  std::unordered_set<EdgeKey> fed_;  // edges currently handed to the matcher
  BoundedDegreeMatcher matcher_;
};

}  // namespace dynmatch
