#include "dynmatch/candidate.hpp"

#include <algorithm>
#include <cmath>

namespace dynmatch {

bool CandidateEdgeSet::insert(Edge e) {
  if (!keys_.insert(e.key()).second) return false;
  ++deg_[e.u];
  ++deg_[e.v];
  return true;
}

bool CandidateEdgeSet::erase(Edge e) {
  if (!keys_.erase(e.key())) return false;
  --deg_[e.u];
  --deg_[e.v];
  return true;
}

std::uint32_t CandidateEdgeSet::max_degree() const {
  return deg_.empty() ? 0 : *std::max_element(deg_.begin(), deg_.end());
}

std::vector<Edge> CandidateEdgeSet::edges() const {
  std::vector<Edge> out;
  out.reserve(keys_.size());
  for (EdgeKey k : keys_) out.push_back(Edge::from_key(k));
  std::sort(out.begin(), out.end());
  return out;
}

double candidate_degree_bound(const Params& p) {
  double lambda_max = 0;
  for (const auto& lc : p.levels) {
    if (lc.skeleton) lambda_max = std::max(lambda_max, lc.lambda);
  }
  const int skel_levels = std::max(0, p.L - p.Lprime + 1);
  const double d_lp = std::pow(p.beta.value(), p.Lprime) * p.alpha.value() * p.beta.value();
  return skel_levels * (lambda_max * p.skel_target.value() + 2) + (p.Lprime + 1) * d_lp;
}

}  // namespace dynmatch
