#include "dynmatch/degmatch.hpp"

#include <algorithm>
#include <stdexcept>

#include "dynmatch/oracle.hpp"

namespace dynmatch {

BoundedDegreeMatcher::BoundedDegreeMatcher(std::size_t n, std::size_t d_max, const Rational& eps)
    : d_max_(d_max), eps_(eps), deg_(n, 0), m_(n) {
  if (eps.num <= 0) throw std::invalid_argument("matcher eps must be positive");
}

// updates > (eps/3) * size  <=>  3 * den * updates > num * size
bool BoundedDegreeMatcher::due() const {
  return static_cast<__int128>(3) * eps_.den * static_cast<__int128>(updates_) >
         static_cast<__int128>(eps_.num) * static_cast<__int128>(size_at_rebuild_);
}

MatchingDelta BoundedDegreeMatcher::apply(const UpdateEvent& ev) { return apply(ev.edge, ev.is_insert()); }

MatchingDelta BoundedDegreeMatcher::apply(Edge e, bool insert) {
  MatchingDelta out;
  ++work_.edge_touches;
  if (insert) {
    if (!keys_.insert(e.key()).second) throw std::logic_error("matcher: duplicate insert " + to_string(e));
    if (++deg_[e.u] > d_max_ || ++deg_[e.v] > d_max_) {
      throw std::logic_error("matcher: degree bound " + std::to_string(d_max_) + " exceeded at " + to_string(e));
    }
    if (!m_.matched(e.u) && !m_.matched(e.v)) {
      m_.add(e);
      out.added.push_back(e);
    }
  } else {
    if (!keys_.erase(e.key())) throw std::logic_error("matcher: delete of absent edge " + to_string(e));
    --deg_[e.u];
    --deg_[e.v];
    if (m_.contains(e)) {
      m_.remove(e);
      out.removed.push_back(e);
    }
  }
  ++updates_;
  if (due()) {
    const Matching before = m_;
    const MatchingDelta greedy = std::move(out);
    rebuild();
    out = MatchingDelta{};
    out.rebuilt = true;
    // Net change against the pre-event matching.
    auto fresh = [&](const Edge& x) { return !greedy.added.empty() && x == greedy.added.front(); };
    for (const Edge& x : before.edges()) {
      if (!m_.contains(x) && !fresh(x)) out.removed.push_back(x);
    }
    for (const Edge& x : m_.edges()) {
      if (!before.contains(x) || fresh(x)) out.added.push_back(x);
    }
    for (const Edge& x : greedy.removed) out.removed.push_back(x);
    std::sort(out.added.begin(), out.added.end());
    std::sort(out.removed.begin(), out.removed.end());
  }
  return out;
}

void BoundedDegreeMatcher::rebuild() {
  ++work_.matcher_rebuilds;
  const auto all = edges();
  work_.edge_touches += all.size();
  m_ = edmonds(deg_.size(), all, &m_);
  updates_ = 0;
  size_at_rebuild_ = m_.size();
}

std::vector<Edge> BoundedDegreeMatcher::edges() const {
  std::vector<Edge> out;
  out.reserve(keys_.size());
  for (EdgeKey k : keys_) out.push_back(Edge::from_key(k));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynmatch
