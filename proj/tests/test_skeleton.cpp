#include <doctest.h>

#include <random>

#include "dynmatch/skeleton.hpp"
#include "support.hpp"

using namespace dynmatch;

namespace {

// Level-0 skeletons with L = 1 and eps = 1/4, so the activity thresholds are
// d/4 and 3d/4. With d = 4 (K44 fixtures) nodes of degree >= 3 turn active;
// with d = 2 (cycle fixtures) degree 2 suffices.
LevelSkeleton make(std::size_t n, int layers, double delta, double gamma = 0.25) {
  return LevelSkeleton(testutil::skeleton_params(n, 4.0, layers, delta, gamma), 0);
}

// A node of layer degree 1 keeps degree 1 or drops to 0 on the next layer;
// gamma = L_d widens the band enough to accept the former.
LevelSkeleton make_cycle(std::size_t n, double delta) {
  return LevelSkeleton(testutil::skeleton_params(n, 2.0, 2, delta, 2.0), 0);
}

void insert_all(LevelSkeleton& s, const std::vector<Edge>& edges) {
  for (const Edge& e : edges) s.handle(e, true);
}

LevelSkeleton::EdgeSet key_set(const std::vector<Edge>& edges) {
  LevelSkeleton::EdgeSet out;
  for (const Edge& e : edges) out.insert(e.key());
  return out;
}

struct Snapshot {
  std::vector<char> active, cdirty;
  LevelSkeleton::EdgeSet h;
  explicit Snapshot(const LevelSkeleton& s) : h(s.layer(0)) {
    for (NodeId v = 0; v < s.node_count(); ++v) {
      active.push_back(s.active(v));
      cdirty.push_back(s.c_dirty(v));
    }
  }
  bool operator==(const Snapshot&) const = default;
};

}  // namespace

TEST_CASE("thresholds") {
  auto s = make(4, 2, 0.5);
  CHECK(s.low_threshold() == doctest::Approx(1.0));
  CHECK(s.high_threshold() == doctest::Approx(3.0));
  CHECK(s.layers() == 2);
}

TEST_CASE("edge between two passive low-degree nodes is a no-op") {
  auto s = make(6, 2, 0.5);
  const auto d = s.handle(Edge(0, 1), true);
  CHECK(s.layer(0).empty());
  CHECK(s.c_dirty_count() == 0);
  CHECK(s.active_count() == 0);
  CHECK(d.x_added.empty());
  CHECK(d.x_removed.empty());
  CHECK_FALSE(d.revamped);
  CHECK(check_skeleton_invariants(s).passed());
}

TEST_CASE("fresh phase on K44: every layer halves exactly") {
  auto s = make(8, 2, 0.01);
  const auto edges = testutil::complete_bipartite(4, 4);
  insert_all(s, edges);
  CHECK(s.active_count() == 8);
  CHECK(s.c_dirty_count() == 0);
  CHECK(s.layer(0).size() == 16);
  CHECK(s.layer(1).size() == 8);
  CHECK(s.layer(2).size() == 4);
  for (NodeId v = 0; v < 8; ++v) {
    CHECK(s.layer_degree(v, 1) == 2);
    CHECK(s.layer_degree(v, 2) == 1);
    for (int j = 0; j <= 2; ++j) CHECK_FALSE(s.l_dirty(v, j));
  }
  const auto truth = key_set(edges);
  CHECK(check_skeleton_invariants(s, &truth).passed());

  // Mapping with no dirty nodes: S empty, B = A, T = P.
  const auto view = s.view();
  CHECK(view.S.empty());
  CHECK(view.B.size() == 8);
  CHECK(view.T.empty());
  CHECK(view.X.size() == 4);
}

TEST_CASE("rebuild on an 8-cycle") {
  auto s = make_cycle(8, 1.0);
  insert_all(s, testutil::cycle(8));
  s.revamp();
  REQUIRE(s.active_count() == 8);
  const Snapshot before(s);
  s.rebuild(1);
  CHECK(Snapshot(s) == before);
  CHECK(s.layer(1).size() == 4);
  CHECK(s.layer(2).size() == 2);
  for (NodeId v = 0; v < 8; ++v) CHECK(s.layer_degree(v, 1) == 1);
  CHECK(s.halving_violations() == 0);
}

TEST_CASE("rebuild does not alter the critical structure") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 20; ++round) {
    auto s = LevelSkeleton(testutil::skeleton_params(30, 8.0, 3, 0.5, 4.0), 0);
    const auto edges = testutil::random_edges(rng, 30, 0.25);
    insert_all(s, edges);
    for (int j = 1; j <= 3; ++j) {
      const Snapshot before(s);
      s.rebuild(j);
      CHECK(Snapshot(s) == before);
    }
    CHECK(s.halving_violations() == 0);
    for (int j = 1; j <= 3; ++j) {
      for (EdgeKey k : s.layer(j)) CHECK(s.layer(j - 1).count(k) == 1);
    }
  }
}

TEST_CASE("deleting a layer edge below the band marks the endpoint dirty from that layer up") {
  auto s = make_cycle(8, 1.0);
  insert_all(s, testutil::cycle(8));
  s.revamp();
  REQUIRE(s.active_count() == 8);
  // Pick an endpoint clean at every layer that owns an edge of H_2.
  NodeId v = 0;
  Edge e;
  bool found = false;
  for (EdgeKey k : s.layer(2)) {
    e = Edge::from_key(k);
    for (NodeId x : {e.u, e.v}) {
      if (!found && !s.l_dirty(x, 2)) {
        v = x;
        found = true;
      }
    }
    if (found) break;
  }
  REQUIRE(found);
  const auto before_monotone = s.monotonicity_violations();
  s.handle(e, false);
  CHECK(s.active(v));
  CHECK_FALSE(s.c_dirty(v));
  CHECK_FALSE(s.l_dirty(v, 0));
  CHECK(s.l_dirty(v, 1));
  CHECK(s.l_dirty(v, 2));
  CHECK(s.monotonicity_violations() == before_monotone);
}

TEST_CASE("an overfull c-dirty set ends the phase") {
  auto s = make(12, 2, 0.5, 2.0);
  const auto k44 = testutil::complete_bipartite(4, 4);
  insert_all(s, k44);
  s.revamp();
  const auto phases = s.phases();
  // Isolating two active nodes makes them c-dirty; two of eight exceeds the
  // budget delta/(L_d+1)|A| = 4/3.
  bool revamped = false;
  for (NodeId y = 4; y < 8; ++y) revamped |= s.handle(Edge(0, y), false).revamped;
  for (NodeId y = 4; y < 8; ++y) revamped |= s.handle(Edge(1, y), false).revamped;
  CHECK(revamped);
  CHECK(s.phases() > phases);
  CHECK(s.c_dirty_count() == 0);
  CHECK_FALSE(s.active(0));
  CHECK_FALSE(s.active(1));
  CHECK(s.l_dirty_count(0) == 0);
  const auto truth = key_set([&] {
    std::vector<Edge> live;
    for (const Edge& e : k44)
      if (e.u > 1) live.push_back(e);
    return live;
  }());
  CHECK(check_skeleton_invariants(s, &truth).passed());
}

TEST_CASE("revamp activates a c-dirty passive node and pulls in its edges") {
  auto s = make(12, 2, 1.0);
  insert_all(s, testutil::complete_bipartite(4, 4));
  s.revamp();
  for (NodeId leaf = 9; leaf <= 11; ++leaf) s.handle(Edge(8, leaf), true);
  REQUIRE(s.c_dirty(8));
  REQUIRE_FALSE(s.active(8));
  CHECK(s.layer(0).count(Edge(8, 9).key()) == 0);

  // A c-dirty node above the low threshold is big and spurious.
  const auto view = s.view();
  CHECK(std::binary_search(view.S.begin(), view.S.end(), NodeId(8)));
  CHECK(std::binary_search(view.B.begin(), view.B.end(), NodeId(8)));

  s.revamp();
  CHECK(s.active(8));
  CHECK_FALSE(s.c_dirty(8));
  CHECK(s.layer(0).count(Edge(8, 9).key()) == 1);
  CHECK(s.layer(0).count(Edge(8, 11).key()) == 1);
  CHECK_FALSE(s.active(9));
}

TEST_CASE("revamp with nothing dirty only rebuilds the layers") {
  auto s = make(8, 2, 0.01);
  insert_all(s, testutil::complete_bipartite(4, 4));
  const Snapshot before(s);
  const auto h1 = s.layer(1);
  const auto h2 = s.layer(2);
  s.revamp();
  CHECK(Snapshot(s) == before);
  CHECK(s.layer(1) == h1);
  CHECK(s.layer(2) == h2);
}

TEST_CASE("corrupted laminar family is reported with a witness") {
  auto s = make(8, 2, 0.01);
  insert_all(s, testutil::complete_bipartite(4, 4));
  REQUIRE(check_skeleton_invariants(s).passed());
  Edge outside;
  for (EdgeKey k : s.layer(0)) {
    if (!s.layer(1).count(k)) {
      outside = Edge::from_key(k);
      break;
    }
  }
  s.mutable_layer(2).insert(outside.key());
  const auto rep = check_skeleton_invariants(s);
  CHECK_FALSE(rep.passed());
  REQUIRE(rep.count("lam-1-nested") >= 1);
  bool witnessed = false;
  for (const auto& v : rep.violations())
    witnessed |= v.clause == "lam-1-nested" && v.witness.find(to_string(outside)) != std::string::npos;
  CHECK(witnessed);
}

TEST_CASE("edge set drift is reported") {
  auto s = make(8, 2, 0.01);
  const auto edges = testutil::complete_bipartite(4, 4);
  insert_all(s, edges);
  auto truth = key_set(edges);
  truth.erase(edges[0].key());
  CHECK(check_skeleton_invariants(s, &truth).count("edge-set") >= 1);
}

TEST_CASE("X deltas track the top layer") {
  std::mt19937_64 rng(17);
  auto s = LevelSkeleton(testutil::skeleton_params(24, 8.0, 2, 0.5, 4.0), 0);
  LevelSkeleton::EdgeSet x, live;
  for (int t = 0; t < 1500; ++t) {
    const Edge e(static_cast<NodeId>(rng() % 24), static_cast<NodeId>(rng() % 23 + 1));
    if (e.u == e.v) continue;
    const bool insert = !live.count(e.key());
    if (insert) {
      live.insert(e.key());
    } else {
      live.erase(e.key());
    }
    const auto d = s.handle(e, insert);
    for (const Edge& a : d.x_added) CHECK(x.insert(a.key()).second);
    for (const Edge& r : d.x_removed) CHECK(x.erase(r.key()) == 1);
    CHECK(x == s.layer(2));
  }
  CHECK(s.edges() == live);
  CHECK(s.halving_violations() == 0);
}
