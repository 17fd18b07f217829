#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dynmatch {

using NodeId = std::uint32_t;
using EdgeKey = std::uint64_t;

/// Undirected edge stored canonically as (min, max).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  static Edge from_key(EdgeKey k) {
    return Edge(static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xffffffffu));
  }
  EdgeKey key() const { return (static_cast<EdgeKey>(u) << 32) | v; }
  NodeId other(NodeId x) const { return x == u ? v : u; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::string to_string(const Edge& e);

enum class EventKind : std::uint8_t { Insert, Delete };

struct UpdateEvent {
  EventKind kind = EventKind::Insert;
  Edge edge;
  std::size_t seq = 0;

  bool is_insert() const { return kind == EventKind::Insert; }
};

struct UpdateStream {
  std::size_t n = 0;
  bool bipartite = false;
  std::vector<std::uint8_t> side;  // empty unless bipartite
  std::vector<UpdateEvent> events;
};

/// Parse or validation failure. `line` is 1-based (0 when not tied to a line),
/// `event` is the event index for presence violations.
class StreamError : public std::runtime_error {
 public:
  StreamError(std::size_t line, std::optional<std::size_t> event, const std::string& what)
      : std::runtime_error(what), line_(line), event_(event) {}
  std::size_t line() const { return line_; }
  std::optional<std::size_t> event() const { return event_; }

 private:
  std::size_t line_;
  std::optional<std::size_t> event_;
};

/// Parses and validates a `dynmatch-stream v1` document. Replays the events to
/// enforce the presence rule, so a returned stream is always replayable.
UpdateStream parse_stream(std::string_view text);

/// Inverse of parse_stream; emits the canonical text form.
std::string format_stream(const UpdateStream& s);

/// Simple undirected graph on a fixed node set with O(1) expected edge
/// insert/delete/lookup. Neighbour order is insertion order modulo swap-removal.
class DynamicGraph {
 public:
  DynamicGraph() = default;
  explicit DynamicGraph(std::size_t n) : adj_(n) {}

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return slots_.size(); }
  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
  bool contains(Edge e) const { return slots_.count(e.key()) != 0; }

  /// Both return false (and leave the graph untouched) on a presence violation.
  bool insert(Edge e);
  bool erase(Edge e);

  /// Applies an event; presence violations are programming errors here.
  void apply(const UpdateEvent& ev);

  /// All live edges in ascending canonical order.
  std::vector<Edge> edges() const;
  /// Incident edges of v, ascending by other endpoint.
  std::vector<NodeId> sorted_neighbors(NodeId v) const;

  void clear();

 private:
  std::vector<std::vector<NodeId>> adj_;
  // edge key -> (position in adj_[u], position in adj_[v])
  std::unordered_map<EdgeKey, std::pair<std::uint32_t, std::uint32_t>> slots_;

  void detach(NodeId x, std::uint32_t pos);
};

/// Builds a graph by replaying the first `prefix` events of a stream.
DynamicGraph replay(const UpdateStream& s, std::size_t prefix);

}  // namespace dynmatch
