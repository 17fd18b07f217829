#include "dynmatch/graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace dynmatch {

std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

bool DynamicGraph::insert(Edge e) {
  if (e.u == e.v || e.v >= adj_.size()) return false;
  auto [it, fresh] = slots_.try_emplace(e.key());
  if (!fresh) return false;
  it->second = {static_cast<std::uint32_t>(adj_[e.u].size()),
                static_cast<std::uint32_t>(adj_[e.v].size())};
  adj_[e.u].push_back(e.v);
  adj_[e.v].push_back(e.u);
  return true;
}

void DynamicGraph::detach(NodeId x, std::uint32_t pos) {
  auto& list = adj_[x];
  const std::uint32_t last = static_cast<std::uint32_t>(list.size() - 1);
  if (pos != last) {
    const NodeId moved = list[last];
    list[pos] = moved;
    auto& slot = slots_.at(Edge(x, moved).key());
    if (x < moved) {
      slot.first = pos;
    } else {
      slot.second = pos;
    }
  }
  list.pop_back();
}

bool DynamicGraph::erase(Edge e) {
  auto it = slots_.find(e.key());
  if (it == slots_.end()) return false;
  const auto [pu, pv] = it->second;
  slots_.erase(it);
  detach(e.u, pu);
  detach(e.v, pv);
  return true;
}

void DynamicGraph::apply(const UpdateEvent& ev) {
  const bool ok = ev.is_insert() ? insert(ev.edge) : erase(ev.edge);
  if (!ok) {
    throw std::logic_error("presence violation applying event " + std::to_string(ev.seq) +
                           " on edge " + to_string(ev.edge));
  }
}

std::vector<Edge> DynamicGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(slots_.size());
  for (const auto& [k, _] : slots_) out.push_back(Edge::from_key(k));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> DynamicGraph::sorted_neighbors(NodeId v) const {
  std::vector<NodeId> out(adj_[v].begin(), adj_[v].end());
  std::sort(out.begin(), out.end());
  return out;
}

void DynamicGraph::clear() {
  for (auto& a : adj_) a.clear();
  slots_.clear();
}

DynamicGraph replay(const UpdateStream& s, std::size_t prefix) {
  DynamicGraph g(s.n);
  for (std::size_t i = 0; i < prefix && i < s.events.size(); ++i) g.apply(s.events[i]);
  return g;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::size_t parse_natural(std::string_view tok, std::size_t line) {
  std::size_t value = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw StreamError(line, std::nullopt,
                      "line " + std::to_string(line) + ": expected a natural number, got '" +
                          std::string(tok) + "'");
  }
  return value;
}

}  // namespace

UpdateStream parse_stream(std::string_view text) {
  UpdateStream s;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  enum class Stage { Magic, Header, Sides, Events } stage = Stage::Magic;
  std::size_t sides_seen = 0;
  std::vector<bool> side_set;
  std::unordered_set<EdgeKey> live;

  auto fail = [&](const std::string& msg) -> StreamError {
    return StreamError(line_no, std::nullopt, "line " + std::to_string(line_no) + ": " + msg);
  };

  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') {
      if (nl == text.size()) break;
      continue;
    }

    switch (stage) {
      case Stage::Magic:
        if (toks.size() != 2 || toks[0] != "dynmatch-stream" || toks[1] != "v1") {
          throw fail("expected 'dynmatch-stream v1'");
        }
        stage = Stage::Header;
        break;
      case Stage::Header: {
        if (toks.size() != 3 || toks[0] != "n") throw fail("expected 'n <N> <general|bipartite>'");
        s.n = parse_natural(toks[1], line_no);
        if (toks[2] == "general") {
          s.bipartite = false;
          stage = Stage::Events;
        } else if (toks[2] == "bipartite") {
          s.bipartite = true;
          s.side.assign(s.n, 0);
          side_set.assign(s.n, false);
          stage = s.n == 0 ? Stage::Events : Stage::Sides;
        } else {
          throw fail("graph kind must be 'general' or 'bipartite'");
        }
        break;
      }
      case Stage::Sides:
        if (toks[0] == "side") {
          if (toks.size() != 3) throw fail("expected 'side <v> <0|1>'");
          const std::size_t v = parse_natural(toks[1], line_no);
          const std::size_t b = parse_natural(toks[2], line_no);
          if (v >= s.n) throw fail("side for node " + std::to_string(v) + " out of range");
          if (b > 1) throw fail("side must be 0 or 1");
          if (side_set[v]) throw fail("duplicate side for node " + std::to_string(v));
          side_set[v] = true;
          s.side[v] = static_cast<std::uint8_t>(b);
          if (++sides_seen == s.n) stage = Stage::Events;
          break;
        }
        throw fail("bipartite stream needs a side for every node before events (" +
                   std::to_string(sides_seen) + " of " + std::to_string(s.n) + " given)");
      case Stage::Events: {
        if (toks[0] == "side") throw fail("side records must precede events");
        if (toks.size() != 3 || (toks[0] != "+" && toks[0] != "-")) {
          throw fail("expected '+ <u> <v>' or '- <u> <v>'");
        }
        const std::size_t a = parse_natural(toks[1], line_no);
        const std::size_t b = parse_natural(toks[2], line_no);
        if (a >= s.n || b >= s.n) throw fail("node id out of range");
        if (a == b) throw fail("self-loop");
        UpdateEvent ev;
        ev.kind = toks[0] == "+" ? EventKind::Insert : EventKind::Delete;
        ev.edge = Edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
        ev.seq = s.events.size();
        if (ev.is_insert()) {
          if (s.bipartite && s.side[a] == s.side[b]) {
            throw StreamError(line_no, ev.seq,
                              "line " + std::to_string(line_no) + ": edge inside one side at event " +
                                  std::to_string(ev.seq));
          }
          if (!live.insert(ev.edge.key()).second) {
            throw StreamError(line_no, ev.seq,
                              "line " + std::to_string(line_no) + ": duplicate insert at event " +
                                  std::to_string(ev.seq));
          }
        } else if (live.erase(ev.edge.key()) == 0) {
          throw StreamError(line_no, ev.seq,
                            "line " + std::to_string(line_no) + ": delete of absent edge at event " +
                                std::to_string(ev.seq));
        }
        s.events.push_back(ev);
        break;
      }
    }
    if (nl == text.size()) break;
  }

  if (stage == Stage::Magic) throw StreamError(line_no, std::nullopt, "missing 'dynmatch-stream v1' line");
  if (stage == Stage::Header) throw StreamError(line_no, std::nullopt, "missing 'n' header line");
  if (stage == Stage::Sides) {
    throw StreamError(line_no, std::nullopt,
                      "bipartite stream ends before all sides were given (" +
                          std::to_string(sides_seen) + " of " + std::to_string(s.n) + ")");
  }
  return s;
}

std::string format_stream(const UpdateStream& s) {
  std::ostringstream out;
  out << "dynmatch-stream v1\n";
  out << "n " << s.n << (s.bipartite ? " bipartite\n" : " general\n");
  if (s.bipartite) {
    for (std::size_t v = 0; v < s.n; ++v) out << "side " << v << ' ' << int(s.side[v]) << '\n';
  }
  for (const auto& ev : s.events) {
    out << (ev.is_insert() ? '+' : '-') << ' ' << ev.edge.u << ' ' << ev.edge.v << '\n';
  }
  return out.str();
}

}  // namespace dynmatch
