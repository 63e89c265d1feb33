#include "tamdag/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io_util.hpp"

namespace tamdag {

Dag::Dag(int d) : d_(d) {
  if (d < 0 || d > NodeSet::kMaxNodes) {
    throw std::invalid_argument("node count must be in [0, 64], got " + std::to_string(d));
  }
  parents_.resize(static_cast<std::size_t>(d));
  children_.resize(static_cast<std::size_t>(d));
}

Dag::Dag(int d, std::span<const Edge> edges) : Dag(d) {
  for (const Edge& e : edges) add_edge(e.parent, e.child);
}

void Dag::check_node(int k) const {
  if (k < 0 || k >= d_) {
    throw std::out_of_range("node " + std::to_string(k) + " out of range for d=" + std::to_string(d_));
  }
}

int Dag::edge_count() const {
  int m = 0;
  for (NodeSet p : parents_) m += p.size();
  return m;
}

void Dag::add_edge(int parent, int child) {
  check_node(parent);
  check_node(child);
  if (parent == child) throw std::invalid_argument("self-loop on node " + std::to_string(parent));
  if (has_edge(parent, child)) {
    throw std::invalid_argument("duplicate edge " + std::to_string(parent) + "->" + std::to_string(child));
  }
  if (descendants(*this, child).contains(parent)) {
    throw std::invalid_argument("edge " + std::to_string(parent) + "->" + std::to_string(child) +
                                " creates a cycle");
  }
  parents_[static_cast<std::size_t>(child)].insert(parent);
  children_[static_cast<std::size_t>(parent)].insert(child);
}

void Dag::remove_edge(int parent, int child) {
  check_node(parent);
  check_node(child);
  parents_[static_cast<std::size_t>(child)].erase(parent);
  children_[static_cast<std::size_t>(parent)].erase(child);
}

bool Dag::has_edge(int parent, int child) const {
  check_node(parent);
  check_node(child);
  return parents_[static_cast<std::size_t>(child)].contains(parent);
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < d_; ++u) {
    for (int v : children_[static_cast<std::size_t>(u)]) out.push_back({u, v});
  }
  return out;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(d_));
  NodeSet placed;
  while (order.size() < static_cast<std::size_t>(d_)) {
    for (int k = 0; k < d_; ++k) {
      if (!placed.contains(k) && parents(k).is_subset_of(placed)) {
        order.push_back(k);
        placed.insert(k);
        break;
      }
    }
  }
  return order;
}

Dag Dag::permuted(std::span<const int> perm) const {
  if (perm.size() != static_cast<std::size_t>(d_)) throw std::invalid_argument("permutation size mismatch");
  Dag out(d_);
  for (const Edge& e : edges()) out.add_edge(perm[static_cast<std::size_t>(e.parent)], perm[static_cast<std::size_t>(e.child)]);
  return out;
}

namespace {

NodeSet reach(const Dag& g, NodeSet start, bool upward) {
  NodeSet seen;
  std::vector<int> stack(start.begin(), start.end());
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    for (int next : (upward ? g.parents(k) : g.children(k))) {
      if (!seen.contains(next)) {
        seen.insert(next);
        stack.push_back(next);
      }
    }
  }
  return seen;
}

}  // namespace

NodeSet ancestors(const Dag& g, int k) { return reach(g, NodeSet::single(k), true); }
NodeSet descendants(const Dag& g, int k) { return reach(g, NodeSet::single(k), false); }
NodeSet ancestors_of_set(const Dag& g, NodeSet s) { return reach(g, s, true); }

Relatives relatives(const Dag& g, int k) {
  if (k < 0 || k >= g.size()) throw std::out_of_range("node index out of range: " + std::to_string(k));
  Relatives r;
  r.parents = g.parents(k);
  r.ancestors = ancestors(g, k);
  r.descendants = descendants(g, k);
  r.nondescendants = g.nodes() - r.descendants;
  return r;
}

LayerDecomposition::LayerDecomposition(std::vector<NodeSet> layers, int d)
    : layers_(std::move(layers)), layer_of_(static_cast<std::size_t>(d), -1) {
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    for (int k : layers_[j]) layer_of_.at(static_cast<std::size_t>(k)) = static_cast<int>(j);
  }
}

std::vector<int> LayerDecomposition::widths() const {
  std::vector<int> w;
  for (NodeSet l : layers_) w.push_back(l.size());
  return w;
}

NodeSet LayerDecomposition::ancestral(int j) const {
  NodeSet a;
  for (int t = 0; t < j && t < depth(); ++t) a |= layers_[static_cast<std::size_t>(t)];
  return a;
}

LayerDecomposition layer_decomposition(const Dag& g) {
  std::vector<NodeSet> layers;
  NodeSet removed;
  const NodeSet all = g.nodes();
  while (removed != all) {
    NodeSet sources;
    for (int k : all - removed) {
      if (g.parents(k).is_subset_of(removed)) sources.insert(k);
    }
    layers.push_back(sources);
    removed |= sources;
  }
  return LayerDecomposition(std::move(layers), g.size());
}

bool d_separated(const Dag& g, NodeSet a, NodeSet b, NodeSet c) {
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
    throw std::invalid_argument("d_separated: node sets must be pairwise disjoint");
  }
  // Colliders are open iff the center is in c or has a descendant in c,
  // i.e. iff the center is in c ∪ an(c).
  const NodeSet open_colliders = c | ancestors_of_set(g, c);

  // State: (node, arrived from a child = travelling up).
  const int d = g.size();
  std::vector<char> visited_up(static_cast<std::size_t>(d), 0);
  std::vector<char> visited_down(static_cast<std::size_t>(d), 0);
  std::deque<std::pair<int, bool>> queue;
  for (int k : a) queue.emplace_back(k, true);

  while (!queue.empty()) {
    auto [k, up] = queue.front();
    queue.pop_front();
    auto& seen = up ? visited_up : visited_down;
    if (seen[static_cast<std::size_t>(k)]) continue;
    seen[static_cast<std::size_t>(k)] = 1;

    if (!c.contains(k) && b.contains(k)) return false;

    if (up) {
      if (c.contains(k)) continue;
      for (int p : g.parents(k)) queue.emplace_back(p, true);
      for (int ch : g.children(k)) queue.emplace_back(ch, false);
    } else {
      if (!c.contains(k)) {
        for (int ch : g.children(k)) queue.emplace_back(ch, false);
      }
      if (open_colliders.contains(k)) {
        for (int p : g.parents(k)) queue.emplace_back(p, true);
      }
    }
  }
  return true;
}

bool is_polyforest(const Dag& g) {
  // A forest on d nodes with c components has exactly d - c edges.
  const int d = g.size();
  std::vector<int> root(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) root[static_cast<std::size_t>(k)] = k;
  auto find = [&](int k) {
    while (root[static_cast<std::size_t>(k)] != k) {
      root[static_cast<std::size_t>(k)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(k)])];
      k = root[static_cast<std::size_t>(k)];
    }
    return k;
  };
  for (const Edge& e : g.edges()) {
    const int ru = find(e.parent);
    const int rv = find(e.child);
    if (ru == rv) return false;
    root[static_cast<std::size_t>(ru)] = rv;
  }
  return true;
}

int shd(const Dag& g1, const Dag& g2) {
  if (g1.size() != g2.size()) throw std::invalid_argument("shd: dimension mismatch");
  int distance = 0;
  for (int u = 0; u < g1.size(); ++u) {
    for (int v = u + 1; v < g1.size(); ++v) {
      const bool a_uv = g1.has_edge(u, v), a_vu = g1.has_edge(v, u);
      const bool b_uv = g2.has_edge(u, v), b_vu = g2.has_edge(v, u);
      const bool adj1 = a_uv || a_vu, adj2 = b_uv || b_vu;
      if (adj1 != adj2) {
        ++distance;
      } else if (adj1 && a_uv != b_uv) {
        ++distance;
      }
    }
  }
  return distance;
}

std::string to_edge_list(const Dag& g) {
  std::string out = "d=" + std::to_string(g.size()) + "\n";
  for (const Edge& e : g.edges()) out += std::to_string(e.parent) + " " + std::to_string(e.child) + "\n";
  return out;
}

Dag parse_edge_list(std::string_view text) {
  detail::LineReader lines(text);
  std::string_view line;
  if (!lines.next_content(line)) throw std::runtime_error("edge list: missing 'd=<int>' header");
  if (!line.starts_with("d=")) throw std::runtime_error("edge list: expected 'd=<int>' header, got '" + std::string(line) + "'");
  const int d = detail::parse_int(line.substr(2), "edge list node count");
  Dag g(d);
  while (lines.next_content(line)) {
    const auto fields = detail::split_ws(line);
    if (fields.size() != 2) {
      throw std::runtime_error("edge list line " + std::to_string(lines.line_number()) + ": expected 'u v'");
    }
    g.add_edge(detail::parse_int(fields[0], "edge parent"), detail::parse_int(fields[1], "edge child"));
  }
  return g;
}

Dag read_edge_list_file(const std::string& path) { return parse_edge_list(detail::read_file(path)); }

void write_edge_list_file(const Dag& g, const std::string& path) { detail::write_file(path, to_edge_list(g)); }

}  // namespace tamdag
