#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tamdag/node_set.hpp"

namespace tamdag {

struct Edge {
  int parent = 0;
  int child = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Directed acyclic graph over nodes 0..d-1 (d <= 64). Acyclicity, absence of
/// self-loops and of duplicate edges are enforced on every mutation.
class Dag {
 public:
  explicit Dag(int d = 0);
  Dag(int d, std::span<const Edge> edges);

  int size() const { return d_; }
  int edge_count() const;

  /// Throws std::invalid_argument on a self-loop, duplicate edge or cycle.
  void add_edge(int parent, int child);
  void remove_edge(int parent, int child);
  bool has_edge(int parent, int child) const;

  NodeSet parents(int k) const { return parents_.at(static_cast<std::size_t>(k)); }
  NodeSet children(int k) const { return children_.at(static_cast<std::size_t>(k)); }
  NodeSet nodes() const { return NodeSet::range(d_); }

  /// Lexicographically sorted edge list.
  std::vector<Edge> edges() const;

  /// Kahn's algorithm, always taking the smallest available index.
  std::vector<int> topological_order() const;

  /// Relabels node i as perm[i].
  Dag permuted(std::span<const int> perm) const;

  bool operator==(const Dag& other) const { return d_ == other.d_ && parents_ == other.parents_; }

 private:
  void check_node(int k) const;

  int d_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
};

/// Excludes k itself; nondescendants = V \ descendants and therefore contain k.
struct Relatives {
  NodeSet parents;
  NodeSet ancestors;
  NodeSet descendants;
  NodeSet nondescendants;
};

NodeSet ancestors(const Dag& g, int k);
NodeSet descendants(const Dag& g, int k);
NodeSet ancestors_of_set(const Dag& g, NodeSet s);
Relatives relatives(const Dag& g, int k);

/// Layers L_1..L_r; layers[0] holds the sources of g.
class LayerDecomposition {
 public:
  LayerDecomposition() = default;
  explicit LayerDecomposition(std::vector<NodeSet> layers, int d);

  int depth() const { return static_cast<int>(layers_.size()); }
  const std::vector<NodeSet>& layers() const { return layers_; }
  NodeSet layer(int j) const { return layers_.at(static_cast<std::size_t>(j)); }
  std::vector<int> widths() const;

  /// A_j = L_1 ∪ ... ∪ L_j, with A_0 = ∅.
  NodeSet ancestral(int j) const;

  /// Zero-based layer index of k (node in layers[i] -> i).
  int layer_of(int k) const { return layer_of_.at(static_cast<std::size_t>(k)); }

  bool operator==(const LayerDecomposition&) const = default;

 private:
  std::vector<NodeSet> layers_;
  std::vector<int> layer_of_;
};

LayerDecomposition layer_decomposition(const Dag& g);

/// True iff every trail between a and b is blocked by c. Reachability
/// ("Bayes ball") formulation; a, b, c must be pairwise disjoint.
bool d_separated(const Dag& g, NodeSet a, NodeSet b, NodeSet c);

bool is_polyforest(const Dag& g);

/// Adjacency mismatches plus orientation reversals.
int shd(const Dag& g1, const Dag& g2);

// Edge-list text: "d=<int>" then one "u v" line per edge, edges sorted.
std::string to_edge_list(const Dag& g);
Dag parse_edge_list(std::string_view text);
Dag read_edge_list_file(const std::string& path);
void write_edge_list_file(const Dag& g, const std::string& path);

}  // namespace tamdag
