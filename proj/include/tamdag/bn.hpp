#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tamdag/dataset.hpp"
#include "tamdag/graph.hpp"
#include "tamdag/node_set.hpp"

namespace tamdag {

/// A Dag plus one conditional probability table per node.
///
/// The table of node k has one row per configuration of its parents and K_k
/// columns. Parent configurations are mixed-radix encoded over the parents in
/// ascending index order, the smallest-index parent varying fastest. Tables
/// are stored flattened: entry (row r, value v) at r * K_k + v.
class TabularBN {
 public:
  TabularBN() = default;
  /// Validates shapes and that every row is a probability vector (sum 1 within 1e-12).
  TabularBN(Dag dag, std::vector<int> supports, std::vector<std::vector<double>> cpts);

  const Dag& dag() const { return dag_; }
  int size() const { return dag_.size(); }
  int support(int k) const { return supports_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& supports() const { return supports_; }

  std::span<const double> cpt(int k) const { return cpts_.at(static_cast<std::size_t>(k)); }
  std::size_t cpt_rows(int k) const;
  std::span<const double> row(int k, std::size_t r) const;
  /// Parent-configuration row of node k for a full configuration x.
  std::size_t row_index(int k, std::span<const int> x) const;

  bool strictly_positive() const { return strictly_positive_; }

  /// Value offset per node: stored value v represents v + shift. Metadata only.
  const std::vector<int>& shifts() const { return shifts_; }
  void set_shifts(std::vector<int> shifts);

  /// Optional human-readable node names, metadata only.
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names);

 private:
  Dag dag_;
  std::vector<int> supports_;
  std::vector<std::vector<double>> cpts_;
  std::vector<int> shifts_;
  std::vector<std::string> names_;
  bool strictly_positive_ = false;
};

/// Dense joint table over all configurations. Configuration x is encoded
/// mixed-radix with node 0 as the fastest-varying digit.
class JointDist {
 public:
  JointDist() = default;
  JointDist(std::vector<int> supports, std::vector<double> probs);

  int size() const { return static_cast<int>(supports_.size()); }
  const std::vector<int>& supports() const { return supports_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t states() const { return probs_.size(); }
  std::uint64_t stride(int k) const { return strides_.at(static_cast<std::size_t>(k)); }

  /// Dense marginal table over s, encoded mixed-radix over s in ascending order.
  std::vector<double> marginal(NodeSet s) const;

 private:
  std::vector<int> supports_;
  std::vector<std::uint64_t> strides_;
  std::vector<double> probs_;
};

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 24;
inline constexpr double kZeroCmiTolerance = 1e-9;

/// Throws std::length_error when prod K_k exceeds `cap`.
JointDist joint_table(const TabularBN& bn, std::size_t cap = kDefaultStateCap);

/// Entropies in nats; the empty set has entropy 0.
double entropy(const JointDist& p, NodeSet s);
/// H(k ∪ a) - H(a), clamped at 0. Sets must be disjoint.
double cond_entropy(const JointDist& p, NodeSet k, NodeSet a);
/// I(k; l | a), clamped at 0. Sets must be pairwise disjoint.
double cmi(const JointDist& p, NodeSet k, NodeSet l, NodeSet a);

class InfoSource;

/// Smallest m ⊆ s with I(X_k; s \ m | m) <= 1e-9, by exhaustive search in
/// increasing size, lexicographic within a size.
NodeSet markov_boundary_exact(const JointDist& p, int k, NodeSet s, int max_candidates = 20);
NodeSet markov_boundary_exact(const InfoSource& src, int k, NodeSet s, int max_candidates = 20);

/// pa(k) = exact Markov boundary of k among its predecessors in `ordering`.
Dag minimal_imap(const JointDist& p, std::span<const int> ordering);
Dag minimal_imap(const InfoSource& src, std::span<const int> ordering);

/// Ancestral sampling; deterministic given the seed.
Dataset sample(const TabularBN& bn, std::size_t n, std::uint64_t seed);

// Text format (see README): header line "tabular-bn", "d=<int>",
// "supports ...", optional "shifts ..."/"names ...", "edges <m>" followed by m
// edge lines, then per node "cpt <k> <rows>" followed by rows of K_k
// probabilities printed with 17 significant digits.
std::string to_text(const TabularBN& bn);
TabularBN parse_bn(std::string_view text);
TabularBN read_bn_file(const std::string& path);
void write_bn_file(const TabularBN& bn, const std::string& path);

}  // namespace tamdag
