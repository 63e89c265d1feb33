#pragma once

#include <memory>

#include "tamdag/bn.hpp"
#include "tamdag/dataset.hpp"
#include "tamdag/estimators.hpp"
#include "tamdag/node_set.hpp"

namespace tamdag {

/// Entropy queries answered either exactly from a JointDist or by an
/// estimator over a Dataset, so that the learners run unchanged at population
/// and sample level. Joint entropies are memoized per node set; copies share
/// the cache. Safe to query from several threads.
class InfoSource {
 public:
  static InfoSource exact(JointDist joint);
  static InfoSource exact(const TabularBN& bn, std::size_t cap = kDefaultStateCap);
  static InfoSource empirical(Dataset data, EstimatorKind kind);

  int size() const;
  bool is_exact() const;
  /// Row count for empirical sources, 0 for exact ones.
  std::size_t sample_size() const;
  EstimatorKind estimator() const;

  double entropy(NodeSet s) const;
  double cond_entropy(NodeSet k, NodeSet a) const;
  double cmi(NodeSet k, NodeSet l, NodeSet a) const;

  double cond_entropy(int k, NodeSet a) const { return cond_entropy(NodeSet::single(k), a); }
  double cmi(int k, int l, NodeSet a) const { return cmi(NodeSet::single(k), NodeSet::single(l), a); }

  /// Number of distinct joint entropies computed so far.
  std::size_t evaluations() const;

  const JointDist* joint() const;
  const Dataset* data() const;

 private:
  struct State;
  explicit InfoSource(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

}  // namespace tamdag
