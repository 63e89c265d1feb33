#pragma once

#include <utility>
#include <vector>

#include "tamdag/info_source.hpp"
#include "tamdag/node_set.hpp"

namespace tamdag {

struct PpsStep {
  int node = -1;
  double cmi = 0.0;
};

struct PpsResult {
  NodeSet boundary;
  /// Ĥ(X_k | boundary).
  double cond_entropy = 0.0;
  /// One entry per addition, in order.
  std::vector<PpsStep> trace;
};

/// Forward greedy search for the Markov boundary of k inside a: repeatedly
/// add the candidate with the largest Î(X_l; X_k | m) while it exceeds kappa.
/// Ties go to the smallest index.
PpsResult pps(const InfoSource& src, int k, NodeSet a, double kappa);

enum class BackwardMode {
  /// Scan members in ascending order, removing one at a time, until a full
  /// pass removes nothing.
  Fixpoint,
  /// Evaluate every member against the starting set and remove all weak
  /// ones at once.
  SinglePass,
};

/// Shrinks a by removing members l with Î(X_l; X_k | m \ l) < kappa.
NodeSet iamb_backward(const InfoSource& src, int k, NodeSet a, double kappa, BackwardMode mode = BackwardMode::Fixpoint);

enum class ComposeMode {
  /// Backward phase over the PPS output.
  FromPps,
  /// Backward phase over all of a, skipping the forward phase.
  FromCandidates,
};

NodeSet pps_then_backward(const InfoSource& src, int k, NodeSet a, double kappa,
                          ComposeMode mode = ComposeMode::FromPps, BackwardMode backward = BackwardMode::Fixpoint);

}  // namespace tamdag
