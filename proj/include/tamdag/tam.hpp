#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tamdag/dataset.hpp"
#include "tamdag/estimators.hpp"
#include "tamdag/graph.hpp"
#include "tamdag/info_source.hpp"
#include "tamdag/mb_search.hpp"

namespace tamdag {

enum class TamVariant {
  /// Mask with Î(X_k; head | m̂_jk) using the PPS boundary.
  Simple,
  /// Mask with Î(X_k; current layer | Â_j).
  General,
  /// Entropies and masks conditioned on Â_j directly; parents from the backward phase.
  NoPps,
};

std::string_view to_string(TamVariant v);
TamVariant parse_tam_variant(std::string_view text);

struct TamConfig {
  double omega = 0.001;
  double kappa = 0.005;
  /// Used when learning straight from a Dataset.
  EstimatorKind estimator = EstimatorKind::MillerMadow;
  TamVariant variant = TamVariant::Simple;
  /// Replace omega and kappa by auto_thresholds(d, n, tune_constant). Needs an empirical source.
  bool auto_tune = false;
  double tune_constant = 1.0;
  /// Heads whose entropy is within this distance of the current head join the layer with it.
  double tie_tolerance = 1e-12;
  BackwardMode backward = BackwardMode::Fixpoint;
};

struct TamEntropy {
  int node = -1;
  double entropy = 0.0;
  NodeSet boundary;
};

struct TamTest {
  int node = -1;
  NodeSet other;
  NodeSet given;
  double value = 0.0;
};

struct TamMask {
  int node = -1;
  /// Head whose addition triggered the mask.
  int masker = -1;
  double value = 0.0;
};

struct TamLayer {
  int index = 0;
  /// Â_j, the union of the layers learned before this one.
  NodeSet ancestral;
  /// Candidates in ascending entropy order (the permutation τ̂).
  std::vector<TamEntropy> sorted;
  std::vector<TamTest> tests;
  std::vector<TamMask> masks;
  std::vector<int> members;
};

struct TamTrace {
  TamVariant variant = TamVariant::Simple;
  double omega = 0.0;
  double kappa = 0.0;
  std::vector<TamLayer> layers;

  /// Learned layer of each node (0-based).
  std::vector<int> layer_of(int d) const;
};

struct TamResult {
  Dag dag;
  TamTrace trace;
};

TamResult tam_learn(const InfoSource& src, const TamConfig& cfg);
/// Builds an empirical source with cfg.estimator.
TamResult tam_learn(const Dataset& data, const TamConfig& cfg);

/// ω = κ = c (d³ log d)^{1/4} [(d / (n log d))² + log d / √n]^{1/4}.
std::pair<double, double> auto_thresholds(int d, double n, double c = 1.0);

/// One event per line: "<kind> <layer> <node> <value> [key=value ...]".
std::string to_text(const TamTrace& trace);

}  // namespace tamdag
