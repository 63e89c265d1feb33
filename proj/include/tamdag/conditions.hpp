#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamdag/bn.hpp"
#include "tamdag/info_source.hpp"

namespace tamdag {

// Population-level checks of the identifiability conditions and the gap
// quantities that drive the thresholds. Every check needs the exact joint, so
// the TabularBN overloads throw std::length_error past the state cap.
// Strict inequalities are certified with margin kCertifyTolerance.

inline constexpr double kCertifyTolerance = 1e-9;

/// Witnesses for one node k and one earlier layer j (0-based, A_j = layers 0..j-1).
struct WitnessEntry {
  int node = -1;
  int layer = 0;
  /// an_j(k): ancestors of k inside layer j.
  NodeSet ancestors;
  NodeSet witnesses;
};

struct Condition1Result {
  bool ok = true;
  std::vector<WitnessEntry> entries;
};

/// Witness i ∈ an_j(k): H(i|A_j) < H(k|A_j) and I(k; i | A_j) > 0.
Condition1Result check_condition1(const InfoSource& src, const Dag& g);
Condition1Result check_condition1(const TabularBN& bn);

/// As check_condition1 with the second test replaced by
/// I(k; an_j^i(k) ∪ {i} | A_j) > 0, where an_j^i(k) are the members of an_j(k)
/// with conditional entropy at most that of i.
Condition1Result check_condition1_general(const InfoSource& src, const Dag& g);
Condition1Result check_condition1_general(const TabularBN& bn);

struct PpsViolation {
  int node = -1;
  NodeSet candidates;
  NodeSet boundary;
  /// Proper subset of the boundary with no dominating member.
  NodeSet subset;
  int outsider = -1;
};

struct PpsCheck {
  bool ok = true;
  std::optional<PpsViolation> violation;
};

/// For every proper subset m of the exact boundary of k in a and every
/// l ∈ a \ boundary, some c in boundary \ m has I(k;c|m) > I(k;l|m).
PpsCheck check_pps_condition(const InfoSource& src, int k, NodeSet a, int subset_cap = 12);
PpsCheck check_pps_condition(const TabularBN& bn, int k, NodeSet a, int subset_cap = 12);
/// The same at every (k, A_j) with k ∉ A_j.
PpsCheck check_pps_condition_all(const InfoSource& src, const Dag& g, int subset_cap = 12);

/// I(k; pa(k) \ A | A) > 0 for every k ∉ A with pa(k) ⊄ A, over the canonical
/// sets A_j plus `random_sets` random ancestral sets.
bool check_nondegeneracy(const InfoSource& src, const Dag& g, int random_sets = 100, std::uint64_t seed = 0x5eedULL);
bool check_nondegeneracy(const TabularBN& bn, int random_sets = 100, std::uint64_t seed = 0x5eedULL);

struct EqualEntropy {
  bool holds = false;
  /// Mean of H(X_k | pa(k)).
  double h_star = 0.0;
  double max_deviation = 0.0;
};
EqualEntropy check_equal_entropy(const InfoSource& src, const Dag& g);
EqualEntropy check_equal_entropy(const TabularBN& bn);

enum class Tristate { False, True, NotChecked };
std::string_view to_string(Tristate t);

/// Searches all topological orders (d <= max_nodes) for one satisfying the
/// unequal-entropy ordering condition.
Tristate check_unequal_entropy(const InfoSource& src, const Dag& g, int max_nodes = 7);
Tristate check_unequal_entropy(const TabularBN& bn, int max_nodes = 7);

struct LayerGap {
  int node = -1;
  int layer = 0;
  int witness = -1;
  double entropy_gap = 0.0;
  double cmi = 0.0;
};

struct BoundaryGap {
  int node = -1;
  int layer = 0;
  NodeSet boundary;
  double delta_tilde = 0.0;
  double xi = 0.0;
};

struct Gaps {
  /// Unset when some (j, k) has no witness or there is nothing to separate.
  std::optional<double> delta;
  std::optional<double> eta;
  std::optional<double> min_delta_tilde;
  std::optional<double> min_xi;
  std::vector<LayerGap> layer_gaps;
  std::vector<BoundaryGap> boundary_gaps;
  /// (j, k) pairs with an empty witness set.
  int missing_witnesses = 0;
};
Gaps compute_gaps(const InfoSource& src, const Dag& g, int subset_cap = 12);
Gaps compute_gaps(const TabularBN& bn, int subset_cap = 12);

struct ConditionReport {
  int nodes = 0;
  int depth = 0;
  bool positive = false;
  Condition1Result c1_c2;
  Condition1Result c1_general;
  PpsCheck pps;
  bool nondegenerate = false;
  EqualEntropy equal_entropy;
  Tristate unequal_entropy = Tristate::NotChecked;
  Gaps gaps;
  /// Positive, Condition 1 and the PPS condition hold, and Δ, η > 0.
  bool certified = false;
};

ConditionReport verify(const TabularBN& bn, std::size_t cap = kDefaultStateCap);

/// "key: value" lines; per-node entries indented under their section.
std::string to_text(const ConditionReport& r);

}  // namespace tamdag
