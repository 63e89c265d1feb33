#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tamdag/bn.hpp"
#include "tamdag/graph.hpp"

namespace tamdag {

enum class GraphKind { Tree, ER, SF };
std::string_view to_string(GraphKind k);
/// Accepts "tree", "er", "sf" in any case.
GraphKind parse_graph_kind(std::string_view text);

struct GraphSpec {
  GraphKind kind = GraphKind::Tree;
  int d = 10;
  /// ER: expected edge count (default d). SF: parents per arriving node (default 2).
  /// Negative means the default. Ignored for trees.
  double param = -1.0;
  std::uint64_t seed = 0;
};

/// Uniform labelled tree from a random Prüfer sequence, each edge oriented by a fair coin.
Dag gen_polytree(int d, std::uint64_t seed);
/// Random topological order, then every order-respecting pair independently
/// with probability expected_edges / C(d,2) (clamped to 1 with a warning).
Dag gen_er(int d, double expected_edges, std::uint64_t seed);
/// Preferential attachment over a random arrival order: each arrival picks
/// min(attach, #earlier) distinct parents with weight degree + 1; edges old -> new.
Dag gen_sf(int d, int attach, std::uint64_t seed);
Dag generate(const GraphSpec& spec);

enum class ModelKind { MOD, ADD };
std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view text);

struct ModelSpec {
  ModelKind kind = ModelKind::MOD;
  double p = 0.2;
};

/// Binary nodes; X = s with probability p and 1 - s otherwise, where s is the
/// parity of the parent sum (s = 0 at roots).
TabularBN compile_mod(const Dag& g, double p);

inline constexpr int kAddSupportCap = 64;
/// X = parent sum + Bernoulli(p); supports grow along the topological order.
TabularBN compile_add(const Dag& g, double p, int support_cap = kAddSupportCap);
TabularBN compile(const Dag& g, const ModelSpec& spec);

/// Strictly positive cpts: binary rows uniform on [0.05, 0.95]; larger
/// supports Dirichlet(1,...,1) mixed 9:1 with the uniform distribution.
TabularBN random_positive_bn(const Dag& g, std::uint64_t seed, int support = 2);

// Named fixtures. Signed values are stored shifted to start at 0, with the
// offsets kept in TabularBN::shifts().

/// Diamond X1 -> {X2, X3} -> X4 with X1 = Z1, X2 = -X1 + Z2, X3 = X1 + Z3 and
/// X4 = X2 + Ber(sigmoid(eps X3 + b0)), b0 = log(0.1/0.9).
TabularBN fixture_diamond_m1(double eps = 0.01);
/// Same diamond with X4 = X2 + X3 + Z4; X1 and X4 are independent.
TabularBN fixture_diamond_m2();
/// Z -> X_i -> Y for i = 1..n with logistic cpts whose Z effects cancel, so I(Z;Y) = 0.
TabularBN fixture_path_cancel(int n = 2);
/// W -> X, Z -> X, Z -> Y, X -> Y; the direct Z -> Y effect is tuned to cancel
/// the path through X exactly, so Z and Y are independent.
TabularBN fixture_discrete_unfaithful();
/// Xa -> K <- Xb with K a noisy XOR of the parents, replaced by a third value
/// with probability q. Neither parent alone is informative about K; together they are.
TabularBN fixture_aggregate_only(double q = 0.1);

/// "diamond-m1[:eps]", "diamond-m2", "path-cancel[:n]", "discrete-unfaithful", "aggregate-only[:q]".
TabularBN fixture(std::string_view name);
std::vector<std::string> fixture_names();

}  // namespace tamdag
