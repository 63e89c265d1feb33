#pragma once

#include <string_view>

#include "tamdag/dataset.hpp"
#include "tamdag/node_set.hpp"

namespace tamdag {

enum class EstimatorKind { PlugIn, MillerMadow };

std::string_view to_string(EstimatorKind kind);
/// Accepts "plugin"/"plug-in" and "miller-madow"/"miller_madow"/"mm".
EstimatorKind parse_estimator_kind(std::string_view text);

/// Entropy (nats) of the joint value of the columns in s. MillerMadow adds
/// (m - 1) / (2n) with m the number of distinct observed joint values.
double empirical_entropy(const Dataset& ds, NodeSet s, EstimatorKind kind);

/// Ĥ(k ∪ a) - Ĥ(a), clamped at 0.
double cond_entropy_hat(const Dataset& ds, NodeSet k, NodeSet a, EstimatorKind kind);

/// (Ĥ(k ∪ a) + Ĥ(l ∪ a)) - (Ĥ(a) + Ĥ(k ∪ l ∪ a)), clamped at 0; exactly symmetric in k, l.
double cmi_hat(const Dataset& ds, NodeSet k, NodeSet l, NodeSet a, EstimatorKind kind);

/// (2^p / (n p))^2 + p^2 / n with unit constant.
double error_scale_delta(int p, double n);

}  // namespace tamdag
