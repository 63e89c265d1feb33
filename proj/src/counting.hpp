#pragma once

#include <vector>

#include "tamdag/bn.hpp"
#include "tamdag/dataset.hpp"
#include "tamdag/node_set.hpp"

namespace tamdag::detail {

/// Counts of each observed joint value of the columns in s, in ascending key
/// order (so downstream sums do not depend on row order or thread count).
std::vector<double> joint_counts(const Dataset& ds, NodeSet s);

/// Plug-in entropy of a non-negative weight vector with the given total.
double entropy_of_weights(const std::vector<double>& w, double total);

}  // namespace tamdag::detail
