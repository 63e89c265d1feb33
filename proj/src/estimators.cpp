#include "tamdag/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "counting.hpp"

namespace tamdag {

std::string_view to_string(EstimatorKind kind) {
  return kind == EstimatorKind::PlugIn ? "plugin" : "miller-madow";
}

EstimatorKind parse_estimator_kind(std::string_view text) {
  if (text == "plugin" || text == "plug-in" || text == "PlugIn") return EstimatorKind::PlugIn;
  if (text == "miller-madow" || text == "miller_madow" || text == "mm" || text == "MillerMadow") {
    return EstimatorKind::MillerMadow;
  }
  throw std::invalid_argument("unknown estimator kind '" + std::string(text) + "'");
}

double empirical_entropy(const Dataset& ds, NodeSet s, EstimatorKind kind) {
  if (s.empty()) return 0.0;
  if (!s.is_subset_of(NodeSet::range(ds.cols()))) throw std::out_of_range("empirical_entropy: column out of range");
  const auto counts = detail::joint_counts(ds, s);
  const double n = static_cast<double>(ds.rows());
  double h = detail::entropy_of_weights(counts, n);
  if (kind == EstimatorKind::MillerMadow) h += (static_cast<double>(counts.size()) - 1.0) / (2.0 * n);
  return h;
}

double cond_entropy_hat(const Dataset& ds, NodeSet k, NodeSet a, EstimatorKind kind) {
  if (!k.disjoint(a)) throw std::invalid_argument("cond_entropy_hat: sets overlap");
  const double v = empirical_entropy(ds, k | a, kind) - empirical_entropy(ds, a, kind);
  return v < 0.0 ? 0.0 : v;
}

double cmi_hat(const Dataset& ds, NodeSet k, NodeSet l, NodeSet a, EstimatorKind kind) {
  if (!k.disjoint(l) || !k.disjoint(a) || !l.disjoint(a)) throw std::invalid_argument("cmi_hat: sets overlap");
  const double v = (empirical_entropy(ds, k | a, kind) + empirical_entropy(ds, l | a, kind)) -
                   (empirical_entropy(ds, a, kind) + empirical_entropy(ds, k | l | a, kind));
  return v < 0.0 ? 0.0 : v;
}

double error_scale_delta(int p, double n) {
  if (p < 1 || n < 1) throw std::invalid_argument("error_scale_delta: need p >= 1 and n >= 1");
  const double first = std::ldexp(1.0, p) / (n * p);
  return first * first + static_cast<double>(p) * p / n;
}

}  // namespace tamdag
