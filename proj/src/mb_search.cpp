#include "tamdag/mb_search.hpp"

#include <stdexcept>

namespace tamdag {

PpsResult pps(const InfoSource& src, int k, NodeSet a, double kappa) {
  if (a.contains(k)) throw std::invalid_argument("pps: target inside candidate set");
  if (kappa < 0.0) throw std::invalid_argument("pps: kappa must be non-negative");
  PpsResult out;
  const NodeSet target = NodeSet::single(k);
  for (;;) {
    int best = -1;
    double best_cmi = 0.0;
    for (int l : a - out.boundary) {
      const double v = src.cmi(target, NodeSet::single(l), out.boundary);
      if (best < 0 || v > best_cmi) {
        best = l;
        best_cmi = v;
      }
    }
    if (best < 0 || !(best_cmi > kappa)) break;
    out.boundary.insert(best);
    out.trace.push_back({best, best_cmi});
  }
  out.cond_entropy = src.cond_entropy(target, out.boundary);
  return out;
}

NodeSet iamb_backward(const InfoSource& src, int k, NodeSet a, double kappa, BackwardMode mode) {
  if (a.contains(k)) throw std::invalid_argument("iamb_backward: target inside candidate set");
  const NodeSet target = NodeSet::single(k);
  NodeSet m = a;
  if (mode == BackwardMode::SinglePass) {
    NodeSet weak;
    for (int l : m) {
      if (src.cmi(target, NodeSet::single(l), m.without(l)) < kappa) weak.insert(l);
    }
    return m - weak;
  }
  bool removed = true;
  while (removed) {
    removed = false;
    for (int l : m) {
      if (src.cmi(target, NodeSet::single(l), m.without(l)) < kappa) {
        m.erase(l);
        removed = true;
      }
    }
  }
  return m;
}

NodeSet pps_then_backward(const InfoSource& src, int k, NodeSet a, double kappa, ComposeMode mode,
                          BackwardMode backward) {
  const NodeSet start = mode == ComposeMode::FromPps ? pps(src, k, a, kappa).boundary : a;
  return iamb_backward(src, k, start, kappa, backward);
}

}  // namespace tamdag
