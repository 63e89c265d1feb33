#include "tamdag/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "io_util.hpp"
#include "tamdag/rng.hpp"

namespace tamdag {

namespace {

constexpr double kTol = kCertifyTolerance;

void check_sizes(const InfoSource& src, const Dag& g) {
  if (src.size() != g.size()) throw std::invalid_argument("condition check: source and graph sizes differ");
}

// an_j(k) for every k outside A_{j+1}. Every node of layer j+1 has a parent
// in layer j, so a node below layer j always has an ancestor inside it.
template <typename Fn>
void for_each_layer_pair(const Dag& g, const LayerDecomposition& ld, Fn&& fn) {
  for (int k = 0; k < g.size(); ++k) {
    const NodeSet an = ancestors(g, k);
    for (int j = 0; j < ld.layer_of(k); ++j) {
      const NodeSet an_j = an & ld.layer(j);
      if (an_j.empty()) throw std::logic_error("layer decomposition: node without ancestor in an earlier layer");
      fn(k, j, an_j, ld.ancestral(j));
    }
  }
}

Condition1Result condition1_impl(const InfoSource& src, const Dag& g, bool general) {
  check_sizes(src, g);
  const auto ld = layer_decomposition(g);
  Condition1Result out;
  for_each_layer_pair(g, ld, [&](int k, int j, NodeSet an_j, NodeSet a) {
    WitnessEntry e{k, j, an_j, {}};
    const double hk = src.cond_entropy(NodeSet::single(k), a);
    for (int i : an_j) {
      const double hi = src.cond_entropy(NodeSet::single(i), a);
      if (!(hi < hk - kTol)) continue;
      NodeSet group = NodeSet::single(i);
      if (general) {
        for (int l : an_j.without(i)) {
          if (src.cond_entropy(NodeSet::single(l), a) <= hi + kTol) group.insert(l);
        }
      }
      if (src.cmi(NodeSet::single(k), group, a) > kTol) e.witnesses.insert(i);
    }
    if (e.witnesses.empty()) out.ok = false;
    out.entries.push_back(e);
  });
  return out;
}

// Subsets of s in increasing size order are not needed here; any order works.
std::vector<NodeSet> proper_subsets(NodeSet s, int cap) {
  if (s.size() > cap) {
    throw std::length_error(fmt::format("boundary of size {} exceeds the subset cap {}", s.size(), cap));
  }
  const auto members = s.to_vector();
  const std::uint64_t count = std::uint64_t{1} << members.size();
  std::vector<NodeSet> out;
  for (std::uint64_t bits = 0; bits + 1 < count; ++bits) {
    NodeSet m;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (bits >> i & 1U) m.insert(members[i]);
    }
    out.push_back(m);
  }
  return out;
}

double max_cmi(const InfoSource& src, int k, NodeSet over, NodeSet given) {
  double best = 0.0;
  for (int l : over) best = std::max(best, src.cmi(k, l, given));
  return best;
}

}  // namespace

Condition1Result check_condition1(const InfoSource& src, const Dag& g) { return condition1_impl(src, g, false); }
Condition1Result check_condition1(const TabularBN& bn) { return check_condition1(InfoSource::exact(bn), bn.dag()); }
Condition1Result check_condition1_general(const InfoSource& src, const Dag& g) {
  return condition1_impl(src, g, true);
}
Condition1Result check_condition1_general(const TabularBN& bn) {
  return check_condition1_general(InfoSource::exact(bn), bn.dag());
}

PpsCheck check_pps_condition(const InfoSource& src, int k, NodeSet a, int subset_cap) {
  const NodeSet mb = markov_boundary_exact(src, k, a);
  const NodeSet outside = a - mb;
  PpsCheck out;
  if (outside.empty()) return out;
  for (NodeSet m : proper_subsets(mb, subset_cap)) {
    const double best_inside = max_cmi(src, k, mb - m, m);
    for (int l : outside) {
      if (!(best_inside > src.cmi(k, l, m) + kTol)) {
        out.ok = false;
        out.violation = PpsViolation{k, a, mb, m, l};
        return out;
      }
    }
  }
  return out;
}

PpsCheck check_pps_condition(const TabularBN& bn, int k, NodeSet a, int subset_cap) {
  return check_pps_condition(InfoSource::exact(bn), k, a, subset_cap);
}

PpsCheck check_pps_condition_all(const InfoSource& src, const Dag& g, int subset_cap) {
  check_sizes(src, g);
  const auto ld = layer_decomposition(g);
  for (int j = 0; j < ld.depth(); ++j) {
    const NodeSet a = ld.ancestral(j);
    for (int k : g.nodes() - a) {
      auto r = check_pps_condition(src, k, a, subset_cap);
      if (!r.ok) return r;
    }
  }
  return {};
}

bool check_nondegeneracy(const InfoSource& src, const Dag& g, int random_sets, std::uint64_t seed) {
  check_sizes(src, g);
  const auto ld = layer_decomposition(g);
  std::vector<NodeSet> sets;
  for (int j = 0; j < ld.depth(); ++j) sets.push_back(ld.ancestral(j));
  SplitMix64 rng(seed);
  for (int t = 0; t < random_sets; ++t) {
    NodeSet s;
    for (int k = 0; k < g.size(); ++k) {
      if (rng.bernoulli(0.5)) s.insert(k);
    }
    sets.push_back(s | ancestors_of_set(g, s));
  }
  for (NodeSet a : sets) {
    for (int k : g.nodes() - a) {
      const NodeSet missing = g.parents(k) - a;
      if (missing.empty()) continue;
      if (!(src.cmi(NodeSet::single(k), missing, a) > kTol)) return false;
    }
  }
  return true;
}

bool check_nondegeneracy(const TabularBN& bn, int random_sets, std::uint64_t seed) {
  return check_nondegeneracy(InfoSource::exact(bn), bn.dag(), random_sets, seed);
}

EqualEntropy check_equal_entropy(const InfoSource& src, const Dag& g) {
  check_sizes(src, g);
  EqualEntropy out;
  std::vector<double> h;
  for (int k = 0; k < g.size(); ++k) h.push_back(src.cond_entropy(NodeSet::single(k), g.parents(k)));
  if (h.empty()) return out;
  double sum = 0.0;
  for (double v : h) sum += v;
  out.h_star = sum / static_cast<double>(h.size());
  for (double v : h) out.max_deviation = std::max(out.max_deviation, std::abs(v - out.h_star));
  out.holds = out.max_deviation <= kTol;
  return out;
}

EqualEntropy check_equal_entropy(const TabularBN& bn) { return check_equal_entropy(InfoSource::exact(bn), bn.dag()); }

std::string_view to_string(Tristate t) {
  switch (t) {
    case Tristate::False:
      return "false";
    case Tristate::True:
      return "true";
    case Tristate::NotChecked:
      return "not-checked";
  }
  return "?";
}

Tristate check_unequal_entropy(const InfoSource& src, const Dag& g, int max_nodes) {
  check_sizes(src, g);
  const int d = g.size();
  if (d > max_nodes) return Tristate::NotChecked;
  const auto ld = layer_decomposition(g);
  std::vector<double> h(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) h[static_cast<std::size_t>(k)] = src.cond_entropy(NodeSet::single(k), g.parents(k));

  // Placing k right after `prefix` must beat every later node l. The later
  // nodes are exactly V \ prefix \ k whatever order they take, so feasibility
  // only depends on the prefix set: a subset DP covers every topological order.
  auto step_ok = [&](NodeSet prefix, int k) {
    const double hk = h[static_cast<std::size_t>(k)];
    for (int l : g.nodes() - prefix - NodeSet::single(k)) {
      const double hl = h[static_cast<std::size_t>(l)];
      const double gain = src.cmi(NodeSet::single(l), g.parents(l) - prefix, prefix);
      const bool strict = hk < hl + gain - kTol;
      if (ld.layer_of(k) == ld.layer_of(l)) {
        if (!(std::abs(hk - hl) <= kTol || strict)) return false;
      } else if (!strict) {
        return false;
      }
    }
    return true;
  };
  std::unordered_map<std::uint64_t, bool> memo;
  auto feasible = [&](auto&& self, NodeSet prefix) -> bool {
    if (prefix == g.nodes()) return true;
    if (auto it = memo.find(prefix.bits()); it != memo.end()) return it->second;
    bool ok = false;
    for (int k : g.nodes() - prefix) {
      if (!g.parents(k).is_subset_of(prefix)) continue;
      if (step_ok(prefix, k) && self(self, prefix.with(k))) {
        ok = true;
        break;
      }
    }
    memo[prefix.bits()] = ok;
    return ok;
  };
  return feasible(feasible, NodeSet{}) ? Tristate::True : Tristate::False;
}

Tristate check_unequal_entropy(const TabularBN& bn, int max_nodes) {
  return check_unequal_entropy(InfoSource::exact(bn), bn.dag(), max_nodes);
}

Gaps compute_gaps(const InfoSource& src, const Dag& g, int subset_cap) {
  check_sizes(src, g);
  const auto ld = layer_decomposition(g);
  Gaps out;
  bool any_layer = false;
  double delta = std::numeric_limits<double>::infinity(), eta = delta;
  for_each_layer_pair(g, ld, [&](int k, int j, NodeSet an_j, NodeSet a) {
    any_layer = true;
    const double hk = src.cond_entropy(NodeSet::single(k), a);
    LayerGap best{k, j, -1, 0.0, 0.0};
    double best_score = -1.0;
    for (int i : an_j) {
      const double gap = hk - src.cond_entropy(NodeSet::single(i), a);
      const double info = src.cmi(k, i, a);
      if (!(gap > kTol && info > kTol)) continue;
      const double score = std::min(gap, info);
      if (score > best_score) {
        best_score = score;
        best = {k, j, i, gap, info};
      }
    }
    if (best.witness < 0) {
      ++out.missing_witnesses;
    } else {
      delta = std::min(delta, best.entropy_gap);
      eta = std::min(eta, best.cmi);
    }
    out.layer_gaps.push_back(best);
  });
  if (any_layer && out.missing_witnesses == 0) {
    out.delta = delta;
    out.eta = eta;
  }

  double min_dt = std::numeric_limits<double>::infinity(), min_xi = min_dt;
  for (int j = 0; j < ld.depth(); ++j) {
    const NodeSet a = ld.ancestral(j);
    for (int k : g.nodes() - a) {
      const NodeSet mb = markov_boundary_exact(src, k, a);
      if (mb.empty()) continue;
      BoundaryGap bg{k, j, mb, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
      for (NodeSet m : proper_subsets(mb, subset_cap)) {
        double inside_max = 0.0, inside_min = std::numeric_limits<double>::infinity();
        for (int c : mb - m) {
          const double v = src.cmi(k, c, m);
          inside_max = std::max(inside_max, v);
          inside_min = std::min(inside_min, v);
        }
        bg.delta_tilde = std::min(bg.delta_tilde, inside_max - max_cmi(src, k, a - mb, m));
        bg.xi = std::min(bg.xi, inside_min / 2.0);
      }
      min_dt = std::min(min_dt, bg.delta_tilde);
      min_xi = std::min(min_xi, bg.xi);
      out.boundary_gaps.push_back(bg);
    }
  }
  if (!out.boundary_gaps.empty()) {
    out.min_delta_tilde = min_dt;
    out.min_xi = min_xi;
  }
  return out;
}

Gaps compute_gaps(const TabularBN& bn, int subset_cap) { return compute_gaps(InfoSource::exact(bn), bn.dag(), subset_cap); }

ConditionReport verify(const TabularBN& bn, std::size_t cap) {
  const auto src = InfoSource::exact(bn, cap);
  const Dag& g = bn.dag();
  ConditionReport r;
  r.nodes = g.size();
  r.depth = layer_decomposition(g).depth();
  r.positive = bn.strictly_positive();
  r.c1_c2 = check_condition1(src, g);
  r.c1_general = check_condition1_general(src, g);
  r.pps = check_pps_condition_all(src, g);
  r.nondegenerate = check_nondegeneracy(src, g);
  r.equal_entropy = check_equal_entropy(src, g);
  r.unequal_entropy = check_unequal_entropy(src, g);
  r.gaps = compute_gaps(src, g);
  const bool gaps_ok = r.gaps.missing_witnesses == 0 && (!r.gaps.delta || (*r.gaps.delta > 0 && *r.gaps.eta > 0));
  r.certified = r.positive && r.c1_c2.ok && r.pps.ok && gaps_ok;
  return r;
}

namespace {

std::string opt_real(const std::optional<double>& v) { return v ? detail::format_real(*v) : "undefined"; }

void append_witnesses(std::string& out, const char* title, const Condition1Result& c) {
  out += fmt::format("{}: {}\n", title, c.ok);
  for (const auto& e : c.entries) {
    out += fmt::format("  node {} layer {}: ancestors={} witnesses={}\n", e.node, e.layer, e.ancestors.to_string(),
                       e.witnesses.to_string());
  }
}

}  // namespace

std::string to_text(const ConditionReport& r) {
  using detail::format_real;
  std::string out;
  out += fmt::format("nodes: {}\ndepth: {}\npositive: {}\n", r.nodes, r.depth, r.positive);
  append_witnesses(out, "condition1", r.c1_c2);
  append_witnesses(out, "condition1_general", r.c1_general);
  out += fmt::format("pps_condition: {}\n", r.pps.ok);
  if (r.pps.violation) {
    const auto& v = *r.pps.violation;
    out += fmt::format("  violation: node={} candidates={} boundary={} subset={} outsider={}\n", v.node,
                       v.candidates.to_string(), v.boundary.to_string(), v.subset.to_string(), v.outsider);
  }
  out += fmt::format("nondegenerate: {}\n", r.nondegenerate);
  out += fmt::format("equal_entropy: {}\n  h_star: {}\n  max_deviation: {}\n", r.equal_entropy.holds,
                     format_real(r.equal_entropy.h_star), format_real(r.equal_entropy.max_deviation));
  out += fmt::format("unequal_entropy: {}\n", to_string(r.unequal_entropy));
  out += "gaps:\n";
  out += fmt::format("  delta: {}\n  eta: {}\n  min_delta_tilde: {}\n  min_xi: {}\n  missing_witnesses: {}\n",
                     opt_real(r.gaps.delta), opt_real(r.gaps.eta), opt_real(r.gaps.min_delta_tilde),
                     opt_real(r.gaps.min_xi), r.gaps.missing_witnesses);
  for (const auto& lg : r.gaps.layer_gaps) {
    out += fmt::format("  layer_gap node {} layer {}: witness={} entropy_gap={} cmi={}\n", lg.node, lg.layer, lg.witness,
                       format_real(lg.entropy_gap), format_real(lg.cmi));
  }
  for (const auto& bg : r.gaps.boundary_gaps) {
    out += fmt::format("  boundary_gap node {} layer {}: boundary={} delta_tilde={} xi={}\n", bg.node, bg.layer,
                       bg.boundary.to_string(), format_real(bg.delta_tilde), format_real(bg.xi));
  }
  out += fmt::format("certified: {}\n", r.certified);
  return out;
}

}  // namespace tamdag
