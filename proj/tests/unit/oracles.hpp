#pragma once

// Brute-force reference computations shared by the unit tests. They work on
// explicit configuration lists and std::map, independent of the library's
// mixed-radix encodings and kernels.

#include <cmath>
#include <map>
#include <vector>

#include "tamdag/bn.hpp"
#include "tamdag/dataset.hpp"
#include "tamdag/graph.hpp"

namespace oracle {

using Config = std::vector<int>;

/// Every configuration with its probability, by the chain rule over an explicit loop.
inline std::vector<std::pair<Config, double>> enumerate(const tamdag::TabularBN& bn) {
  const int d = bn.size();
  std::vector<std::pair<Config, double>> out;
  Config x(static_cast<std::size_t>(d), 0);
  for (;;) {
    double p = 1.0;
    for (int k = 0; k < d; ++k) {
      std::size_t row = 0, stride = 1;
      for (int pa = 0; pa < d; ++pa) {
        if (!bn.dag().has_edge(pa, k)) continue;
        row += static_cast<std::size_t>(x[static_cast<std::size_t>(pa)]) * stride;
        stride *= static_cast<std::size_t>(bn.support(pa));
      }
      p *= bn.cpt(k)[row * static_cast<std::size_t>(bn.support(k)) + static_cast<std::size_t>(x[static_cast<std::size_t>(k)])];
    }
    out.emplace_back(x, p);
    int k = 0;
    while (k < d && ++x[static_cast<std::size_t>(k)] == bn.support(k)) x[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  return out;
}

inline Config project(const Config& x, tamdag::NodeSet s) {
  Config out;
  for (int k : s) out.push_back(x[static_cast<std::size_t>(k)]);
  return out;
}

inline double entropy(const std::vector<std::pair<Config, double>>& joint, tamdag::NodeSet s) {
  std::map<Config, double> m;
  for (const auto& [x, p] : joint) m[project(x, s)] += p;
  double h = 0.0;
  for (const auto& [k, p] : m) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

inline double cmi(const std::vector<std::pair<Config, double>>& joint, tamdag::NodeSet a, tamdag::NodeSet b,
                  tamdag::NodeSet c) {
  return entropy(joint, a | c) + entropy(joint, b | c) - entropy(joint, c) - entropy(joint, a | b | c);
}

/// Plug-in entropy from a std::map histogram of rows.
inline double plugin_entropy(const tamdag::Dataset& ds, tamdag::NodeSet s, bool miller_madow = false) {
  std::map<Config, double> counts;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    Config key;
    for (int c : s) key.push_back(ds.at(i, c));
    counts[key] += 1.0;
  }
  const double n = static_cast<double>(ds.rows());
  double h = 0.0;
  for (const auto& [k, c] : counts) h -= c / n * std::log(c / n);
  if (miller_madow) h += (static_cast<double>(counts.size()) - 1.0) / (2.0 * n);
  return h;
}

/// d-separation by the moralized ancestral graph criterion.
inline bool d_separated_moral(const tamdag::Dag& g, tamdag::NodeSet a, tamdag::NodeSet b, tamdag::NodeSet c) {
  const int d = g.size();
  std::vector<bool> keep(static_cast<std::size_t>(d), false);
  std::vector<int> stack;
  for (int k : a | b | c) stack.push_back(k);
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    if (keep[static_cast<std::size_t>(k)]) continue;
    keep[static_cast<std::size_t>(k)] = true;
    for (int p = 0; p < d; ++p) {
      if (g.has_edge(p, k)) stack.push_back(p);
    }
  }
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(d), std::vector<bool>(static_cast<std::size_t>(d), false));
  auto link = [&](int u, int v) { adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true; };
  for (int k = 0; k < d; ++k) {
    if (!keep[static_cast<std::size_t>(k)]) continue;
    std::vector<int> ps;
    for (int p = 0; p < d; ++p) {
      if (g.has_edge(p, k)) ps.push_back(p);
    }
    for (int p : ps) link(p, k);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (int k : a) stack.push_back(k);
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(k)] || c.contains(k) || !keep[static_cast<std::size_t>(k)]) continue;
    if (b.contains(k)) return false;
    seen[static_cast<std::size_t>(k)] = true;
    for (int v = 0; v < d; ++v) {
      if (adj[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)]) stack.push_back(v);
    }
  }
  return true;
}

}  // namespace oracle
