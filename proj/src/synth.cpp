#include "tamdag/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "io_util.hpp"
#include "tamdag/rng.hpp"

namespace tamdag {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<int> random_permutation(int d, SplitMix64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = d - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  return perm;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Binary cpt row (P(0), P(1)) with P(1) = q.
void push_bernoulli(std::vector<double>& table, double q) {
  table.push_back(1.0 - q);
  table.push_back(q);
}

}  // namespace

std::string_view to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Tree:
      return "tree";
    case GraphKind::ER:
      return "er";
    case GraphKind::SF:
      return "sf";
  }
  return "?";
}

GraphKind parse_graph_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "tree" || s == "polytree") return GraphKind::Tree;
  if (s == "er") return GraphKind::ER;
  if (s == "sf") return GraphKind::SF;
  throw std::invalid_argument("unknown graph kind '" + std::string(text) + "'");
}

std::string_view to_string(ModelKind k) { return k == ModelKind::MOD ? "mod" : "add"; }

ModelKind parse_model_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "mod") return ModelKind::MOD;
  if (s == "add") return ModelKind::ADD;
  throw std::invalid_argument("unknown model kind '" + std::string(text) + "'");
}

Dag gen_polytree(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("gen_polytree: d must be >= 1");
  Dag g(d);
  if (d == 1) return g;
  SplitMix64 rng(seed);
  std::vector<int> code(static_cast<std::size_t>(d - 2));
  for (int& c : code) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));

  // Prüfer decoding: repeatedly join the smallest leaf to the next code entry.
  std::vector<int> degree(static_cast<std::size_t>(d), 1);
  for (int c : code) ++degree[static_cast<std::size_t>(c)];
  std::vector<std::pair<int, int>> edges;
  for (int c : code) {
    int leaf = 0;
    while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
    edges.emplace_back(leaf, c);
    --degree[static_cast<std::size_t>(leaf)];
    --degree[static_cast<std::size_t>(c)];
  }
  int u = -1, v = -1;
  for (int k = 0; k < d; ++k) {
    if (degree[static_cast<std::size_t>(k)] == 1) (u < 0 ? u : v) = k;
  }
  edges.emplace_back(u, v);

  for (auto [a, b] : edges) {
    if (rng.bernoulli(0.5)) {
      g.add_edge(a, b);
    } else {
      g.add_edge(b, a);
    }
  }
  return g;
}

Dag gen_er(int d, double expected_edges, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("gen_er: d must be >= 1");
  if (expected_edges < 0) throw std::invalid_argument("gen_er: expected_edges must be >= 0");
  Dag g(d);
  if (d == 1) return g;
  SplitMix64 rng(seed);
  const auto order = random_permutation(d, rng);
  const double pairs = 0.5 * d * (d - 1);
  double prob = expected_edges / pairs;
  if (prob > 1.0) {
    fmt::print(stderr, "warning: gen_er: {} expected edges exceed the {} possible pairs; using probability 1\n",
               expected_edges, pairs);
    prob = 1.0;
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (rng.bernoulli(prob)) g.add_edge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

Dag gen_sf(int d, int attach, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("gen_sf: d must be >= 1");
  if (attach < 0) throw std::invalid_argument("gen_sf: attach must be >= 0");
  Dag g(d);
  SplitMix64 rng(seed);
  const auto order = random_permutation(d, rng);
  std::vector<double> weight(static_cast<std::size_t>(d), 1.0);
  for (int t = 1; t < d; ++t) {
    const int node = order[static_cast<std::size_t>(t)];
    const int want = std::min(attach, t);
    NodeSet chosen;
    for (int e = 0; e < want; ++e) {
      double total = 0.0;
      for (int s = 0; s < t; ++s) {
        const int old = order[static_cast<std::size_t>(s)];
        if (!chosen.contains(old)) total += weight[static_cast<std::size_t>(old)];
      }
      double u = rng.uniform() * total;
      int pick = -1;
      for (int s = 0; s < t; ++s) {
        const int old = order[static_cast<std::size_t>(s)];
        if (chosen.contains(old)) continue;
        pick = old;
        u -= weight[static_cast<std::size_t>(old)];
        if (u < 0.0) break;
      }
      chosen.insert(pick);
    }
    for (int parent : chosen) {
      g.add_edge(parent, node);
      weight[static_cast<std::size_t>(parent)] += 1.0;
      weight[static_cast<std::size_t>(node)] += 1.0;
    }
  }
  return g;
}

Dag generate(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphKind::Tree:
      return gen_polytree(spec.d, spec.seed);
    case GraphKind::ER:
      return gen_er(spec.d, spec.param < 0 ? spec.d : spec.param, spec.seed);
    case GraphKind::SF:
      return gen_sf(spec.d, spec.param < 0 ? 2 : static_cast<int>(std::lround(spec.param)), spec.seed);
  }
  throw std::logic_error("unreachable");
}

TabularBN compile_mod(const Dag& g, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("compile_mod: p must lie in (0, 1)");
  const int d = g.size();
  std::vector<std::vector<double>> cpts(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const int parents = g.parents(k).size();
    auto& table = cpts[static_cast<std::size_t>(k)];
    for (std::uint64_t row = 0; row < (std::uint64_t{1} << parents); ++row) {
      // Binary parents: the row index bits are the parent values.
      const int parity = std::popcount(row) & 1;
      push_bernoulli(table, parity == 1 ? p : 1.0 - p);
    }
  }
  return TabularBN(g, std::vector<int>(static_cast<std::size_t>(d), 2), std::move(cpts));
}

TabularBN compile_add(const Dag& g, double p, int support_cap) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("compile_add: p must lie in (0, 1)");
  const int d = g.size();
  std::vector<int> supports(static_cast<std::size_t>(d), 0);
  std::vector<std::vector<double>> cpts(static_cast<std::size_t>(d));
  for (int k : g.topological_order()) {
    const auto parents = g.parents(k).to_vector();
    int max_sum = 0;
    for (int pa : parents) max_sum += supports[static_cast<std::size_t>(pa)] - 1;
    const int kk = max_sum + 2;
    if (kk > support_cap) {
      throw std::length_error(fmt::format("compile_add: node {} needs support {} > cap {}", k, kk, support_cap));
    }
    supports[static_cast<std::size_t>(k)] = kk;
    auto& table = cpts[static_cast<std::size_t>(k)];
    std::vector<int> x(parents.size(), 0);
    std::size_t rows = 1;
    for (int pa : parents) rows *= static_cast<std::size_t>(supports[static_cast<std::size_t>(pa)]);
    for (std::size_t r = 0; r < rows; ++r) {
      const int s = std::accumulate(x.begin(), x.end(), 0);
      for (int v = 0; v < kk; ++v) table.push_back(v == s ? 1.0 - p : v == s + 1 ? p : 0.0);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (++x[i] < supports[static_cast<std::size_t>(parents[i])]) break;
        x[i] = 0;
      }
    }
  }
  return TabularBN(g, std::move(supports), std::move(cpts));
}

TabularBN compile(const Dag& g, const ModelSpec& spec) {
  return spec.kind == ModelKind::MOD ? compile_mod(g, spec.p) : compile_add(g, spec.p);
}

TabularBN random_positive_bn(const Dag& g, std::uint64_t seed, int support) {
  if (support < 2) throw std::invalid_argument("random_positive_bn: support must be >= 2");
  SplitMix64 rng(seed);
  const int d = g.size();
  std::vector<int> supports(static_cast<std::size_t>(d), support);
  std::vector<std::vector<double>> cpts(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    std::size_t rows = 1;
    for (int i = 0; i < g.parents(k).size(); ++i) rows *= static_cast<std::size_t>(support);
    auto& table = cpts[static_cast<std::size_t>(k)];
    for (std::size_t r = 0; r < rows; ++r) {
      if (support == 2) {
        push_bernoulli(table, 0.05 + 0.9 * rng.uniform());
        continue;
      }
      std::vector<double> w(static_cast<std::size_t>(support));
      double total = 0.0;
      for (double& v : w) total += v = -std::log1p(-rng.uniform());
      double sum = 0.0;
      for (std::size_t v = 0; v + 1 < w.size(); ++v) {
        table.push_back(0.9 * w[v] / total + 0.1 / support);
        sum += table.back();
      }
      table.push_back(1.0 - sum);
    }
  }
  return TabularBN(g, std::move(supports), std::move(cpts));
}

TabularBN fixture_diamond_m1(double eps) {
  const double b0 = std::log(0.1 / 0.9);
  Dag g(4, std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  std::vector<std::vector<double>> cpts(4);
  cpts[0] = {0.8, 0.2};
  // X2 stored as X2 + 1; rows by X1.
  cpts[1] = {0.0, 0.9, 0.1, 0.9, 0.1, 0.0};
  cpts[2] = {0.8, 0.2, 0.0, 0.0, 0.8, 0.2};
  // X4 stored as X4 + 1 = (X2 + 1) + B; row = s2 + 3 * x3.
  for (int x3 = 0; x3 < 3; ++x3) {
    const double q = sigmoid(eps * x3 + b0);
    for (int s2 = 0; s2 < 3; ++s2) {
      for (int v = 0; v < 4; ++v) cpts[3].push_back(v == s2 ? 1.0 - q : v == s2 + 1 ? q : 0.0);
    }
  }
  TabularBN bn(std::move(g), {2, 3, 3, 4}, std::move(cpts));
  bn.set_shifts({0, -1, 0, -1});
  bn.set_names({"X1", "X2", "X3", "X4"});
  return bn;
}

TabularBN fixture_diamond_m2() {
  Dag g(4, std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  std::vector<std::vector<double>> cpts(4);
  cpts[0] = {0.8, 0.2};
  cpts[1] = {0.0, 0.9, 0.1, 0.9, 0.1, 0.0};
  cpts[2] = {0.8, 0.2, 0.0, 0.0, 0.8, 0.2};
  // X4 + 1 = (X2 + 1) + X3 + Z4 in 0..5.
  for (int x3 = 0; x3 < 3; ++x3) {
    for (int s2 = 0; s2 < 3; ++s2) {
      for (int v = 0; v < 6; ++v) cpts[3].push_back(v == s2 + x3 ? 0.9 : v == s2 + x3 + 1 ? 0.1 : 0.0);
    }
  }
  TabularBN bn(std::move(g), {2, 3, 3, 6}, std::move(cpts));
  bn.set_shifts({0, -1, 0, -1});
  bn.set_names({"X1", "X2", "X3", "X4"});
  return bn;
}

TabularBN fixture_path_cancel(int n) {
  if (n < 2 || n > 16) throw std::invalid_argument("path-cancel: need 2 <= n <= 16");
  // Node 0 = Z, nodes 1..n = X_i, node n+1 = Y. The Z = 1 success
  // probabilities of the X_i are a cyclic shift of the Z = 0 ones, so the
  // symmetric Y sees the same law of sum(X) either way.
  const int y = n + 1;
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) alpha[static_cast<std::size_t>(i)] = -0.8 + 1.6 * i / (n - 1);
  const double beta_y = 1.2, alpha_y = -0.3 * n;

  Dag g(n + 2);
  std::vector<std::vector<double>> cpts(static_cast<std::size_t>(n + 2));
  cpts[0] = {0.6, 0.4};
  for (int i = 0; i < n; ++i) {
    g.add_edge(0, i + 1);
    g.add_edge(i + 1, y);
    const double a = alpha[static_cast<std::size_t>(i)];
    const double b = alpha[static_cast<std::size_t>((i + 1) % n)] - a;
    push_bernoulli(cpts[static_cast<std::size_t>(i + 1)], sigmoid(a));
    push_bernoulli(cpts[static_cast<std::size_t>(i + 1)], sigmoid(b + a));
  }
  for (std::uint64_t row = 0; row < (std::uint64_t{1} << n); ++row) {
    push_bernoulli(cpts[static_cast<std::size_t>(y)], sigmoid(beta_y * std::popcount(row) + alpha_y));
  }
  TabularBN bn(std::move(g), std::vector<int>(static_cast<std::size_t>(n + 2), 2), std::move(cpts));
  std::vector<std::string> names{"Z"};
  for (int i = 1; i <= n; ++i) names.push_back(fmt::format("X{}", i));
  names.emplace_back("Y");
  bn.set_names(std::move(names));
  return bn;
}

TabularBN fixture_discrete_unfaithful() {
  // Nodes: W = 0, Z = 1, X = 2, Y = 3.
  const double pw = 0.2, pz = 0.5;
  auto px = [](int w, int z) { return sigmoid(2.0 * w + 1.0 * z - 1.5); };
  auto py = [](int x, int z, double bz) { return sigmoid(2.0 * x + bz * z - 1.0); };
  auto y_given_z = [&](int z, double bz) {
    const double x1 = (1.0 - pw) * px(0, z) + pw * px(1, z);
    return (1.0 - x1) * py(0, z, bz) + x1 * py(1, z, bz);
  };
  // P(Y=1 | Z=1) increases with bz; bisect for equality with P(Y=1 | Z=0).
  const double target = y_given_z(0, 0.0);
  double lo = -20.0, hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (y_given_z(1, mid) < target ? lo : hi) = mid;
  }
  const double bz = 0.5 * (lo + hi);

  Dag g(4, std::vector<Edge>{{0, 2}, {1, 2}, {1, 3}, {2, 3}});
  std::vector<std::vector<double>> cpts(4);
  push_bernoulli(cpts[0], pw);
  push_bernoulli(cpts[1], pz);
  for (int z = 0; z < 2; ++z) {
    for (int w = 0; w < 2; ++w) push_bernoulli(cpts[2], px(w, z));
  }
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) push_bernoulli(cpts[3], py(x, z, bz));
  }
  TabularBN bn(std::move(g), {2, 2, 2, 2}, std::move(cpts));
  bn.set_names({"W", "Z", "X", "Y"});
  return bn;
}

TabularBN fixture_aggregate_only(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("aggregate-only: q must lie in (0, 1)");
  constexpr double noise = 0.1;
  Dag g(3, std::vector<Edge>{{0, 2}, {1, 2}});
  std::vector<std::vector<double>> cpts(3);
  cpts[0] = {0.5, 0.5};
  cpts[1] = {0.5, 0.5};
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      const int x = a ^ b;
      const double keep = (1.0 - q) * (1.0 - noise), flip = (1.0 - q) * noise;
      cpts[2].push_back(x == 0 ? keep : flip);
      cpts[2].push_back(x == 1 ? keep : flip);
      cpts[2].push_back(q);
    }
  }
  TabularBN bn(std::move(g), {2, 2, 3}, std::move(cpts));
  bn.set_names({"Xa", "Xb", "K"});
  return bn;
}

TabularBN fixture(std::string_view name) {
  const auto colon = name.find(':');
  const std::string base = lower(name.substr(0, colon));
  const bool has_arg = colon != std::string_view::npos;
  const std::string_view arg = has_arg ? name.substr(colon + 1) : std::string_view{};
  if (base == "diamond-m1") return fixture_diamond_m1(has_arg ? detail::parse_double(arg, "eps") : 0.01);
  if (base == "diamond-m2" && !has_arg) return fixture_diamond_m2();
  if (base == "path-cancel") return fixture_path_cancel(has_arg ? detail::parse_int(arg, "path count") : 2);
  if (base == "discrete-unfaithful" && !has_arg) return fixture_discrete_unfaithful();
  if (base == "aggregate-only") return fixture_aggregate_only(has_arg ? detail::parse_double(arg, "q") : 0.1);
  throw std::invalid_argument("unknown fixture '" + std::string(name) + "'");
}

std::vector<std::string> fixture_names() {
  return {"diamond-m1", "diamond-m2", "path-cancel", "discrete-unfaithful", "aggregate-only"};
}

}  // namespace tamdag
