#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tamdag/bn.hpp"
#include "tamdag/conditions.hpp"
#include "tamdag/info_source.hpp"
#include "tamdag/synth.hpp"
#include "tamdag/tam.hpp"

using namespace tamdag;

namespace {

double h_bin(double p) { return -(p * std::log(p) + (1 - p) * std::log(1 - p)); }

const WitnessEntry* entry(const Condition1Result& r, int k, int j) {
  for (const auto& e : r.entries) {
    if (e.node == k && e.layer == j) return &e;
  }
  return nullptr;
}

TabularBN chain_bn() {
  return TabularBN(Dag(3, std::vector<Edge>{{0, 1}, {1, 2}}), {2, 2, 2},
                   {{0.3, 0.7}, {0.8, 0.2, 0.25, 0.75}, {0.9, 0.1, 0.3, 0.7}});
}

}  // namespace

TEST_CASE("diamond M1 witnesses") {
  const TabularBN bn = fixture_diamond_m1();
  const auto r = check_condition1(bn);
  CHECK(r.ok);
  REQUIRE(entry(r, 1, 0) != nullptr);
  CHECK(entry(r, 1, 0)->witnesses == NodeSet{0});
  CHECK(entry(r, 2, 0)->witnesses == NodeSet{0});
  CHECK(entry(r, 3, 0)->witnesses == NodeSet{0});
  // X2 is a witness for X4 at the second layer; X3 qualifies as well since
  // H(X3 | X1) < H(X4 | X1) and I(X4; X3 | X1) is small but positive.
  const auto* e = entry(r, 3, 1);
  REQUIRE(e != nullptr);
  CHECK(e->ancestors == NodeSet{1, 2});
  CHECK(e->witnesses.contains(1));
  CHECK(r.entries.size() == 4);
  CHECK(check_condition1_general(bn).ok);
  CHECK_FALSE(check_equal_entropy(bn).holds);
  CHECK(check_pps_condition_all(InfoSource::exact(bn), bn.dag()).ok);
}

TEST_CASE("diamond M2 has no witness for X4 at the first layer") {
  const TabularBN bn = fixture_diamond_m2();
  const auto r = check_condition1(bn);
  CHECK_FALSE(r.ok);
  REQUIRE(entry(r, 3, 0) != nullptr);
  CHECK(entry(r, 3, 0)->witnesses.empty());
  CHECK(entry(r, 3, 0)->ancestors == NodeSet{0});
  const auto g = check_condition1_general(bn);
  CHECK_FALSE(g.ok);
  CHECK(entry(g, 3, 0)->witnesses.empty());
  const ConditionReport rep = verify(bn);
  CHECK_FALSE(rep.certified);
  CHECK(rep.gaps.missing_witnesses >= 1);
  CHECK_FALSE(rep.gaps.delta.has_value());
}

TEST_CASE("deterministic copy child fails the entropy ordering") {
  const TabularBN bn(Dag(2, std::vector<Edge>{{0, 1}}), {2, 2}, {{0.3, 0.7}, {1, 0, 0, 1}});
  const auto r = check_condition1(bn);
  CHECK_FALSE(r.ok);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].witnesses.empty());
}

TEST_CASE("aggregate-only fixture separates the two witness rules") {
  const TabularBN bn = fixture_aggregate_only();
  CHECK_FALSE(check_condition1(bn).ok);
  const auto g = check_condition1_general(bn);
  CHECK(g.ok);
  CHECK(entry(g, 2, 0)->witnesses == NodeSet{0, 1});
  const InfoSource src = InfoSource::exact(bn);
  CHECK(src.cmi(2, 0, NodeSet{}) < 1e-12);
  CHECK(src.cmi(NodeSet{2}, NodeSet{0, 1}, NodeSet{}) > 0.1);
}

TEST_CASE("witnesses under the simple rule carry over to the general rule") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const TabularBN bn = random_positive_bn(gen_er(5, 6, seed), seed, 2 + static_cast<int>(seed % 2));
    const auto a = check_condition1(bn), b = check_condition1_general(bn);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].witnesses.is_subset_of(b.entries[i].witnesses));
    }
    if (a.ok) CHECK(b.ok);
  }
}

TEST_CASE("pps condition examples") {
  for (int n : {2, 3, 4}) {
    const TabularBN bn = fixture_path_cancel(n);
    NodeSet a = NodeSet::range(n + 1);
    CHECK(check_pps_condition(bn, n + 1, a).ok);
  }
  // Chain with a single parent boundary.
  CHECK(check_pps_condition(chain_bn(), 2, NodeSet{0, 1}).ok);
  CHECK(check_pps_condition(chain_bn(), 1, NodeSet{0}).ok);
  // XOR child: I(K; Xa) = I(K; Xb) = 0 at m = {}, so nothing dominates an outsider.
  const Dag g(4, std::vector<Edge>{{0, 2}, {1, 2}});
  const TabularBN x(g, {2, 2, 2, 2}, {{0.5, 0.5}, {0.5, 0.5}, {0.95, 0.05, 0.05, 0.95, 0.05, 0.95, 0.95, 0.05}, {0.5, 0.5}});
  const PpsCheck r = check_pps_condition(x, 2, NodeSet{0, 1, 3});
  CHECK_FALSE(r.ok);
  REQUIRE(r.violation.has_value());
  CHECK(r.violation->node == 2);
  CHECK(r.violation->boundary == NodeSet{0, 1});
  CHECK(r.violation->outsider == 3);
  CHECK(r.violation->subset.empty());
  CHECK_THROWS_AS(check_pps_condition(InfoSource::exact(fixture_diamond_m1()), 3, NodeSet{0, 1, 2}, 1),
                  std::length_error);
}

TEST_CASE("nondegeneracy") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(check_nondegeneracy(random_positive_bn(gen_er(6, 7, seed), seed)));
  }
  // Deterministic XOR child: pa \ A stays informative given any ancestral A.
  const Dag g(3, std::vector<Edge>{{0, 2}, {1, 2}});
  const TabularBN x(g, {2, 2, 2}, {{0.5, 0.5}, {0.5, 0.5}, {1, 0, 0, 1, 0, 1, 1, 0}});
  CHECK(check_nondegeneracy(x));
  // A child that ignores its parent entirely through identical rows.
  const TabularBN dead(Dag(2, std::vector<Edge>{{0, 1}}), {2, 2}, {{0.5, 0.5}, {0.3, 0.7, 0.3, 0.7}});
  CHECK_FALSE(check_nondegeneracy(dead));
}

TEST_CASE("equal entropy for the noise models") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dag g = gen_polytree(6, seed);
    for (auto kind : {ModelKind::MOD, ModelKind::ADD}) {
      const TabularBN bn = compile(g, {kind, 0.2});
      const EqualEntropy e = check_equal_entropy(bn);
      CHECK(e.holds);
      CHECK(e.h_star == doctest::Approx(h_bin(0.2)).epsilon(1e-12));
      CHECK(e.max_deviation <= 1e-9);
    }
  }
  const EqualEntropy m1 = check_equal_entropy(fixture_diamond_m1());
  CHECK_FALSE(m1.holds);
  CHECK(m1.max_deviation > 0.05);
}

TEST_CASE("unequal entropy ordering") {
  // Equal noise entropies and positive parent information satisfy the ordering.
  const TabularBN mod = compile_mod(gen_polytree(5, 3), 0.2);
  CHECK(check_unequal_entropy(mod) == Tristate::True);
  // The copy child is deterministic and has to come first, which its parent forbids.
  const TabularBN copy(Dag(2, std::vector<Edge>{{0, 1}}), {2, 2}, {{0.3, 0.7}, {1, 0, 0, 1}});
  CHECK(check_unequal_entropy(copy) == Tristate::False);
  CHECK(check_unequal_entropy(compile_mod(Dag(8), 0.2)) == Tristate::NotChecked);
  CHECK(to_string(Tristate::NotChecked) == "not-checked");
}

TEST_CASE("chain gaps match direct entropy evaluations") {
  const TabularBN bn = chain_bn();
  const auto ref = oracle::enumerate(bn);
  const Gaps g = compute_gaps(bn);
  REQUIRE(g.delta.has_value());
  REQUIRE(g.eta.has_value());
  // Layers {0}, {1}, {2}: pairs (1, j=0), (2, j=0) and (2, j=1).
  const double h0 = oracle::entropy(ref, NodeSet{0});
  const double h1 = oracle::entropy(ref, NodeSet{1});
  const double h2 = oracle::entropy(ref, NodeSet{2});
  const double h1g0 = oracle::entropy(ref, NodeSet{0, 1}) - h0;
  const double h2g0 = oracle::entropy(ref, NodeSet{0, 2}) - h0;
  const double delta = std::min({h1 - h0, h2 - h0, h2g0 - h1g0});
  const double eta = std::min({oracle::cmi(ref, NodeSet{1}, NodeSet{0}, NodeSet{}),
                               oracle::cmi(ref, NodeSet{2}, NodeSet{0}, NodeSet{}),
                               oracle::cmi(ref, NodeSet{2}, NodeSet{1}, NodeSet{0})});
  CHECK(*g.delta == doctest::Approx(delta).epsilon(1e-10));
  CHECK(*g.eta == doctest::Approx(eta).epsilon(1e-10));
  CHECK(g.missing_witnesses == 0);
  CHECK(g.layer_gaps.size() == 3);
}

TEST_CASE("xi of a single-parent boundary is half the parent information") {
  const TabularBN bn = chain_bn();
  const InfoSource src = InfoSource::exact(bn);
  const Gaps g = compute_gaps(bn);
  for (const auto& b : g.boundary_gaps) {
    REQUIRE(b.boundary.size() == 1);
    CHECK(b.xi == doctest::Approx(src.cmi(b.node, b.boundary.front(), NodeSet{}) / 2).epsilon(1e-12));
    CHECK(b.delta_tilde > 0);
  }
  REQUIRE(g.min_xi.has_value());
}

TEST_CASE("polytree properties") {
  int pairs = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int d = 3 + static_cast<int>(seed % 5);
    const TabularBN bn = random_positive_bn(gen_polytree(d, seed), seed * 7 + 1);
    const InfoSource src = InfoSource::exact(bn);
    CHECK(check_pps_condition_all(src, bn.dag()).ok);
    // Every node shares information with each of its ancestors in every
    // earlier layer. Long chains of weak links push some of these values to
    // 1e-10, so this checks strict positivity above rounding noise.
    const auto ld = layer_decomposition(bn.dag());
    for (int k = 0; k < d; ++k) {
      for (int i : ancestors(bn.dag(), k)) {
        CHECK(src.cmi(k, i, ld.ancestral(ld.layer_of(i))) > 1e-13);
        ++pairs;
      }
    }
    const Gaps g = compute_gaps(src, bn.dag());
    if (g.min_xi) CHECK(*g.min_xi > 0);
    if (g.min_delta_tilde) CHECK(*g.min_delta_tilde > 0);
  }
  CHECK(pairs > 100);
}

namespace {

// Every ancestor in an earlier layer shares information with the node, given that layer's ancestral set.
bool ancestors_informative(const InfoSource& src, const Dag& g) {
  const auto ld = layer_decomposition(g);
  for (int k = 0; k < g.size(); ++k) {
    for (int i : ancestors(g, k)) {
      if (ld.layer_of(i) < ld.layer_of(k) && !(src.cmi(k, i, ld.ancestral(ld.layer_of(i))) > kCertifyTolerance)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("equal entropy with informative ancestors implies condition 1") {
  int used = 0, cancelled = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Dag g = seed % 2 ? gen_er(6, 6, seed) : gen_polytree(6, seed);
    const TabularBN bn = compile(g, {seed % 3 ? ModelKind::MOD : ModelKind::ADD, 0.2});
    const InfoSource src = InfoSource::exact(bn);
    if (!check_equal_entropy(src, g).holds) continue;
    if (!ancestors_informative(src, g)) {
      // Parity models on graphs with triangles can cancel an ancestor exactly.
      ++cancelled;
      continue;
    }
    CHECK(check_condition1(src, g).ok);
    ++used;
  }
  CHECK(used > 10);
  CHECK(cancelled > 0);
}

TEST_CASE("unequal entropy with positive information implies condition 1") {
  int used = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const TabularBN bn = random_positive_bn(gen_er(5, 5, seed), seed + 3);
    const InfoSource src = InfoSource::exact(bn);
    if (check_unequal_entropy(src, bn.dag()) != Tristate::True) continue;
    // The second half of the premise: every ancestor in an earlier layer is informative.
    if (!ancestors_informative(src, bn.dag())) continue;
    const auto c1 = check_condition1(src, bn.dag());
    CHECK(c1.ok);
    ++used;
  }
  CHECK(used > 0);
}

TEST_CASE("certified networks are recovered at the population level") {
  int certified = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const TabularBN bn = random_positive_bn(gen_er(5, 5, seed), seed + 11);
    const ConditionReport r = verify(bn);
    if (!r.certified) continue;
    ++certified;
    TamConfig cfg;
    cfg.omega = *r.gaps.eta / 2;
    cfg.kappa = *r.gaps.min_xi;
    CHECK(tam_learn(InfoSource::exact(bn), cfg).dag == bn.dag());
  }
  CHECK(certified > 5);
}

TEST_CASE("report text") {
  const ConditionReport r = verify(fixture_diamond_m1());
  CHECK(r.nodes == 4);
  CHECK(r.depth == 3);
  CHECK_FALSE(r.positive);
  CHECK_FALSE(r.certified);
  const std::string text = to_text(r);
  CHECK(text.find("positive: false") != std::string::npos);
  CHECK(text.find("certified: false") != std::string::npos);
  CHECK(text.find("min_xi: ") != std::string::npos);
  CHECK_THROWS_AS(verify(compile_mod(Dag(12), 0.2), 1024), std::length_error);
}
