#include "tamdag/bn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "counting.hpp"
#include "io_util.hpp"
#include "tamdag/info_source.hpp"
#include "tamdag/kernels.hpp"
#include "tamdag/rng.hpp"

namespace tamdag {

TabularBN::TabularBN(Dag dag, std::vector<int> supports, std::vector<std::vector<double>> cpts)
    : dag_(std::move(dag)), supports_(std::move(supports)), cpts_(std::move(cpts)) {
  const int d = dag_.size();
  if (supports_.size() != static_cast<std::size_t>(d) || cpts_.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("TabularBN: supports/cpts must have one entry per node");
  }
  strictly_positive_ = true;
  for (int k = 0; k < d; ++k) {
    const int kk = support(k);
    if (kk < 1) throw std::invalid_argument(fmt::format("node {}: support size must be >= 1", k));
    const std::size_t rows = cpt_rows(k);
    const auto& table = cpts_[static_cast<std::size_t>(k)];
    if (table.size() != rows * static_cast<std::size_t>(kk)) {
      throw std::invalid_argument(fmt::format("node {}: cpt has {} entries, expected {} rows x {}", k, table.size(),
                                              rows, kk));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (int v = 0; v < kk; ++v) {
        const double p = table[r * static_cast<std::size_t>(kk) + static_cast<std::size_t>(v)];
        if (!(p >= 0.0)) throw std::invalid_argument(fmt::format("node {} row {}: negative probability", k, r));
        if (p == 0.0) strictly_positive_ = false;
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument(fmt::format("node {} row {}: probabilities sum to {:.17g}", k, r, sum));
      }
    }
  }
  shifts_.assign(static_cast<std::size_t>(d), 0);
}

std::size_t TabularBN::cpt_rows(int k) const {
  std::size_t rows = 1;
  for (int p : dag_.parents(k)) rows *= static_cast<std::size_t>(support(p));
  return rows;
}

std::span<const double> TabularBN::row(int k, std::size_t r) const {
  const auto kk = static_cast<std::size_t>(support(k));
  return cpt(k).subspan(r * kk, kk);
}

std::size_t TabularBN::row_index(int k, std::span<const int> x) const {
  std::size_t r = 0, stride = 1;
  for (int p : dag_.parents(k)) {
    r += static_cast<std::size_t>(x[static_cast<std::size_t>(p)]) * stride;
    stride *= static_cast<std::size_t>(support(p));
  }
  return r;
}

void TabularBN::set_shifts(std::vector<int> shifts) {
  if (shifts.size() != supports_.size()) throw std::invalid_argument("shift count mismatch");
  shifts_ = std::move(shifts);
}

void TabularBN::set_names(std::vector<std::string> names) {
  if (!names.empty() && names.size() != supports_.size()) throw std::invalid_argument("name count mismatch");
  names_ = std::move(names);
}

JointDist::JointDist(std::vector<int> supports, std::vector<double> probs)
    : supports_(std::move(supports)), probs_(std::move(probs)) {
  std::uint64_t stride = 1;
  for (int k : supports_) {
    strides_.push_back(stride);
    stride *= static_cast<std::uint64_t>(k);
  }
  if (stride != probs_.size()) throw std::invalid_argument("JointDist: table size does not match supports");
  double total = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw std::invalid_argument("JointDist: negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument(fmt::format("JointDist: total mass {:.17g}", total));
}

namespace {

constexpr std::size_t kBlock = 4096;

// Walks all configurations in encoding order, block by block, exposing the
// digits of the requested nodes as int32 columns.
class ConfigurationBlocks {
 public:
  ConfigurationBlocks(const std::vector<int>& supports, std::vector<int> nodes, std::size_t states)
      : supports_(supports), nodes_(std::move(nodes)), states_(states), digits_(supports.size(), 0) {
    columns_.assign(nodes_.size(), std::vector<std::int32_t>(kBlock));
    for (auto& c : columns_) pointers_.push_back(c.data());
  }

  /// Fills the next block; returns its length (0 when exhausted).
  std::size_t next() {
    const std::size_t len = std::min(kBlock, states_ - begin_next_);
    begin_ = begin_next_;
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t c = 0; c < nodes_.size(); ++c) {
        columns_[c][i] = digits_[static_cast<std::size_t>(nodes_[c])];
      }
      for (std::size_t k = 0; k < digits_.size(); ++k) {
        if (++digits_[k] < supports_[k]) break;
        digits_[k] = 0;
      }
    }
    begin_next_ += len;
    return len;
  }

  std::size_t begin() const { return begin_; }
  std::span<const std::int32_t* const> columns() const { return pointers_; }

 private:
  const std::vector<int>& supports_;
  std::vector<int> nodes_;
  std::size_t states_;
  std::vector<int> digits_;
  std::vector<std::vector<std::int32_t>> columns_;
  std::vector<const std::int32_t*> pointers_;
  std::size_t begin_ = 0;
  std::size_t begin_next_ = 0;
};

}  // namespace

std::vector<double> JointDist::marginal(NodeSet s) const {
  if (!s.is_subset_of(NodeSet::range(size()))) throw std::out_of_range("marginal: node out of range");
  std::vector<int> nodes = s.to_vector();
  std::vector<std::uint32_t> strides;
  std::size_t radix = 1;
  for (int k : nodes) {
    strides.push_back(static_cast<std::uint32_t>(radix));
    radix *= static_cast<std::size_t>(supports_[static_cast<std::size_t>(k)]);
  }
  std::vector<double> out(radix, 0.0);
  if (nodes.empty()) {
    out[0] = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    return out;
  }
  ConfigurationBlocks blocks(supports_, nodes, probs_.size());
  std::vector<std::uint32_t> keys(kBlock);
  while (const std::size_t len = blocks.next()) {
    std::span<std::uint32_t> block_keys(keys.data(), len);
    kernels::encode_keys(blocks.columns(), strides, block_keys);
    const double* p = probs_.data() + blocks.begin();
    for (std::size_t i = 0; i < len; ++i) out[block_keys[i]] += p[i];
  }
  return out;
}

JointDist joint_table(const TabularBN& bn, std::size_t cap) {
  const int d = bn.size();
  double states_d = 1.0;
  for (int k : bn.supports()) states_d *= k;
  if (states_d > static_cast<double>(cap)) {
    throw std::length_error(fmt::format("joint table has {:.0f} states, cap is {}", states_d, cap));
  }
  const auto states = static_cast<std::size_t>(states_d);
  std::vector<double> probs(states, 1.0);

  // Per node: index into the flattened cpt = x_k + K_k * row(x_pa).
  struct NodeIndex {
    std::vector<int> nodes;
    std::vector<std::uint32_t> strides;
  };
  std::vector<NodeIndex> index(static_cast<std::size_t>(d));
  std::vector<int> all_nodes(static_cast<std::size_t>(d));
  std::iota(all_nodes.begin(), all_nodes.end(), 0);
  for (int k = 0; k < d; ++k) {
    auto& ni = index[static_cast<std::size_t>(k)];
    ni.nodes.push_back(k);
    ni.strides.push_back(1);
    std::uint32_t stride = static_cast<std::uint32_t>(bn.support(k));
    for (int p : bn.dag().parents(k)) {
      ni.nodes.push_back(p);
      ni.strides.push_back(stride);
      stride *= static_cast<std::uint32_t>(bn.support(p));
    }
  }

  ConfigurationBlocks blocks(bn.supports(), all_nodes, states);
  std::vector<std::uint32_t> keys(kBlock);
  std::vector<const std::int32_t*> cols;
  while (const std::size_t len = blocks.next()) {
    std::span<double> out(probs.data() + blocks.begin(), len);
    std::span<std::uint32_t> block_keys(keys.data(), len);
    for (int k = 0; k < d; ++k) {
      const auto& ni = index[static_cast<std::size_t>(k)];
      cols.clear();
      for (int node : ni.nodes) cols.push_back(blocks.columns()[static_cast<std::size_t>(node)]);
      kernels::encode_keys(cols, ni.strides, block_keys);
      kernels::gather_multiply(bn.cpt(k), block_keys, out);
    }
  }
  return JointDist(bn.supports(), std::move(probs));
}

double entropy(const JointDist& p, NodeSet s) {
  if (s.empty()) return 0.0;
  const auto m = p.marginal(s);
  const double h = -kernels::sum_xlogx(m);
  return h < 0.0 ? 0.0 : h;
}

double cond_entropy(const JointDist& p, NodeSet k, NodeSet a) {
  if (!k.disjoint(a)) throw std::invalid_argument("cond_entropy: sets overlap");
  const double v = entropy(p, k | a) - entropy(p, a);
  return v < 0.0 ? 0.0 : v;
}

double cmi(const JointDist& p, NodeSet k, NodeSet l, NodeSet a) {
  if (!k.disjoint(l) || !k.disjoint(a) || !l.disjoint(a)) throw std::invalid_argument("cmi: sets overlap");
  const double v = (entropy(p, k | a) + entropy(p, l | a)) - (entropy(p, a) + entropy(p, k | l | a));
  return v < 0.0 ? 0.0 : v;
}

NodeSet markov_boundary_exact(const InfoSource& src, int k, NodeSet s, int max_candidates) {
  if (s.contains(k)) throw std::invalid_argument("markov_boundary_exact: target inside candidate set");
  if (s.size() > max_candidates) {
    throw std::length_error(fmt::format("markov_boundary_exact: {} candidates exceed cap {}", s.size(), max_candidates));
  }
  const std::vector<int> cand = s.to_vector();
  const int n = static_cast<int>(cand.size());
  const NodeSet target = NodeSet::single(k);
  // Combinations of each size in lexicographic order of the sorted members.
  for (int size = 0; size <= n; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      NodeSet m;
      for (int i : pick) m.insert(cand[static_cast<std::size_t>(i)]);
      const NodeSet rest = s - m;
      if (rest.empty() || src.cmi(target, rest, m) <= kZeroCmiTolerance) return m;
      int i = size - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return s;
}

NodeSet markov_boundary_exact(const JointDist& p, int k, NodeSet s, int max_candidates) {
  return markov_boundary_exact(InfoSource::exact(p), k, s, max_candidates);
}

Dag minimal_imap(const InfoSource& src, std::span<const int> ordering) {
  const int d = src.size();
  if (ordering.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("minimal_imap: ordering size mismatch");
  Dag g(d);
  NodeSet before;
  for (int k : ordering) {
    if (before.contains(k) || k < 0 || k >= d) throw std::invalid_argument("minimal_imap: ordering is not a permutation");
    for (int p : markov_boundary_exact(src, k, before, NodeSet::kMaxNodes)) g.add_edge(p, k);
    before.insert(k);
  }
  return g;
}

Dag minimal_imap(const JointDist& p, std::span<const int> ordering) {
  return minimal_imap(InfoSource::exact(p), ordering);
}

Dataset sample(const TabularBN& bn, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  const int d = bn.size();
  const auto order = bn.dag().topological_order();
  std::vector<std::int32_t> values(n * static_cast<std::size_t>(d));
  std::vector<int> x(static_cast<std::size_t>(d));
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k : order) {
      const auto probs = bn.row(k, bn.row_index(k, x));
      const double u = rng.uniform();
      double cum = 0.0;
      int v = static_cast<int>(probs.size()) - 1;
      for (std::size_t j = 0; j < probs.size(); ++j) {
        cum += probs[j];
        if (u < cum) {
          v = static_cast<int>(j);
          break;
        }
      }
      // Never land on a zero-probability value through rounding in the tail.
      while (probs[static_cast<std::size_t>(v)] == 0.0 && v > 0) --v;
      x[static_cast<std::size_t>(k)] = v;
      values[static_cast<std::size_t>(k) * n + i] = v;
    }
  }
  return Dataset(n, bn.supports(), std::move(values));
}

std::string to_text(const TabularBN& bn) {
  std::string out = "tabular-bn\n";
  out += fmt::format("d={}\n", bn.size());
  out += "supports";
  for (int k : bn.supports()) out += fmt::format(" {}", k);
  out += '\n';
  if (std::any_of(bn.shifts().begin(), bn.shifts().end(), [](int s) { return s != 0; })) {
    out += "shifts";
    for (int s : bn.shifts()) out += fmt::format(" {}", s);
    out += '\n';
  }
  if (!bn.names().empty()) {
    out += "names";
    for (const auto& name : bn.names()) out += " " + name;
    out += '\n';
  }
  const auto edges = bn.dag().edges();
  out += fmt::format("edges {}\n", edges.size());
  for (const Edge& e : edges) out += fmt::format("{} {}\n", e.parent, e.child);
  for (int k = 0; k < bn.size(); ++k) {
    const std::size_t rows = bn.cpt_rows(k);
    out += fmt::format("cpt {} {}\n", k, rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = bn.row(k, r);
      for (std::size_t v = 0; v < row.size(); ++v) {
        if (v) out += ' ';
        out += detail::format_real(row[v]);
      }
      out += '\n';
    }
  }
  return out;
}

TabularBN parse_bn(std::string_view text) {
  detail::LineReader lines(text);
  std::string_view line;
  auto expect = [&](const char* what) {
    if (!lines.next_content(line)) throw std::runtime_error(fmt::format("bn file: unexpected end, expected {}", what));
  };
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error(fmt::format("bn file line {}: {}", lines.line_number(), msg));
  };
  expect("header");
  if (line != "tabular-bn") fail("expected 'tabular-bn' header");
  expect("d=");
  if (!line.starts_with("d=")) fail("expected 'd=<int>'");
  const int d = detail::parse_int(line.substr(2), "node count");

  std::vector<int> supports, shifts;
  std::vector<std::string> names;
  expect("supports");
  auto fields = detail::split_ws(line);
  if (fields.empty() || fields[0] != "supports" || fields.size() != static_cast<std::size_t>(d) + 1) {
    fail("expected 'supports' with one size per node");
  }
  for (std::size_t i = 1; i < fields.size(); ++i) supports.push_back(detail::parse_int(fields[i], "support"));

  expect("edges");
  fields = detail::split_ws(line);
  while (!fields.empty() && (fields[0] == "shifts" || fields[0] == "names")) {
    if (fields.size() != static_cast<std::size_t>(d) + 1) fail(std::string(fields[0]) + " needs one entry per node");
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[0] == "shifts") {
        shifts.push_back(detail::parse_int(fields[i], "shift"));
      } else {
        names.emplace_back(fields[i]);
      }
    }
    expect("edges");
    fields = detail::split_ws(line);
  }
  if (fields.size() != 2 || fields[0] != "edges") fail("expected 'edges <count>'");
  const int m = detail::parse_int(fields[1], "edge count");
  Dag dag(d);
  for (int e = 0; e < m; ++e) {
    expect("edge");
    fields = detail::split_ws(line);
    if (fields.size() != 2) fail("expected 'u v'");
    dag.add_edge(detail::parse_int(fields[0], "edge parent"), detail::parse_int(fields[1], "edge child"));
  }

  std::vector<std::vector<double>> cpts(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    expect("cpt");
    fields = detail::split_ws(line);
    if (fields.size() != 3 || fields[0] != "cpt" || detail::parse_int(fields[1], "cpt node") != k) {
      fail(fmt::format("expected 'cpt {} <rows>'", k));
    }
    const int rows = detail::parse_int(fields[2], "cpt rows");
    for (int r = 0; r < rows; ++r) {
      expect("cpt row");
      fields = detail::split_ws(line);
      if (fields.size() != static_cast<std::size_t>(supports[static_cast<std::size_t>(k)])) {
        fail(fmt::format("cpt row of node {} needs {} probabilities", k, supports[static_cast<std::size_t>(k)]));
      }
      for (auto f : fields) cpts[static_cast<std::size_t>(k)].push_back(detail::parse_double(f, "probability"));
    }
  }
  TabularBN bn(std::move(dag), std::move(supports), std::move(cpts));
  if (!shifts.empty()) bn.set_shifts(std::move(shifts));
  if (!names.empty()) bn.set_names(std::move(names));
  return bn;
}

TabularBN read_bn_file(const std::string& path) { return parse_bn(detail::read_file(path)); }

void write_bn_file(const TabularBN& bn, const std::string& path) { detail::write_file(path, to_text(bn)); }

}  // namespace tamdag
