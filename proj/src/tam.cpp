#include "tamdag/tam.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "io_util.hpp"

namespace tamdag {

std::string_view to_string(TamVariant v) {
  switch (v) {
    case TamVariant::Simple:
      return "simple";
    case TamVariant::General:
      return "general";
    case TamVariant::NoPps:
      return "nopps";
  }
  return "?";
}

TamVariant parse_tam_variant(std::string_view text) {
  if (text == "simple" || text == "Simple") return TamVariant::Simple;
  if (text == "general" || text == "General") return TamVariant::General;
  if (text == "nopps" || text == "no-pps" || text == "NoPps") return TamVariant::NoPps;
  throw std::invalid_argument("unknown TAM variant '" + std::string(text) + "'");
}

std::vector<int> TamTrace::layer_of(int d) const {
  std::vector<int> out(static_cast<std::size_t>(d), -1);
  for (const auto& layer : layers) {
    for (int k : layer.members) out[static_cast<std::size_t>(k)] = layer.index;
  }
  return out;
}

std::pair<double, double> auto_thresholds(int d, double n, double c) {
  if (d < 2 || n < 1) throw std::invalid_argument("auto_thresholds: need d >= 2 and n >= 1");
  const double dd = d, logd = std::log(dd);
  const double ratio = dd / (n * logd);
  const double v = c * std::pow(dd * dd * dd * logd, 0.25) * std::pow(ratio * ratio + logd / std::sqrt(n), 0.25);
  return {v, v};
}

TamResult tam_learn(const InfoSource& src, const TamConfig& in) {
  const int d = src.size();
  if (d < 1) throw std::invalid_argument("tam_learn: empty source");
  TamConfig cfg = in;
  if (cfg.auto_tune) {
    if (src.is_exact()) throw std::invalid_argument("tam_learn: auto_tune needs a sample size");
    std::tie(cfg.omega, cfg.kappa) = d >= 2 ? auto_thresholds(d, static_cast<double>(src.sample_size()), cfg.tune_constant)
                                            : std::pair{cfg.omega, cfg.kappa};
  }
  if (cfg.omega < 0.0 || cfg.kappa < 0.0) throw std::invalid_argument("tam_learn: thresholds must be non-negative");

  TamResult res{Dag(d), {}};
  res.trace.variant = cfg.variant;
  res.trace.omega = cfg.omega;
  res.trace.kappa = cfg.kappa;

  NodeSet placed;
  const NodeSet all = NodeSet::range(d);
  std::vector<NodeSet> boundary(static_cast<std::size_t>(d));

  for (int j = 0; placed != all; ++j) {
    TamLayer layer;
    layer.index = j;
    layer.ancestral = placed;

    for (int k : all - placed) {
      TamEntropy e{k, 0.0, {}};
      if (cfg.variant == TamVariant::NoPps) {
        e.entropy = src.cond_entropy(NodeSet::single(k), placed);
        e.boundary = iamb_backward(src, k, placed, cfg.kappa, cfg.backward);
      } else {
        auto r = pps(src, k, placed, cfg.kappa);
        e.entropy = r.cond_entropy;
        e.boundary = r.boundary;
      }
      boundary[static_cast<std::size_t>(k)] = e.boundary;
      layer.sorted.push_back(e);
    }
    std::stable_sort(layer.sorted.begin(), layer.sorted.end(),
                     [](const TamEntropy& a, const TamEntropy& b) { return a.entropy < b.entropy; });

    // Testing and masking over τ̂; `open` holds the positions still unmasked and unplaced.
    std::vector<std::size_t> open(layer.sorted.size());
    for (std::size_t i = 0; i < open.size(); ++i) open[i] = i;
    NodeSet current;
    while (!open.empty()) {
      const double head_entropy = layer.sorted[open.front()].entropy;
      std::vector<int> heads;
      std::size_t taken = 0;
      while (taken < open.size() && layer.sorted[open[taken]].entropy - head_entropy <= cfg.tie_tolerance) {
        heads.push_back(layer.sorted[open[taken]].node);
        ++taken;
      }
      open.erase(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(taken));
      for (int h : heads) {
        current.insert(h);
        layer.members.push_back(h);
      }

      std::vector<std::size_t> keep;
      for (std::size_t pos : open) {
        const int k = layer.sorted[pos].node;
        const NodeSet target = NodeSet::single(k);
        bool masked = false;
        if (cfg.variant == TamVariant::General) {
          const double v = src.cmi(target, current, placed);
          layer.tests.push_back({k, current, placed, v});
          if (v >= cfg.omega) {
            layer.masks.push_back({k, heads.back(), v});
            masked = true;
          }
        } else {
          const NodeSet given = cfg.variant == TamVariant::Simple ? boundary[static_cast<std::size_t>(k)] : placed;
          for (int h : heads) {
            const double v = src.cmi(target, NodeSet::single(h), given);
            layer.tests.push_back({k, NodeSet::single(h), given, v});
            if (v >= cfg.omega) {
              layer.masks.push_back({k, h, v});
              masked = true;
              break;
            }
          }
        }
        if (!masked) keep.push_back(pos);
      }
      open = std::move(keep);
    }

    for (int k : layer.members) {
      for (int p : boundary[static_cast<std::size_t>(k)]) {
        assert(placed.contains(p));
        res.dag.add_edge(p, k);
      }
    }
    placed |= current;
    res.trace.layers.push_back(std::move(layer));
  }
  return res;
}

TamResult tam_learn(const Dataset& data, const TamConfig& cfg) {
  return tam_learn(InfoSource::empirical(data, cfg.estimator), cfg);
}

std::string to_text(const TamTrace& trace) {
  using detail::format_real;
  std::string out = fmt::format("config -1 -1 0 variant={} omega={} kappa={}\n", to_string(trace.variant),
                                format_real(trace.omega), format_real(trace.kappa));
  for (const auto& layer : trace.layers) {
    const int j = layer.index;
    out += fmt::format("layer {} -1 0 ancestral={}\n", j, layer.ancestral.to_string());
    for (const auto& e : layer.sorted) {
      out += fmt::format("entropy {} {} {} boundary={}\n", j, e.node, format_real(e.entropy), e.boundary.to_string());
    }
    for (const auto& t : layer.tests) {
      out += fmt::format("test {} {} {} other={} given={}\n", j, t.node, format_real(t.value), t.other.to_string(),
                         t.given.to_string());
    }
    for (const auto& m : layer.masks) {
      out += fmt::format("mask {} {} {} masker={}\n", j, m.node, format_real(m.value), m.masker);
    }
    for (int k : layer.members) out += fmt::format("member {} {} 0\n", j, k);
  }
  return out;
}

}  // namespace tamdag
