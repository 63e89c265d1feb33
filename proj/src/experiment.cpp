#include "tamdag/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "io_util.hpp"
#include "tamdag/rng.hpp"

namespace tamdag {

namespace {

using detail::format_real;

template <typename T, typename Fn>
std::vector<T> parse_list(std::string_view value, Fn&& parse_one) {
  std::vector<T> out;
  for (auto item : detail::split(value, ',')) {
    if (!item.empty()) out.push_back(parse_one(item));
  }
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("invalid boolean '" + std::string(v) + "'");
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& xs, Fn&& fmt_one) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt_one(xs[i]);
  }
  return out;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  key = detail::trim(key);
  value = detail::trim(value);
  try {
    if (key == "graphs" || key == "graph") {
      spec.graphs = parse_list<GraphKind>(value, parse_graph_kind);
    } else if (key == "models" || key == "model") {
      spec.models = parse_list<ModelKind>(value, parse_model_kind);
    } else if (key == "d") {
      spec.ds = parse_list<int>(value, [](std::string_view s) { return detail::parse_int(s, "d"); });
    } else if (key == "n") {
      spec.ns = parse_list<std::size_t>(
          value, [](std::string_view s) { return static_cast<std::size_t>(detail::parse_long(s, "n")); });
    } else if (key == "replications") {
      spec.replications = detail::parse_int(value, "replications");
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(detail::parse_long(value, "seed"));
    } else if (key == "p") {
      spec.p = detail::parse_double(value, "p");
    } else if (key == "graph_param") {
      spec.graph_param = detail::parse_double(value, "graph_param");
    } else if (key == "omega") {
      spec.tam.omega = detail::parse_double(value, "omega");
    } else if (key == "kappa") {
      spec.tam.kappa = detail::parse_double(value, "kappa");
    } else if (key == "estimator") {
      spec.tam.estimator = parse_estimator_kind(value);
    } else if (key == "variant") {
      spec.tam.variant = parse_tam_variant(value);
    } else if (key == "auto_tune") {
      spec.tam.auto_tune = parse_bool(value);
    } else if (key == "tune_constant") {
      spec.tam.tune_constant = detail::parse_double(value, "tune_constant");
    } else if (key == "exact") {
      spec.exact = parse_bool(value);
    } else if (key == "threads") {
      spec.threads = detail::parse_int(value, "threads");
    } else {
      throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
    }
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

ExperimentSpec parse_experiment_config(std::string_view text) {
  ExperimentSpec spec;
  detail::LineReader lines(text);
  std::string_view line;
  while (lines.next_content(line)) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("config line {}: expected key=value", lines.line_number()));
    }
    apply_setting(spec, line.substr(0, eq), line.substr(eq + 1));
  }
  return spec;
}

std::string to_config(const ExperimentSpec& s) {
  std::string out;
  out += "graphs=" + join(s.graphs, [](GraphKind g) { return std::string(to_string(g)); }) + "\n";
  out += "models=" + join(s.models, [](ModelKind m) { return std::string(to_string(m)); }) + "\n";
  out += "d=" + join(s.ds, [](int d) { return std::to_string(d); }) + "\n";
  out += "n=" + join(s.ns, [](std::size_t n) { return std::to_string(n); }) + "\n";
  out += fmt::format("replications={}\nseed={}\np={}\ngraph_param={}\n", s.replications, s.seed, format_real(s.p),
                     format_real(s.graph_param));
  out += fmt::format("omega={}\nkappa={}\nestimator={}\nvariant={}\nauto_tune={}\ntune_constant={}\n",
                     format_real(s.tam.omega), format_real(s.tam.kappa), to_string(s.tam.estimator),
                     to_string(s.tam.variant), s.tam.auto_tune, format_real(s.tam.tune_constant));
  out += fmt::format("exact={}\nthreads={}\n", s.exact, s.threads);
  return out;
}

void validate(const ExperimentSpec& s) {
  if (s.graphs.empty() || s.models.empty() || s.ds.empty() || (!s.exact && s.ns.empty())) {
    throw std::invalid_argument("experiment: graphs, models, d and n must be nonempty");
  }
  if (s.replications < 1) throw std::invalid_argument("experiment: replications must be >= 1");
  for (int d : s.ds) {
    if (d < 1 || d > NodeSet::kMaxNodes) throw std::invalid_argument("experiment: d out of range");
  }
  for (std::size_t n : s.ns) {
    if (n < 1) throw std::invalid_argument("experiment: n must be >= 1");
  }
  if (!(s.p > 0.0 && s.p < 1.0)) throw std::invalid_argument("experiment: p must lie in (0, 1)");
  if (s.threads < 0) throw std::invalid_argument("experiment: threads must be >= 0");
}

std::uint64_t graph_seed(const ExperimentSpec& spec, GraphKind g, ModelKind m, int d, int replication) {
  const auto cell = fnv1a(fmt::format("{}/{}/{}", to_string(g), to_string(m), d));
  return derive_seed(derive_seed(spec.seed, cell), static_cast<std::uint64_t>(replication));
}

std::uint64_t data_seed(std::uint64_t gseed, std::size_t n) { return derive_seed(gseed, n); }

double layer_accuracy(const Dag& truth, const TamTrace& trace) {
  const int d = truth.size();
  if (d == 0) return 1.0;
  const auto ld = layer_decomposition(truth);
  const auto learned = trace.layer_of(d);
  int hits = 0;
  for (int k = 0; k < d; ++k) hits += learned[static_cast<std::size_t>(k)] == ld.layer_of(k);
  return static_cast<double>(hits) / d;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const std::vector<std::size_t> ns = spec.exact ? std::vector<std::size_t>{0} : spec.ns;
  std::vector<ResultRow> rows;
  for (GraphKind g : spec.graphs) {
    for (ModelKind m : spec.models) {
      for (int d : spec.ds) {
        for (std::size_t n : ns) {
          for (int i = 0; i < spec.replications; ++i) {
            ResultRow r;
            r.graph = g;
            r.model = m;
            r.d = d;
            r.n = n;
            r.replication = i;
            r.graph_seed = graph_seed(spec, g, m, d, i);
            r.data_seed = spec.exact ? 0 : data_seed(r.graph_seed, n);
            rows.push_back(std::move(r));
          }
        }
      }
    }
  }

  auto run_one = [&spec](ResultRow& r) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const Dag truth = generate(GraphSpec{r.graph, r.d, spec.graph_param, r.graph_seed});
      const TabularBN bn = compile(truth, ModelSpec{r.model, spec.p});
      const InfoSource src =
          spec.exact ? InfoSource::exact(bn) : InfoSource::empirical(sample(bn, r.n, r.data_seed), spec.tam.estimator);
      TamConfig cfg = spec.tam;
      if (spec.exact) cfg.auto_tune = false;
      const auto res = tam_learn(src, cfg);
      r.omega = res.trace.omega;
      r.kappa = res.trace.kappa;
      r.shd = shd(truth, res.dag);
      r.layer_accuracy = layer_accuracy(truth, res.trace);
      r.true_edges = truth.edge_count();
      r.learned_edges = res.dag.edge_count();
    } catch (const std::exception& e) {
      r.status = sanitize(std::string("error: ") + e.what());
      r.shd = -1;
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  const int threads = std::max(1, spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) run_one(rows[i]);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(threads, static_cast<int>(rows.size())); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string results_header() {
  return "graph,model,d,n,replication,graph_seed,data_seed,omega,kappa,shd,layer_accuracy,true_edges,learned_edges,"
         "status,runtime_ms";
}

std::string to_csv_line(const ResultRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(r.graph), to_string(r.model), r.d, r.n,
                     r.replication, r.graph_seed, r.data_seed, format_real(r.omega), format_real(r.kappa),
                     r.shd < 0 ? std::string() : std::to_string(r.shd), format_real(r.layer_accuracy), r.true_edges,
                     r.learned_edges, r.status, format_real(r.runtime_ms));
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = results_header() + "\n";
  for (const auto& r : rows) out += to_csv_line(r) + "\n";
  return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  detail::LineReader lines(text);
  std::string_view line;
  if (!lines.next_content(line) || line != results_header()) {
    throw std::runtime_error("results csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  while (lines.next_content(line)) {
    const auto f = detail::split(line, ',');
    if (f.size() != 15) throw std::runtime_error(fmt::format("results csv line {}: expected 15 fields", lines.line_number()));
    ResultRow r;
    r.graph = parse_graph_kind(f[0]);
    r.model = parse_model_kind(f[1]);
    r.d = detail::parse_int(f[2], "d");
    r.n = static_cast<std::size_t>(detail::parse_long(f[3], "n"));
    r.replication = detail::parse_int(f[4], "replication");
    r.graph_seed = std::stoull(std::string(f[5]));
    r.data_seed = std::stoull(std::string(f[6]));
    r.omega = detail::parse_double(f[7], "omega");
    r.kappa = detail::parse_double(f[8], "kappa");
    r.shd = f[9].empty() ? -1 : detail::parse_int(f[9], "shd");
    r.layer_accuracy = detail::parse_double(f[10], "layer_accuracy");
    r.true_edges = detail::parse_int(f[11], "true_edges");
    r.learned_edges = detail::parse_int(f[12], "learned_edges");
    r.status = std::string(f[13]);
    r.runtime_ms = detail::parse_double(f[14], "runtime_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string strip_runtime(std::string_view csv) {
  std::string out;
  detail::LineReader lines(csv);
  std::string_view line;
  while (lines.next(line)) {
    const auto cut = line.rfind(',');
    out += line.substr(0, cut);
    out += '\n';
  }
  return out;
}

std::vector<CellSummary> aggregate(const std::vector<ResultRow>& rows) {
  std::vector<CellSummary> cells;
  std::vector<std::vector<double>> shds;
  std::vector<double> acc_sum;
  for (const auto& r : rows) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
      return c.graph == r.graph && c.model == r.model && c.d == r.d && c.n == r.n;
    });
    std::size_t idx = static_cast<std::size_t>(it - cells.begin());
    if (it == cells.end()) {
      cells.push_back(CellSummary{r.graph, r.model, r.d, r.n});
      shds.emplace_back();
      acc_sum.push_back(0.0);
    }
    ++cells[idx].count;
    if (r.shd < 0) {
      ++cells[idx].errors;
      continue;
    }
    shds[idx].push_back(r.shd);
    acc_sum[idx] += r.layer_accuracy;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& v = shds[i];
    if (v.empty()) continue;
    const double m = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    cells[i].mean_shd = sum / m;
    double ss = 0.0;
    for (double x : v) ss += (x - cells[i].mean_shd) * (x - cells[i].mean_shd);
    cells[i].sd_shd = v.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    cells[i].median_shd = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    cells[i].mean_layer_accuracy = acc_sum[i] / m;
  }
  return cells;
}

std::string to_csv(const std::vector<CellSummary>& cells) {
  std::string out = "graph,model,d,n,count,errors,mean_shd,median_shd,sd_shd,mean_layer_accuracy\n";
  for (const auto& c : cells) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(c.graph), to_string(c.model), c.d, c.n, c.count,
                       c.errors, format_real(c.mean_shd), format_real(c.median_shd), format_real(c.sd_shd),
                       format_real(c.mean_layer_accuracy));
  }
  return out;
}

std::string render_svg(const std::vector<CellSummary>& cells) {
  // Panels keyed by (graph, model), series by d, points sorted by n.
  std::map<std::pair<int, int>, std::map<int, std::vector<std::pair<double, double>>>> panels;
  for (const auto& c : cells) {
    if (c.count == c.errors) continue;
    panels[{static_cast<int>(c.graph), static_cast<int>(c.model)}][c.d].emplace_back(static_cast<double>(c.n), c.mean_shd);
  }
  constexpr double kW = 480, kH = 300, kLeft = 60, kRight = 110, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};
  const double total_h = kH * std::max<std::size_t>(1, panels.size());
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kW, total_h);
  int panel_index = 0;
  for (auto& [key, series] : panels) {
    const double y0 = panel_index++ * kH;
    double xmin = 1e300, xmax = -1e300, ymax = 0.0;
    for (auto& [d, pts] : series) {
      std::sort(pts.begin(), pts.end());
      for (auto [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymax = std::max(ymax, y);
      }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= 0.0) ymax = 1.0;
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return y0 + kTop + ph - y / ymax * ph; };
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"14\">{} / {}</text>\n", kLeft, y0 + 24,
                       to_string(static_cast<GraphKind>(key.first)), to_string(static_cast<ModelKind>(key.second)));
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, y0 + kTop,
                       y0 + kTop + ph);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft, y0 + kTop + ph,
                       kLeft + pw);
    for (int t = 0; t <= 4; ++t) {
      const double yv = ymax * t / 4.0, xv = xmin + (xmax - xmin) * t / 4.0;
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 6, py(yv) + 4, yv);
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.0f}</text>\n", px(xv), y0 + kTop + ph + 18,
                         xv);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">n</text>\n", kLeft + pw / 2, y0 + kH - 8);
    svg += fmt::format("<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">mean SHD</text>\n",
                       y0 + kTop + ph / 2, y0 + kTop + ph / 2);
    int s = 0;
    for (const auto& [d, pts] : series) {
      const char* color = kColors[s % 7];
      std::string path;
      for (auto [x, y] : pts) path += fmt::format("{}{:.2f},{:.2f}", path.empty() ? "" : " ", px(x), py(y));
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, path);
      for (auto [x, y] : pts) {
        svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(x), py(y), color);
      }
      svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">d = {}</text>\n", kLeft + pw + 12, y0 + kTop + 16 * s + 10,
                         color, d);
      ++s;
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace tamdag
