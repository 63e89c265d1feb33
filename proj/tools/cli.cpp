#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tamdag/bn.hpp"
#include "tamdag/conditions.hpp"
#include "tamdag/dataset.hpp"
#include "tamdag/experiment.hpp"
#include "tamdag/graph.hpp"
#include "tamdag/synth.hpp"
#include "tamdag/tam.hpp"

namespace tamdag::cli {

namespace {

// Thrown for a failed --assert-* check.
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + path + "'");
}

TabularBN load_bn(const std::string& bn_path, const std::string& fixture_name) {
  if (!bn_path.empty() && !fixture_name.empty()) throw CLI::ValidationError("use either --bn or --fixture, not both");
  if (!fixture_name.empty()) return fixture(fixture_name);
  if (bn_path.empty()) throw CLI::ValidationError("a network is required (--bn or --fixture)");
  return parse_bn(slurp(bn_path));
}

// The truth may be an edge list or a full network file.
Dag load_truth(const std::string& path) {
  const std::string text = slurp(path);
  if (text.rfind("tabular-bn", 0) == 0) return parse_bn(text).dag();
  return parse_edge_list(text);
}

// "key=value" tokens are shorthand: options for most commands, --set for sweep.
// A token right after an option that takes a value is left alone.
std::vector<std::string> expand_settings(const std::vector<std::string>& args) {
  if (args.size() < 2) return args;
  const std::string& command = args[1];
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  for (std::size_t i = 2; i < args.size(); ++i) {
    const std::string& a = args[i];
    const std::string& prev = args[i - 1];
    const bool after_option = i > 2 && prev.rfind("-", 0) == 0 && prev.find('=') == std::string::npos &&
                              prev != "--auto-tune" && prev != "--assert-zero-shd";
    const auto eq = a.find('=');
    if (after_option || a.empty() || a[0] == '-' || eq == std::string::npos) {
      out.push_back(a);
    } else if (command == "sweep") {
      out.emplace_back("--set");
      out.push_back(a);
    } else {
      out.push_back("--" + a.substr(0, eq));
      out.push_back(a.substr(eq + 1));
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layer-wise DAG structure learning for discrete data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tamdag 1.0");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Generate a random DAG as an edge list");
  std::string gen_kind = "tree", gen_out;
  int gen_d = 10;
  std::uint64_t gen_seed = 0;
  double gen_param = -1.0;
  gen->add_option("--kind", gen_kind, "tree, er or sf")->capture_default_str();
  gen->add_option("--d", gen_d, "Node count")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_option("--param", gen_param, "ER expected edges (default d) or SF parents per node (default 2)");
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // compile-model
  auto* comp = app.add_subcommand("compile-model", "Compile a MOD/ADD model or a named fixture to a network file");
  std::string comp_graph, comp_model = "mod", comp_fixture, comp_out;
  double comp_p = 0.2;
  comp->add_option("--graph", comp_graph, "Edge-list file");
  comp->add_option("--model", comp_model, "mod or add")->capture_default_str();
  comp->add_option("--p", comp_p, "Bernoulli noise parameter")->capture_default_str();
  comp->add_option("--fixture", comp_fixture, "Named fixture instead of --graph");
  comp->add_option("-o,--out", comp_out, "Output file (default stdout)");

  // sample
  auto* samp = app.add_subcommand("sample", "Draw an i.i.d. sample from a network");
  std::string samp_bn, samp_fixture, samp_out;
  std::size_t samp_n = 1000;
  std::uint64_t samp_seed = 0;
  samp->add_option("--bn", samp_bn, "Network file");
  samp->add_option("--fixture", samp_fixture, "Named fixture");
  samp->add_option("--n", samp_n, "Rows")->capture_default_str();
  samp->add_option("--seed", samp_seed, "Seed")->capture_default_str();
  samp->add_option("-o,--out", samp_out, "Output CSV (default stdout)");

  // learn
  auto* learn = app.add_subcommand("learn", "Learn a DAG from data (or from an exact network)");
  std::string learn_data, learn_bn, learn_fixture, learn_truth, learn_trace, learn_out;
  std::string learn_estimator = "miller-madow", learn_variant = "simple";
  TamConfig cfg;
  learn->add_option("--data", learn_data, "Dataset CSV");
  learn->add_option("--bn", learn_bn, "Network file; learns from its exact joint");
  learn->add_option("--fixture", learn_fixture, "Named fixture; learns from its exact joint");
  learn->add_option("--truth", learn_truth, "True graph (edge list or network file); prints the SHD");
  learn->add_option("--omega", cfg.omega, "Masking threshold")->capture_default_str();
  learn->add_option("--kappa", cfg.kappa, "PPS threshold")->capture_default_str();
  learn->add_option("--estimator", learn_estimator, "plugin or miller-madow")->capture_default_str();
  learn->add_option("--variant", learn_variant, "simple, general or nopps")->capture_default_str();
  learn->add_flag("--auto-tune", cfg.auto_tune, "Choose omega = kappa from d and n");
  learn->add_option("--tune-constant", cfg.tune_constant, "Constant for --auto-tune")->capture_default_str();
  learn->add_option("--trace", learn_trace, "Write the learner trace to this file");
  learn->add_option("-o,--out", learn_out, "Edge-list output (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "Check the identifiability conditions on a network");
  std::string ver_bn, ver_fixture, ver_out;
  ver->add_option("--bn", ver_bn, "Network file");
  ver->add_option("--fixture", ver_fixture, "Named fixture");
  ver->add_option("-o,--out", ver_out, "Report output (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a simulation sweep and write the results CSV");
  std::string sweep_config, sweep_out;
  std::vector<std::string> sweep_sets;
  int sweep_threads = -1;
  bool sweep_assert_zero = false;
  sweep->add_option("--config", sweep_config, "key=value config file");
  sweep->add_option("--set", sweep_sets, "Override one setting (key=value); repeatable");
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  sweep->add_flag("--assert-zero-shd", sweep_assert_zero, "Exit with status 3 unless every row has SHD 0");
  sweep->add_option("-o,--out", sweep_out, "Results CSV (default stdout)");

  // report
  auto* rep = app.add_subcommand("report", "Summarise a results CSV per cell");
  std::string rep_results, rep_out, rep_svg;
  rep->add_option("--results", rep_results, "Results CSV")->required();
  rep->add_option("-o,--out", rep_out, "Summary CSV (default stdout)");
  rep->add_option("--svg", rep_svg, "Write an SHD-vs-n chart");

  const auto args = expand_settings(raw_args);
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string("tamdag 1.0\n") : app.help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen) {
      GraphSpec spec{parse_graph_kind(gen_kind), gen_d, gen_param, gen_seed};
      emit(gen_out, to_edge_list(generate(spec)), out);
    } else if (*comp) {
      TabularBN bn;
      if (!comp_fixture.empty()) {
        if (!comp_graph.empty()) throw CLI::ValidationError("use either --graph or --fixture, not both");
        bn = fixture(comp_fixture);
      } else {
        if (comp_graph.empty()) throw CLI::ValidationError("--graph or --fixture is required");
        bn = compile(parse_edge_list(slurp(comp_graph)), ModelSpec{parse_model_kind(comp_model), comp_p});
      }
      emit(comp_out, to_text(bn), out);
    } else if (*samp) {
      emit(samp_out, to_csv(sample(load_bn(samp_bn, samp_fixture), samp_n, samp_seed)), out);
    } else if (*learn) {
      cfg.estimator = parse_estimator_kind(learn_estimator);
      cfg.variant = parse_tam_variant(learn_variant);
      const int sources = !learn_data.empty() + !learn_bn.empty() + !learn_fixture.empty();
      if (sources != 1) throw CLI::ValidationError("give exactly one of --data, --bn, --fixture");
      const InfoSource src = learn_data.empty() ? InfoSource::exact(load_bn(learn_bn, learn_fixture))
                                                : InfoSource::empirical(parse_csv(slurp(learn_data)), cfg.estimator);
      const auto res = tam_learn(src, cfg);
      emit(learn_out, to_edge_list(res.dag), out);
      if (!learn_trace.empty()) emit(learn_trace, to_text(res.trace), out);
      if (!learn_truth.empty()) out << "shd: " << shd(load_truth(learn_truth), res.dag) << "\n";
    } else if (*ver) {
      emit(ver_out, to_text(verify(load_bn(ver_bn, ver_fixture))), out);
    } else if (*sweep) {
      ExperimentSpec spec = sweep_config.empty() ? ExperimentSpec{} : parse_experiment_config(slurp(sweep_config));
      for (const auto& s : sweep_sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--set expects key=value, got '" + s + "'");
        apply_setting(spec, s.substr(0, eq), s.substr(eq + 1));
      }
      if (sweep_threads >= 0) spec.threads = sweep_threads;
      validate(spec);
      const auto rows = run_experiment(spec);
      emit(sweep_out, to_csv(rows), out);
      for (const auto& r : rows) {
        if (r.shd < 0) err << fmt::format("warning: {}/{} d={} n={} rep={}: {}\n", to_string(r.graph), to_string(r.model), r.d, r.n, r.replication, r.status);
      }
      if (sweep_assert_zero) {
        for (const auto& r : rows) {
          if (r.shd != 0) {
            throw AssertionFailure(fmt::format("{}/{} d={} n={} rep={} has shd {}", to_string(r.graph),
                                               to_string(r.model), r.d, r.n, r.replication, r.shd));
          }
        }
      }
    } else if (*rep) {
      const auto cells = aggregate(parse_results_csv(slurp(rep_results)));
      emit(rep_out, to_csv(cells), out);
      if (!rep_svg.empty()) emit(rep_svg, render_svg(cells), out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AssertionFailure& e) {
    err << "assertion failed: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace tamdag::cli
