#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tamdag/synth.hpp"
#include "tamdag/tam.hpp"

namespace tamdag {

struct ExperimentSpec {
  std::vector<GraphKind> graphs{GraphKind::Tree};
  std::vector<ModelKind> models{ModelKind::MOD};
  std::vector<int> ds{10};
  std::vector<std::size_t> ns{1000, 2000, 3000, 4000};
  int replications = 30;
  std::uint64_t seed = 1;
  double p = 0.2;
  /// GraphSpec::param; negative selects the generator default.
  double graph_param = -1.0;
  TamConfig tam;
  /// Learn from the exact joint instead of samples; rows then carry n = 0.
  bool exact = false;
  /// 0 = hardware concurrency.
  int threads = 0;
};

/// Throws std::invalid_argument on an unknown key or malformed value.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);
/// Flat "key=value" lines; '#' starts a comment line. Lists are comma separated.
ExperimentSpec parse_experiment_config(std::string_view text);
std::string to_config(const ExperimentSpec& spec);
/// Throws std::invalid_argument when a list is empty or a count is out of range.
void validate(const ExperimentSpec& spec);

struct ResultRow {
  GraphKind graph = GraphKind::Tree;
  ModelKind model = ModelKind::MOD;
  int d = 0;
  std::size_t n = 0;
  int replication = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t data_seed = 0;
  double omega = 0.0;
  double kappa = 0.0;
  int shd = -1;
  double layer_accuracy = 0.0;
  int true_edges = 0;
  int learned_edges = 0;
  /// "ok" or "error: <message>".
  std::string status = "ok";
  double runtime_ms = 0.0;
};

/// Seeds of replication i in a (graph, model, d) cell; the data seed then
/// depends on n, so all sample sizes of a replication share one graph.
std::uint64_t graph_seed(const ExperimentSpec& spec, GraphKind g, ModelKind m, int d, int replication);
std::uint64_t data_seed(std::uint64_t graph_seed, std::size_t n);

/// Rows in canonical order: graph, model, d, n, replication (spec list order).
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Fraction of nodes whose learned layer index equals the true one.
double layer_accuracy(const Dag& truth, const TamTrace& trace);

std::string results_header();
std::string to_csv_line(const ResultRow& r);
std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);
/// Drops the runtime column, for byte comparisons between runs.
std::string strip_runtime(std::string_view csv);

struct CellSummary {
  GraphKind graph = GraphKind::Tree;
  ModelKind model = ModelKind::MOD;
  int d = 0;
  std::size_t n = 0;
  int count = 0;
  int errors = 0;
  double mean_shd = 0.0;
  double median_shd = 0.0;
  /// Sample standard deviation (0 for a single row).
  double sd_shd = 0.0;
  double mean_layer_accuracy = 0.0;
};

/// One summary per distinct cell, in order of first appearance. Error rows are counted but not averaged.
std::vector<CellSummary> aggregate(const std::vector<ResultRow>& rows);
std::string to_csv(const std::vector<CellSummary>& cells);
/// Mean SHD against n, one panel per (graph, model) and one series per d.
std::string render_svg(const std::vector<CellSummary>& cells);

}  // namespace tamdag
