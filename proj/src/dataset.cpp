#include "tamdag/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "io_util.hpp"

namespace tamdag {

Dataset::Dataset(std::size_t n, std::vector<int> supports, std::vector<std::int32_t> values)
    : n_(n), supports_(std::move(supports)), values_(std::move(values)) {
  if (n_ == 0) throw std::invalid_argument("dataset must have at least one row");
  if (supports_.empty()) throw std::invalid_argument("dataset must have at least one column");
  if (values_.size() != n_ * supports_.size()) throw std::invalid_argument("dataset value count mismatch");
  for (int c = 0; c < cols(); ++c) {
    const int k = supports_[static_cast<std::size_t>(c)];
    if (k < 1) throw std::invalid_argument(fmt::format("column {} has invalid support size {}", c, k));
    for (std::int32_t v : column(c)) {
      if (v < 0 || v >= k) {
        throw std::invalid_argument(fmt::format("column {} value {} outside declared support [0,{})", c, v, k));
      }
    }
  }
}

Dataset Dataset::select_columns(std::span<const int> cols_wanted) const {
  std::vector<int> sup;
  std::vector<std::int32_t> vals;
  vals.reserve(cols_wanted.size() * n_);
  for (int c : cols_wanted) {
    sup.push_back(support(c));
    const auto col = column(c);
    vals.insert(vals.end(), col.begin(), col.end());
  }
  return Dataset(n_, std::move(sup), std::move(vals));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows_wanted) const {
  std::vector<std::int32_t> vals;
  vals.reserve(rows_wanted.size() * supports_.size());
  for (int c = 0; c < cols(); ++c) {
    for (std::size_t r : rows_wanted) vals.push_back(at(r, c));
  }
  return Dataset(rows_wanted.size(), supports_, std::move(vals));
}

std::string to_csv(const Dataset& ds) {
  std::string out = "#supports ";
  for (int c = 0; c < ds.cols(); ++c) out += (c ? "," : "") + std::to_string(ds.support(c));
  out += '\n';
  for (int c = 0; c < ds.cols(); ++c) out += (c ? ",x" : "x") + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (int c = 0; c < ds.cols(); ++c) {
      if (c) out += ',';
      out += std::to_string(ds.at(i, c));
    }
    out += '\n';
  }
  return out;
}

Dataset parse_csv(std::string_view text) {
  detail::LineReader lines(text);
  std::string_view line;
  std::vector<int> supports;
  std::vector<std::vector<std::int32_t>> cols;
  bool header_allowed = true;
  while (lines.next(line)) {
    if (line.empty()) continue;
    if (line.starts_with("#supports")) {
      for (auto f : detail::split(line.substr(9), ',')) supports.push_back(detail::parse_int(f, "support size"));
      continue;
    }
    if (line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    const bool numeric = !fields.empty() && !fields[0].empty() &&
                         (std::isdigit(static_cast<unsigned char>(fields[0][0])) || fields[0][0] == '-');
    if (header_allowed && !numeric) {
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    if (cols.empty()) cols.resize(fields.size());
    if (fields.size() != cols.size()) {
      throw std::runtime_error(fmt::format("csv line {}: expected {} fields, got {}", lines.line_number(),
                                           cols.size(), fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      cols[c].push_back(static_cast<std::int32_t>(detail::parse_long(fields[c], "csv value")));
    }
  }
  if (cols.empty() || cols[0].empty()) throw std::runtime_error("csv: no data rows");
  if (supports.empty()) {
    for (const auto& col : cols) supports.push_back(std::max(2, *std::max_element(col.begin(), col.end()) + 1));
  }
  if (supports.size() != cols.size()) {
    throw std::runtime_error(fmt::format("csv: {} support sizes declared for {} columns", supports.size(), cols.size()));
  }
  const std::size_t n = cols[0].size();
  std::vector<std::int32_t> values;
  values.reserve(n * cols.size());
  for (const auto& col : cols) values.insert(values.end(), col.begin(), col.end());
  return Dataset(n, std::move(supports), std::move(values));
}

Dataset read_csv_file(const std::string& path) { return parse_csv(detail::read_file(path)); }

void write_csv_file(const Dataset& ds, const std::string& path) { detail::write_file(path, to_csv(ds)); }

}  // namespace tamdag
