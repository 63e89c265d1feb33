#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tamdag {

/// n x d matrix of small non-negative integers, stored column-major, with
/// declared per-column support sizes.
class Dataset {
 public:
  Dataset() = default;
  /// `values` is column-major: values[c * n + i]. Throws on out-of-support values.
  Dataset(std::size_t n, std::vector<int> supports, std::vector<std::int32_t> values);

  std::size_t rows() const { return n_; }
  int cols() const { return static_cast<int>(supports_.size()); }
  int support(int c) const { return supports_.at(static_cast<std::size_t>(c)); }
  const std::vector<int>& supports() const { return supports_; }

  std::span<const std::int32_t> column(int c) const {
    return {values_.data() + static_cast<std::size_t>(c) * n_, n_};
  }
  std::int32_t at(std::size_t row, int c) const { return values_[static_cast<std::size_t>(c) * n_ + row]; }

  /// Column subset in the given order.
  Dataset select_columns(std::span<const int> cols) const;
  Dataset select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<int> supports_;
  std::vector<std::int32_t> values_;
};

// CSV: optional "#supports K0,K1,..." line, optional "x0,x1,..." header, then
// one comma-separated row of integers per sample. Without a supports line the
// support of each column is inferred as max(value)+1 (at least 2).
std::string to_csv(const Dataset& ds);
Dataset parse_csv(std::string_view text);
Dataset read_csv_file(const std::string& path);
void write_csv_file(const Dataset& ds, const std::string& path);

}  // namespace tamdag
