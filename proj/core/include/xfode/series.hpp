#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace xfode {

// Row-major table of samples: one row per time step, one column per channel.
class Series {
 public:
  Series() = default;
  Series(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void push_row(std::span<const double> values) {
    if (rows_ == 0 && data_.empty()) cols_ = values.size();
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  // Rows [first, first + count).
  Series slice(std::size_t first, std::size_t count) const {
    Series out(count, cols_);
    std::copy(data_.begin() + first * cols_, data_.begin() + (first + count) * cols_, out.data_.begin());
    return out;
  }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  const std::vector<double>& data() const { return data_; }
  bool operator==(const Series&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace xfode
