#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace pnmf {

/// Dense row-major matrix of doubles. Rows are samples, columns responses
/// (or archetypes, for score matrices).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  /// Builds from nested rows; all rows must have the same length.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Throws ArgumentError unless the matrix is non-empty and every entry is
/// finite. `what` names the matrix in the message.
void require_finite(const DenseMatrix& m, std::string_view what);
/// As require_finite, and additionally every entry >= 0.
void require_nonnegative(const DenseMatrix& m, std::string_view what);

// Products routed through the active kernel table.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);       // A * B
DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b);  // A^T * B
DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // A * B^T

double frobenius_norm(const DenseMatrix& m);

}  // namespace pnmf
