#include "pnmf/matrix.hpp"

#include <cmath>
#include <string>

#include "pnmf/error.hpp"
#include "pnmf/kernels.hpp"

namespace pnmf {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ArgumentError("DenseMatrix: " + std::to_string(values_.size()) +
                        " values for a " + std::to_string(rows_) + "x" +
                        std::to_string(cols_) + " matrix");
  }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ArgumentError("DenseMatrix::from_rows: ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return {rows.size(), cols, std::move(values)};
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void require_finite(const DenseMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ArgumentError(std::string(what) + ": matrix is empty");
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        throw ArgumentError(std::string(what) + ": non-finite entry at (" + std::to_string(i) +
                            ", " + std::to_string(j) + ")");
      }
    }
  }
}

void require_nonnegative(const DenseMatrix& m, std::string_view what) {
  require_finite(m, what);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0) {
        throw ArgumentError(std::string(what) + ": negative entry at (" + std::to_string(i) +
                            ", " + std::to_string(j) + ")");
      }
    }
  }
}

namespace {
void check_dims(bool ok, const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  if (!ok) {
    throw ArgumentError(std::string(op) + ": incompatible shapes " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()) + " and " + std::to_string(b.rows()) +
                        "x" + std::to_string(b.cols()));
  }
}
}  // namespace

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  check_dims(a.cols() == b.rows(), "multiply", a, b);
  const auto& k = kernels::active();
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.row(i).data();
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double s = a(i, l);
      if (s != 0.0) k.axpy(s, b.row(l).data(), out, b.cols());
    }
  }
  return c;
}

DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  check_dims(a.rows() == b.rows(), "multiply_at_b", a, b);
  const auto& k = kernels::active();
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const double* brow = b.row(l).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double s = a(l, i);
      if (s != 0.0) k.axpy(s, brow, c.row(i).data(), b.cols());
    }
  }
  return c;
}

DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
  check_dims(a.cols() == b.cols(), "multiply_a_bt", a, b);
  const auto& k = kernels::active();
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = k.dot(a.row(i).data(), b.row(j).data(), a.cols());
  return c;
}

double frobenius_norm(const DenseMatrix& m) {
  const auto v = m.values();
  return std::sqrt(kernels::dot(v, v));
}

}  // namespace pnmf
