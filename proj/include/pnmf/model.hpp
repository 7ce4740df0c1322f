#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "pnmf/matrix.hpp"

namespace pnmf {

/// How the diagonal scaling ambiguity W H = (W D)(D^-1 H) is resolved.
enum class ScalingScheme {
  None,
  MaxWeight,     // each non-zero column of W has maximum exactly 1
  SumOfSquares,  // each non-zero column of W has unit Euclidean norm
};

std::string_view to_string(ScalingScheme scheme);
std::optional<ScalingScheme> parse_scaling(std::string_view text);

/// X (n x p) ~ W (n x k) * H (k x p), all entries non-negative.
struct FactorModel {
  DenseMatrix w;
  DenseMatrix h;
  ScalingScheme scaling = ScalingScheme::None;

  std::size_t rank() const noexcept { return w.cols(); }
  std::size_t samples() const noexcept { return w.rows(); }
  std::size_t responses() const noexcept { return h.cols(); }
};

/// Throws ArgumentError if shapes disagree or a factor has a negative or
/// non-finite entry.
void validate(const FactorModel& model);

DenseMatrix reconstruct(const FactorModel& model);

/// ||X - W H||_F.
double frobenius_error(const DenseMatrix& x, const FactorModel& model);

/// Returns (W D)(D^-1 H) with D chosen so the column invariant of `scheme`
/// holds. Zero columns of W keep D = 1. ScalingScheme::None only retags.
FactorModel rescale(const FactorModel& model, ScalingScheme scheme);

}  // namespace pnmf
