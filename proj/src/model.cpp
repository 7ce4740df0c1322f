#include "pnmf/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pnmf/error.hpp"
#include "pnmf/kernels.hpp"

namespace pnmf {

std::string_view to_string(ScalingScheme scheme) {
  switch (scheme) {
    case ScalingScheme::MaxWeight:
      return "max";
    case ScalingScheme::SumOfSquares:
      return "l2";
    case ScalingScheme::None:
      break;
  }
  return "none";
}

std::optional<ScalingScheme> parse_scaling(std::string_view text) {
  if (text == "max") return ScalingScheme::MaxWeight;
  if (text == "l2") return ScalingScheme::SumOfSquares;
  if (text == "none") return ScalingScheme::None;
  return std::nullopt;
}

void validate(const FactorModel& model) {
  if (model.w.cols() != model.h.rows()) {
    throw ArgumentError("FactorModel: W has " + std::to_string(model.w.cols()) +
                        " columns but H has " + std::to_string(model.h.rows()) + " rows");
  }
  require_nonnegative(model.w, "W");
  require_nonnegative(model.h, "H");
}

DenseMatrix reconstruct(const FactorModel& model) {
  return multiply(model.w, model.h);
}

double frobenius_error(const DenseMatrix& x, const FactorModel& model) {
  if (x.rows() != model.samples() || x.cols() != model.responses() ||
      model.w.cols() != model.h.rows()) {
    throw ArgumentError("frobenius_error: data is " + std::to_string(x.rows()) + "x" +
                        std::to_string(x.cols()) + ", model is " +
                        std::to_string(model.samples()) + "x" +
                        std::to_string(model.responses()));
  }
  const auto& k = kernels::active();
  std::vector<double> approx(x.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::fill(approx.begin(), approx.end(), 0.0);
    for (std::size_t u = 0; u < model.rank(); ++u) {
      const double s = model.w(i, u);
      if (s != 0.0) k.axpy(s, model.h.row(u).data(), approx.data(), approx.size());
    }
    total += k.squared_distance(x.row(i).data(), approx.data(), approx.size());
  }
  return std::sqrt(total);
}

FactorModel rescale(const FactorModel& model, ScalingScheme scheme) {
  FactorModel out = model;
  out.scaling = scheme;
  if (scheme == ScalingScheme::None) return out;

  for (std::size_t u = 0; u < model.rank(); ++u) {
    double d = 0.0;
    if (scheme == ScalingScheme::MaxWeight) {
      for (std::size_t i = 0; i < model.samples(); ++i) d = std::max(d, model.w(i, u));
    } else {
      double ss = 0.0;
      for (std::size_t i = 0; i < model.samples(); ++i) ss += model.w(i, u) * model.w(i, u);
      d = std::sqrt(ss);
    }
    if (d == 0.0 || d == 1.0) continue;
    for (std::size_t i = 0; i < model.samples(); ++i) out.w(i, u) = model.w(i, u) / d;
    for (std::size_t j = 0; j < model.responses(); ++j) out.h(u, j) = model.h(u, j) * d;
  }
  return out;
}

}  // namespace pnmf
