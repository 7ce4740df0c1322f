#include "pnmf/permute.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pnmf/elastic.hpp"
#include "pnmf/error.hpp"

namespace pnmf {

void validate(const PermuteConfig& config) {
  if (config.max_sweeps < 1) throw ArgumentError("max_sweeps must be >= 1");
}

std::vector<double> reconcile_ranks(std::span<const double> weights,
                                    std::span<const double> distances) {
  if (weights.size() != distances.size()) {
    throw ArgumentError("reconcile_ranks: " + std::to_string(weights.size()) + " weights but " +
                        std::to_string(distances.size()) + " distances");
  }
  // Sample indices by distance, farthest first.
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (distances[a] != distances[b]) return distances[a] > distances[b];
    return weights[a] < weights[b];
  });

  std::vector<double> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> out(weights.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = sorted[r];
  return out;
}

DenseMatrix permute_component(const DenseMatrix& w, std::size_t u) {
  if (u >= w.cols()) {
    throw ArgumentError("permute_component: archetype " + std::to_string(u) +
                        " out of range for rank " + std::to_string(w.cols()));
  }
  const std::vector<double> distance = elastic_column(w, u);
  DenseMatrix out = w;
  out.set_column(u, reconcile_ranks(w.column(u), distance));
  return out;
}

SweepResult permutation_sweep(const DenseMatrix& w) {
  require_nonnegative(w, "permutation_sweep");
  SweepResult result{w, false};
  for (std::size_t u = 0; u < w.cols(); ++u) {
    DenseMatrix next = permute_component(result.w, u);
    if (!result.changed && next != result.w) result.changed = true;
    result.w = std::move(next);
  }
  return result;
}

StabilizeResult stabilize(const DenseMatrix& w, const PermuteConfig& config) {
  validate(config);
  StabilizeResult result{w, 0, false};
  while (result.sweeps_run < config.max_sweeps) {
    SweepResult sweep = permutation_sweep(result.w);
    ++result.sweeps_run;
    result.w = std::move(sweep.w);
    if (!sweep.changed) {
      result.stabilized = true;
      break;
    }
  }
  return result;
}

PermutedFitReport permuted_fit(const DenseMatrix& x, std::size_t rank,
                               const SolverConfig& solver_config,
                               const PermuteConfig& permute_config) {
  validate(permute_config);
  PermutedFitReport report;
  auto hook = [&](const FactorModel& model) {
    FactorModel scaled = rescale(model, ScalingScheme::MaxWeight);
    StabilizeResult s = stabilize(scaled.w, permute_config);
    report.sweeps_per_call.push_back(s.sweeps_run);
    if (!s.stabilized) ++report.unstabilized_calls;
    scaled.w = std::move(s.w);
    return scaled;
  };

  FitReport base = permute_config.applied_per_solver_iteration
                       ? fit(x, rank, solver_config, hook)
                       : fit(x, rank, solver_config);
  if (!permute_config.applied_per_solver_iteration) {
    base.model = hook(base.model);
  }
  static_cast<FitReport&>(report) = std::move(base);
  report.model = rescale(report.model, ScalingScheme::MaxWeight);
  return report;
}

}  // namespace pnmf
