#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pnmf/matrix.hpp"
#include "pnmf/solver.hpp"

namespace pnmf {

struct PermuteConfig {
  std::size_t max_sweeps = 50;
  // When false the permutation is applied once, after the solver finishes.
  bool applied_per_solver_iteration = true;
};

void validate(const PermuteConfig& config);

/// Core reordering: returns `weights` permuted so that the entry with the
/// largest distance receives the smallest weight, the next largest the next
/// smallest, and so on. Equal distances are ordered by current weight, then
/// by index. Both spans must have the same length.
std::vector<double> reconcile_ranks(std::span<const double> weights,
                                    std::span<const double> distances);

/// Reorders column u of W so that weight ranks mirror elastic-distance ranks:
/// the sample farthest from archetype u receives the smallest weight on u,
/// the next farthest the next smallest, and so on. The column's values are
/// only permuted, never changed. Distance ties are ordered by current weight
/// (then by index), so a block of equidistant samples keeps its weights.
DenseMatrix permute_component(const DenseMatrix& w, std::size_t u);

struct SweepResult {
  DenseMatrix w;
  bool changed = false;
};

/// permute_component for u = 0 .. k-1, distances recomputed before each.
SweepResult permutation_sweep(const DenseMatrix& w);

struct StabilizeResult {
  DenseMatrix w;
  std::size_t sweeps_run = 0;
  bool stabilized = false;  // a sweep left W unchanged
};

StabilizeResult stabilize(const DenseMatrix& w, const PermuteConfig& config);

struct PermutedFitReport : FitReport {
  // Sweeps used by each stabilize call, in call order.
  std::vector<std::size_t> sweeps_per_call;
  // Calls that hit max_sweeps without stabilizing (cycling, mostly for k > 2).
  std::size_t unstabilized_calls = 0;
};

/// Solver fit with stabilize applied to W after every outer iteration. The
/// model is brought to MaxWeight scaling (an exact rescaling of W and H)
/// before each stabilize call, so distances are measured on weights in [0, 1].
PermutedFitReport permuted_fit(const DenseMatrix& x, std::size_t rank,
                               const SolverConfig& solver_config,
                               const PermuteConfig& permute_config);

}  // namespace pnmf
