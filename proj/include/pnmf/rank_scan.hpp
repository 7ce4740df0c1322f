#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pnmf/matrix.hpp"
#include "pnmf/model.hpp"
#include "pnmf/permute.hpp"
#include "pnmf/solver.hpp"

namespace pnmf {

/// det(Z^T Z), where column u of Z is the rank-one part w_u h_u^T flattened
/// to an n*p vector and scaled to unit norm. 1 for mutually orthogonal parts,
/// 0 when two parts are collinear. Values below 1e-14 are reported as 0.
///
/// Throws DegenerateError if a rank-one part is identically zero.
double component_volume(const FactorModel& model);

struct ScanOptions {
  std::size_t rank_min = 1;
  std::size_t rank_max = 1;
  // A rank whose volume falls below drop_threshold times the previous one is
  // the first over-fitted rank; the suggestion is the rank before it.
  double drop_threshold = 0.1;
  // Fit ranks on separate threads.
  bool parallel = true;
};

struct VolumeReport {
  std::vector<std::size_t> ranks;
  std::vector<double> volumes;
  // volumes[r] / volumes[r-1] for r >= 1 (one shorter than volumes). A drop
  // from a volume of exactly 0 is reported as 1.
  std::vector<double> drop_ratios;
  // Ranks whose model had a zero rank-one part (volume recorded as 0).
  std::vector<std::size_t> degenerate_ranks;
  std::size_t suggested_rank = 0;
};

/// Picks the suggestion from per-rank volumes (ranks ascending, contiguous).
VolumeReport summarize_volumes(std::vector<std::size_t> ranks, std::vector<double> volumes,
                               double drop_threshold);

/// Fits one model per rank in [rank_min, rank_max] with the same solver
/// config (seed included) and records its volume. Uses permuted_fit when
/// `permute` is set.
VolumeReport scan(const DenseMatrix& x, const ScanOptions& options,
                  const SolverConfig& solver_config,
                  const std::optional<PermuteConfig>& permute = std::nullopt);

}  // namespace pnmf
