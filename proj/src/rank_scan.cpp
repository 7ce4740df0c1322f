#include "pnmf/rank_scan.hpp"

#include <Eigen/LU>
#include <cmath>
#include <future>
#include <string>

#include "pnmf/error.hpp"

namespace pnmf {

double component_volume(const FactorModel& model) {
  validate(model);
  const std::size_t k = model.rank();
  if (k == 0) throw ArgumentError("component_volume: rank 0 model");

  // <w_u h_u^T, w_v h_v^T>_F = (w_u . w_v)(h_u . h_v), so the Gram matrix of
  // the unit rank-one parts is the entrywise product of the two cosine
  // matrices and n*p vectors never need to be formed.
  const DenseMatrix wt = model.w.transposed();
  const DenseMatrix ww = multiply_a_bt(wt, wt);
  const DenseMatrix hh = multiply_a_bt(model.h, model.h);
  for (std::size_t u = 0; u < k; ++u) {
    if (ww(u, u) == 0.0 || hh(u, u) == 0.0) {
      throw DegenerateError("component_volume: rank-one part " + std::to_string(u) +
                            " is identically zero");
    }
  }

  Eigen::MatrixXd gram(k, k);
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = 0; v < k; ++v) {
      const auto eu = static_cast<Eigen::Index>(u);
      const auto ev = static_cast<Eigen::Index>(v);
      if (u == v) {
        gram(eu, ev) = 1.0;
        continue;
      }
      const double cw = ww(u, v) / std::sqrt(ww(u, u) * ww(v, v));
      const double ch = hh(u, v) / std::sqrt(hh(u, u) * hh(v, v));
      gram(eu, ev) = cw * ch;
    }
  }
  const double det = k == 1 ? 1.0 : gram.fullPivLu().determinant();
  if (!std::isfinite(det)) throw DegenerateError("component_volume: non-finite determinant");
  return det < 1e-14 ? 0.0 : det;
}

VolumeReport summarize_volumes(std::vector<std::size_t> ranks, std::vector<double> volumes,
                               double drop_threshold) {
  if (ranks.empty() || ranks.size() != volumes.size()) {
    throw ArgumentError("summarize_volumes: ranks and volumes must be non-empty and aligned");
  }
  VolumeReport report;
  report.ranks = std::move(ranks);
  report.volumes = std::move(volumes);
  report.suggested_rank = report.ranks.back();
  bool flagged = false;
  for (std::size_t r = 1; r < report.volumes.size(); ++r) {
    const double prev = report.volumes[r - 1];
    const double ratio = prev > 0.0 ? report.volumes[r] / prev : 1.0;
    report.drop_ratios.push_back(ratio);
    if (!flagged && ratio < drop_threshold) {
      flagged = true;
      report.suggested_rank = report.ranks[r - 1];
    }
  }
  return report;
}

VolumeReport scan(const DenseMatrix& x, const ScanOptions& options,
                  const SolverConfig& solver_config, const std::optional<PermuteConfig>& permute) {
  const std::size_t limit = std::min(x.rows(), x.cols());
  if (options.rank_min < 1 || options.rank_min > options.rank_max || options.rank_max > limit) {
    throw ArgumentError("rank range [" + std::to_string(options.rank_min) + ", " +
                        std::to_string(options.rank_max) + "] must lie within [1, " +
                        std::to_string(limit) + "]");
  }
  if (!(options.drop_threshold > 0.0)) throw ArgumentError("drop_threshold must be > 0");
  validate(solver_config);
  if (permute) validate(*permute);
  require_nonnegative(x, "data");

  struct Outcome {
    double volume = 0.0;
    bool degenerate = false;
  };
  auto fit_rank = [&](std::size_t rank) {
    const FactorModel model = permute ? permuted_fit(x, rank, solver_config, *permute).model
                                      : fit(x, rank, solver_config).model;
    try {
      return Outcome{component_volume(model), false};
    } catch (const DegenerateError&) {
      return Outcome{0.0, true};
    }
  };

  std::vector<std::size_t> ranks;
  for (std::size_t r = options.rank_min; r <= options.rank_max; ++r) ranks.push_back(r);

  std::vector<Outcome> outcomes;
  if (options.parallel && ranks.size() > 1) {
    std::vector<std::future<Outcome>> pending;
    for (std::size_t r : ranks) pending.push_back(std::async(std::launch::async, fit_rank, r));
    for (auto& f : pending) outcomes.push_back(f.get());
  } else {
    for (std::size_t r : ranks) outcomes.push_back(fit_rank(r));
  }

  std::vector<double> volumes;
  std::vector<std::size_t> degenerate;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    volumes.push_back(outcomes[i].volume);
    if (outcomes[i].degenerate) degenerate.push_back(ranks[i]);
  }
  VolumeReport report = summarize_volumes(ranks, std::move(volumes), options.drop_threshold);
  report.degenerate_ranks = std::move(degenerate);
  return report;
}

}  // namespace pnmf
