#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pnmf/matrix.hpp"

namespace pnmf {

/// Distance of each sample to each archetype corner in weight space. The
/// corner of archetype u sits at M_u (the largest weight on u over all
/// samples) on axis u and at 0 on every other axis:
///
///   d_iu^2 = (w_iu - M_u)^2 + sum_{v != u} w_iv^2
struct ElasticDistances {
  DenseMatrix values;                // n x k
  std::vector<double> column_maxima;  // M_u
};

ElasticDistances elastic_distances(const DenseMatrix& w);

/// Column u of elastic_distances(w) without computing the others.
std::vector<double> elastic_column(const DenseMatrix& w, std::size_t u);

enum class ClusterRule { ArgmaxWeight, MinElastic };

std::string_view to_string(ClusterRule rule);
std::optional<ClusterRule> parse_rule(std::string_view text);

struct ClusterAssignment {
  std::vector<std::size_t> labels;
  ClusterRule rule = ClusterRule::ArgmaxWeight;
};

/// Ties resolve to the lowest archetype index.
ClusterAssignment cluster(const DenseMatrix& w, ClusterRule rule);

}  // namespace pnmf
