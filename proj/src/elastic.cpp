#include "pnmf/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnmf/error.hpp"
#include "pnmf/kernels.hpp"

namespace pnmf {

namespace {

std::vector<double> maxima_of(const DenseMatrix& w) {
  std::vector<double> m(w.cols(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t u = 0; u < w.cols(); ++u) m[u] = std::max(m[u], w(i, u));
  return m;
}

void squared_to_distance(std::vector<double>& v) {
  for (double& d : v) d = std::sqrt(std::max(d, 0.0));
}

}  // namespace

ElasticDistances elastic_distances(const DenseMatrix& w) {
  require_nonnegative(w, "elastic_distances");
  const std::size_t n = w.rows();
  const std::size_t k = w.cols();
  const DenseMatrix wt = w.transposed();

  ElasticDistances out{DenseMatrix(n, k), maxima_of(w)};
  std::vector<double> column(n);
  for (std::size_t u = 0; u < k; ++u) {
    kernels::active().elastic_column(wt.data(), n, k, u, out.column_maxima[u], column.data());
    squared_to_distance(column);
    out.values.set_column(u, column);
  }
  return out;
}

std::vector<double> elastic_column(const DenseMatrix& w, std::size_t u) {
  require_nonnegative(w, "elastic_column");
  if (u >= w.cols()) {
    throw ArgumentError("elastic_column: archetype " + std::to_string(u) + " out of range");
  }
  const DenseMatrix wt = w.transposed();
  double max_u = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) max_u = std::max(max_u, w(i, u));
  std::vector<double> column(w.rows());
  kernels::active().elastic_column(wt.data(), w.rows(), w.cols(), u, max_u, column.data());
  squared_to_distance(column);
  return column;
}

std::string_view to_string(ClusterRule rule) {
  return rule == ClusterRule::MinElastic ? "elastic" : "weight";
}

std::optional<ClusterRule> parse_rule(std::string_view text) {
  if (text == "elastic") return ClusterRule::MinElastic;
  if (text == "weight") return ClusterRule::ArgmaxWeight;
  return std::nullopt;
}

ClusterAssignment cluster(const DenseMatrix& w, ClusterRule rule) {
  ClusterAssignment out;
  out.rule = rule;
  out.labels.resize(w.rows());
  if (rule == ClusterRule::ArgmaxWeight) {
    require_nonnegative(w, "cluster");
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const auto r = w.row(i);
      out.labels[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return out;
  }
  const ElasticDistances d = elastic_distances(w);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const auto r = d.values.row(i);
    out.labels[i] = static_cast<std::size_t>(std::min_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

}  // namespace pnmf
