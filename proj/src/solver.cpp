#include "pnmf/solver.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pnmf/error.hpp"
#include "pnmf/kernels.hpp"

namespace pnmf {

std::string_view to_string(InitMethod m) {
  return m == InitMethod::Nndsvd ? "nndsvd" : "random";
}

std::string_view to_string(Algorithm a) {
  return a == Algorithm::ProjectedGradientALS ? "pgals" : "mu";
}

std::optional<InitMethod> parse_init(std::string_view text) {
  if (text == "random") return InitMethod::RandomUniform;
  if (text == "nndsvd") return InitMethod::Nndsvd;
  return std::nullopt;
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "mu") return Algorithm::MultiplicativeUpdates;
  if (text == "pgals") return Algorithm::ProjectedGradientALS;
  return std::nullopt;
}

void validate(const SolverConfig& config) {
  if (config.max_outer_iterations < 1) throw ArgumentError("max_outer_iterations must be >= 1");
  if (!(config.tolerance > 0.0)) throw ArgumentError("tolerance must be > 0");
  if (config.inner_iterations < 1) throw ArgumentError("inner_iterations must be >= 1");
}

namespace {

void check_problem(const DenseMatrix& x, std::size_t rank) {
  require_nonnegative(x, "data");
  const std::size_t limit = std::min(x.rows(), x.cols());
  if (rank < 1 || rank > limit) {
    throw ArgumentError("rank " + std::to_string(rank) + " outside [1, " +
                        std::to_string(limit) + "]");
  }
}

double mean_of(const DenseMatrix& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return s / static_cast<double>(x.size());
}

// Uniform on (0, 1] from the top 53 bits.
double unit_open_closed(std::mt19937_64& rng) {
  return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

FactorModel random_init(const DenseMatrix& x, std::size_t rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double mean = mean_of(x);
  const double scale = mean > 0.0 ? std::sqrt(mean / static_cast<double>(rank)) : 1.0;
  FactorModel m{DenseMatrix(x.rows(), rank), DenseMatrix(rank, x.cols()), ScalingScheme::None};
  for (double& v : m.w.values()) v = scale * unit_open_closed(rng);
  for (double& v : m.h.values()) v = scale * unit_open_closed(rng);
  return m;
}

FactorModel nndsvd_init(const DenseMatrix& x, std::size_t rank) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      xm(x.data(), static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(x.cols()));
  Eigen::BDCSVD<MatrixXd> svd(MatrixXd(xm), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const MatrixXd& u = svd.matrixU();
  const MatrixXd& v = svd.matrixV();
  const VectorXd& s = svd.singularValues();

  FactorModel m{DenseMatrix(x.rows(), rank), DenseMatrix(rank, x.cols()), ScalingScheme::None};
  for (std::size_t j = 0; j < rank; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    VectorXd a = u.col(jj);
    VectorXd b = v.col(jj);
    double sigma = 1.0;
    if (j > 0) {
      const VectorXd ap = a.cwiseMax(0.0), an = (-a).cwiseMax(0.0);
      const VectorXd bp = b.cwiseMax(0.0), bn = (-b).cwiseMax(0.0);
      const double mp = ap.norm() * bp.norm();
      const double mn = an.norm() * bn.norm();
      if (mp >= mn && mp > 0.0) {
        a = ap / ap.norm();
        b = bp / bp.norm();
        sigma = mp;
      } else if (mn > 0.0) {
        a = an / an.norm();
        b = bn / bn.norm();
        sigma = mn;
      } else {
        a.setZero();
        b.setZero();
      }
    } else {
      a = a.cwiseAbs();
      b = b.cwiseAbs();
    }
    const double lambda = std::sqrt(s(jj) * sigma);
    for (std::size_t i = 0; i < x.rows(); ++i) m.w(i, j) = lambda * a(static_cast<Eigen::Index>(i));
    for (std::size_t c = 0; c < x.cols(); ++c) m.h(j, c) = lambda * b(static_cast<Eigen::Index>(c));
  }
  // Zeros would stay locked under multiplicative updates.
  const double fill = std::max(mean_of(x), 1e-12) * 1e-2;
  for (double& e : m.w.values()) e = e > 0.0 ? e : fill;
  for (double& e : m.h.values()) e = e > 0.0 ? e : fill;
  return m;
}

// Multiplicative update of `factor` given numerator and denominator matrices.
void apply_multiplicative(DenseMatrix& factor, const DenseMatrix& num, const DenseMatrix& den) {
  kernels::active().multiplicative_update(factor.data(), num.data(), den.data(), factor.size());
}

double frob_dot(const DenseMatrix& a, const DenseMatrix& b) {
  return kernels::dot(a.values(), b.values());
}

// Projected gradient with Armijo step search for
//   min_{V >= 0} 0.5 tr(V^T AtA V) - tr(AtB^T V).
void nls_subproblem(const DenseMatrix& ata, const DenseMatrix& atb, DenseMatrix& v,
                    std::size_t iterations) {
  constexpr double beta = 0.1;
  constexpr double sigma = 0.01;
  constexpr std::size_t max_search = 20;
  double alpha = 1.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    DenseMatrix grad = multiply(ata, v);
    for (std::size_t e = 0; e < grad.size(); ++e) grad.values()[e] -= atb.values()[e];

    double projgrad = 0.0;
    for (std::size_t e = 0; e < grad.size(); ++e) {
      const double g = grad.values()[e];
      if (g < 0.0 || v.values()[e] > 0.0) projgrad += g * g;
    }
    if (projgrad == 0.0) break;

    bool decrease_alpha = false;
    DenseMatrix previous;
    for (std::size_t search = 0; search < max_search; ++search) {
      DenseMatrix candidate = v;
      DenseMatrix step(v.rows(), v.cols());
      for (std::size_t e = 0; e < v.size(); ++e) {
        const double next = std::max(v.values()[e] - alpha * grad.values()[e], 0.0);
        candidate.values()[e] = next;
        step.values()[e] = next - v.values()[e];
      }
      const double gradd = frob_dot(grad, step);
      const double dqd = frob_dot(multiply(ata, step), step);
      const bool sufficient = (1.0 - sigma) * gradd + 0.5 * dqd < 0.0;
      if (search == 0) {
        decrease_alpha = !sufficient;
        previous = v;
      }
      if (decrease_alpha) {
        if (sufficient) {
          v = std::move(candidate);
          break;
        }
        alpha *= beta;
      } else {
        if (!sufficient || previous == candidate) {
          v = std::move(previous);
          break;
        }
        alpha /= beta;
        previous = std::move(candidate);
      }
    }
  }
}

}  // namespace

FactorModel init_factors(const DenseMatrix& x, std::size_t rank, const SolverConfig& config) {
  validate(config);
  check_problem(x, rank);
  return config.init == InitMethod::Nndsvd ? nndsvd_init(x, rank)
                                           : random_init(x, rank, config.seed);
}

FactorModel update_step(const DenseMatrix& x, const FactorModel& model,
                        const SolverConfig& config) {
  FactorModel next = model;
  next.scaling = ScalingScheme::None;
  if (config.algorithm == Algorithm::MultiplicativeUpdates) {
    // W <- W * (X H^T) / (W H H^T)
    const DenseMatrix hht = multiply_a_bt(next.h, next.h);
    apply_multiplicative(next.w, multiply_a_bt(x, next.h), multiply(next.w, hht));
    // H <- H * (W^T X) / (W^T W H)
    const DenseMatrix wtw = multiply_at_b(next.w, next.w);
    apply_multiplicative(next.h, multiply_at_b(next.w, x), multiply(wtw, next.h));
    return next;
  }

  DenseMatrix wt = next.w.transposed();
  nls_subproblem(multiply_a_bt(next.h, next.h), multiply_a_bt(next.h, x), wt,
                 config.inner_iterations);
  next.w = wt.transposed();
  nls_subproblem(multiply_at_b(next.w, next.w), multiply_at_b(next.w, x), next.h,
                 config.inner_iterations);
  return next;
}

FitReport fit(const DenseMatrix& x, std::size_t rank, const SolverConfig& config,
              const IterationHook& hook) {
  FitReport report;
  report.model = init_factors(x, rank, config);

  // An exact fit stops the loop even when the relative change is still noisy.
  const double floor = 1e-14 * frobenius_norm(x);
  double previous = frobenius_error(x, report.model);
  for (std::size_t it = 0; it < config.max_outer_iterations; ++it) {
    report.model = update_step(x, report.model, config);
    if (hook) report.model = hook(report.model);
    const double error = frobenius_error(x, report.model);
    if (!std::isfinite(error)) {
      throw DegenerateError("solver diverged: non-finite error at iteration " +
                            std::to_string(it + 1));
    }
    report.error_trace.push_back(error);
    report.iterations_run = it + 1;
    const double change = std::abs(previous - error) / (previous > 0.0 ? previous : 1.0);
    if (change < config.tolerance || error <= floor) {
      report.converged = true;
      break;
    }
    previous = error;
  }
  report.model = rescale(report.model, ScalingScheme::MaxWeight);
  return report;
}

}  // namespace pnmf
