#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pnmf/matrix.hpp"
#include "pnmf/model.hpp"

namespace pnmf {

enum class InitMethod { RandomUniform, Nndsvd };
enum class Algorithm { MultiplicativeUpdates, ProjectedGradientALS };

std::string_view to_string(InitMethod m);
std::string_view to_string(Algorithm a);
std::optional<InitMethod> parse_init(std::string_view text);
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct SolverConfig {
  std::size_t max_outer_iterations = 500;
  // Relative change of the Frobenius error between outer iterations.
  double tolerance = 1e-6;
  std::uint64_t seed = 42;
  InitMethod init = InitMethod::RandomUniform;
  Algorithm algorithm = Algorithm::MultiplicativeUpdates;
  // Projected-gradient inner iterations per subproblem (ProjectedGradientALS only).
  std::size_t inner_iterations = 20;
};

void validate(const SolverConfig& config);

/// Transform applied to the model after every outer iteration.
using IterationHook = std::function<FactorModel(const FactorModel&)>;

struct FitReport {
  FactorModel model;
  std::size_t iterations_run = 0;
  std::vector<double> error_trace;  // error after each outer iteration
  bool converged = false;
};

/// Starting factors. RandomUniform draws W, H in (0, 1] scaled so that W H
/// has roughly the magnitude of mean(x); Nndsvd splits the leading singular
/// triplets into non-negative parts and fills zeros with a small constant.
FactorModel init_factors(const DenseMatrix& x, std::size_t rank, const SolverConfig& config);

/// One outer iteration: a W update followed by an H update.
FactorModel update_step(const DenseMatrix& x, const FactorModel& model, const SolverConfig& config);

/// Iterates update_step (then `hook`, when set) until the relative error
/// change drops below the tolerance or the iteration cap is reached. The
/// returned model uses MaxWeight scaling.
FitReport fit(const DenseMatrix& x, std::size_t rank, const SolverConfig& config,
              const IterationHook& hook = {});

}  // namespace pnmf
