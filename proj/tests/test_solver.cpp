#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pnmf/error.hpp"
#include "pnmf/solver.hpp"

using namespace pnmf;

namespace {
DenseMatrix positive_random(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::random_matrix(n, p, rng, 0.01, 1.0);
}
}  // namespace

TEST_CASE("init_factors") {
  const auto x = positive_random(6, 4, 1);
  SolverConfig cfg;
  cfg.seed = 9;

  SUBCASE("deterministic given the seed") {
    const auto a = init_factors(x, 3, cfg);
    const auto b = init_factors(x, 3, cfg);
    CHECK(a.w == b.w);
    CHECK(a.h == b.h);
    cfg.seed = 10;
    CHECK_FALSE(init_factors(x, 3, cfg).w == a.w);
  }
  SUBCASE("strictly positive random factors with the right shapes") {
    const auto m = init_factors(x, 4, cfg);
    CHECK(m.w.rows() == 6);
    CHECK(m.w.cols() == 4);
    CHECK(m.h.rows() == 4);
    CHECK(m.h.cols() == 4);
    for (double v : m.w.values()) CHECK(v > 0.0);
    for (double v : m.h.values()) CHECK(v > 0.0);
  }
  SUBCASE("rank bounds") {
    CHECK_THROWS_AS(init_factors(x, 0, cfg), ArgumentError);
    CHECK_THROWS_AS(init_factors(x, 5, cfg), ArgumentError);
    CHECK_NOTHROW(init_factors(x, 4, cfg));
  }
  SUBCASE("negative data is rejected") {
    auto bad = x;
    bad(2, 1) = -0.5;
    CHECK_THROWS_AS(init_factors(bad, 2, cfg), ArgumentError);
  }
  SUBCASE("nndsvd is deterministic and positive") {
    cfg.init = InitMethod::Nndsvd;
    const auto a = init_factors(x, 3, cfg);
    cfg.seed = 123;
    const auto b = init_factors(x, 3, cfg);
    CHECK(a.w == b.w);
    for (double v : a.w.values()) CHECK(v > 0.0);
    for (double v : a.h.values()) CHECK(v > 0.0);
  }
  SUBCASE("bad config") {
    cfg.tolerance = 0.0;
    CHECK_THROWS_AS(init_factors(x, 2, cfg), ArgumentError);
  }
}

TEST_CASE("multiplicative update fixed point at an exact fit") {
  std::mt19937_64 rng(5);
  const FactorModel truth{oracle::random_matrix(8, 3, rng, 0.1, 1.0),
                          oracle::random_matrix(3, 6, rng, 0.1, 1.0)};
  const auto x = reconstruct(truth);
  const auto next = update_step(x, truth, SolverConfig{});
  for (std::size_t e = 0; e < truth.w.size(); ++e)
    CHECK(std::abs(next.w.values()[e] - truth.w.values()[e]) <= 1e-12);
  for (std::size_t e = 0; e < truth.h.size(); ++e)
    CHECK(std::abs(next.h.values()[e] - truth.h.values()[e]) <= 1e-12);
}

TEST_CASE("multiplicative update never increases the error") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = positive_random(12, 9, 1000 + seed);
    SolverConfig cfg;
    cfg.seed = seed;
    auto m = init_factors(x, 3, cfg);
    const double before = frobenius_error(x, m);
    m = update_step(x, m, cfg);
    CHECK(frobenius_error(x, m) <= before + 1e-9);
  }
}

TEST_CASE("zero entries stay zero under multiplicative updates") {
  const auto x = positive_random(7, 5, 2);
  auto m = init_factors(x, 2, SolverConfig{});
  m.w(3, 1) = 0.0;
  m.h(0, 4) = 0.0;
  for (int i = 0; i < 5; ++i) m = update_step(x, m, SolverConfig{});
  CHECK(m.w(3, 1) == 0.0);
  CHECK(m.h(0, 4) == 0.0);
}

TEST_CASE("projected gradient ALS decreases the error and stays non-negative") {
  const auto x = positive_random(15, 10, 4);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::ProjectedGradientALS;
  auto m = init_factors(x, 3, cfg);
  double prev = frobenius_error(x, m);
  for (int i = 0; i < 20; ++i) {
    m = update_step(x, m, cfg);
    const double e = frobenius_error(x, m);
    CHECK(e <= prev + 1e-9);
    prev = e;
    for (double v : m.w.values()) CHECK(v >= 0.0);
    for (double v : m.h.values()) CHECK(v >= 0.0);
  }
  const auto report = fit(x, 3, cfg);
  const auto mu = fit(x, 3, SolverConfig{});
  CHECK(report.error_trace.back() <= 1.05 * mu.error_trace.back());
}

TEST_CASE("fit recovers an exact rank-one matrix") {
  const auto a = DenseMatrix::from_rows({{1.0}, {2.0}, {0.5}, {3.0}});
  const auto b = DenseMatrix::from_rows({{0.2, 1.5, 4.0, 0.7, 1.0}});
  const auto x = oracle::naive_product(a, b);
  const auto report = fit(x, 1, SolverConfig{});
  CHECK(frobenius_error(x, report.model) < 1e-6 * frobenius_norm(x));
  CHECK(report.converged);
  CHECK(report.model.scaling == ScalingScheme::MaxWeight);
  const auto col = report.model.w.column(0);
  CHECK(*std::max_element(col.begin(), col.end()) == 1.0);
}

TEST_CASE("fit contracts") {
  const auto x = positive_random(20, 12, 8);
  SolverConfig cfg;
  cfg.max_outer_iterations = 200;

  SUBCASE("identity hook changes nothing") {
    const auto plain = fit(x, 3, cfg);
    const auto hooked = fit(x, 3, cfg, [](const FactorModel& m) { return m; });
    CHECK(plain.error_trace == hooked.error_trace);
    CHECK(plain.model.w == hooked.model.w);
    CHECK(plain.model.h == hooked.model.h);
    CHECK(plain.converged == hooked.converged);
  }
  SUBCASE("determinism") {
    const auto a = fit(x, 3, cfg);
    const auto b = fit(x, 3, cfg);
    CHECK(a.error_trace == b.error_trace);
    CHECK(a.model.w == b.model.w);
  }
  SUBCASE("iteration cap") {
    cfg.max_outer_iterations = 1;
    const auto r = fit(x, 3, cfg);
    CHECK(r.iterations_run == 1);
    CHECK(r.error_trace.size() == 1);
    CHECK_FALSE(r.converged);
  }
  SUBCASE("trace is monotone and aligned") {
    const auto r = fit(x, 4, cfg);
    CHECK(r.error_trace.size() == r.iterations_run);
    for (std::size_t i = 1; i < r.error_trace.size(); ++i)
      CHECK(r.error_trace[i] <= r.error_trace[i - 1] + 1e-9);
  }
  SUBCASE("hook output is what the next iteration sees") {
    std::size_t calls = 0;
    const auto r = fit(x, 2, cfg, [&](const FactorModel& m) {
      ++calls;
      for (double v : m.w.values()) CHECK(v >= 0.0);
      return m;
    });
    CHECK(calls == r.iterations_run);
  }
}

TEST_CASE("enum names round-trip") {
  CHECK(parse_init(to_string(InitMethod::Nndsvd)) == InitMethod::Nndsvd);
  CHECK(parse_init(to_string(InitMethod::RandomUniform)) == InitMethod::RandomUniform);
  CHECK(parse_algorithm(to_string(Algorithm::ProjectedGradientALS)) ==
        Algorithm::ProjectedGradientALS);
  CHECK_FALSE(parse_algorithm("adam").has_value());
}
