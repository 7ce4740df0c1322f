#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pnmf/elastic.hpp"
#include "pnmf/error.hpp"
#include "pnmf/permute.hpp"
#include "pnmf/synth.hpp"

using namespace pnmf;

namespace {

// The reordering as a literal sort-and-scatter, independent of the library.
std::vector<double> scatter_by_sort(const std::vector<double>& w, const std::vector<double>& d) {
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return d[a] > d[b]; });
  std::vector<double> out(w.size());
  for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]] = sorted[r];
  return out;
}

bool anti_aligned(const DenseMatrix& w) {
  const auto d = elastic_distances(w);
  for (std::size_t u = 0; u < w.cols(); ++u)
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.rows(); ++j)
        if (d.values(i, u) > d.values(j, u) && w(i, u) > w(j, u)) return false;
  return true;
}

}  // namespace

TEST_CASE("reconcile_ranks follows the sort-and-scatter trace") {
  const std::vector<double> w{0.2, 0.5, 0.1}, d{3, 1, 2};
  CHECK(reconcile_ranks(w, d) == std::vector<double>{0.1, 0.5, 0.2});
  CHECK(scatter_by_sort(w, d) == std::vector<double>{0.1, 0.5, 0.2});

  // Strictly anti-sorted input is a fixed point.
  CHECK(reconcile_ranks(std::vector<double>{0.9, 0.1, 0.5}, std::vector<double>{1, 3, 2}) ==
        std::vector<double>{0.9, 0.1, 0.5});

  // Equal distances leave the weights where they are.
  CHECK(reconcile_ranks(std::vector<double>{0.7, 0.2, 0.9}, std::vector<double>{1, 1, 1}) ==
        std::vector<double>{0.7, 0.2, 0.9});

  CHECK_THROWS_AS(reconcile_ranks(std::vector<double>{1}, std::vector<double>{1, 2}),
                  ArgumentError);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> ww(1 + rng() % 30), dd(ww.size());
    for (auto& v : ww) v = std::uniform_real_distribution<double>(0, 1)(rng);
    for (auto& v : dd) v = std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(reconcile_ranks(ww, dd) == scatter_by_sort(ww, dd));
  }
}

TEST_CASE("permute_component") {
  SUBCASE("hand trace on a score matrix") {
    // Distances to archetype 0 rank the samples 0 > 2 > 1.
    const auto w = DenseMatrix::from_rows({{0.2, 1.0}, {0.5, 0.0}, {0.1, 0.0}});
    const auto d = elastic_column(w, 0);
    CHECK(d[0] > d[2]);
    CHECK(d[2] > d[1]);
    const auto out = permute_component(w, 0);
    CHECK(out.column(0) == std::vector<double>{0.1, 0.5, 0.2});
    CHECK(out.column(1) == w.column(1));
  }
  SUBCASE("equidistant samples keep their weights") {
    const auto w = DenseMatrix::from_rows({{1.0, 0.5}, {0.5, 0.0}});
    const auto d = elastic_column(w, 0);
    CHECK(d[0] == d[1]);
    CHECK(permute_component(w, 0) == w);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(permute_component(DenseMatrix::from_rows({{1, 0}}), 2), ArgumentError);
  }
}

TEST_CASE("permutation_sweep") {
  SUBCASE("single archetype is always a fixed point") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
      const auto w = oracle::random_matrix(1 + rng() % 20, 1, rng);
      const auto first = permutation_sweep(w);
      const auto second = permutation_sweep(first.w);
      CHECK_FALSE(second.changed);
      CHECK(second.w == first.w);
      CHECK(oracle::is_multiset_permutation(first.w.column(0), w.column(0)));
    }
  }
  SUBCASE("identical rows") {
    const auto w = DenseMatrix::from_rows({{0.3, 0.6}, {0.3, 0.6}, {0.3, 0.6}});
    const auto s = permutation_sweep(w);
    CHECK_FALSE(s.changed);
    CHECK(s.w == w);
  }
  SUBCASE("corners") {
    const auto w = DenseMatrix::from_rows({{1, 0}, {0, 1}});
    const auto s = permutation_sweep(w);
    CHECK_FALSE(s.changed);
    CHECK(s.w == w);
  }
}

TEST_CASE("stabilize") {
  SUBCASE("already stable") {
    const auto r = stabilize(DenseMatrix::from_rows({{1, 0}, {0, 1}}), PermuteConfig{});
    CHECK(r.sweeps_run == 1);
    CHECK(r.stabilized);
  }
  SUBCASE("sweep cap") {
    std::mt19937_64 rng(12);
    const auto w = oracle::random_matrix(20, 3, rng);
    REQUIRE(permutation_sweep(w).changed);
    PermuteConfig cfg;
    cfg.max_sweeps = 1;
    const auto r = stabilize(w, cfg);
    CHECK(r.sweeps_run == 1);
    CHECK_FALSE(r.stabilized);
  }
  SUBCASE("bad config") {
    PermuteConfig cfg;
    cfg.max_sweeps = 0;
    CHECK_THROWS_AS(stabilize(DenseMatrix::from_rows({{1}}), cfg), ArgumentError);
  }
}

TEST_CASE("stabilize properties on random matrices") {
  std::mt19937_64 rng(2024);
  std::size_t stabilized = 0;
  for (int t = 0; t < 100; ++t) {
    const auto w = oracle::random_matrix(20, 3, rng);
    PermuteConfig cfg;
    cfg.max_sweeps = 50;
    const auto r = stabilize(w, cfg);
    CHECK(r.sweeps_run >= 1);
    CHECK(r.sweeps_run <= 50);
    for (std::size_t u = 0; u < 3; ++u)
      CHECK(oracle::is_multiset_permutation(r.w.column(u), w.column(u)));
    if (r.stabilized) {
      ++stabilized;
      CHECK(anti_aligned(r.w));
    }
  }
  MESSAGE(stabilized << " of 100 random 20x3 matrices stabilized within 50 sweeps");
}

TEST_CASE("permuted_fit") {
  SynthSpec spec;
  spec.archetypes = {{6, 2.0, {}}, {4, 3.0, {}}};
  spec.samples_per_group = 20;
  const auto data = generate(spec);
  SolverConfig cfg;
  cfg.seed = 3;

  SUBCASE("rank 2 reconciles the two clusterings") {
    const auto r = permuted_fit(data.x, 2, cfg, PermuteConfig{});
    CHECK(r.model.scaling == ScalingScheme::MaxWeight);
    CHECK(r.sweeps_per_call.size() == r.iterations_run);
    for (auto scheme : {ScalingScheme::MaxWeight, ScalingScheme::SumOfSquares}) {
      const auto w = rescale(r.model, scheme).w;
      CHECK(cluster(w, ClusterRule::ArgmaxWeight).labels ==
            cluster(w, ClusterRule::MinElastic).labels);
    }
    CHECK(oracle::mismatches_up_to_relabel(cluster(r.model.w, ClusterRule::MinElastic).labels,
                                           data.true_labels, 2) == 0);
  }
  SUBCASE("with and without the hook both give valid models") {
    const auto plain = fit(data.x, 2, cfg);
    const auto permuted = permuted_fit(data.x, 2, cfg, PermuteConfig{});
    for (const auto* m : {&plain.model, &permuted.model}) {
      CHECK_NOTHROW(validate(*m));
      CHECK(m->w.rows() == data.x.rows());
      CHECK(m->h.cols() == data.x.cols());
    }
    MESSAGE("plain error " << plain.error_trace.back() << ", permuted error "
                           << permuted.error_trace.back());
  }
  SUBCASE("rank 1 ends anti-aligned") {
    const auto r = permuted_fit(data.x, 1, cfg, PermuteConfig{});
    CHECK(anti_aligned(r.model.w));
  }
  SUBCASE("permutation applied once after the fit") {
    PermuteConfig once;
    once.applied_per_solver_iteration = false;
    const auto r = permuted_fit(data.x, 2, cfg, once);
    CHECK(r.sweeps_per_call.size() == 1);
    CHECK(r.model.scaling == ScalingScheme::MaxWeight);
  }
}
