#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pnmf/matrix.hpp"

namespace pnmf {

struct ArchetypeSpec {
  std::size_t num_specific_vars = 1;
  double shift = 1.0;  // value of the archetype on its specific variables, > 0
  // Explicit variable indices. Either every archetype lists them or none
  // does; when none do, archetypes take consecutive blocks in order.
  std::vector<std::size_t> variables;
};

/// Separable generator: archetypes shift disjoint variable sets by a
/// constant and are zero elsewhere.
struct SynthSpec {
  std::vector<ArchetypeSpec> archetypes;
  // Pure samples per archetype, used when `mixing` is empty.
  std::size_t samples_per_group = 10;
  // One row of k non-negative weights per sample; overrides samples_per_group.
  std::vector<std::vector<double>> mixing;
  double noise_sigma = 0.0;
  std::uint64_t seed = 42;
};

struct SynthDataset {
  DenseMatrix x;
  std::vector<std::size_t> true_labels;  // argmax of the weight row, lowest index on ties
  DenseMatrix true_w;
  DenseMatrix true_h;
};

void validate(const SynthSpec& spec);

std::size_t total_variables(const SynthSpec& spec);

/// Variable indices of each archetype, resolved from the spec.
std::vector<std::vector<std::size_t>> variable_layout(const SynthSpec& spec);

/// X = true_w * true_h + N(0, noise_sigma^2), clamped at 0.
SynthDataset generate(const SynthSpec& spec);

/// Per sample and archetype u: (sum of x over u's variables) / (count_u * shift_u).
/// Pure noiseless samples land on the unit corners.
DenseMatrix oracle_coordinates(const DenseMatrix& x, const SynthSpec& spec);

}  // namespace pnmf
