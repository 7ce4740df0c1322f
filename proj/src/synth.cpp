#include "pnmf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pnmf/error.hpp"

namespace pnmf {

void validate(const SynthSpec& spec) {
  if (spec.archetypes.empty()) throw ArgumentError("synth: no archetypes");
  const bool explicit_layout = !spec.archetypes.front().variables.empty();
  for (std::size_t u = 0; u < spec.archetypes.size(); ++u) {
    const auto& a = spec.archetypes[u];
    const std::string where = "synth: archetype " + std::to_string(u);
    if (a.num_specific_vars < 1) throw ArgumentError(where + " has no specific variables");
    if (!(a.shift > 0.0) || !std::isfinite(a.shift)) {
      throw ArgumentError(where + " shift must be finite and > 0");
    }
    if (a.variables.empty() == explicit_layout) {
      throw ArgumentError(where + ": either all archetypes list variables or none do");
    }
    if (explicit_layout && a.variables.size() != a.num_specific_vars) {
      throw ArgumentError(where + " lists " + std::to_string(a.variables.size()) +
                          " variables but num_specific_vars = " +
                          std::to_string(a.num_specific_vars));
    }
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw ArgumentError("synth: noise_sigma must be finite and >= 0");
  }
  if (spec.mixing.empty() && spec.samples_per_group < 1) {
    throw ArgumentError("synth: samples_per_group must be >= 1");
  }
  for (std::size_t i = 0; i < spec.mixing.size(); ++i) {
    const auto& row = spec.mixing[i];
    if (row.size() != spec.archetypes.size()) {
      throw ArgumentError("synth: mixing row " + std::to_string(i) + " has " +
                          std::to_string(row.size()) + " weights, expected " +
                          std::to_string(spec.archetypes.size()));
    }
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ArgumentError("synth: mixing row " + std::to_string(i) +
                            " has a negative or non-finite weight");
      }
    }
  }
  // Disjointness is checked by variable_layout.
  (void)variable_layout(spec);
}

std::size_t total_variables(const SynthSpec& spec) {
  std::size_t total = 0;
  for (const auto& a : spec.archetypes) total += a.num_specific_vars;
  return total;
}

std::vector<std::vector<std::size_t>> variable_layout(const SynthSpec& spec) {
  const std::size_t total = total_variables(spec);
  std::vector<std::vector<std::size_t>> layout;
  std::vector<int> owner(total, -1);
  std::size_t next = 0;
  for (std::size_t u = 0; u < spec.archetypes.size(); ++u) {
    const auto& a = spec.archetypes[u];
    std::vector<std::size_t> vars = a.variables;
    if (vars.empty()) {
      for (std::size_t j = 0; j < a.num_specific_vars; ++j) vars.push_back(next++);
    }
    for (std::size_t v : vars) {
      if (v >= total) {
        throw ArgumentError("synth: archetype " + std::to_string(u) + " variable " +
                            std::to_string(v) + " outside [0, " + std::to_string(total) + ")");
      }
      if (owner[v] >= 0) {
        throw ArgumentError("synth: variable " + std::to_string(v) + " shared by archetypes " +
                            std::to_string(owner[v]) + " and " + std::to_string(u) +
                            " (variable sets must be disjoint)");
      }
      owner[v] = static_cast<int>(u);
    }
    layout.push_back(std::move(vars));
  }
  return layout;
}

SynthDataset generate(const SynthSpec& spec) {
  validate(spec);
  const std::size_t k = spec.archetypes.size();
  const std::size_t p = total_variables(spec);
  const auto layout = variable_layout(spec);

  SynthDataset out;
  out.true_h = DenseMatrix(k, p);
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v : layout[u]) out.true_h(u, v) = spec.archetypes[u].shift;

  if (spec.mixing.empty()) {
    out.true_w = DenseMatrix(k * spec.samples_per_group, k);
    for (std::size_t u = 0; u < k; ++u)
      for (std::size_t s = 0; s < spec.samples_per_group; ++s)
        out.true_w(u * spec.samples_per_group + s, u) = 1.0;
  } else {
    out.true_w = DenseMatrix::from_rows(spec.mixing);
  }

  out.true_labels.resize(out.true_w.rows());
  for (std::size_t i = 0; i < out.true_w.rows(); ++i) {
    const auto r = out.true_w.row(i);
    out.true_labels[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }

  out.x = multiply(out.true_w, out.true_h);
  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : out.x.values()) v = std::max(0.0, v + noise(rng));
  }
  return out;
}

DenseMatrix oracle_coordinates(const DenseMatrix& x, const SynthSpec& spec) {
  validate(spec);
  const std::size_t p = total_variables(spec);
  if (x.cols() != p) {
    throw ArgumentError("oracle_coordinates: data has " + std::to_string(x.cols()) +
                        " variables, spec lays out " + std::to_string(p));
  }
  const auto layout = variable_layout(spec);
  DenseMatrix coords(x.rows(), spec.archetypes.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t u = 0; u < layout.size(); ++u) {
      // Compensated sum: repeated shifts add up to exactly count * shift.
      double sum = 0.0, carry = 0.0;
      for (std::size_t v : layout[u]) {
        const double term = x(i, v);
        const double t = sum + term;
        carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
      }
      sum += carry;
      coords(i, u) = sum / (static_cast<double>(layout[u].size()) * spec.archetypes[u].shift);
    }
  }
  return coords;
}

}  // namespace pnmf
