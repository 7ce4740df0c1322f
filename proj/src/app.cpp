#include "pnmf/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <ostream>

#include "pnmf/elastic.hpp"
#include "pnmf/error.hpp"
#include "pnmf/io.hpp"
#include "pnmf/kernels.hpp"
#include "pnmf/model.hpp"
#include "pnmf/permute.hpp"
#include "pnmf/rank_scan.hpp"
#include "pnmf/solver.hpp"
#include "pnmf/synth.hpp"

#ifndef PNMF_VERSION
#define PNMF_VERSION "dev"
#endif

namespace pnmf::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverFlags {
  std::uint64_t seed = 42;
  std::size_t max_iter = 500;
  double tol = 1e-6;
  std::string init = "random";
  std::string algorithm = "mu";
  bool permute = false;
  std::size_t max_sweeps = 50;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd.add_option("--max-iter", max_iter, "Maximum outer solver iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--tol", tol, "Relative error-change tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--init", init, "Initialization")
        ->check(CLI::IsMember({"random", "nndsvd"}))
        ->capture_default_str();
    cmd.add_option("--algorithm", algorithm, "Update rule")
        ->check(CLI::IsMember({"mu", "pgals"}))
        ->capture_default_str();
    cmd.add_flag("--permute", permute, "Apply the permutation step after every iteration");
    cmd.add_option("--max-sweeps", max_sweeps, "Permutation sweeps per stabilization")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  SolverConfig solver() const {
    SolverConfig c;
    c.seed = seed;
    c.max_outer_iterations = max_iter;
    c.tolerance = tol;
    c.init = *parse_init(init);
    c.algorithm = *parse_algorithm(algorithm);
    return c;
  }

  PermuteConfig permutation() const {
    PermuteConfig p;
    p.max_sweeps = max_sweeps;
    return p;
  }

  void record(json& manifest) const {
    manifest["seed"] = seed;
    manifest["max_iter"] = max_iter;
    manifest["tol"] = tol;
    manifest["init"] = init;
    manifest["algorithm"] = algorithm;
    manifest["permute"] = permute;
    manifest["max_sweeps"] = max_sweeps;
  }
};

json base_manifest(std::string_view command) {
  json m;
  m["command"] = command;
  m["tool_version"] = PNMF_VERSION;
  m["kernels"] = kernels::active().name;
  return m;
}

void write_json(const fs::path& path, const json& j) {
  io::write_file_atomic(path, j.dump(2) + "\n");
}

struct Input {
  io::LabeledMatrix data;
  std::string digest;
};

Input read_input(const std::string& path, bool nonnegative = true) {
  const std::string bytes = io::read_file(path);
  return {io::parse_csv(bytes, path, nonnegative), io::sha256_hex(bytes)};
}

std::vector<std::string> archetype_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t u = 0; u < k; ++u) names.push_back("a" + std::to_string(u));
  return names;
}

std::string labels_csv(const std::vector<std::string>& ids,
                       const std::vector<std::pair<std::string, const std::vector<std::size_t>*>>& cols) {
  std::string out = "id";
  for (const auto& [name, _] : cols) out += "," + name;
  out += '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i];
    for (const auto& [_, labels] : cols) out += "," + std::to_string((*labels)[i]);
    out += '\n';
  }
  return out;
}

// factorize ---------------------------------------------------------------

struct FactorizeArgs {
  std::string input;
  std::size_t rank = 0;
  std::string scaling = "max";
  std::string out;
  SolverFlags solver;
};

void run_factorize(const FactorizeArgs& a) {
  const Input in = read_input(a.input);
  const DenseMatrix& x = in.data.matrix;
  if (frobenius_norm(x) == 0.0) throw DegenerateError(a.input + ": data matrix is all zero");

  const SolverConfig cfg = a.solver.solver();
  json report = base_manifest("factorize");
  a.solver.record(report);
  report["input"] = a.input;
  report["input_digest"] = in.digest;
  report["rank"] = a.rank;
  report["scaling"] = a.scaling;

  FactorModel model;
  if (a.solver.permute) {
    PermutedFitReport fit_report = permuted_fit(x, a.rank, cfg, a.solver.permutation());
    model = fit_report.model;
    report["iterations_run"] = fit_report.iterations_run;
    report["error_trace"] = fit_report.error_trace;
    report["converged"] = fit_report.converged;
    report["sweeps_per_call"] = fit_report.sweeps_per_call;
    report["unstabilized_calls"] = fit_report.unstabilized_calls;
  } else {
    FitReport fit_report = fit(x, a.rank, cfg);
    model = fit_report.model;
    report["iterations_run"] = fit_report.iterations_run;
    report["error_trace"] = fit_report.error_trace;
    report["converged"] = fit_report.converged;
  }
  model = rescale(model, *parse_scaling(a.scaling));
  report["final_error"] = frobenius_error(x, model);

  const auto weight = cluster(model.w, ClusterRule::ArgmaxWeight);
  const auto elastic = cluster(model.w, ClusterRule::MinElastic);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const auto names = archetype_names(a.rank);
  io::save_csv(dir / "W.csv", {model.w, in.data.row_ids, names, in.data.id_header});
  io::save_csv(dir / "H.csv", {model.h, names, in.data.column_names, "archetype"});
  io::write_file_atomic(dir / "clusters.csv",
                        labels_csv(in.data.row_ids, {{"weight", &weight.labels},
                                                     {"elastic", &elastic.labels}}));
  write_json(dir / "report.json", report);
}

// rank-scan ---------------------------------------------------------------

struct RankScanArgs {
  std::string input;
  std::size_t rank_min = 1;
  std::size_t rank_max = 1;
  double threshold = 0.1;
  std::string out;
  SolverFlags solver;
};

void run_rank_scan(const RankScanArgs& a) {
  const Input in = read_input(a.input);
  const DenseMatrix& x = in.data.matrix;
  if (frobenius_norm(x) == 0.0) throw DegenerateError(a.input + ": data matrix is all zero");

  ScanOptions opts;
  opts.rank_min = a.rank_min;
  opts.rank_max = a.rank_max;
  opts.drop_threshold = a.threshold;
  std::optional<PermuteConfig> perm;
  if (a.solver.permute) perm = a.solver.permutation();
  const VolumeReport vr = scan(x, opts, a.solver.solver(), perm);
  if (vr.degenerate_ranks.size() == vr.ranks.size()) {
    throw DegenerateError("every candidate rank produced a zero rank-one part");
  }

  json report = base_manifest("rank-scan");
  a.solver.record(report);
  report["input"] = a.input;
  report["input_digest"] = in.digest;
  report["rank_min"] = a.rank_min;
  report["rank_max"] = a.rank_max;
  report["drop_threshold"] = a.threshold;
  report["ranks"] = vr.ranks;
  report["volumes"] = vr.volumes;
  report["drop_ratios"] = vr.drop_ratios;
  report["degenerate_ranks"] = vr.degenerate_ranks;
  report["suggested_rank"] = vr.suggested_rank;

  std::string csv = "rank,volume,drop_ratio\n";
  for (std::size_t i = 0; i < vr.ranks.size(); ++i) {
    csv += std::to_string(vr.ranks[i]) + "," + io::format_double(vr.volumes[i]) + ",";
    if (i > 0) csv += io::format_double(vr.drop_ratios[i - 1]);
    csv += '\n';
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  io::write_file_atomic(dir / "volumes.csv", csv);
  io::write_file_atomic(dir / "scree.svg", io::scree_svg(vr.ranks, vr.volumes, vr.suggested_rank));
  write_json(dir / "report.json", report);
}

// cluster -----------------------------------------------------------------

struct ClusterArgs {
  std::string w;
  std::string rule = "elastic";
  std::string out;
};

void run_cluster(const ClusterArgs& a) {
  const Input in = read_input(a.w);
  const ClusterRule rule = *parse_rule(a.rule);
  const auto labels = cluster(in.data.matrix, rule);

  json report = base_manifest("cluster");
  report["input"] = a.w;
  report["input_digest"] = in.digest;
  report["rule"] = a.rule;
  report["labels"] = labels.labels;

  const fs::path dir(a.out);
  fs::create_directories(dir);
  io::write_file_atomic(dir / "clusters.csv",
                        labels_csv(in.data.row_ids, {{"label", &labels.labels}}));
  write_json(dir / "report.json", report);
}

// synth -------------------------------------------------------------------

struct SynthArgs {
  std::string spec;
  std::string out;
};

template <typename T>
T field(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(where + ": field '" + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError(where + ": unknown field '" + key + "'");
    }
  }
}

SynthSpec parse_synth_spec(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  if (!j.is_object()) throw InputError(source + ": expected a JSON object");
  reject_unknown(j, {"archetypes", "samples_per_group", "mixing", "noise_sigma", "seed"}, source);
  if (!j.contains("archetypes") || !j["archetypes"].is_array()) {
    throw InputError(source + ": 'archetypes' must be an array");
  }
  SynthSpec spec;
  for (std::size_t u = 0; u < j["archetypes"].size(); ++u) {
    const json& a = j["archetypes"][u];
    const std::string where = source + ": archetypes[" + std::to_string(u) + "]";
    if (!a.is_object()) throw InputError(where + ": expected an object");
    reject_unknown(a, {"num_specific_vars", "shift", "variables"}, where);
    ArchetypeSpec arch;
    arch.variables = field<std::vector<std::size_t>>(a, "variables", {}, where);
    arch.num_specific_vars =
        field<std::size_t>(a, "num_specific_vars", arch.variables.size(), where);
    arch.shift = field<double>(a, "shift", 1.0, where);
    spec.archetypes.push_back(std::move(arch));
  }
  spec.samples_per_group = field<std::size_t>(j, "samples_per_group", 10, source);
  spec.mixing = field<std::vector<std::vector<double>>>(j, "mixing", {}, source);
  spec.noise_sigma = field<double>(j, "noise_sigma", 0.0, source);
  spec.seed = field<std::uint64_t>(j, "seed", 42, source);
  try {
    validate(spec);
  } catch (const ArgumentError& e) {
    throw InputError(source + ": " + e.what());
  }
  return spec;
}

json synth_spec_json(const SynthSpec& spec) {
  json j;
  j["archetypes"] = json::array();
  const auto layout = variable_layout(spec);
  for (std::size_t u = 0; u < spec.archetypes.size(); ++u) {
    j["archetypes"].push_back({{"num_specific_vars", spec.archetypes[u].num_specific_vars},
                               {"shift", spec.archetypes[u].shift},
                               {"variables", layout[u]}});
  }
  j["samples_per_group"] = spec.samples_per_group;
  j["mixing"] = spec.mixing;
  j["noise_sigma"] = spec.noise_sigma;
  j["seed"] = spec.seed;
  return j;
}

void run_synth(const SynthArgs& a) {
  const std::string bytes = io::read_file(a.spec);
  const SynthSpec spec = parse_synth_spec(bytes, a.spec);
  const SynthDataset data = generate(spec);

  std::vector<std::string> ids, vars;
  for (std::size_t i = 0; i < data.x.rows(); ++i) ids.push_back("s" + std::to_string(i));
  for (std::size_t v = 0; v < data.x.cols(); ++v) vars.push_back("v" + std::to_string(v));
  const auto names = archetype_names(spec.archetypes.size());

  json report = base_manifest("synth");
  report["input"] = a.spec;
  report["input_digest"] = io::sha256_hex(bytes);
  report["seed"] = spec.seed;
  report["samples"] = data.x.rows();
  report["variables"] = data.x.cols();
  report["archetypes"] = spec.archetypes.size();

  const fs::path dir(a.out);
  fs::create_directories(dir);
  io::save_csv(dir / "X.csv", {data.x, ids, vars, "id"});
  io::save_csv(dir / "W_true.csv", {data.true_w, ids, names, "id"});
  io::save_csv(dir / "H_true.csv", {data.true_h, names, vars, "archetype"});
  io::write_file_atomic(dir / "truth.csv", labels_csv(ids, {{"label", &data.true_labels}}));
  write_json(dir / "spec.json", synth_spec_json(spec));
  write_json(dir / "report.json", report);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permuted non-negative matrix factorization", "pnmf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PNMF_VERSION);

  FactorizeArgs fa;
  auto* factorize = app.add_subcommand("factorize", "Fit W and H at one rank");
  factorize->add_option("--input", fa.input, "Data CSV (header row, id column)")
      ->required()
      ->check(CLI::ExistingFile);
  factorize->add_option("--rank", fa.rank, "Number of archetypes")->required()->check(CLI::PositiveNumber);
  factorize->add_option("--scaling", fa.scaling, "Scaling of the written W")
      ->check(CLI::IsMember({"max", "l2"}))
      ->capture_default_str();
  factorize->add_option("--out", fa.out, "Output directory")->required();
  fa.solver.add_to(*factorize);

  RankScanArgs ra;
  auto* rank_scan = app.add_subcommand("rank-scan", "Volume scree over a range of ranks");
  rank_scan->add_option("--input", ra.input, "Data CSV")->required()->check(CLI::ExistingFile);
  rank_scan->add_option("--rank-min", ra.rank_min, "Smallest rank")->required();
  rank_scan->add_option("--rank-max", ra.rank_max, "Largest rank")->required();
  rank_scan->add_option("--threshold", ra.threshold, "Volume drop ratio marking over-fit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rank_scan->add_option("--out", ra.out, "Output directory")->required();
  ra.solver.add_to(*rank_scan);

  ClusterArgs ca;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster samples from a score matrix");
  cluster_cmd->add_option("--w", ca.w, "Score matrix CSV")->required()->check(CLI::ExistingFile);
  cluster_cmd->add_option("--rule", ca.rule, "Clustering rule")
      ->check(CLI::IsMember({"elastic", "weight"}))
      ->capture_default_str();
  cluster_cmd->add_option("--out", ca.out, "Output directory")->required();

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate separable synthetic data");
  synth->add_option("--spec", sa.spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", sa.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*factorize) run_factorize(fa);
    if (*rank_scan) run_rank_scan(ra);
    if (*cluster_cmd) run_cluster(ca);
    if (*synth) run_synth(sa);
  } catch (const DegenerateError& e) {
    err << "pnmf: numeric degeneracy: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "pnmf: error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace pnmf::app
