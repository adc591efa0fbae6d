// specpert: spectral projector perturbation experiments from the command line.
//
//   specpert analyze --matrix sigma.csv
//   specpert tables --preset desk --out results/
//   specpert densities --preset paper --n 10000
//   specpert verify
//
// Exit codes: 0 all checks pass, 1 assertion failure, 2 usage or config
// error, 3 more than 1% of replications failed numerically.

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "specpert/estimators.hpp"
#include "specpert/io.hpp"
#include "specpert/montecarlo.hpp"
#include "specpert/report.hpp"
#include "specpert/spectral_model.hpp"
#include "specpert/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specpert;

namespace {

enum Exit { kOk = 0, kAssertion = 1, kUsage = 2, kNumeric = 3 };

struct Options {
  std::uint64_t seed = SeedSpec{}.master_seed;
  std::string preset = "desk";
  std::optional<std::size_t> p;
  std::vector<std::size_t> n;
  std::optional<std::size_t> reps;
  std::vector<double> spike_var;
  std::optional<double> noise_var;
  std::string sigma_file;
  std::size_t cluster = 1;
  std::string out = "specpert-out";
  int workers = 0;
  bool center = false;
  std::string eigen_path = "auto";

  // analyze
  std::string matrix_file;
  std::string data_file;
  // verify
  std::size_t verify_reps = 10000;
};

ExperimentConfig resolve(const Options& o) {
  const SeedSpec seed{o.seed};
  ExperimentConfig cfg;
  if (o.preset == "desk") {
    cfg = desk_preset(seed);
  } else if (o.preset == "paper") {
    cfg = paper_preset(seed);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown preset '" + o.preset + "'");
  }
  if (!o.sigma_file.empty()) {
    cfg.sigma = make_symmetric(io::read_csv_matrix(o.sigma_file));
    cfg.spiked.reset();
  } else if (o.p || !o.spike_var.empty() || o.noise_var) {
    SpikedModel model = *cfg.spiked;
    if (o.p) model.p = *o.p;
    if (!o.spike_var.empty()) model.spike_variances = o.spike_var;
    if (o.noise_var) model.noise_variance = *o.noise_var;
    model.validate();
    cfg.sigma = build_spiked(model);
    cfg.spiked = model;
  }
  if (o.cluster == 0) throw Error(ErrorKind::InvalidArgument, "--cluster is 1-based");
  cfg.r = o.cluster - 1;
  if (!o.n.empty()) cfg.sample_sizes = o.n;
  if (o.reps) cfg.replications = *o.reps;
  cfg.workers = o.workers;
  cfg.center = o.center;
  if (o.eigen_path == "dense") {
    cfg.path = EigenPath::Dense;
  } else if (o.eigen_path == "lanczos") {
    cfg.path = EigenPath::Lanczos;
  } else if (o.eigen_path != "auto") {
    throw Error(ErrorKind::InvalidArgument, "unknown eigen path '" + o.eigen_path + "'");
  }
  cfg.validate();
  return cfg;
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json manifest_base(const std::string& command, const ExperimentConfig& cfg) {
  json m;
  m["command"] = command;
  m["config"] = report::config_json(cfg);
  m["seed"] = cfg.seed.master_seed;
  m["timestamp"] = timestamp();
  if (cfg.center) m["note"] = "observations were mean-centered (--center); distributional results assume uncentered data";
  return m;
}

void write_csv(const fs::path& path, const io::CsvTable& t) { io::write_text(path, io::format_csv(t)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json cluster_report(const SpectralStructure& ss, std::size_t r) {
  json c;
  c["index"] = r + 1;
  c["mu"] = ss.mu(r);
  c["multiplicity"] = ss.multiplicity(r);
  if (r + 1 < ss.num_clusters()) {
    c["gap"] = ss.gap(r);
    c["guarded_gap"] = ss.guarded_gap(r);
    c["A_r"] = a_r_eigensum(ss, r);
    c["B_r"] = b_r_eigensum(ss, r);
  } else {
    c["gap"] = nullptr;
    c["note"] = ss.num_clusters() == 1 ? "single cluster: no spectral gap is defined"
                                       : "last cluster: guarded gap undefined";
  }
  return c;
}

int cmd_analyze(const Options& o) {
  if (o.matrix_file.empty() == o.data_file.empty()) {
    throw Error(ErrorKind::InvalidArgument, "analyze needs exactly one of --matrix or --data");
  }
  SymmetricOperator sigma = SymmetricOperator::zero(1);
  json rep;
  if (!o.matrix_file.empty()) {
    sigma = make_symmetric(io::read_csv_matrix(o.matrix_file));
    rep["source"] = o.matrix_file;
  } else {
    RowMatrix x = io::read_csv_matrix(o.data_file);
    rep["source"] = o.data_file;
    rep["observations"] = x.rows();
    sigma = sample_covariance(SampleBatch{std::move(x)}, o.center);
    rep["centered"] = o.center;
  }
  const SpectralStructure ss = spectral_structure(sigma);
  const Vector ev = ss.eigen().eigenvalues;
  rep["dimension"] = ss.dim();
  rep["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
  rep["trace"] = ss.trace();
  rep["operator_norm"] = ss.op_norm();
  rep["effective_rank"] = ss.effective_rank();
  json clusters = json::array();
  for (std::size_t r = 0; r < ss.num_clusters(); ++r) clusters.push_back(cluster_report(ss, r));
  rep["clusters"] = clusters;
  std::cout << rep.dump(2) << "\n";
  return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c = cfg;
  c.observables = Observables::all();
  const Experiment exp(c);
  json m = manifest_base("simulate", c);
  bool exceeded = false;
  for (std::size_t n : c.sample_sizes) {
    const ReplicationSet set = run_replications(exp, n);
    write_csv(out / ("replications_n" + std::to_string(n) + ".csv"), report::replications_csv(set));
    m["results"].push_back(report::aggregate_json(aggregate(exp, set)));
    m["failures"][std::to_string(n)] = set.failures;
    exceeded = exceeded || set.failure_rate_exceeded();
  }
  m["wall_time_s"] = seconds_since(t0);
  io::write_text(out / "manifest.json", m.dump(2) + "\n");
  return exceeded ? kNumeric : kOk;
}

int cmd_tables(const ExperimentConfig& cfg, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Experiment exp(cfg);
  json m = manifest_base("tables", cfg);
  std::vector<AggregateResult> rows;
  bool exceeded = false;
  for (std::size_t n : cfg.sample_sizes) {
    const ReplicationSet set = run_replications(exp, n);
    rows.push_back(aggregate(exp, set));
    m["results"].push_back(report::aggregate_json(rows.back()));
    m["failures"][std::to_string(n)] = set.failures;
    exceeded = exceeded || set.failure_rate_exceeded();
    std::cerr << "n=" << n << " done (" << set.failures << " failed)\n";
  }
  write_csv(out / "table1.csv", report::table1_csv(rows));
  write_csv(out / "table2.csv", report::table2_csv(rows));
  m["wall_time_s"] = seconds_since(t0);
  io::write_text(out / "manifest.json", m.dump(2) + "\n");
  std::cout << io::format_csv(report::table1_csv(rows)) << "\n" << io::format_csv(report::table2_csv(rows));
  return exceeded ? kNumeric : kOk;
}

int cmd_densities(const ExperimentConfig& cfg, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Experiment exp(cfg);
  json m = manifest_base("densities", cfg);
  bool exceeded = false;
  for (std::size_t n : cfg.sample_sizes) {
    const ReplicationSet set = run_replications(exp, n);
    const DensityResult d = densities(exp, set);
    for (const auto& c : d.curves) {
      write_csv(out / ("density_" + c.name + "_n" + std::to_string(n) + ".csv"), report::density_csv(c));
    }
    m["ks"][std::to_string(n)] = {{"theory", d.ks_theory}, {"data_driven", d.ks_data_driven}};
    m["failures"][std::to_string(n)] = set.failures;
    m["overlay"]["pure"] = "standard Cauchy density, display only";
    exceeded = exceeded || set.failure_rate_exceeded();
    std::cout << "n=" << n << "  KS(theory)=" << d.ks_theory << "  KS(data-driven)=" << d.ks_data_driven << "\n";
  }
  m["wall_time_s"] = seconds_since(t0);
  io::write_text(out / "manifest.json", m.dump(2) + "\n");
  return exceeded ? kNumeric : kOk;
}

struct Check {
  std::string name;
  bool pass;
  json detail;
};

int cmd_verify(const ExperimentConfig& cfg, const Options& o, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Check> checks;
  const std::size_t n0 = cfg.sample_sizes.front();
  const Experiment model(cfg);

  {
    const BoundCheck lc = check_perturbation_bounds(model, n0, o.verify_reps);
    checks.push_back({"perturbation_bounds",
                      lc.checked > 0 && lc.projector_violations == 0 && lc.remainder_violations == 0,
                      {{"checked", lc.checked},
                       {"skipped", lc.skipped},
                       {"projector_violations", lc.projector_violations},
                       {"remainder_violations", lc.remainder_violations},
                       {"worst_projector_ratio", lc.worst_projector_ratio},
                       {"worst_remainder_ratio", lc.worst_remainder_ratio}}});
  }

  auto small = [&](std::vector<double> diag) {
    ExperimentConfig c;
    c.sigma = SymmetricOperator::diagonal(diag);
    c.sample_sizes = {n0};
    c.replications = 2;
    c.seed = cfg.seed;
    c.workers = cfg.workers;
    return c;
  };
  auto variance_check = [&](const std::string& name, const ExperimentConfig& c, std::size_t n) {
    const Experiment exp(c);
    const std::vector<double> l = sample_linear_sq(exp, n, o.verify_reps);
    const double var = stats::variance(l), se = stats::variance_standard_error(l);
    const double exact = var_linear_exact(exp.structure(), c.r, n);
    checks.push_back({name, std::abs(var - exact) <= 4.0 * se,
                      {{"n", n}, {"sample_variance", var}, {"exact", exact}, {"standard_error", se}}});
  };
  variance_check("variance_identity_diag211", small({2.0, 1.0, 1.0}), 100);
  variance_check("variance_identity_model", cfg, n0);

  for (auto [name, diag] : {std::pair{"representation_singleton", std::vector<double>{2.0, 1.0, 1.0}},
                            std::pair{"representation_multiplicity2", std::vector<double>{2.0, 2.0, 1.0}}}) {
    const Experiment exp(small(diag));
    const RepresentationReport rr = verify_representation(exp, 50, 5000);
    checks.push_back({name, rr.accepted, {{"ks", rr.ks}, {"p_value", rr.p_value}}});
  }

  {
    const std::vector<double> lambdas{0.5, 0.25, 0.125};
    std::vector<double> grid;
    const double edge = 1.0 / (2.0 * std::sqrt(2.0) * 0.5);
    for (int i = 0; i < 100; ++i) grid.push_back(edge * i / 100.0);
    const MgfReport mr = verify_mgf(lambdas, grid);
    checks.push_back({"mgf_inequalities", mr.holds, {{"points", mr.points.size()}}});
  }

  {
    ExperimentConfig c = cfg;
    c.replications = std::min<std::size_t>(cfg.replications, 50);
    c.sample_sizes = {n0};
    auto run = [&](int workers) {
      c.workers = workers;
      const Experiment exp(c);
      return io::format_csv(report::replications_csv(run_replications(exp, n0)));
    };
    const int many = std::max(2, omp_get_max_threads());
    checks.push_back({"determinism", run(1) == run(many), {{"workers", many}}});
  }

  json m = manifest_base("verify", cfg);
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  " << c.detail.dump() << "\n";
    m["checks"][c.name] = {{"pass", c.pass}, {"detail", c.detail}};
    all = all && c.pass;
  }
  m["wall_time_s"] = seconds_since(t0);
  io::write_text(out / "verify.json", m.dump(2) + "\n");
  return all ? kOk : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral projector perturbation: theory constants, estimators and Monte Carlo checks"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file mirroring the long flags; flags override it");
  Options o;
  app.add_option("--seed", o.seed, "Master seed (u64)");
  app.add_option("--preset", o.preset, "desk (p=200) or paper (p=1000)")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--p", o.p, "Dimension of the spiked model");
  app.add_option("--n", o.n, "Sample size (repeatable)")->allow_extra_args(false);
  app.add_option("--reps", o.reps, "Replications per sample size");
  app.add_option("--spike-var", o.spike_var, "Spike variances s_j^2 (repeatable, decreasing)")->allow_extra_args(false);
  app.add_option("--noise-var", o.noise_var, "Noise variance sigma^2");
  auto* sigma_opt = app.add_option("--sigma", o.sigma_file, "Explicit covariance CSV instead of a spiked model");
  app.add_option("--cluster", o.cluster, "Target cluster, 1-based (default 1)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--workers", o.workers, "Monte Carlo worker threads (0 = all cores)");
  app.add_flag("--center", o.center, "Mean-center observations (for external data; changes the model)");
  app.add_option("--eigen-path", o.eigen_path, "auto, dense or lanczos");
  for (const char* name : {"--p", "--spike-var", "--noise-var"}) sigma_opt->excludes(app.get_option(name));

  auto* analyze = app.add_subcommand("analyze", "Spectral report for a covariance or data CSV");
  analyze->add_option("--matrix", o.matrix_file, "Covariance matrix CSV");
  analyze->add_option("--data", o.data_file, "Observations CSV, one per row");
  auto* simulate = app.add_subcommand("simulate", "Per-replication records for every n");
  auto* tables = app.add_subcommand("tables", "Risk and variance tables");
  auto* dens = app.add_subcommand("densities", "Histograms and KS distances of the normalized statistics");
  auto* verify = app.add_subcommand("verify", "Invariant suite (bounds, identities, determinism)");
  verify->add_option("--verify-reps", o.verify_reps, "Replications for the bound and variance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(o);
    const ExperimentConfig cfg = resolve(o);
    const fs::path out(o.out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (tables->parsed()) return cmd_tables(cfg, out);
    if (dens->parsed()) return cmd_densities(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, o, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ConvergenceFailure: return kNumeric;
      default: return kUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
