#include "specpert/report.hpp"

#include <cmath>

namespace specpert::report {

namespace {

// JSON has no NaN; unavailable values become null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

io::CsvTable table1_csv(const std::vector<AggregateResult>& rows) {
  io::CsvTable t;
  t.header = {"n", "dev_A_over_n", "dev_minus2bhat", "m_hat", "A_over_n", "mean_minus2bhat"};
  for (const auto& a : rows) {
    t.rows.push_back({static_cast<double>(a.n), a.dev_a_over_n, a.dev_minus2bhat, a.m_hat, a.risk_approx,
                      a.mean_minus2bhat});
  }
  return t;
}

io::CsvTable table2_csv(const std::vector<AggregateResult>& rows) {
  io::CsvTable t;
  t.header = {"n", "dev_Bn2", "dev_Vtilde", "s2_hat", "Bn2_over_n2", "mean_Vtilde", "dev_mean_Vtilde"};
  for (const auto& a : rows) {
    t.rows.push_back({static_cast<double>(a.n), a.dev_bn2, a.dev_v_tilde, a.s2_hat, a.var_approx, a.mean_v_tilde,
                      a.dev_mean_v_tilde});
  }
  return t;
}

io::CsvTable density_csv(const DensityCurve& curve) {
  io::CsvTable t;
  t.header = {"bin_center", "density", "reference_density"};
  for (std::size_t i = 0; i < curve.histogram.centers.size(); ++i) {
    t.rows.push_back({curve.histogram.centers[i], curve.histogram.density[i], curve.reference[i]});
  }
  return t;
}

io::CsvTable replications_csv(const ReplicationSet& set) {
  io::CsvTable t;
  t.header = {"n",        "replication", "ok",          "hs_sq_err",    "linear_sq",   "b_hat",
              "b_tilde",  "B_hat_n",     "op_err",      "separation_ok", "proj_err_op", "remainder_op",
              "V_tilde",  "stat_theory", "stat_data_driven", "stat_pure"};
  for (const auto& r : set.records) {
    t.rows.push_back({static_cast<double>(r.n), static_cast<double>(r.replication), r.ok ? 1.0 : 0.0, r.hs_sq_err,
                      r.linear_sq, r.b_hat, r.b_tilde, r.b_hat_n, r.op_err, r.separation_ok ? 1.0 : 0.0,
                      r.proj_err_op, r.remainder_op, r.v_tilde, r.stat_theory, r.stat_data_driven, r.stat_pure});
  }
  return t;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["p"] = cfg.sigma.dim();
  j["target_cluster"] = cfg.r;
  j["sample_sizes"] = cfg.sample_sizes;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed.master_seed;
  j["workers"] = cfg.workers;
  j["center"] = cfg.center;
  j["eigen_path"] = cfg.path == EigenPath::Dense ? "dense" : cfg.path == EigenPath::Lanczos ? "lanczos" : "auto";
  if (cfg.spiked) {
    j["model"] = {{"kind", "spiked"},
                  {"spike_variances", cfg.spiked->spike_variances},
                  {"noise_variance", cfg.spiked->noise_variance}};
  } else {
    j["model"] = {{"kind", "explicit"}};
  }
  return j;
}

nlohmann::json aggregate_json(const AggregateResult& a) {
  return {{"n", a.n},
          {"used", a.used},
          {"failures", a.failures},
          {"m_hat", num(a.m_hat)},
          {"s2_hat", num(a.s2_hat)},
          {"A_over_n", num(a.risk_approx)},
          {"Bn2_over_n2", num(a.var_approx)},
          {"dev_A_over_n", num(a.dev_a_over_n)},
          {"dev_minus2bhat", num(a.dev_minus2bhat)},
          {"dev_Bn2", num(a.dev_bn2)},
          {"dev_Vtilde", num(a.dev_v_tilde)},
          {"dev_mean_Vtilde", num(a.dev_mean_v_tilde)},
          {"ks_theory", num(a.ks_theory)},
          {"ks_data_driven", num(a.ks_data_driven)},
          {"mean_theory", num(a.mean_theory)},
          {"separation_rate", num(a.separation_rate)},
          {"mean_op_err", num(a.mean_op_err)},
          {"risk_ratio", num(a.risk_ratio)}};
}

}  // namespace specpert::report
