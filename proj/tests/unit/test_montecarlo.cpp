#include <doctest.h>

#include <cmath>
#include <vector>

#include "specpert/montecarlo.hpp"
#include "specpert/theory.hpp"

using namespace specpert;

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_record(const ReplicationRecord& a, const ReplicationRecord& b) {
  return a.ok == b.ok && same(a.hs_sq_err, b.hs_sq_err) && same(a.linear_sq, b.linear_sq) &&
         same(a.b_hat, b.b_hat) && same(a.b_tilde, b.b_tilde) && same(a.b_hat_n, b.b_hat_n) &&
         same(a.op_err, b.op_err) && a.separation_ok == b.separation_ok && same(a.v_tilde, b.v_tilde) &&
         same(a.stat_pure, b.stat_pure);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("fast path agrees with the dense reference") {
  for (EigenPath path : {EigenPath::Dense, EigenPath::Lanczos}) {
    ExperimentConfig cfg = spiked_config(single_spike(60, 2.0, 0.1), {40, 400}, 5, SeedSpec{3});
    cfg.observables = Observables::all();
    cfg.path = path;
    const Experiment exp(cfg);
    for (std::size_t n : {40u, 400u})
      for (std::size_t rep = 0; rep < 5; ++rep) {
        const ReplicationRecord f = run_replication(exp, n, rep);
        const ReplicationRecord d = run_replication_reference(exp, n, rep);
        REQUIRE(f.ok);
        REQUIRE(d.ok);
        CHECK(f.hs_sq_err == doctest::Approx(d.hs_sq_err).epsilon(1e-8));
        CHECK(f.linear_sq == doctest::Approx(d.linear_sq).epsilon(1e-9));
        CHECK(f.b_hat == doctest::Approx(d.b_hat).epsilon(1e-8));
        CHECK(f.b_tilde == doctest::Approx(d.b_tilde).epsilon(1e-8));
        CHECK(f.b_hat_n == doctest::Approx(d.b_hat_n).epsilon(1e-6));
        CHECK(f.op_err == doctest::Approx(d.op_err).epsilon(1e-4));
        CHECK(f.separation_ok == d.separation_ok);
        CHECK(f.proj_err_op == doctest::Approx(d.proj_err_op).epsilon(1e-6));
        CHECK(f.remainder_op == doctest::Approx(d.remainder_op).epsilon(1e-6));
        CHECK(f.stat_theory == doctest::Approx(d.stat_theory).epsilon(1e-6));
        CHECK(f.stat_pure == doctest::Approx(d.stat_pure).epsilon(1e-6));
      }
  }
}

TEST_CASE("fast path handles a multiplicity-2 interior cluster") {
  std::vector<double> d(30, 0.2);
  d[0] = 4.2;
  d[1] = d[2] = 2.2;
  ExperimentConfig cfg;
  cfg.sigma = SymmetricOperator::diagonal(d);
  cfg.sample_sizes = {300};
  cfg.seed = SeedSpec{8};
  cfg.r = 1;
  cfg.observables = Observables::all();
  const Experiment exp(cfg);
  REQUIRE(exp.multiplicity() == 2);
  for (std::size_t rep = 0; rep < 4; ++rep) {
    const ReplicationRecord f = run_replication(exp, 300, rep);
    const ReplicationRecord d = run_replication_reference(exp, 300, rep);
    REQUIRE(f.ok);
    CHECK(f.hs_sq_err == doctest::Approx(d.hs_sq_err).epsilon(1e-8));
    CHECK(f.linear_sq == doctest::Approx(d.linear_sq).epsilon(1e-9));
    CHECK(f.b_hat == doctest::Approx(d.b_hat).epsilon(1e-8));
  }
}

TEST_CASE("replications are deterministic and worker-count invariant") {
  ExperimentConfig cfg = spiked_config(single_spike(40, 2.0, 0.1), {80}, 12, SeedSpec{17});
  cfg.observables = Observables::all();
  cfg.workers = 1;
  const ReplicationSet one = run_replications(Experiment(cfg), 80);
  cfg.workers = 3;
  const ReplicationSet three = run_replications(Experiment(cfg), 80);
  REQUIRE(one.records.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(one.records[i].replication == i);
    CHECK(same_record(one.records[i], three.records[i]));
  }
  const ReplicationSet tail = run_replications(Experiment(cfg), 80, 5, 3);
  CHECK(same_record(tail.records[0], one.records[5]));
  CHECK(same_record(run_replication(Experiment(cfg), 80, 7), one.records[7]));
}

TEST_CASE("zero-noise model has no eigenspace perturbation") {
  ExperimentConfig cfg = spiked_config(single_spike(10, 2.0, 0.0), {20}, 3);
  cfg.observables = Observables{};
  cfg.observables.bias = cfg.observables.third_subsample = cfg.observables.plug_in = false;
  const Experiment exp(cfg);
  for (std::size_t rep = 0; rep < 3; ++rep) {
    const ReplicationRecord r = run_replication(exp, 20, rep);
    REQUIRE(r.ok);
    CHECK(r.hs_sq_err < 1e-20);
    CHECK(r.linear_sq < 1e-20);
  }
}

TEST_CASE("disabled observables are NaN and failures are recorded") {
  ExperimentConfig cfg = spiked_config(single_spike(20, 2.0, 0.1), {50}, 2);
  cfg.observables = Observables::statistics();
  const ReplicationRecord r = run_replication(Experiment(cfg), 50, 0);
  REQUIRE(r.ok);
  CHECK(std::isnan(r.b_tilde));
  CHECK(std::isnan(r.op_err));
  CHECK(std::isfinite(r.stat_theory));

  ExperimentConfig flat = spiked_config(single_spike(10, 2.0, 0.0), {20}, 2);
  flat.observables = Observables::statistics();
  const ReplicationRecord bad = run_replication(Experiment(flat), 20, 0);  // B_r = 0
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.failure.empty());
  CHECK(std::isnan(bad.hs_sq_err));
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg = spiked_config(single_spike(5, 2.0, 0.1), {}, 10);
  CHECK_THROWS_AS(Experiment{cfg}, Error);
  cfg.sample_sizes = {0};
  CHECK_THROWS_AS(Experiment{cfg}, Error);
  cfg.sample_sizes = {10};
  cfg.replications = 1;
  CHECK_THROWS_AS(Experiment{cfg}, Error);
  cfg.replications = 10;
  cfg.r = 4;
  CHECK_THROWS_AS(Experiment{cfg}, Error);
  const ExperimentConfig desk = desk_preset();
  CHECK(desk.sigma.dim() == 200);
  CHECK(desk.replications == 500);
  CHECK(paper_preset().sample_sizes.back() == 10000);
}

TEST_CASE("aggregate on a small spiked run") {
  ExperimentConfig cfg = spiked_config(single_spike(50, 2.0, 0.1), {500}, 60, SeedSpec{21});
  cfg.observables = Observables::all();
  const Experiment exp(cfg);
  const ReplicationSet set = run_replications(exp, 500);
  const AggregateResult a = aggregate(exp, set);
  CHECK(a.used == 60);
  CHECK(a.failures == 0);
  CHECK(a.risk_approx == doctest::Approx(exp.a_r() / 500.0));
  CHECK(a.var_approx == doctest::Approx(exp.b_r() * exp.b_r() / 250000.0));
  CHECK(a.dev_a_over_n == doctest::Approx(rel(a.risk_approx, a.m_hat)));
  CHECK(a.dev_bn2 == doctest::Approx(rel(a.var_approx, a.s2_hat)));
  CHECK(a.risk_ratio == doctest::Approx(a.m_hat * 500.0 / exp.a_r()));
  CHECK(a.risk_ratio > 0.7);
  CHECK(a.risk_ratio < 1.3);
  CHECK(a.separation_rate == 1.0);
  CHECK(a.ks_theory >= 0.0);
  CHECK(a.ks_theory <= 1.0);
  double dev = 0.0;
  for (const auto& r : set.records) dev += std::abs(2.0 * r.b_hat + a.m_hat) / a.m_hat;
  CHECK(a.dev_minus2bhat == doctest::Approx(dev / 60.0));

  const DensityResult d = densities(exp, set);
  REQUIRE(d.curves.size() == 3);
  CHECK(d.curves[0].name == "theory");
  CHECK(d.ks_theory == doctest::Approx(a.ks_theory));
  for (const auto& c : d.curves) CHECK(c.reference.size() == c.histogram.centers.size());
}

TEST_CASE("m̂ decreases in n") {
  ExperimentConfig cfg = spiked_config(single_spike(40, 2.0, 0.1), {100, 400, 1600}, 200, SeedSpec{4});
  cfg.observables = Observables::statistics();
  cfg.observables.bias = false;
  const Experiment exp(cfg);
  double prev_mean = 1e9, prev_se = 0.0;
  for (std::size_t n : cfg.sample_sizes) {
    std::vector<double> x;
    for (const auto& r : run_replications(exp, n).records) x.push_back(r.hs_sq_err);
    const double m = stats::mean(x), se = stats::standard_error_of_mean(x);
    CHECK(m < prev_mean + 2.0 * std::hypot(se, prev_se));
    prev_mean = m;
    prev_se = se;
  }
}

TEST_CASE("linear term variance on diag(2,1,1)") {
  ExperimentConfig cfg;
  cfg.sigma = SymmetricOperator::diagonal(std::vector<double>{2, 1, 1});
  cfg.sample_sizes = {100};
  cfg.seed = SeedSpec{12};
  const Experiment exp(cfg);
  const std::vector<double> x = sample_linear_sq(exp, 100, 4000);
  const double se = stats::variance_standard_error(x);
  CHECK(std::abs(stats::variance(x) - 0.006656) < 4.0 * se);
  CHECK(stats::mean(x) == doctest::Approx(exp.a_r() / 100.0).epsilon(0.1));
}

TEST_CASE("distributional representation") {
  ExperimentConfig cfg;
  cfg.sigma = SymmetricOperator::diagonal(std::vector<double>{2, 1, 1});
  cfg.sample_sizes = {50};
  cfg.seed = SeedSpec{13};
  const RepresentationReport rep = verify_representation(Experiment(cfg), 50, 2000);
  CHECK(rep.left.size() == 2000);
  CHECK(rep.accepted);

  cfg.sigma = SymmetricOperator::identity(3);
  const RepresentationReport flat = verify_representation(Experiment(cfg), 50, 100);
  CHECK(flat.accepted);
  for (double v : flat.left) CHECK(v == 0.0);
  for (double v : flat.right) CHECK(v == 0.0);
}

TEST_CASE("moment generating function bounds") {
  const MgfReport one = verify_mgf({1.0}, {0.0, 0.1});
  REQUIRE(one.points.size() == 2);
  CHECK(one.points[0].upper_lhs == doctest::Approx(1.0));
  CHECK(one.points[0].upper_rhs == doctest::Approx(1.0));
  CHECK(one.points[0].lower_lhs == doctest::Approx(1.0));
  CHECK(one.points[1].upper_lhs == doctest::Approx(std::exp(-0.1) / std::sqrt(0.8)).epsilon(1e-12));
  CHECK(one.points[1].upper_lhs == doctest::Approx(1.0117).epsilon(1e-4));
  CHECK(one.points[1].upper_rhs == doctest::Approx(1.0408).epsilon(1e-4));
  CHECK(one.holds);

  std::vector<double> grid;
  const double edge = 1.0 / (std::sqrt(2.0) * 2.0 * 0.5);
  for (int i = 0; i < 100; ++i) grid.push_back(edge * i / 100.0);
  CHECK(verify_mgf({0.5, 0.25, 0.125}, grid).holds);

  CHECK_THROWS_AS(verify_mgf({1.0}, {0.4}), Error);
  CHECK_THROWS_AS(verify_mgf({-1.0}, {0.1}), Error);
  CHECK_THROWS_AS(verify_mgf({1.0}, {-0.1}), Error);
}

TEST_CASE("perturbation bounds hold on separated replications") {
  const Experiment exp(spiked_config(single_spike(80, 2.0, 0.1), {200}, 30, SeedSpec{6}));
  const BoundCheck c = check_perturbation_bounds(exp, 200, 30);
  CHECK(c.checked + c.skipped == 30);
  CHECK(c.checked >= 25);
  CHECK(c.projector_violations == 0);
  CHECK(c.remainder_violations == 0);
  CHECK(c.worst_projector_ratio <= 1.0);
}

TEST_CASE("envelope calibration rows") {
  EnvelopeGrid g;
  g.dims = {30};
  g.sample_sizes = {300};
  g.reps = 10;
  const auto rows = calibrate_envelopes(g);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].p == 30);
  CHECK(rows[0].envelope == doctest::Approx(risk_envelope_opnorm(build_spiked(single_spike(30, 2.0, 0.1)), 300)));
  CHECK(rows[0].op_ratio > 0.3);
  CHECK(rows[0].op_ratio < 3.0);
  CHECK(rows[0].concentration_ratios.size() == 3);
}
