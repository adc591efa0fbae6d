#include "specpert/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "specpert/estimators.hpp"
#include "specpert/kernels.hpp"
#include "specpert/lanczos.hpp"
#include "specpert/perturbation.hpp"
#include "specpert/theory.hpp"

namespace specpert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Observables Observables::all() {
  Observables o;
  o.perturbation_bounds = true;
  return o;
}

Observables Observables::tables() {
  Observables o;
  o.operator_error = false;
  o.linear_term = false;
  return o;
}

Observables Observables::statistics() {
  Observables o = tables();
  o.third_subsample = false;
  o.plug_in = false;
  return o;
}

void ExperimentConfig::validate() const {
  if (replications < 2) throw Error(ErrorKind::InvalidArgument, "need at least two replications");
  if (sample_sizes.empty()) throw Error(ErrorKind::InvalidArgument, "no sample sizes given");
  for (std::size_t n : sample_sizes) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample sizes must be at least 1");
  }
  if (workers < 0) throw Error(ErrorKind::InvalidArgument, "worker count must be non-negative");
}

ExperimentConfig spiked_config(const SpikedModel& model, std::vector<std::size_t> sample_sizes,
                               std::size_t replications, SeedSpec seed) {
  model.validate();
  ExperimentConfig cfg;
  cfg.sigma = build_spiked(model);
  cfg.spiked = model;
  cfg.sample_sizes = std::move(sample_sizes);
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.observables = Observables::tables();
  return cfg;
}

ExperimentConfig desk_preset(SeedSpec seed) {
  return spiked_config(single_spike(200, 2.0, 0.1), {100, 500, 2000}, 500, seed);
}

ExperimentConfig paper_preset(SeedSpec seed) {
  return spiked_config(single_spike(1000, 2.0, 0.1), {100, 200, 300, 500, 1000, 10000}, 1000, seed);
}

namespace {

const ExperimentConfig& checked(const ExperimentConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Experiment::Experiment(ExperimentConfig cfg)
    : cfg_(std::move(checked(cfg))),
      ss_(spectral_structure(cfg_.sigma)),
      sampler_(make_sampler(cfg_.sigma, cfg_.seed)) {
  if (cfg_.r >= ss_.num_clusters()) {
    throw Error(ErrorKind::InvalidCluster, "target cluster does not exist");
  }
  c_ = partial_resolvent(ss_, cfg_.r).matrix();
  v_ = ss_.basis(cfg_.r);
  a_ = a_r_eigensum(ss_, cfg_.r);
  b_ = b_r_eigensum(ss_, cfg_.r);
  gap_ = ss_.has_guarded_gap(cfg_.r) ? ss_.guarded_gap(cfg_.r) : kNaN;
}

bool Experiment::use_lanczos() const {
  switch (cfg_.path) {
    case EigenPath::Dense: return false;
    case EigenPath::Lanczos: return true;
    case EigenPath::Auto: break;
  }
  return ss_.dim() > kDenseThreshold;
}

namespace {

struct TopEigen {
  Vector values;
  Matrix vectors;  // columns 0..k-1, matching values
};

// The k leading eigenpairs of Σ̂; pairs past `vector_count` are needed for
// their values only.
TopEigen leading(const Experiment& exp, const RowMatrix& x, std::size_t k, std::size_t vector_count,
                 Matrix* dense_out) {
  const auto kk = static_cast<Eigen::Index>(k);
  if (!exp.use_lanczos()) {
    SymmetricOperator sh = SymmetricOperator::from_trusted(kernels::gram(x));
    EigenDecomposition dec = eigh(sh);
    if (dense_out) *dense_out = sh.matrix();
    return {dec.eigenvalues.head(kk), dec.eigenvectors.leftCols(kk)};
  }
  LanczosOptions opt;
  opt.vector_count = vector_count;
  const auto p = static_cast<Eigen::Index>(exp.structure().dim());
  TopEigenpairs t = top_eigenpairs([&](const Vector& v) { return kernels::gram_apply(x, v); }, p, k, opt);
  if (!t.converged) throw Error(ErrorKind::ConvergenceFailure, "Lanczos did not reach tolerance");
  return {std::move(t.values), std::move(t.vectors)};
}

Matrix cluster_columns(const Experiment& exp, const Matrix& vectors) {
  const auto& pos = exp.positions();
  Matrix u(vectors.rows(), static_cast<Eigen::Index>(pos.size()));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    u.col(static_cast<Eigen::Index>(i)) = vectors.col(static_cast<Eigen::Index>(pos[i]));
  }
  return u;
}

std::size_t cluster_end(const Experiment& exp) { return exp.positions().back() + 1; }

RowMatrix draw(const Experiment& exp, std::size_t n, std::size_t rep, std::string_view role) {
  SampleBatch b = draw_batch(exp.sampler(), n, rep, role);
  if (exp.config().center) b.vectors.rowwise() -= b.vectors.colwise().mean();
  return std::move(b.vectors);
}

// ‖S_r(E)‖_∞ on span(Û, V, C E V), which contains the range of S_r(E).
double remainder_norm(const Matrix& u_hat, const Matrix& v, const Matrix& cev) {
  Matrix block(v.rows(), u_hat.cols() + v.cols() + cev.cols());
  block << u_hat, v, cev;
  Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-12 * sv(0)) ++rank;
  const Matrix q = svd.matrixU().leftCols(rank);
  const Matrix a = q.transpose() * u_hat, b = q.transpose() * v, c = q.transpose() * cev;
  const Matrix s = a * a.transpose() - b * b.transpose() - c * b.transpose() - b * c.transpose();
  return op_norm(SymmetricOperator::from_trusted(s));
}

double operator_error(const Experiment& exp, const RowMatrix& x, const Matrix* dense) {
  const Matrix& sigma = exp.config().sigma.matrix();
  if (dense) return op_norm(SymmetricOperator::from_trusted(*dense - sigma));
  LanczosOptions opt;
  opt.tolerance = 1e-5;
  const auto p = static_cast<Eigen::Index>(exp.structure().dim());
  ExtremeEigenvalues ex = extreme_eigenvalues(
      [&](const Vector& v) -> Vector { return kernels::gram_apply(x, v) - sigma * v; }, p, opt);
  if (!ex.converged) throw Error(ErrorKind::ConvergenceFailure, "Lanczos did not reach tolerance for ‖E‖");
  return ex.op_norm();
}

void fill_nan(ReplicationRecord& rec) {
  for (double* f : {&rec.hs_sq_err, &rec.linear_sq, &rec.b_hat, &rec.b_tilde, &rec.b_hat_n, &rec.op_err,
                    &rec.proj_err_op, &rec.remainder_op, &rec.v_tilde, &rec.stat_theory,
                    &rec.stat_data_driven, &rec.stat_pure}) {
    *f = kNaN;
  }
}

void run_fast(const Experiment& exp, ReplicationRecord& rec) {
  const Observables& obs = exp.config().observables;
  const std::size_t n = rec.n, rep = rec.replication, p = exp.structure().dim();
  const std::size_t kvec = cluster_end(exp);
  const std::size_t k = obs.plug_in ? std::max<std::size_t>(kvec, 2) : kvec;
  if (k > p) throw Error(ErrorKind::InvalidArgument, "dimension too small for the requested eigenvalues");
  const Matrix& v = exp.basis();
  const auto m = static_cast<double>(exp.multiplicity());

  const RowMatrix x = draw(exp, n, rep, kRoleX);
  const bool dense = !exp.use_lanczos();
  Matrix sigma_hat;
  const TopEigen top = leading(exp, x, k, kvec, dense ? &sigma_hat : nullptr);
  const Matrix u_hat = cluster_columns(exp, top.vectors);
  const Matrix overlap = v.transpose() * u_hat;
  rec.hs_sq_err = std::max(0.0, 2.0 * m - 2.0 * overlap.squaredNorm());

  if (obs.operator_error) {
    rec.op_err = operator_error(exp, x, dense ? &sigma_hat : nullptr);
    rec.separation_ok = std::isfinite(exp.guarded_gap()) && rec.op_err < exp.guarded_gap() / 2.0;
  }
  if (obs.linear_term || obs.perturbation_bounds) {
    const Matrix sv = exp.config().sigma.matrix() * v;
    const Matrix ev = (dense ? Matrix(sigma_hat * v) : kernels::gram_apply_block(x, v)) - sv;
    const Matrix cev = exp.resolvent() * ev;
    if (obs.linear_term) rec.linear_sq = 2.0 * cev.squaredNorm();
    if (obs.perturbation_bounds) {
      Eigen::JacobiSVD<Matrix> svd(overlap);
      const double smin = svd.singularValues()(svd.singularValues().size() - 1);
      rec.proj_err_op = std::sqrt(std::max(0.0, 1.0 - smin * smin));
      rec.remainder_op = remainder_norm(u_hat, v, cev);
    }
  }
  if (obs.plug_in) rec.b_hat_n = b_hat_n_from_eigenvalues(top.values(0), top.values(1), p);
  if (obs.bias) {
    const RowMatrix xt = draw(exp, n, rep, kRoleXtilde);
    const Matrix u_tilde = cluster_columns(exp, leading(exp, xt, kvec, kvec, nullptr).vectors);
    rec.b_hat = bias_estimator_from_bases(u_hat, u_tilde);
    rec.stat_theory = statistic_theory(rec.hs_sq_err, rec.b_hat, exp.b_r(), n);
    if (obs.plug_in) rec.stat_data_driven = statistic_data_driven(rec.hs_sq_err, rec.b_hat, rec.b_hat_n, n);
    if (obs.third_subsample) {
      const RowMatrix xb = draw(exp, n, rep, kRoleXbar);
      const Matrix u_bar = cluster_columns(exp, leading(exp, xb, kvec, kvec, nullptr).vectors);
      rec.b_tilde = bias_estimator_from_bases(u_tilde, u_bar);
      rec.v_tilde = variance_estimator(rec.b_hat, rec.b_tilde);
      rec.stat_pure = statistic_pure(rec.hs_sq_err, rec.b_hat, rec.b_tilde);
    }
  }
}

void run_dense_reference(const Experiment& exp, ReplicationRecord& rec) {
  const SpectralStructure& ss = exp.structure();
  const std::size_t r = exp.config().r, n = rec.n, rep = rec.replication;
  const SymmetricOperator sh = sample_covariance(SampleBatch{draw(exp, n, rep, kRoleX)});
  const PerturbationDecomposition d = decompose(ss, r, sh);
  rec.hs_sq_err = d.proj_err_hs * d.proj_err_hs;
  rec.linear_sq = d.linear_hs * d.linear_hs;
  rec.op_err = d.e_op;
  rec.separation_ok = d.separation_ok;
  rec.proj_err_op = d.proj_err_op;
  rec.remainder_op = d.remainder_op;
  rec.b_hat_n = b_hat_n(sh, ss.dim());

  const SymmetricOperator st = sample_covariance(SampleBatch{draw(exp, n, rep, kRoleXtilde)});
  const SymmetricOperator sb = sample_covariance(SampleBatch{draw(exp, n, rep, kRoleXbar)});
  const SymmetricOperator p_tilde = empirical_projector(ss, r, st).projector;
  const SymmetricOperator p_bar = empirical_projector(ss, r, sb).projector;
  rec.b_hat = bias_estimator(d.p_hat, p_tilde);
  rec.b_tilde = bias_estimator(p_tilde, p_bar);
  rec.v_tilde = variance_estimator(rec.b_hat, rec.b_tilde);
  rec.stat_theory = statistic_theory(rec.hs_sq_err, rec.b_hat, b_r_operator(ss, r), n);
  rec.stat_data_driven = statistic_data_driven(rec.hs_sq_err, rec.b_hat, rec.b_hat_n, n);
  rec.stat_pure = statistic_pure(rec.hs_sq_err, rec.b_hat, rec.b_tilde);
}

template <class Body>
ReplicationRecord guarded(std::size_t n, std::size_t rep, Body body) {
  ReplicationRecord rec;
  rec.n = n;
  rec.replication = rep;
  fill_nan(rec);
  try {
    body(rec);
    rec.ok = true;
  } catch (const std::exception& e) {
    fill_nan(rec);
    rec.separation_ok = false;
    rec.ok = false;
    rec.failure = e.what();
  }
  return rec;
}

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

}  // namespace

ReplicationRecord run_replication(const Experiment& exp, std::size_t n, std::size_t replication) {
  return guarded(n, replication, [&](ReplicationRecord& rec) { run_fast(exp, rec); });
}

ReplicationRecord run_replication_reference(const Experiment& exp, std::size_t n, std::size_t replication) {
  return guarded(n, replication, [&](ReplicationRecord& rec) { run_dense_reference(exp, rec); });
}

std::vector<ReplicationRecord> ReplicationSet::successful() const {
  std::vector<ReplicationRecord> out;
  out.reserve(records.size());
  for (const auto& r : records)
    if (r.ok) out.push_back(r);
  return out;
}

double ReplicationSet::failure_rate() const {
  return records.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(records.size());
}

ReplicationSet run_replications(const Experiment& exp, std::size_t n, std::size_t first, std::size_t count) {
  ReplicationSet set;
  set.n = n;
  set.records.resize(count);
  const auto total = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(exp.config().workers))
  for (long i = 0; i < total; ++i) {
    set.records[static_cast<std::size_t>(i)] = run_replication(exp, n, first + static_cast<std::size_t>(i));
  }
  for (const auto& r : set.records)
    if (!r.ok) ++set.failures;
  return set;
}

ReplicationSet run_replications(const Experiment& exp, std::size_t n) {
  return run_replications(exp, n, 0, exp.config().replications);
}

namespace {

template <class F>
std::vector<double> column(const std::vector<ReplicationRecord>& recs, F f) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(f(r));
  return out;
}

bool all_finite(const std::vector<double>& x) {
  return !x.empty() && std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

AggregateResult aggregate(const Experiment& exp, const ReplicationSet& set) {
  const std::vector<ReplicationRecord> recs = set.successful();
  AggregateResult a;
  a.n = set.n;
  a.used = recs.size();
  a.failures = set.failures;
  for (double* f : {&a.m_hat, &a.s2_hat, &a.mean_minus2bhat, &a.mean_v_tilde, &a.dev_a_over_n,
                    &a.dev_minus2bhat, &a.dev_bn2, &a.dev_v_tilde, &a.dev_mean_v_tilde, &a.ks_theory,
                    &a.ks_data_driven, &a.mean_theory, &a.separation_rate, &a.mean_op_err, &a.risk_ratio}) {
    *f = kNaN;
  }
  const double nd = static_cast<double>(set.n);
  a.risk_approx = exp.a_r() / nd;
  a.var_approx = exp.b_r() * exp.b_r() / (nd * nd);
  if (recs.size() < 2) return a;

  const auto hs = column(recs, [](const auto& r) { return r.hs_sq_err; });
  a.m_hat = stats::mean(hs);
  a.s2_hat = stats::variance(hs);
  a.dev_a_over_n = std::abs(a.risk_approx - a.m_hat) / a.m_hat;
  a.dev_bn2 = std::abs(a.var_approx - a.s2_hat) / a.s2_hat;
  a.risk_ratio = a.m_hat * nd / exp.a_r();

  const auto bh = column(recs, [](const auto& r) { return r.b_hat; });
  if (all_finite(bh)) {
    double dev = 0.0, m2 = 0.0;
    for (double b : bh) {
      dev += std::abs(2.0 * b + a.m_hat) / a.m_hat;
      m2 += -2.0 * b;
    }
    a.dev_minus2bhat = dev / static_cast<double>(bh.size());
    a.mean_minus2bhat = m2 / static_cast<double>(bh.size());
    const auto th = column(recs, [](const auto& r) { return r.stat_theory; });
    a.ks_theory = stats::ks_normal(th);
    a.mean_theory = stats::mean(th);
  }
  const auto dd = column(recs, [](const auto& r) { return r.stat_data_driven; });
  if (all_finite(dd)) a.ks_data_driven = stats::ks_normal(dd);
  const auto vt = column(recs, [](const auto& r) { return r.v_tilde; });
  if (all_finite(vt)) {
    double dev = 0.0;
    for (double v : vt) dev += std::abs(v - a.s2_hat) / a.s2_hat;
    a.dev_v_tilde = dev / static_cast<double>(vt.size());
    a.mean_v_tilde = stats::mean(vt);
    a.dev_mean_v_tilde = std::abs(a.mean_v_tilde - a.s2_hat) / a.s2_hat;
  }
  const auto oe = column(recs, [](const auto& r) { return r.op_err; });
  if (all_finite(oe)) {
    a.mean_op_err = stats::mean(oe);
    a.separation_rate = static_cast<double>(std::count_if(recs.begin(), recs.end(),
                                                          [](const auto& r) { return r.separation_ok; })) /
                        static_cast<double>(recs.size());
  }
  return a;
}

DensityResult densities(const Experiment& exp, const ReplicationSet& set, double pure_range) {
  (void)exp;
  const std::vector<ReplicationRecord> recs = set.successful();
  DensityResult out;
  out.n = set.n;
  out.ks_theory = kNaN;
  out.ks_data_driven = kNaN;
  auto add = [&](const std::string& name, const std::vector<double>& x, double lo, double hi, auto pdf,
                 double mass) {
    DensityCurve c;
    c.name = name;
    c.histogram = stats::histogram(x, 0.0, lo, hi);
    for (double t : c.histogram.centers) c.reference.push_back(pdf(t) / mass);
    out.curves.push_back(std::move(c));
  };
  const auto th = column(recs, [](const auto& r) { return r.stat_theory; });
  if (all_finite(th)) {
    out.ks_theory = stats::ks_normal(th);
    add("theory", th, 0.0, 0.0, stats::normal_pdf, 1.0);
  }
  const auto dd = column(recs, [](const auto& r) { return r.stat_data_driven; });
  if (all_finite(dd)) {
    out.ks_data_driven = stats::ks_normal(dd);
    add("data_driven", dd, 0.0, 0.0, stats::normal_pdf, 1.0);
  }
  const auto pu = column(recs, [](const auto& r) { return r.stat_pure; });
  if (all_finite(pu)) {
    const double mass = 2.0 * std::atan(pure_range) / std::numbers::pi;
    add("pure", pu, -pure_range, pure_range, stats::cauchy_pdf, mass);
  }
  return out;
}

std::vector<double> sample_linear_sq(const Experiment& exp, std::size_t n, std::size_t reps) {
  std::vector<double> out(reps);
  const Matrix sv = exp.config().sigma.matrix() * exp.basis();
  const auto total = static_cast<long>(reps);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count(exp.config().workers))
  for (long i = 0; i < total; ++i) {
    const RowMatrix x = draw(exp, n, static_cast<std::size_t>(i), kRoleX);
    const Matrix cev = exp.resolvent() * (kernels::gram_apply_block(x, exp.basis()) - sv);
    out[static_cast<std::size_t>(i)] = 2.0 * cev.squaredNorm();
  }
  return out;
}

RepresentationReport verify_representation(const Experiment& exp, std::size_t n, std::size_t samples,
                                           double alpha) {
  RepresentationReport rep;
  rep.left = sample_linear_sq(exp, n, samples);
  for (double& v : rep.left) v *= static_cast<double>(n);
  rep.right.resize(samples);
  const SpectralStructure& ss = exp.structure();
  const std::size_t r = exp.config().r, m = exp.multiplicity();
  const auto total = static_cast<long>(samples);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count(exp.config().workers))
  for (long i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Vector gamma = gamma_eigenvalues(draw_batch(exp.sampler(), n, idx, "Gamma"), ss, r);
    const SampleBatch copies = draw_batch(exp.sampler(), m, idx, "Copy");
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Vector cx = exp.resolvent() * copies.vectors.row(static_cast<Eigen::Index>(k)).transpose();
      s += gamma(static_cast<Eigen::Index>(k)) * cx.squaredNorm();
    }
    rep.right[idx] = 2.0 * s;
  }
  rep.ks = stats::ks_two_sample(rep.left, rep.right);
  rep.p_value = stats::ks_two_sample_pvalue(rep.ks, rep.left.size(), rep.right.size());
  // Both sides vanish identically when C_r = 0 (single cluster).
  const bool both_zero = std::all_of(rep.left.begin(), rep.left.end(), [](double v) { return v == 0.0; }) &&
                         std::all_of(rep.right.begin(), rep.right.end(), [](double v) { return v == 0.0; });
  if (both_zero) {
    rep.ks = 0.0;
    rep.p_value = 1.0;
  }
  rep.accepted = rep.p_value > alpha;
  return rep;
}

MgfReport verify_mgf(const std::vector<double>& lambdas, const std::vector<double>& u_grid) {
  if (lambdas.empty()) throw Error(ErrorKind::InvalidArgument, "no λ values");
  double lmax = 0.0, l2 = 0.0;
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorKind::DomainViolation, "λ values must be finite and ≥ 0");
    lmax = std::max(lmax, l);
    l2 += l * l;
  }
  for (double u : u_grid) {
    if (!(u >= 0.0) || !(2.0 * u * lmax < 1.0 / std::numbers::sqrt2)) {
      std::ostringstream os;
      os << "u = " << u << " violates 2u·max λ < 2^{-1/2}";
      throw Error(ErrorKind::DomainViolation, os.str());
    }
  }
  MgfReport rep;
  for (double u : u_grid) {
    double log_upper = 0.0, log_lower = 0.0;
    for (double l : lambdas) {
      log_upper += -u * l - 0.5 * std::log1p(-2.0 * u * l);
      log_lower += u * l - 0.5 * std::log1p(2.0 * u * l);
    }
    const double log_upper_rhs = 4.0 * u * u * l2, log_lower_rhs = u * u * l2;
    rep.points.push_back({u, std::exp(log_upper), std::exp(log_upper_rhs), std::exp(log_lower),
                          std::exp(log_lower_rhs)});
    if (log_upper > log_upper_rhs || log_lower > log_lower_rhs) rep.holds = false;
  }
  return rep;
}

std::vector<EnvelopeRow> calibrate_envelopes(const EnvelopeGrid& grid) {
  std::vector<EnvelopeRow> rows;
  for (std::size_t p : grid.dims) {
    ExperimentConfig cfg = spiked_config(single_spike(p, grid.spike_variance, grid.noise_variance),
                                         grid.sample_sizes, grid.reps, grid.seed);
    cfg.observables = Observables::statistics();
    cfg.observables.bias = false;
    cfg.observables.operator_error = true;
    cfg.workers = grid.workers;
    const Experiment exp(cfg);
    for (std::size_t n : grid.sample_sizes) {
      const ReplicationSet set = run_replications(exp, n);
      if (set.failure_rate_exceeded()) {
        throw Error(ErrorKind::ConvergenceFailure, "more than 1% of envelope replications failed");
      }
      const AggregateResult agg = aggregate(exp, set);
      EnvelopeRow row;
      row.p = p;
      row.n = n;
      row.reps = agg.used;
      row.effective_rank = exp.structure().effective_rank();
      row.mean_op_err = agg.mean_op_err;
      row.envelope = risk_envelope_opnorm(exp.structure(), n);
      row.op_ratio = row.mean_op_err / row.envelope;
      row.risk_ratio = agg.risk_ratio;
      std::vector<double> xi;
      for (const auto& r : set.successful()) xi.push_back(std::abs(r.hs_sq_err - agg.m_hat));
      for (double t : {1.0, 2.0, 3.0}) {
        const double q = stats::quantile(xi, 1.0 - std::exp(-t));
        row.concentration_ratios.push_back(q * static_cast<double>(n) / (exp.b_r() * std::sqrt(t)));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

BoundCheck check_perturbation_bounds(const Experiment& exp, std::size_t n, std::size_t reps) {
  ExperimentConfig cfg = exp.config();
  cfg.observables = Observables::statistics();
  cfg.observables.bias = false;
  cfg.observables.operator_error = true;
  cfg.observables.perturbation_bounds = true;
  const Experiment local(cfg);
  const ReplicationSet set = run_replications(local, n, 0, reps);
  BoundCheck out;
  const double g = local.guarded_gap();
  for (const auto& r : set.records) {
    if (!r.ok || !r.separation_ok) {
      ++out.skipped;
      continue;
    }
    ++out.checked;
    const double pb = 4.0 * r.op_err / g;
    const double sb = 14.0 * (r.op_err / g) * (r.op_err / g);
    if (r.proj_err_op > pb) ++out.projector_violations;
    if (r.remainder_op > sb) ++out.remainder_violations;
    out.worst_projector_ratio = std::max(out.worst_projector_ratio, r.proj_err_op / pb);
    out.worst_remainder_ratio = std::max(out.worst_remainder_ratio, r.remainder_op / sb);
  }
  return out;
}

}  // namespace specpert
