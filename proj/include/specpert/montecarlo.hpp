#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specpert/linalg.hpp"
#include "specpert/sampling.hpp"
#include "specpert/spectral_model.hpp"
#include "specpert/stats.hpp"

namespace specpert {

// Which per-replication quantities to compute. Each one costs extra draws or
// eigen-solves; disabled fields are left as NaN.
struct Observables {
  bool bias = true;                  // X̃ batch, b̂, theory and data-driven statistics
  bool third_subsample = true;       // X̄ batch, b̃, Ṽ_n, pure statistic
  bool plug_in = true;               // B̂_n (second eigenvalue of Σ̂)
  bool operator_error = true;        // ‖Σ̂ − Σ‖_∞ and separation_ok
  bool linear_term = true;           // ‖L_r(E)‖₂²
  bool perturbation_bounds = false;  // ‖P̂_r − P_r‖_∞ and ‖S_r(E)‖_∞

  static Observables all();
  static Observables tables();      // what the risk and variance tables need
  static Observables statistics();  // X and X̃ only
};

enum class EigenPath {
  Auto,     // dense for p ≤ kDenseThreshold, Lanczos above
  Dense,    // form Σ̂, full eigh
  Lanczos,  // matrix-free top eigenpairs of v ↦ Xᵀ(Xv)/n
};

inline constexpr std::size_t kDenseThreshold = 256;

struct ExperimentConfig {
  SymmetricOperator sigma = SymmetricOperator::zero(1);
  std::optional<SpikedModel> spiked;  // echoed in manifests when Σ came from a spiked model
  std::size_t r = 0;                  // 0-based target cluster
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 500;
  SeedSpec seed;
  Observables observables;
  EigenPath path = EigenPath::Auto;
  int workers = 0;  // 0: OpenMP default
  bool center = false;

  void validate() const;
};

ExperimentConfig spiked_config(const SpikedModel& model, std::vector<std::size_t> sample_sizes,
                               std::size_t replications, SeedSpec seed = {});
// p = 200, n ∈ {100, 500, 2000}, 500 replications, s² = 2, σ² = 0.1.
ExperimentConfig desk_preset(SeedSpec seed = {});
// p = 1000, n ∈ {100, 200, 300, 500, 1000, 10000}, 1000 replications.
ExperimentConfig paper_preset(SeedSpec seed = {});

// Precomputed model quantities shared by every replication.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const SpectralStructure& structure() const { return ss_; }
  const GaussianSampler& sampler() const { return sampler_; }
  const Matrix& resolvent() const { return c_; }
  const Matrix& basis() const { return v_; }  // p x m_r eigenvectors of P_r
  std::size_t multiplicity() const { return static_cast<std::size_t>(v_.cols()); }
  double a_r() const { return a_; }
  double b_r() const { return b_; }
  double guarded_gap() const { return gap_; }  // NaN when undefined
  // Sorted positions of the target cluster; the empirical projector takes
  // the eigenvectors of Σ̂ at these positions.
  const std::vector<std::size_t>& positions() const { return ss_.cluster(cfg_.r); }
  bool use_lanczos() const;

 private:
  ExperimentConfig cfg_;
  SpectralStructure ss_;
  GaussianSampler sampler_;
  Matrix c_;
  Matrix v_;
  double a_ = 0.0;
  double b_ = 0.0;
  double gap_ = 0.0;
};

struct ReplicationRecord {
  std::size_t n = 0;
  std::size_t replication = 0;
  bool ok = false;
  std::string failure;

  double hs_sq_err = 0.0;  // ‖P̂_r − P_r‖₂²
  double linear_sq = 0.0;  // ‖L_r(E)‖₂²
  double b_hat = 0.0;
  double b_tilde = 0.0;
  double b_hat_n = 0.0;
  double op_err = 0.0;  // ‖Σ̂ − Σ‖_∞
  bool separation_ok = false;
  double proj_err_op = 0.0;   // ‖P̂_r − P_r‖_∞
  double remainder_op = 0.0;  // ‖S_r(E)‖_∞
  double v_tilde = 0.0;
  double stat_theory = 0.0;
  double stat_data_driven = 0.0;
  double stat_pure = 0.0;
};

// One replication on the configured path with low-rank formulas. Numeric
// errors are caught and returned as a record with ok == false.
ReplicationRecord run_replication(const Experiment& exp, std::size_t n, std::size_t replication);
// Brute-force version: dense Σ̂, full eigh, p x p projectors and the generic
// operator routines. Computes every observable; used to validate the fast path.
ReplicationRecord run_replication_reference(const Experiment& exp, std::size_t n, std::size_t replication);

struct ReplicationSet {
  std::size_t n = 0;
  std::vector<ReplicationRecord> records;  // by replication index, failures included
  std::size_t failures = 0;

  std::vector<ReplicationRecord> successful() const;
  double failure_rate() const;
  bool failure_rate_exceeded() const { return failure_rate() > 0.01; }
};

// Replications [first, first + count) in parallel; the result depends only on
// the seed and the indices, never on the worker count.
ReplicationSet run_replications(const Experiment& exp, std::size_t n, std::size_t first, std::size_t count);
ReplicationSet run_replications(const Experiment& exp, std::size_t n);

struct AggregateResult {
  std::size_t n = 0;
  std::size_t used = 0;
  std::size_t failures = 0;
  double m_hat = 0.0;            // sample mean of ‖P̂ − P‖₂²
  double s2_hat = 0.0;           // sample variance of ‖P̂ − P‖₂²
  double mean_minus2bhat = 0.0;  // mean of −2b̂
  double mean_v_tilde = 0.0;
  double risk_approx = 0.0;      // A_r / n
  double var_approx = 0.0;       // B_r² / n²

  // Risk table: |A/n − m̂|/m̂ and mean_i |2b̂_i + m̂|/m̂.
  double dev_a_over_n = 0.0;
  double dev_minus2bhat = 0.0;
  // Variance table: |B²/n² − Ŝ²|/Ŝ² and mean_i |Ṽ_i − Ŝ²|/Ŝ²; the last is also
  // reported for the averaged estimator, |mean Ṽ − Ŝ²|/Ŝ².
  double dev_bn2 = 0.0;
  double dev_v_tilde = 0.0;
  double dev_mean_v_tilde = 0.0;

  double ks_theory = 0.0;       // KS distance of the theory statistic to Φ
  double ks_data_driven = 0.0;  // KS distance of the data-driven statistic to Φ
  double mean_theory = 0.0;
  double separation_rate = 0.0;
  double mean_op_err = 0.0;
  double risk_ratio = 0.0;  // m̂ n / A_r
};

// Fields whose inputs were not computed come out NaN.
AggregateResult aggregate(const Experiment& exp, const ReplicationSet& set);

struct DensityCurve {
  std::string name;
  stats::Histogram histogram;
  std::vector<double> reference;  // reference density at the bin centers
};

struct DensityResult {
  std::size_t n = 0;
  double ks_theory = 0.0;
  double ks_data_driven = 0.0;
  std::vector<DensityCurve> curves;  // theory, data_driven, pure
};

// Histograms of the three statistics with standard normal (first two) and
// standard Cauchy (pure) overlays. The pure statistic is heavy tailed and is
// binned on [−pure_range, pure_range]; its overlay is the Cauchy density
// conditioned on that window.
DensityResult densities(const Experiment& exp, const ReplicationSet& set, double pure_range = 10.0);

// Draws of ‖L_r(E)‖₂² only (no eigen-solves).
std::vector<double> sample_linear_sq(const Experiment& exp, std::size_t n, std::size_t reps);

struct RepresentationReport {
  std::vector<double> left;   // n‖L_r(E)‖₂²
  std::vector<double> right;  // 2 Σ_k γ_k ‖C_r X^(k)‖²
  double ks = 0.0;
  double p_value = 0.0;
  bool accepted = false;  // p_value > alpha
};

RepresentationReport verify_representation(const Experiment& exp, std::size_t n, std::size_t samples,
                                           double alpha = 0.01);

struct MgfPoint {
  double u = 0.0;
  double upper_lhs = 0.0;  // Π 1/√(e^{2uλ}(1 − 2uλ))
  double upper_rhs = 0.0;  // exp(4u² Σλ²)
  double lower_lhs = 0.0;  // Π e^{uλ}/√(1 + 2uλ)
  double lower_rhs = 0.0;  // exp(u² Σλ²)
};

struct MgfReport {
  std::vector<MgfPoint> points;
  bool holds = true;
};

// Requires λ ≥ 0 and 0 ≤ u with 2u max λ < 2^{−1/2}; DomainViolation otherwise.
MgfReport verify_mgf(const std::vector<double>& lambdas, const std::vector<double>& u_grid);

struct EnvelopeRow {
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double effective_rank = 0.0;
  double mean_op_err = 0.0;
  double envelope = 0.0;
  double op_ratio = 0.0;    // mean ‖Σ̂ − Σ‖_∞ / envelope
  double risk_ratio = 0.0;  // m̂ n / A_r
  // Quantile q_{1−e^{−t}} of |ξ| = |‖P̂ − P‖₂² − m̂| over B_r √t / n, t = 1, 2, 3.
  std::vector<double> concentration_ratios;
};

struct EnvelopeGrid {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> sample_sizes;
  std::size_t reps = 20;
  double spike_variance = 2.0;
  double noise_variance = 0.1;
  SeedSpec seed;
  int workers = 0;
};

std::vector<EnvelopeRow> calibrate_envelopes(const EnvelopeGrid& grid);

struct BoundCheck {
  std::size_t checked = 0;  // separation_ok replications
  std::size_t skipped = 0;  // separation failed or numeric failure
  std::size_t projector_violations = 0;
  std::size_t remainder_violations = 0;
  double worst_projector_ratio = 0.0;  // max ‖P̂ − P‖_∞ / (4‖E‖/ḡ)
  double worst_remainder_ratio = 0.0;  // max ‖S‖_∞ / (14(‖E‖/ḡ)²)
};

// ‖P̂ − P‖_∞ ≤ 4‖E‖_∞/ḡ and ‖S‖_∞ ≤ 14(‖E‖_∞/ḡ)² over `reps` replications
// (operator_error and perturbation_bounds forced on).
BoundCheck check_perturbation_bounds(const Experiment& exp, std::size_t n, std::size_t reps);

}  // namespace specpert
