#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace specpert::stats {

double mean(std::span<const double> x);
// Unbiased (n − 1) sample variance.
double variance(std::span<const double> x);
// Standard error of the unbiased sample variance, from the fourth central moment:
// Var(s²) ≈ (m₄ − s⁴ (n − 3)/(n − 1)) / n.
double variance_standard_error(std::span<const double> x);
double standard_error_of_mean(std::span<const double> x);
double quantile(std::vector<double> x, double q);

double normal_cdf(double x);
double normal_pdf(double x);
double cauchy_pdf(double x);

// sup_x |F_n(x) − F(x)| for a continuous reference CDF.
double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
double ks_normal(std::vector<double> x);
// sup_x |F_n(x) − G_m(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}, the limiting KS survival function.
double kolmogorov_survival(double lambda);
// Asymptotic p-value with the Stephens small-sample correction
// λ = (√m_e + 0.12 + 0.11/√m_e) D, m_e = n m / (n + m).
double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m);

// Bootstrap standard error of the one-sample KS distance to Φ.
double ks_normal_bootstrap_se(std::span<const double> x, std::size_t resamples, std::uint64_t seed);

struct Histogram {
  std::vector<double> centers;
  std::vector<double> density;  // integrates to 1 over the covered range
  double bin_width = 0.0;
};

// Freedman–Diaconis width 2 IQR n^{−1/3} unless `bin_width` > 0. Values
// outside [lo, hi] (when lo < hi) are dropped before binning.
Histogram histogram(std::vector<double> x, double bin_width = 0.0, double lo = 0.0, double hi = 0.0);

}  // namespace specpert::stats
