#include "specpert/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "specpert/error.hpp"

namespace specpert::stats {

namespace {

void require(std::size_t n, std::size_t min, const char* what) {
  if (n < min) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace

double mean(std::span<const double> x) {
  require(x.size(), 1, "mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  require(x.size(), 2, "variance needs at least two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double variance_standard_error(std::span<const double> x) {
  require(x.size(), 4, "variance standard error needs at least four values");
  const double n = static_cast<double>(x.size());
  const double m = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  const double s2 = m2 * n / (n - 1.0);
  return std::sqrt(std::max(0.0, (m4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n));
}

double standard_error_of_mean(std::span<const double> x) {
  return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

double quantile(std::vector<double> x, double q) {
  require(x.size(), 1, "quantile of an empty sample");
  if (q < 0.0 || q > 1.0) throw Error(ErrorKind::InvalidArgument, "quantile level outside [0, 1]");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * x[lo] + w * x[hi];
}

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<double>(), x); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double cauchy_pdf(double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); }

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  require(x.size(), 1, "KS distance of an empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_normal(std::vector<double> x) { return ks_one_sample(std::move(x), normal_cdf); }

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(a.size(), 1, "KS distance of an empty sample");
  require(b.size(), 1, "KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // For small λ the alternating series converges slowly; use the dual form
  // 1 − √(2π)/λ Σ e^{−(2k−1)²π²/(8λ²)}.
  if (lambda < 1.18) {
    const double y = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      s += std::exp(-odd * odd * y);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
  require(n, 1, "empty sample");
  require(m, 1, "empty sample");
  const double me = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double root = std::sqrt(me);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

double ks_normal_bootstrap_se(std::span<const double> x, std::size_t resamples, std::uint64_t seed) {
  require(x.size(), 2, "bootstrap needs at least two values");
  require(resamples, 2, "bootstrap needs at least two resamples");
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  std::vector<double> ks(resamples), draw(x.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    for (double& v : draw) v = x[pick(gen)];
    ks[b] = ks_normal(draw);
  }
  return std::sqrt(variance(ks));
}

Histogram histogram(std::vector<double> x, double bin_width, double lo, double hi) {
  if (lo < hi) {
    std::erase_if(x, [&](double v) { return v < lo || v > hi; });
  }
  require(x.size(), 2, "histogram needs at least two values");
  std::sort(x.begin(), x.end());
  double width = bin_width;
  if (width <= 0.0) {
    const double iqr = quantile(x, 0.75) - quantile(x, 0.25);
    width = 2.0 * iqr / std::cbrt(static_cast<double>(x.size()));
  }
  const double xmin = x.front(), xmax = x.back();
  if (!(width > 0.0)) width = std::max(xmax - xmin, 1.0);
  const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((xmax - xmin) / width)));
  Histogram h;
  h.bin_width = width;
  h.centers.resize(bins);
  h.density.assign(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) h.centers[b] = xmin + (static_cast<double>(b) + 0.5) * width;
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - xmin) / width);
    h.density[std::min(b, bins - 1)] += 1.0;
  }
  const double norm = static_cast<double>(x.size()) * width;
  for (double& d : h.density) d /= norm;
  return h;
}

}  // namespace specpert::stats
