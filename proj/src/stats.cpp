#include "vfa/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "vfa/errors.hpp"

namespace vfa {

// ---- distributions ---------------------------------------------------------

std::int64_t EmpiricalDistribution::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::vector<std::int64_t> EmpiricalDistribution::expand() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(total()));
  for (std::size_t i = 0; i < support.size(); ++i) out.insert(out.end(), counts[i], support[i]);
  return out;
}

EmpiricalDistribution build_distribution(std::span<const std::int64_t> samples, std::vector<std::int64_t> support,
                                         std::string label) {
  if (samples.empty()) throw UsageError("build_distribution: no samples");
  if (support.empty()) throw UsageError("build_distribution: empty support");
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (support[i] <= support[i - 1]) throw UsageError("build_distribution: support must be strictly increasing");
  }
  EmpiricalDistribution d{std::move(label), std::move(support), {}};
  d.counts.assign(d.support.size(), 0);
  for (auto s : samples) {
    auto it = std::lower_bound(d.support.begin(), d.support.end(), s);
    if (it == d.support.end() || *it != s) {
      throw UsageError("build_distribution: sample " + std::to_string(s) + " is outside the support");
    }
    ++d.counts[static_cast<std::size_t>(it - d.support.begin())];
  }
  return d;
}

EmpiricalDistribution build_distribution(std::span<const std::int64_t> samples, std::string label) {
  std::vector<std::int64_t> support(samples.begin(), samples.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  return build_distribution(samples, std::move(support), std::move(label));
}

std::pair<EmpiricalDistribution, EmpiricalDistribution> align(const EmpiricalDistribution& a,
                                                              const EmpiricalDistribution& b) {
  std::vector<std::int64_t> support;
  std::set_union(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(),
                 std::back_inserter(support));
  auto project = [&support](const EmpiricalDistribution& d) {
    EmpiricalDistribution out{d.label, support, std::vector<std::int64_t>(support.size(), 0)};
    for (std::size_t i = 0; i < d.support.size(); ++i) {
      auto it = std::lower_bound(support.begin(), support.end(), d.support[i]);
      out.counts[static_cast<std::size_t>(it - support.begin())] = d.counts[i];
    }
    return out;
  };
  return {project(a), project(b)};
}

std::vector<double> to_probabilities(const EmpiricalDistribution& d, double smoothing_alpha) {
  if (!(smoothing_alpha >= 0.0) || !std::isfinite(smoothing_alpha)) {
    throw UsageError("to_probabilities: smoothing alpha must be finite and >= 0");
  }
  const double denom = static_cast<double>(d.total()) + smoothing_alpha * static_cast<double>(d.size());
  if (denom <= 0.0) throw UsageError("to_probabilities: empty distribution with zero smoothing");
  std::vector<double> p(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) p[i] = (static_cast<double>(d.counts[i]) + smoothing_alpha) / denom;
  return p;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw UsageError("kl_divergence: vectors differ in length");
  constexpr double kSumTolerance = 1e-9;
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(sp - 1.0) > kSumTolerance || std::abs(sq - 1.0) > kSumTolerance) {
    throw UsageError("kl_divergence: inputs must be probability vectors");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw UsageError("kl_divergence: negative probability");
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw DivergenceUndefinedError("kl_divergence: q is zero where p is positive (bin " + std::to_string(i) +
                                     "); smooth both distributions first");
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  // Gibbs' inequality; clamp rounding noise.
  return std::max(kl, 0.0);
}

// ---- incomplete gamma ------------------------------------------------------

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double log_prefactor(double s, double x) { return -x + s * std::log(x) - std::lgamma(s); }

// P(s, x) by its power series; converges for all x but is used for x < s + 1.
double gamma_p_series(double s, double x) {
  double ap = s;
  double term = 1.0 / s;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(s, x));
}

// Q(s, x) by the Legendre continued fraction (modified Lentz), for x >= s + 1.
double gamma_q_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(s, x)) * h;
}

void check_gamma_args(double s, double x) {
  if (!std::isfinite(s) || !std::isfinite(x)) throw UsageError("incomplete gamma: non-finite argument");
  if (s <= 0.0) throw UsageError("incomplete gamma: shape must be > 0");
  if (x < 0.0) throw UsageError("incomplete gamma: x must be >= 0");
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return std::clamp(1.0 - gamma_p_series(s, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(s, x), 0.0, 1.0);
}

double regularized_gamma_p(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return std::clamp(gamma_p_series(s, x), 0.0, 1.0);
  return std::clamp(1.0 - gamma_q_fraction(s, x), 0.0, 1.0);
}

double chi_squared_sf(double statistic, int df) {
  if (df < 1) throw UsageError("chi_squared_sf: df must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * statistic);
}

// ---- chi-squared -----------------------------------------------------------

std::vector<PooledBin> pool_bins(std::span<const std::int64_t> support, std::span<const double> observed,
                                 std::span<const double> expected, double min_expected) {
  if (support.size() != observed.size() || support.size() != expected.size()) {
    throw UsageError("pool_bins: length mismatch");
  }
  std::vector<PooledBin> bins;
  bins.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) bins.push_back({support[i], support[i], observed[i], expected[i]});

  auto merge = [&bins](std::size_t left) {  // merges bins[left + 1] into bins[left]
    bins[left].last = bins[left + 1].last;
    bins[left].observed += bins[left + 1].observed;
    bins[left].expected += bins[left + 1].expected;
    bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(left) + 1);
  };

  while (bins.size() > 1 && bins.front().expected < min_expected) merge(0);
  while (bins.size() > 1 && bins.back().expected < min_expected) merge(bins.size() - 2);
  for (;;) {
    if (bins.size() <= 1) break;
    auto low = std::find_if(bins.begin(), bins.end(), [&](const PooledBin& b) { return b.expected < min_expected; });
    if (low == bins.end()) break;
    // Tails are already satisfied, so a low bin here has two neighbours.
    const auto i = static_cast<std::size_t>(low - bins.begin());
    if (bins[i - 1].expected <= bins[i + 1].expected) {
      merge(i - 1);
    } else {
      merge(i);
    }
  }
  return bins;
}

ChiSquaredResult chi_squared_gof(const EmpiricalDistribution& observed, const EmpiricalDistribution& expected,
                                 double min_expected) {
  const auto [obs, exp] = align(observed, expected);
  const double n_obs = static_cast<double>(obs.total());
  const double n_exp = static_cast<double>(exp.total());
  if (n_obs < 1.0) throw UsageError("chi_squared_gof: observed distribution is empty");
  if (n_exp < 1.0) throw UsageError("chi_squared_gof: expected distribution is empty");

  std::vector<double> o(obs.size()), e(exp.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    o[i] = static_cast<double>(obs.counts[i]);
    e[i] = static_cast<double>(exp.counts[i]) * n_obs / n_exp;
  }
  ChiSquaredResult result;
  result.bins = pool_bins(obs.support, o, e, min_expected);
  if (result.bins.size() < 2) {
    throw TestDegenerateError("chi_squared_gof: fewer than 2 cells after pooling to expected count >= " +
                              std::to_string(min_expected));
  }
  double stat = 0.0;
  for (const auto& b : result.bins) {
    const double diff = b.observed - b.expected;
    stat += diff * diff / b.expected;
  }
  result.test.statistic = stat;
  result.test.df = static_cast<int>(result.bins.size()) - 1;
  result.test.p_value = chi_squared_sf(stat, result.test.df);
  return result;
}

// ---- k-sample Anderson-Darling ----------------------------------------------

namespace {

// Asymptotic percentile table: critical value = b0 + b1 / sqrt(m) + b2 / m.
constexpr std::array<double, 7> kAdB0 = {0.675, 1.281, 1.645, 1.96, 2.326, 2.573, 3.085};
constexpr std::array<double, 7> kAdB1 = {-0.245, 0.25, 0.678, 1.149, 1.822, 2.364, 3.615};
constexpr std::array<double, 7> kAdB2 = {-0.105, -0.305, -0.362, -0.391, -0.396, -0.345, -0.154};
constexpr std::array<double, 7> kAdSignificance = {0.25, 0.1, 0.05, 0.025, 0.01, 0.005, 0.001};

// Least-squares quadratic through (x_i, y_i); returns {c0, c1, c2}.
std::array<double, 3> fit_quadratic(std::span<const double> x, std::span<const double> y) {
  std::array<std::array<double, 4>, 3> a{};  // augmented normal equations
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::array<double, 3> basis = {1.0, x[i], x[i] * x[i]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += basis[r] * basis[c];
      a[r][3] += basis[r] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

}  // namespace

double anderson_darling_pvalue(double standardized, int m) {
  if (m < 1) throw UsageError("anderson_darling_pvalue: m must be >= 1");
  std::array<double, 7> critical{}, log_sig{};
  const double rm = static_cast<double>(m);
  for (std::size_t i = 0; i < critical.size(); ++i) {
    critical[i] = kAdB0[i] + kAdB1[i] / std::sqrt(rm) + kAdB2[i] / rm;
    log_sig[i] = std::log(kAdSignificance[i]);
  }
  if (standardized < critical.front()) return kAdSignificance.front();
  if (standardized > critical.back()) return kAdSignificance.back();
  const auto c = fit_quadratic(critical, log_sig);
  const double p = std::exp(c[0] + c[1] * standardized + c[2] * standardized * standardized);
  return std::clamp(p, kAdSignificance.back(), kAdSignificance.front());
}

TestResult anderson_darling_k(std::span<const std::vector<double>> samples) {
  const std::size_t k = samples.size();
  if (k < 2) throw UsageError("anderson_darling_k: need at least 2 samples");
  std::vector<double> pooled;
  for (const auto& s : samples) {
    if (s.empty()) throw UsageError("anderson_darling_k: empty sample");
    for (double v : s) {
      if (!std::isfinite(v)) throw UsageError("anderson_darling_k: non-finite observation");
    }
    pooled.insert(pooled.end(), s.begin(), s.end());
  }
  const std::size_t n_total = pooled.size();
  if (n_total < std::max<std::size_t>(k + 1, 4)) {
    throw UsageError("anderson_darling_k: need at least max(k+1, 4) pooled observations");
  }
  std::sort(pooled.begin(), pooled.end());
  if (pooled.front() == pooled.back()) throw TestDegenerateError("anderson_darling_k: all observations identical");

  // Distinct values, their multiplicities l_j and midranks B_j.
  std::vector<double> distinct;
  std::vector<double> mult;
  std::vector<double> below;  // pooled observations strictly below z_j
  for (std::size_t i = 0; i < n_total;) {
    std::size_t j = i;
    while (j < n_total && pooled[j] == pooled[i]) ++j;
    distinct.push_back(pooled[i]);
    mult.push_back(static_cast<double>(j - i));
    below.push_back(static_cast<double>(i));
    i = j;
  }
  const double n = static_cast<double>(n_total);
  const std::size_t levels = distinct.size();

  double a2 = 0.0;
  for (const auto& s : samples) {
    std::vector<double> sorted(s);
    std::sort(sorted.begin(), sorted.end());
    const double ni = static_cast<double>(sorted.size());
    double inner = 0.0;
    for (std::size_t j = 0; j < levels; ++j) {
      const auto lo = std::lower_bound(sorted.begin(), sorted.end(), distinct[j]);
      const auto hi = std::upper_bound(lo, sorted.end(), distinct[j]);
      const double f = static_cast<double>(hi - lo);
      const double m_ij = static_cast<double>(lo - sorted.begin()) + f / 2.0;
      const double b_j = below[j] + mult[j] / 2.0;
      const double denom = b_j * (n - b_j) - n * mult[j] / 4.0;
      const double diff = n * m_ij - b_j * ni;
      inner += mult[j] / n * diff * diff / denom;
    }
    a2 += inner / ni;
  }
  a2 *= (n - 1.0) / n;

  // Null variance of A2akN.
  double big_h = 0.0;
  for (const auto& s : samples) big_h += 1.0 / static_cast<double>(s.size());
  std::vector<double> harmonic(n_total, 0.0);  // harmonic[i] = sum_{j=1..i} 1/j
  for (std::size_t i = 1; i < n_total; ++i) harmonic[i] = harmonic[i - 1] + 1.0 / static_cast<double>(i);
  const double h = harmonic[n_total - 1];
  double g = 0.0;
  for (std::size_t i = 1; i + 1 < n_total; ++i) {
    g += (h - harmonic[i]) / (n - static_cast<double>(i));
  }
  const double kk = static_cast<double>(k);
  const double a = (4 * g - 6) * (kk - 1) + (10 - 6 * g) * big_h;
  const double b = (2 * g - 4) * kk * kk + 8 * h * kk + (2 * g - 14 * h - 4) * big_h - 8 * h + 4 * g - 6;
  const double c = (6 * h + 2 * g - 2) * kk * kk + (4 * h - 4 * g + 6) * kk + (2 * h - 6) * big_h + 4 * h;
  const double d = (2 * h + 6) * kk * kk - 4 * h * kk;
  const double variance = (a * n * n * n + b * n * n + c * n + d) / ((n - 1) * (n - 2) * (n - 3));
  if (!(variance > 0.0)) throw TestDegenerateError("anderson_darling_k: non-positive null variance");

  const int m = static_cast<int>(k) - 1;
  TestResult r;
  r.statistic = (a2 - m) / std::sqrt(variance);
  r.df = m;
  r.p_value = anderson_darling_pvalue(r.statistic, m);
  return r;
}

// ---- verdict ---------------------------------------------------------------

Verdict detect_shift(double kl, const TestResult& chi, const TestResult& ad, double kl_epsilon,
                     double alpha) noexcept {
  return kl > kl_epsilon && chi.p_value <= alpha && ad.p_value <= alpha ? Verdict::Shift : Verdict::NoShift;
}

const char* verdict_key(Verdict v) noexcept { return v == Verdict::Shift ? "shift" : "no-shift"; }

}  // namespace vfa
