#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vfa {

/// Histogram over an ordered discrete support (rank ordinals or hand totals).
struct EmpiricalDistribution {
  std::string label;
  std::vector<std::int64_t> support;  // strictly increasing
  std::vector<std::int64_t> counts;   // same length as support

  std::int64_t total() const noexcept;
  std::size_t size() const noexcept { return support.size(); }
  /// Samples in support order, each value repeated count times.
  std::vector<std::int64_t> expand() const;
  friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;
};

/// Tallies samples over an explicit support. Throws UsageError on an empty
/// sample list, an unsorted/duplicated support, or a sample outside it.
EmpiricalDistribution build_distribution(std::span<const std::int64_t> samples,
                                         std::vector<std::int64_t> support, std::string label = {});

/// Same, with the support taken as the sorted set of distinct samples.
EmpiricalDistribution build_distribution(std::span<const std::int64_t> samples, std::string label = {});

/// Re-expresses both distributions over the sorted union of their supports.
std::pair<EmpiricalDistribution, EmpiricalDistribution> align(const EmpiricalDistribution& a,
                                                              const EmpiricalDistribution& b);

/// Additive smoothing: p_i = (count_i + alpha) / (N + alpha * |support|).
std::vector<double> to_probabilities(const EmpiricalDistribution& d, double smoothing_alpha = 0.0);

/// D_KL(p || q) in nats. Zero-probability bins of p contribute nothing.
/// Throws DivergenceUndefinedError when q_i == 0 < p_i, UsageError on a
/// length mismatch or vectors that do not sum to 1.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Upper regularized incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
double regularized_gamma_q(double s, double x);
/// Lower counterpart P(s, x) = 1 - Q(s, x).
double regularized_gamma_p(double s, double x);

/// Chi-squared survival function.
double chi_squared_sf(double statistic, int df);

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// A run of adjacent support values merged into one chi-squared cell.
struct PooledBin {
  std::int64_t first = 0;  // lowest support value in the cell
  std::int64_t last = 0;   // highest support value in the cell
  double observed = 0.0;
  double expected = 0.0;
};

struct ChiSquaredResult {
  TestResult test;
  std::vector<PooledBin> bins;
};

inline constexpr double kMinExpectedCount = 5.0;

/// Goodness of fit of `observed` against `expected` scaled to the observed
/// total. Cells are pooled from both tails inward, then any remaining interior
/// cell below `min_expected` merges into its smaller neighbour.
/// Throws TestDegenerateError when fewer than two cells remain.
ChiSquaredResult chi_squared_gof(const EmpiricalDistribution& observed, const EmpiricalDistribution& expected,
                                 double min_expected = kMinExpectedCount);

/// Pools expected counts (already on the observed scale); exposed for tests.
std::vector<PooledBin> pool_bins(std::span<const std::int64_t> support, std::span<const double> observed,
                                 std::span<const double> expected, double min_expected = kMinExpectedCount);

/// k-sample Anderson-Darling test for ties (midrank form A2akN), standardized
/// as (A2 - (k-1)) / sigma_N. The p-value interpolates log significance over
/// the asymptotic percentile table and is clamped to [0.001, 0.25].
/// Throws UsageError for k < 2, an empty sample or fewer than max(k+1, 4)
/// pooled observations; TestDegenerateError when every value is identical.
TestResult anderson_darling_k(std::span<const std::vector<double>> samples);

/// p-value for a standardized statistic with k-1 = m degrees of freedom.
double anderson_darling_pvalue(double standardized, int m);

enum class Verdict { Shift, NoShift };

inline constexpr double kShiftAlpha = 0.05;
inline constexpr double kKlEpsilon = 1e-9;

/// Shift iff kl > epsilon and both p-values <= alpha.
Verdict detect_shift(double kl, const TestResult& chi, const TestResult& ad, double kl_epsilon = kKlEpsilon,
                     double alpha = kShiftAlpha) noexcept;

const char* verdict_key(Verdict v) noexcept;  // "shift" / "no-shift"

}  // namespace vfa
