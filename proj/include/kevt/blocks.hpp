#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kevt/evt.hpp"

namespace kevt {

/// Maxima of non-overlapping blocks, pooled over one or more source series.
struct BlockMaxSeries {
  std::vector<double> maxima;
  std::size_t block_length = 0;
  std::size_t n_blocks = 0;  // per source series
  std::size_t n_series = 1;
  std::string source_label;
};

/// Consecutive blocks aligned to the series start; the trailing partial
/// block is dropped.
BlockMaxSeries block_maxima(std::span<const double> series, std::size_t n,
                            std::string label = {});

/// Blocks each segment separately and concatenates the maxima. All
/// segments must have the same length.
BlockMaxSeries block_maxima(const std::vector<std::vector<double>>& segments, std::size_t n,
                            std::string label = {});

/// Empirical z for each quantile level q of the block-maxima distribution
/// (type-7 order-statistic interpolation). Requires (1 - q) * n_blocks >= 5.
std::vector<double> empirical_return_levels(std::span<const double> series, std::size_t n,
                                            std::span<const double> levels);

inline constexpr double kMinTailCount = 5.0;

/// Model return level at quantile level q: G(z) = q.
double model_quantile(const GevParams& p, double level);

struct ReturnLevelRow {
  double level = 0.0;          // non-exceedance probability q
  double return_period = 0.0;  // 1 / (1 - q), in blocks
  double z_mle = 0.0;
  double mle_lo = 0.0;
  double mle_hi = 0.0;
  double z_pred = 0.0;
  double z_emp = 0.0;
  double emp_lo = 0.0;
  double emp_hi = 0.0;
};

struct ReturnLevelTable {
  std::vector<ReturnLevelRow> rows;
};

struct BootstrapOptions {
  int empirical_resamples = 500;
  /// Parametric bootstrap of the MLE fit; 0 disables (bounds equal z_mle).
  int parametric_resamples = 500;
  double confidence = 0.95;
  std::uint64_t seed = 0;
};

/// The quantile grid 0.8 ... 0.9999 used for tail comparisons.
std::vector<double> default_levels();

/// Return levels of the MLE fit (with parametric bootstrap band), of the
/// scaling prediction, and of the empirical block maxima (with
/// nonparametric bootstrap band) on a common quantile grid.
ReturnLevelTable compare_return_levels(const FitResult& mle, const GevParams& predicted,
                                       const BlockMaxSeries& empirical,
                                       std::span<const double> levels,
                                       const BootstrapOptions& opts = {});

}  // namespace kevt
