#include "kevt/blocks.hpp"

#include <algorithm>
#include <cmath>

#include "kevt/ei.hpp"
#include "kevt/error.hpp"
#include "kevt/rng.hpp"

namespace kevt {

namespace {

double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::pair<double, double> percentile_band(std::vector<double> draws, double confidence) {
  std::sort(draws.begin(), draws.end());
  const double a = 0.5 * (1.0 - confidence);
  return {sorted_quantile(draws, a), sorted_quantile(draws, 1.0 - a)};
}

}  // namespace

BlockMaxSeries block_maxima(std::span<const double> series, std::size_t n, std::string label) {
  if (n == 0) throw InvalidInput("block length must be positive");
  if (series.size() < n) throw InsufficientData("series shorter than one block");
  BlockMaxSeries out;
  out.block_length = n;
  out.n_blocks = series.size() / n;
  out.source_label = std::move(label);
  out.maxima.reserve(out.n_blocks);
  for (std::size_t b = 0; b < out.n_blocks; ++b) {
    const auto first = series.begin() + static_cast<std::ptrdiff_t>(b * n);
    out.maxima.push_back(*std::max_element(first, first + static_cast<std::ptrdiff_t>(n)));
  }
  return out;
}

BlockMaxSeries block_maxima(const std::vector<std::vector<double>>& segments, std::size_t n,
                            std::string label) {
  if (segments.empty()) throw InsufficientData("no series to block");
  BlockMaxSeries out;
  out.block_length = n;
  out.n_series = segments.size();
  out.source_label = std::move(label);
  for (const auto& s : segments) {
    if (s.size() != segments.front().size())
      throw InvalidInput("all segments must have the same length");
    BlockMaxSeries one = block_maxima(s, n);
    out.n_blocks = one.n_blocks;
    out.maxima.insert(out.maxima.end(), one.maxima.begin(), one.maxima.end());
  }
  return out;
}

std::vector<double> empirical_return_levels(std::span<const double> series, std::size_t n,
                                            std::span<const double> levels) {
  const BlockMaxSeries bm = block_maxima(series, n);
  std::vector<double> sorted = bm.maxima;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  for (double q : levels) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("quantile level must lie in (0, 1)");
    if ((1.0 - q) * static_cast<double>(sorted.size()) < kMinTailCount)
      throw InsufficientData("too few blocks for the requested quantile level");
    out.push_back(sorted_quantile(sorted, q));
  }
  return out;
}

double model_quantile(const GevParams& p, double level) { return return_level(p, 1.0 - level); }

std::vector<double> default_levels() {
  return {0.8, 0.85, 0.9, 0.95, 0.98, 0.99, 0.995, 0.998, 0.999, 0.9995, 0.9999};
}

ReturnLevelTable compare_return_levels(const FitResult& mle, const GevParams& predicted,
                                       const BlockMaxSeries& empirical,
                                       std::span<const double> levels,
                                       const BootstrapOptions& opts) {
  const std::size_t n_emp = empirical.maxima.size();
  for (double q : levels) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("quantile level must lie in (0, 1)");
    if ((1.0 - q) * static_cast<double>(n_emp) < kMinTailCount)
      throw InsufficientData("too few empirical blocks for quantile level " + std::to_string(q));
  }
  if (!(opts.confidence > 0.0 && opts.confidence < 1.0))
    throw InvalidInput("confidence must lie in (0, 1)");

  std::vector<double> sorted = empirical.maxima;
  std::sort(sorted.begin(), sorted.end());

  const std::size_t nq = levels.size();
  std::vector<std::vector<double>> emp_draws(nq), mle_draws(nq);

  const CounterStream emp_rng(opts.seed, 1);
  std::vector<double> resample(n_emp);
  for (int b = 0; b < opts.empirical_resamples; ++b) {
    const auto base = static_cast<std::uint64_t>(b) * ((n_emp + 1) / 2);
    for (std::size_t i = 0; i < n_emp; ++i) {
      const double u = emp_rng.uniform(base + i / 2, static_cast<unsigned>(i % 2));
      resample[i] = empirical.maxima[std::min(n_emp - 1, static_cast<std::size_t>(u * n_emp))];
    }
    std::sort(resample.begin(), resample.end());
    for (std::size_t j = 0; j < nq; ++j) emp_draws[j].push_back(sorted_quantile(resample, levels[j]));
  }

  const CounterStream par_rng(opts.seed, 2);
  const std::size_t n_fit = mle.n_samples;
  std::vector<double> synth(n_fit);
  for (int b = 0; b < opts.parametric_resamples && n_fit >= kMinFitSamples; ++b) {
    const auto base = static_cast<std::uint64_t>(b) * ((n_fit + 1) / 2);
    for (std::size_t i = 0; i < n_fit; ++i) {
      double u = par_rng.uniform(base + i / 2, static_cast<unsigned>(i % 2));
      if (u <= 0.0) u = 0x1.0p-53;
      synth[i] = return_level(mle.params, u);
    }
    try {
      const FitResult f = fit_gev_mle(synth);
      if (!f.converged) continue;
      for (std::size_t j = 0; j < nq; ++j) mle_draws[j].push_back(model_quantile(f.params, levels[j]));
    } catch (const Error&) {
      continue;
    }
  }

  ReturnLevelTable table;
  for (std::size_t j = 0; j < nq; ++j) {
    ReturnLevelRow row;
    row.level = levels[j];
    row.return_period = 1.0 / (1.0 - levels[j]);
    row.z_mle = model_quantile(mle.params, levels[j]);
    row.z_pred = model_quantile(predicted, levels[j]);
    row.z_emp = sorted_quantile(sorted, levels[j]);
    if (!emp_draws[j].empty()) {
      std::tie(row.emp_lo, row.emp_hi) = percentile_band(emp_draws[j], opts.confidence);
    } else {
      row.emp_lo = row.emp_hi = row.z_emp;
    }
    if (!mle_draws[j].empty()) {
      std::tie(row.mle_lo, row.mle_hi) = percentile_band(mle_draws[j], opts.confidence);
    } else {
      row.mle_lo = row.mle_hi = row.z_mle;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace kevt
