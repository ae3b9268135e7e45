#pragma once

#include <cstdint>
#include <vector>

#include "tagsim/model.hpp"

namespace tagsim {

/// Exact per-integer-w distribution of window sizes. The PMF is kept per
/// value (no display binning), so gaps in the support stay visible.
struct WDistribution {
  std::vector<uint32_t> w;        // sorted support
  std::vector<uint64_t> count;    // parallel to w
  std::vector<double> pmf;        // parallel to w, sums to 1 within 1e-12
  uint64_t total = 0;             // number of entries
  uint32_t median = 0;            // lower median
  double mean = 0.0;
};

/// Throws EmptyStreamError on an empty stream.
WDistribution w_distribution(const Stream& stream);

/// Rank-frequency table: counts sorted descending, rank 1-based, ties
/// broken by tag id ascending. Sum of counts equals the lexicon total.
struct RankCount {
  uint64_t rank;
  uint64_t count;
  TagId tag;
};
std::vector<RankCount> rank_frequency(const Lexicon& lexicon);

/// Vocabulary-growth curve sampled over the flattened annotation sequence
/// at geometric checkpoints N = 1, 2, 4, ... plus the final N.
struct GrowthPoint {
  uint64_t n;  // annotations so far
  uint64_t v;  // distinct tags so far
};
std::vector<GrowthPoint> heaps_curve(const Stream& stream);

/// Ordinary least squares on log10-transformed points over x in
/// [x_lo, x_hi]. Points outside the range or with a non-positive coordinate
/// are skipped. Throws InsufficientPointsError when fewer than 3 remain.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;  // in log10 units
  double r2 = 0.0;
  std::size_t points_used = 0;
};
LogLogFit loglog_slope(const std::vector<std::pair<double, double>>& points,
                       double x_lo, double x_hi);

}  // namespace tagsim
