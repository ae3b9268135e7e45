#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tagsim/model.hpp"

namespace tagsim {

struct AlphaWConfig {
  int num_bins = 20;
  /// A bin is retained only when its entry count strictly exceeds this.
  uint64_t min_bin_entries = 100;
  /// Entries with w above the cap are excluded from this analysis only.
  std::optional<uint32_t> w_cap;
  int period_days = 91;
  /// Correlation calls need |rho| to reach at least this AND the 95% null
  /// critical value for the retained-bin count; otherwise "none".
  double rho_threshold = 0.2;
  /// Score an entry 1 if it contains any novel tag, else 0, instead of the
  /// default novel fraction novel_count / w.
  bool binary_innovation = false;
  /// Number of leading periods excluded from the classification summary
  /// (their reports are still emitted). Early streams overstate novelty.
  int burn_in_periods = 0;
};

/// Per-entry innovation measurement. Novelty is global: a tag is novel in
/// the single entry where it first appears in the whole stream.
struct NoveltyEntry {
  uint64_t index = 0;
  int64_t timestamp = 0;
  uint32_t w = 0;
  uint32_t novel_count = 0;
  double alpha = 0.0;  // novel_count / w, or the binary variant
};

/// Single pass over a time-ordered stream. The first entry always has
/// alpha = 1; the novel counts sum to the final vocabulary size exactly.
std::vector<NoveltyEntry> annotate_novelty(const Stream& stream,
                                           bool binary_innovation = false);

/// Logarithmic bin of w among num_bins bins:
/// floor(num_bins * ln(w) / ln(w_max)), with the raw value num_bins
/// (attained only at w = w_max) clamped to num_bins - 1. Throws
/// DegenerateRangeError when w_max <= 1.
int bin_index(uint32_t w, uint32_t w_max, int num_bins = 20);

enum class Classification { positive, negative, none, insufficient };
std::string to_string(Classification c);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side has zero rank variance or fewer than 2 points.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

/// Two-sided critical value of |rho| at the given significance under the
/// independence null: exact permutation enumeration for n <= 9, the normal
/// approximation z / sqrt(n - 1) beyond. Returns 2 (unattainable) for n < 2.
double spearman_critical(std::size_t n, double significance = 0.05);

/// Classification rule: fewer than 5 points -> insufficient; otherwise
/// positive/negative when rho clears max(threshold, critical value at 5%),
/// else none.
Classification classify(double rho, std::size_t points, double threshold);

struct AlphaBin {
  int bin = 0;
  uint64_t count = 0;
  double mean_w = 0.0;
  double mean_alpha = 0.0;
  bool retained = false;  // count > min_bin_entries
};

/// One period's binned measurement plus its correlation call.
struct BinnedAlphaReport {
  int period = 0;
  int64_t period_start = 0;
  uint64_t entries = 0;      // after the w cap
  uint64_t capped_out = 0;   // excluded by the w cap
  uint32_t w_max = 0;        // per-period max w after the cap
  double mean_alpha = 0.0;   // entry-level mean (compensated sum)
  bool degenerate_range = false;  // w_max <= 1: single-bin collapse
  std::vector<AlphaBin> bins;     // non-empty bins, ascending bin index
  std::size_t retained_bins = 0;
  double rho = 0.0;                 // over retained (mean_w, mean_alpha)
  double rho_threshold_used = 0.0;  // max(config threshold, 95% critical)
  Classification classification = Classification::insufficient;
};

/// Bin one period's entries and classify the alpha-w relation. The weighted
/// mean of every bin's mean_alpha (weights = counts, discarded bins
/// included) reproduces mean_alpha exactly. Throws NoRetainedBinsError when
/// no bin clears min_bin_entries, and EmptyStreamError when the period has
/// no entries after the cap.
BinnedAlphaReport binned_alpha(std::span<const NoveltyEntry> entries,
                               const AlphaWConfig& config, int period = 0,
                               int64_t period_start = 0);

struct AlphaWAnalysis {
  int64_t origin = 0;        // first entry timestamp
  int period_days = 0;
  std::vector<BinnedAlphaReport> periods;  // chronological; empty or
                                           // all-discarded periods omitted
  uint64_t omitted_periods = 0;            // count of such periods
  /// Whole stream as one period (period id -1); absent when every bin was
  /// discarded.
  std::optional<BinnedAlphaReport> overall;
};

/// Segment the stream into fixed periods from the first timestamp, measure
/// novelty once globally, and report per period plus overall. Throws
/// EmptyStreamError on an empty stream.
AlphaWAnalysis alpha_w_analysis(const Stream& stream,
                                const AlphaWConfig& config);

}  // namespace tagsim
