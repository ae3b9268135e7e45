#include "tagsim/alphaw.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tagsim/errors.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

namespace {

constexpr double kZ975 = 1.959963984540054;  // two-sided 5% normal quantile

/// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) /
                              2.0 +
                          1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::vector<NoveltyEntry> annotate_novelty(const Stream& stream,
                                           bool binary_innovation) {
  std::vector<NoveltyEntry> out;
  out.reserve(stream.entries.size());
  std::vector<char> seen(stream.tags.size(), 0);
  for (const Entry& e : stream.entries) {
    NoveltyEntry ne;
    ne.index = e.index;
    ne.timestamp = e.timestamp;
    ne.w = window_size(e);
    for (TagId t : e.tags) {
      if (!seen[t]) {
        seen[t] = 1;
        ++ne.novel_count;
      }
    }
    ne.alpha = binary_innovation
                   ? (ne.novel_count > 0 ? 1.0 : 0.0)
                   : static_cast<double>(ne.novel_count) /
                         static_cast<double>(ne.w);
    out.push_back(ne);
  }
  return out;
}

int bin_index(uint32_t w, uint32_t w_max, int num_bins) {
  if (w_max <= 1) {
    throw DegenerateRangeError("all windows have size " +
                               std::to_string(w_max) +
                               "; log binning has no range");
  }
  // The 1e-9 nudge keeps exact log ratios (e.g. ln 8 / ln 64) from landing
  // one ulp below the integer the formula specifies.
  const double raw = static_cast<double>(num_bins) *
                         (std::log(static_cast<double>(w)) /
                          std::log(static_cast<double>(w_max))) +
                     1e-9;
  int b = static_cast<int>(std::floor(raw));
  if (b >= num_bins) b = num_bins - 1;  // attained only at w = w_max
  if (b < 0) b = 0;
  return b;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::positive:
      return "positive";
    case Classification::negative:
      return "negative";
    case Classification::none:
      return "none";
    case Classification::insufficient:
      return "insufficient";
  }
  return "insufficient";
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return 0.0;
  return pearson(average_ranks(xs), average_ranks(ys));
}

double spearman_critical(std::size_t n, double significance) {
  if (n < 2) return 2.0;
  if (n <= 9) {
    // Exact null distribution: rho over all n! rank permutations of one
    // side. With distinct ranks rho = 1 - 6*S/t where t = n(n^2-1) and S is
    // the sum of squared rank differences, so |rho| = |t - 6S| / t. The
    // enumeration stays in integers: grouping by the numerator keeps the
    // +rho/-rho sides of one tie in one run (as doubles they can differ by
    // an ulp and split it).
    const int64_t t = static_cast<int64_t>(n) *
                      (static_cast<int64_t>(n) * static_cast<int64_t>(n) - 1);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::map<int64_t, uint64_t> tail;  // |t - 6S| -> permutation count
    uint64_t total = 0;
    do {
      int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const int64_t d = static_cast<int64_t>(perm[i]) -
                          static_cast<int64_t>(i + 1);
        s += d * d;
      }
      tail[std::abs(t - 6 * s)] += 1;
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Smallest c with P(|rho| >= c) <= significance: walk the numerators
    // from the largest down and stop before the mass budget is exceeded.
    const auto budget = static_cast<uint64_t>(
        significance * static_cast<double>(total) + 1e-9);
    uint64_t mass = 0;
    double crit = 2.0;  // unattainable when even the maximum is too likely
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
      if (mass + it->second > budget) break;
      mass += it->second;
      crit = static_cast<double>(it->first) / static_cast<double>(t);
    }
    return crit;
  }
  return kZ975 / std::sqrt(static_cast<double>(n) - 1.0);
}

Classification classify(double rho, std::size_t points, double threshold) {
  if (points < 5) return Classification::insufficient;
  const double gate = std::max(threshold, spearman_critical(points));
  if (rho >= gate) return Classification::positive;
  if (rho <= -gate) return Classification::negative;
  return Classification::none;
}

BinnedAlphaReport binned_alpha(std::span<const NoveltyEntry> entries,
                               const AlphaWConfig& config, int period,
                               int64_t period_start) {
  BinnedAlphaReport report;
  report.period = period;
  report.period_start = period_start;

  std::vector<const NoveltyEntry*> kept;
  kept.reserve(entries.size());
  for (const NoveltyEntry& e : entries) {
    if (config.w_cap && e.w > *config.w_cap) {
      ++report.capped_out;
      continue;
    }
    kept.push_back(&e);
  }
  if (kept.empty()) throw EmptyStreamError("no entries after the w cap");

  report.entries = kept.size();
  uint32_t w_max = 0;
  for (const NoveltyEntry* e : kept) w_max = std::max(w_max, e->w);
  report.w_max = w_max;
  report.degenerate_range = w_max <= 1;

  const int num_bins = report.degenerate_range ? 1 : config.num_bins;
  std::vector<NeumaierSum> alpha_sum(num_bins);
  std::vector<NeumaierSum> w_sum(num_bins);
  std::vector<uint64_t> count(num_bins, 0);
  NeumaierSum total_alpha;
  for (const NoveltyEntry* e : kept) {
    const int b =
        report.degenerate_range ? 0 : bin_index(e->w, w_max, num_bins);
    alpha_sum[b].add(e->alpha);
    w_sum[b].add(static_cast<double>(e->w));
    count[b] += 1;
    total_alpha.add(e->alpha);
  }
  report.mean_alpha =
      total_alpha.value() / static_cast<double>(report.entries);

  for (int b = 0; b < num_bins; ++b) {
    if (count[b] == 0) continue;
    AlphaBin bin;
    bin.bin = b;
    bin.count = count[b];
    bin.mean_w = w_sum[b].value() / static_cast<double>(count[b]);
    bin.mean_alpha = alpha_sum[b].value() / static_cast<double>(count[b]);
    bin.retained = count[b] > config.min_bin_entries;
    if (bin.retained) ++report.retained_bins;
    report.bins.push_back(bin);
  }
  if (report.retained_bins == 0) {
    throw NoRetainedBinsError("no bin exceeds " +
                              std::to_string(config.min_bin_entries) +
                              " entries");
  }

  std::vector<double> xs, ys;
  for (const AlphaBin& b : report.bins) {
    if (!b.retained) continue;
    xs.push_back(b.mean_w);
    ys.push_back(b.mean_alpha);
  }
  report.rho = spearman_rho(xs, ys);
  report.rho_threshold_used =
      std::max(config.rho_threshold, spearman_critical(xs.size()));
  report.classification =
      report.degenerate_range
          ? Classification::insufficient
          : classify(report.rho, xs.size(), config.rho_threshold);
  return report;
}

AlphaWAnalysis alpha_w_analysis(const Stream& stream,
                                const AlphaWConfig& config) {
  if (stream.entries.empty()) throw EmptyStreamError("empty stream");
  if (config.period_days < 1) throw ConfigError("period_days: must be >= 1");
  if (config.num_bins < 1) throw ConfigError("num_bins: must be >= 1");

  const std::vector<NoveltyEntry> novelty =
      annotate_novelty(stream, config.binary_innovation);

  AlphaWAnalysis analysis;
  analysis.origin = novelty.front().timestamp;
  analysis.period_days = config.period_days;
  const int64_t span = static_cast<int64_t>(config.period_days) * 86400;

  const auto run_period = [&](std::span<const NoveltyEntry> part, int period,
                              int64_t start) {
    try {
      analysis.periods.push_back(binned_alpha(part, config, period, start));
    } catch (const NoRetainedBinsError&) {
      ++analysis.omitted_periods;
    } catch (const EmptyStreamError&) {
      ++analysis.omitted_periods;
    }
  };

  std::size_t begin = 0;
  auto period_of = [&](const NoveltyEntry& e) {
    return static_cast<int>((e.timestamp - analysis.origin) / span);
  };
  while (begin < novelty.size()) {
    const int period = period_of(novelty[begin]);
    std::size_t end = begin + 1;
    while (end < novelty.size() && period_of(novelty[end]) == period) ++end;
    run_period(std::span(novelty).subspan(begin, end - begin), period,
               analysis.origin + static_cast<int64_t>(period) * span);
    begin = end;
  }

  try {
    analysis.overall = binned_alpha(novelty, config, -1, analysis.origin);
  } catch (const NoRetainedBinsError&) {
  } catch (const EmptyStreamError&) {
  }
  return analysis;
}

}  // namespace tagsim
