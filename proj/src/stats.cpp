#include "tagsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tagsim/errors.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

WDistribution w_distribution(const Stream& stream) {
  if (stream.entries.empty()) throw EmptyStreamError("empty stream");

  std::map<uint32_t, uint64_t> counts;
  uint64_t w_sum = 0;
  for (const Entry& e : stream.entries) {
    const uint32_t w = window_size(e);
    counts[w] += 1;
    w_sum += w;
  }

  WDistribution dist;
  dist.total = stream.entries.size();
  dist.mean = static_cast<double>(w_sum) / static_cast<double>(dist.total);

  // Lower median: the value at 0-based index (total - 1) / 2 of the sorted
  // window sizes.
  const uint64_t median_pos = (dist.total - 1) / 2;
  uint64_t cum = 0;
  for (const auto& [w, c] : counts) {
    dist.w.push_back(w);
    dist.count.push_back(c);
    dist.pmf.push_back(static_cast<double>(c) /
                       static_cast<double>(dist.total));
    if (cum <= median_pos && median_pos < cum + c) dist.median = w;
    cum += c;
  }
  return dist;
}

std::vector<RankCount> rank_frequency(const Lexicon& lexicon) {
  std::vector<RankCount> out;
  out.reserve(lexicon.size());
  for (TagId id = 0; id < lexicon.size(); ++id) {
    out.push_back({0, lexicon.count(id), id});
  }
  std::sort(out.begin(), out.end(), [](const RankCount& a, const RankCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.tag < b.tag;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

std::vector<GrowthPoint> heaps_curve(const Stream& stream) {
  std::vector<GrowthPoint> curve;
  std::vector<char> seen(stream.tags.size(), 0);
  uint64_t n = 0;
  uint64_t v = 0;
  uint64_t next_checkpoint = 1;
  for (const Entry& e : stream.entries) {
    for (TagId t : e.tags) {
      ++n;
      if (!seen[t]) {
        seen[t] = 1;
        ++v;
      }
      if (n == next_checkpoint) {
        curve.push_back({n, v});
        next_checkpoint *= 2;
      }
    }
  }
  if (n > 0 && (curve.empty() || curve.back().n != n)) curve.push_back({n, v});
  return curve;
}

LogLogFit loglog_slope(const std::vector<std::pair<double, double>>& points,
                       double x_lo, double x_hi) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points) {
    if (x < x_lo || x > x_hi || x <= 0.0 || y <= 0.0) continue;
    logs.emplace_back(std::log10(x), std::log10(y));
  }
  if (logs.size() < 3) {
    throw InsufficientPointsError(
        "need at least 3 positive points in range, have " +
        std::to_string(logs.size()));
  }

  const double n = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, ly] : logs) {
    mx += lx;
    my += ly;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    syy += (ly - my) * (ly - my);
    sxy += (lx - mx) * (ly - my);
  }

  LogLogFit fit;
  fit.points_used = logs.size();
  if (sxx == 0.0) {
    throw InsufficientPointsError("all points share one x value");
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace tagsim
