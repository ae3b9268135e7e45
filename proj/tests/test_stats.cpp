#include <doctest.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tagsim/errors.hpp"
#include "tagsim/stats.hpp"

using tagsim::Stream;

namespace {

// Builds a stream from windows of tag names; one entry per window, one user,
// timestamps 0, 1, 2, ...
Stream make_stream(const std::vector<std::vector<std::string>>& windows) {
  Stream s;
  const auto user = s.users.intern("u");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    tagsim::Entry e;
    e.index = i;
    e.user = user;
    e.resource = s.resources.intern("r" + std::to_string(i));
    e.timestamp = static_cast<int64_t>(i);
    for (const std::string& t : windows[i]) {
      e.tags.push_back(s.tags.intern_use(t));
    }
    s.entries.push_back(std::move(e));
  }
  return s;
}

}  // namespace

TEST_CASE("window-size distribution: support, pmf, median, mean") {
  const Stream s = make_stream({{"a"}, {"b", "c"}, {"d", "e"}, {"f", "g", "h"}});
  const auto d = tagsim::w_distribution(s);
  REQUIRE(d.w == std::vector<uint32_t>{1, 2, 3});
  CHECK(d.count == std::vector<uint64_t>{1, 2, 1});
  CHECK(d.pmf[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.pmf[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.total == 4);
  CHECK(d.median == 2);  // lower median of 1,2,2,3
  CHECK(d.mean == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("window-size distribution of a constant stream") {
  const Stream s = make_stream({{"a", "b", "c"}, {"a", "d", "e"}});
  const auto d = tagsim::w_distribution(s);
  REQUIRE(d.w == std::vector<uint32_t>{3});
  CHECK(d.pmf[0] == 1.0);
  CHECK(d.median == 3);
  CHECK(d.mean == 3.0);
}

TEST_CASE("window-size distribution rejects an empty stream") {
  CHECK_THROWS_AS(tagsim::w_distribution(Stream{}), tagsim::EmptyStreamError);
}

TEST_CASE("rank-frequency orders by count then tag id") {
  const Stream s = make_stream({{"A", "B"},
                                {"A", "B"},
                                {"A", "B", "C"},
                                {"A"}});
  // Counts: A=4, B=3, C=1.
  const auto rf = tagsim::rank_frequency(s.tags);
  REQUIRE(rf.size() == 3);
  CHECK(rf[0].rank == 1);
  CHECK(rf[0].count == 4);
  CHECK(s.tags.name(rf[0].tag) == "A");
  CHECK(rf[1].count == 3);
  CHECK(rf[2].count == 1);
  uint64_t total = 0;
  for (const auto& rc : rf) total += rc.count;
  CHECK(total == s.tags.total());
}

TEST_CASE("rank-frequency breaks count ties by tag id") {
  const Stream s = make_stream({{"x", "y"}, {"y", "x"}});
  const auto rf = tagsim::rank_frequency(s.tags);
  REQUIRE(rf.size() == 2);
  CHECK(rf[0].tag < rf[1].tag);
  CHECK(rf[0].count == rf[1].count);
}

TEST_CASE("vocabulary growth hits geometric checkpoints plus the end") {
  // Ten annotations, all distinct: v == n at every checkpoint.
  const Stream s =
      make_stream({{"a", "b", "c"}, {"d", "e", "f", "g"}, {"h", "i", "j"}});
  const auto curve = tagsim::heaps_curve(s);
  std::vector<uint64_t> ns;
  for (const auto& p : curve) {
    ns.push_back(p.n);
    CHECK(p.v == p.n);
  }
  CHECK(ns == std::vector<uint64_t>{1, 2, 4, 8, 10});
}

TEST_CASE("vocabulary growth saturates for a single repeated tag") {
  const Stream s = make_stream({{"x"}, {"x"}, {"x"}, {"x"}, {"x"}});
  const auto curve = tagsim::heaps_curve(s);
  REQUIRE(!curve.empty());
  for (const auto& p : curve) CHECK(p.v == 1);
  CHECK(curve.back().n == 5);
}

TEST_CASE("log-log fit recovers an exact power law") {
  std::vector<std::pair<double, double>> pts;
  for (int x = 1; x <= 100; ++x) {
    pts.emplace_back(x, std::pow(static_cast<double>(x), -2.0));
  }
  const auto fit = tagsim::loglog_slope(pts, 1, 100);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points_used == 100);
}

TEST_CASE("log-log fit respects the x range and skips bad points") {
  std::vector<std::pair<double, double>> pts;
  for (int x = 1; x <= 50; ++x) {
    pts.emplace_back(x, 10.0 / x);
  }
  pts.emplace_back(30, 0.0);    // non-positive y: skipped
  pts.emplace_back(500, 1e-3);  // out of range
  const auto fit = tagsim::loglog_slope(pts, 10, 100);
  CHECK(fit.points_used == 41);  // x = 10..50
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("log-log fit of a constant is flat with perfect fit") {
  std::vector<std::pair<double, double>> pts;
  for (int x = 1; x <= 20; ++x) pts.emplace_back(x, 5.0);
  const auto fit = tagsim::loglog_slope(pts, 1, 20);
  CHECK(fit.slope == 0.0);
  CHECK(fit.r2 == 1.0);
}

TEST_CASE("log-log fit needs at least three usable points") {
  std::vector<std::pair<double, double>> pts = {{1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(tagsim::loglog_slope(pts, 1, 2),
                  tagsim::InsufficientPointsError);
  // Identical x values leave no spread to fit.
  std::vector<std::pair<double, double>> same = {{5, 1}, {5, 2}, {5, 3}};
  CHECK_THROWS_AS(tagsim::loglog_slope(same, 1, 10),
                  tagsim::InsufficientPointsError);
}
