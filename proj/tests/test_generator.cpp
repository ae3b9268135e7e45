#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tagsim/errors.hpp"
#include "tagsim/generator.hpp"

using tagsim::AlphaSchedule;
using tagsim::GeneratedStream;
using tagsim::GeneratorConfig;
using tagsim::GeneratorState;
using tagsim::Rng;
using tagsim::WindowSampler;

TEST_CASE("alpha schedule parsing and description round-trip") {
  CHECK(AlphaSchedule::parse("0.25").resolve(1, 0) == 0.25);
  CHECK(AlphaSchedule::parse("constant:0.25").describe() == "constant:0.25");
  CHECK(AlphaSchedule::parse("decay:0.5:0.2").describe() == "decay:0.5:0.2");
  CHECK(AlphaSchedule::parse("coupled:1=0.3,2=0.2").describe() ==
        "coupled:1=0.3,2=0.2");
  CHECK_THROWS_AS(AlphaSchedule::parse("nonsense:1"), tagsim::ConfigError);
  CHECK_THROWS_AS(AlphaSchedule::parse("constant:1.5").validate(),
                  tagsim::ConfigError);
}

TEST_CASE("time-decay alpha follows a * (N + 1)^-b with clamping") {
  const auto s = AlphaSchedule::time_decay(0.5, 0.25);
  CHECK(s.resolve(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.resolve(1, 15) ==
        doctest::Approx(0.5 * std::pow(16.0, -0.25)).epsilon(1e-12));
  const auto hot = AlphaSchedule::time_decay(3.0, 0.1);
  CHECK(hot.resolve(1, 0) == 1.0);  // clamped
}

TEST_CASE("window-coupled alpha interpolates linearly in ln w and clamps") {
  const auto g = AlphaSchedule::parse("coupled:1=0.3,2=0.2,4=0.1,8=0.05");
  CHECK(g.resolve(1, 0) == 0.3);
  CHECK(g.resolve(2, 0) == 0.2);
  CHECK(g.resolve(4, 0) == 0.1);
  CHECK(g.resolve(8, 0) == 0.05);
  // Between 2 and 4: t = (ln3 - ln2) / (ln4 - ln2)
  const double t = (std::log(3.0) - std::log(2.0)) / std::log(2.0);
  CHECK(g.resolve(3, 0) == doctest::Approx(0.2 + t * -0.1).epsilon(1e-12));
  // Outside the table: clamp to edges.
  CHECK(g.resolve(64, 0) == 0.05);
}

TEST_CASE("window sampler parsing, moments, and validation") {
  Rng rng(1);
  CHECK(WindowSampler::parse("3").sample(rng) == 3);
  const auto uni = WindowSampler::parse("uniform:1:8");
  CHECK(uni.mean() == 4.5);
  CHECK(uni.max_w() == 8);

  const auto pl = WindowSampler::parse("powerlaw:2.5:64");
  CHECK(pl.max_w() == 64);
  double mass = 0.0;
  for (uint32_t w = 1; w <= 64; ++w) mass += pl.pmf(w);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pl.pmf(1) / pl.pmf(2) ==
        doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-9));

  const auto pmf = WindowSampler::parse("pmf:1=0.5,2=0.3,3=0.2");
  CHECK(pmf.mean() == doctest::Approx(1.7).epsilon(1e-12));
  CHECK_THROWS_AS(WindowSampler::parse("pmf:1=0.5,2=0.3").validate(),
                  tagsim::ConfigError);
  CHECK_THROWS_AS(WindowSampler::parse("uniform:5:2").validate(),
                  tagsim::ConfigError);
}

TEST_CASE("power-law window sampling tracks its analytic pmf") {
  const auto pl = WindowSampler::power_law(2.5, 64);
  Rng rng(17);
  std::map<uint32_t, uint64_t> freq;
  const int n = 200000;
  for (int i = 0; i < n; ++i) freq[pl.sample(rng)] += 1;
  for (uint32_t w : {1u, 2u, 3u, 5u, 8u}) {
    const double expected = pl.pmf(w);
    const double got = static_cast<double>(freq[w]) / n;
    const double sigma = std::sqrt(expected * (1 - expected) / n);
    CAPTURE(w);
    CHECK(std::abs(got - expected) < 5 * sigma);
  }
}

TEST_CASE("uniform window sampling covers the range") {
  const auto uni = WindowSampler::uniform(2, 5);
  Rng rng(5);
  std::set<uint32_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const uint32_t w = uni.sample(rng);
    REQUIRE(w >= 2);
    REQUIRE(w <= 5);
    seen.insert(w);
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("preferential attachment marginals from a fixed state") {
  // State: counts 4, 3, 1 over three tags, eight annotations total.
  GeneratorState state(123);
  state.add_tag("A", 4);
  state.add_tag("B", 3);
  state.add_tag("C", 1);

  const double alpha = 0.3;
  const int n = 100000;
  uint64_t picks[3] = {};
  uint64_t novel = 0;
  for (int i = 0; i < n; ++i) {
    const auto d = state.sample_tag(alpha);  // non-committing
    if (d.novel) {
      ++novel;
    } else {
      picks[d.tag] += 1;
    }
  }
  const double expected[3] = {0.7 * 4 / 8, 0.7 * 3 / 8, 0.7 * 1 / 8};
  for (int i = 0; i < 3; ++i) {
    const double got = static_cast<double>(picks[i]) / n;
    const double sigma = std::sqrt(expected[i] * (1 - expected[i]) / n);
    CAPTURE(i);
    CHECK(std::abs(got - expected[i]) < 4 * sigma);
  }
  const double sigma_novel = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(static_cast<double>(novel) / n - 0.3) < 4 * sigma_novel);
}

TEST_CASE("alpha = 1 always innovates; empty lexicon forces novelty") {
  GeneratorState s1(9);
  for (int i = 0; i < 100; ++i) {
    CHECK(s1.draw_tag(1.0).novel);
  }
  GeneratorState s2(10);
  CHECK(s2.draw_tag(0.0).novel);  // empty lexicon
  CHECK_FALSE(s2.draw_tag(0.0).novel);
}

TEST_CASE("windows hold pairwise distinct tags") {
  GeneratorConfig cfg;
  cfg.seed = 21;
  cfg.num_entries = 2000;
  cfg.alpha = AlphaSchedule::constant(0.15);
  cfg.window = WindowSampler::uniform(1, 8);
  const GeneratedStream out = generate_stream(cfg);
  REQUIRE(out.stream.entries.size() == 2000);
  for (const auto& e : out.stream.entries) {
    std::set<tagsim::TagId> uniq(e.tags.begin(), e.tags.end());
    REQUIRE(uniq.size() == e.tags.size());
  }
}

TEST_CASE("first entry is entirely novel even when alpha is tiny") {
  GeneratorConfig cfg;
  cfg.seed = 4;
  cfg.num_entries = 1;
  // The coin essentially never says "novel"; the slots must be forced.
  cfg.alpha = AlphaSchedule::constant(1e-12);
  cfg.window = WindowSampler::constant(3);
  const GeneratedStream out = generate_stream(cfg);
  CHECK(out.stream.entries[0].tags.size() == 3);
  CHECK(out.stream.tags.size() == 3);
}

TEST_CASE("unsatisfiable window: innovation disabled, vocabulary too small") {
  GeneratorState state(8);
  state.add_tag("only", 5);
  GeneratorConfig cfg;
  cfg.alpha = AlphaSchedule::constant(0.0);
  cfg.window = WindowSampler::constant(3);
  CHECK_THROWS_AS(generate_entry(state, cfg),
                  tagsim::WindowUnsatisfiableError);

  // Same failure from an empty start: slot one has nothing left to copy.
  GeneratorConfig fresh = cfg;
  fresh.num_entries = 1;
  CHECK_THROWS_AS(generate_stream(fresh), tagsim::WindowUnsatisfiableError);
}

TEST_CASE("streams are reproducible from the seed") {
  GeneratorConfig cfg;
  cfg.seed = 77;
  cfg.num_entries = 500;
  cfg.alpha = AlphaSchedule::constant(0.2);
  cfg.window = WindowSampler::power_law(2.5, 16);
  cfg.num_users = 4;
  const GeneratedStream a = generate_stream(cfg);
  const GeneratedStream b = generate_stream(cfg);
  REQUIRE(a.stream.entries.size() == b.stream.entries.size());
  for (std::size_t i = 0; i < a.stream.entries.size(); ++i) {
    CHECK(a.stream.entries[i].tags == b.stream.entries[i].tags);
    CHECK(a.stream.entries[i].user == b.stream.entries[i].user);
  }
  CHECK(a.true_alpha == b.true_alpha);

  GeneratorConfig other = cfg;
  other.seed = 78;
  const GeneratedStream c = generate_stream(other);
  bool any_difference = false;
  for (std::size_t i = 0; i < c.stream.entries.size() && !any_difference;
       ++i) {
    any_difference = c.stream.entries[i].tags != a.stream.entries[i].tags;
  }
  CHECK(any_difference);
}

TEST_CASE("vocabulary growth matches alpha for the single-tag window") {
  GeneratorConfig cfg;
  cfg.seed = 31;
  cfg.num_entries = 100000;
  cfg.alpha = AlphaSchedule::constant(0.2);
  cfg.window = WindowSampler::constant(1);
  const GeneratedStream out = generate_stream(cfg);
  const double n = static_cast<double>(cfg.num_entries);
  const double v = static_cast<double>(out.stream.tags.size());
  const double sigma = std::sqrt(n * 0.2 * 0.8);
  CHECK(std::abs(v - 0.2 * n) < 4 * sigma);
}

TEST_CASE("per-entry-update mode keeps lexicon and counts consistent") {
  GeneratorConfig cfg;
  cfg.seed = 13;
  cfg.num_entries = 3000;
  cfg.alpha = AlphaSchedule::constant(0.25);
  cfg.window = WindowSampler::uniform(1, 6);
  cfg.per_entry_update = true;
  const GeneratedStream out = generate_stream(cfg);
  uint64_t annotations = 0;
  for (const auto& e : out.stream.entries) annotations += e.tags.size();
  CHECK(out.stream.tags.total() == annotations);
  for (const auto& e : out.stream.entries) {
    std::set<tagsim::TagId> uniq(e.tags.begin(), e.tags.end());
    REQUIRE(uniq.size() == e.tags.size());
  }
}

TEST_CASE("generated users stay within the configured population") {
  GeneratorConfig cfg;
  cfg.seed = 55;
  cfg.num_entries = 1000;
  cfg.alpha = AlphaSchedule::constant(0.3);
  cfg.window = WindowSampler::constant(2);
  cfg.num_users = 5;
  const GeneratedStream out = generate_stream(cfg);
  CHECK(out.stream.users.size() == 5);
  std::set<tagsim::UserId> seen;
  for (const auto& e : out.stream.entries) {
    REQUIRE(e.user < 5);
    seen.insert(e.user);
  }
  CHECK(seen.size() == 5);
}
