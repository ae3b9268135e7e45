#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tagsim/fenwick.hpp"
#include "tagsim/model.hpp"
#include "tagsim/rng.hpp"

namespace tagsim {

/// Innovation-rate schedule: the probability that one tag draw creates a
/// brand-new tag instead of copying an existing one.
///
/// Kinds:
///   constant        alpha is a single value in [0, 1].
///   time_decay      alpha = a * (N + 1)^(-b) clamped to [0, 1], where N is
///                   the total annotation count at the start of the entry.
///   window_coupled  alpha = g(w) from a table of (w, alpha) points; between
///                   table points g is interpolated linearly in ln(w), and
///                   outside the table range it clamps to the edge values.
class AlphaSchedule {
 public:
  enum class Kind { constant, time_decay, window_coupled };

  static AlphaSchedule constant(double alpha);
  static AlphaSchedule time_decay(double a, double b);
  static AlphaSchedule window_coupled(const std::map<uint32_t, double>& table);

  /// Parse a CLI-style descriptor: "0.1", "constant:0.1", "decay:0.5:0.2",
  /// "coupled:1=0.3,2=0.2,4=0.1,8=0.05". Throws ConfigError.
  static AlphaSchedule parse(const std::string& text);

  Kind kind() const { return kind_; }

  /// Alpha for an entry with window size w when the lexicon holds n_total
  /// annotations. Pure; consumes no randomness.
  double resolve(uint32_t w, uint64_t n_total) const;

  /// Throws ConfigError if any parameter is out of range.
  void validate() const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double constant_ = 0.1;
  double decay_a_ = 0.0, decay_b_ = 0.0;
  std::vector<std::pair<uint32_t, double>> table_;  // sorted by w
};

/// Window-size sampler.
///
/// Kinds:
///   constant    always w.
///   uniform     uniform integer in [lo, hi].
///   power_law   P(w) proportional to w^(-exponent) for w in 1..w_max.
///   empirical   explicit PMF over window sizes (must sum to 1 within 1e-9).
class WindowSampler {
 public:
  enum class Kind { constant, uniform, power_law, empirical };

  static WindowSampler constant(uint32_t w);
  static WindowSampler uniform(uint32_t lo, uint32_t hi);
  static WindowSampler power_law(double exponent, uint32_t w_max);
  static WindowSampler empirical(const std::map<uint32_t, double>& pmf);

  /// Parse a CLI-style descriptor: "constant:3", "uniform:1:8", "powerlaw:2.5:64",
  /// "pmf:1=0.5,2=0.3,3=0.2". A bare integer means constant. Throws
  /// ConfigError.
  static WindowSampler parse(const std::string& text);

  Kind kind() const { return kind_; }
  uint32_t max_w() const;
  double mean() const;

  /// Analytic PMF value at w (0 outside support).
  double pmf(uint32_t w) const;

  uint32_t sample(Rng& rng) const;

  void validate() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  uint32_t constant_ = 1;
  uint32_t lo_ = 1, hi_ = 1;
  double exponent_ = 2.0;
  uint32_t w_max_ = 1;
  std::vector<std::pair<uint32_t, double>> pmf_;   // sorted by w
  std::vector<double> cdf_;                        // parallel to pmf_
  void build_tables();
};

/// Everything that determines a synthetic stream. Two runs with an equal
/// config produce bit-identical streams.
struct GeneratorConfig {
  uint64_t seed = 1;
  uint64_t num_entries = 0;
  AlphaSchedule alpha = AlphaSchedule::constant(0.1);
  WindowSampler window = WindowSampler::constant(1);
  uint32_t num_users = 1;
  /// When true, count updates are deferred to the end of each entry, so all
  /// draws inside one window see the distribution at entry start. Default
  /// updates counts per draw.
  bool per_entry_update = false;

  void validate() const;
};

/// Result of a single tag draw.
struct TagDraw {
  TagId tag = kNoTag;
  bool novel = false;
};

/// Mutable state of one generator run: the growing lexicon, the cumulative
/// count tree used for preferential draws, and the deterministic RNG.
/// Strictly single-threaded.
class GeneratorState {
 public:
  explicit GeneratorState(uint64_t seed) : rng_(seed) {}

  const Lexicon& lexicon() const { return lexicon_; }
  const CumulativeCounts& counts() const { return counts_; }
  Rng& rng() { return rng_; }
  uint64_t next_index() const { return next_index_; }

  /// One probabilistic trial without committing anything: with probability
  /// alpha the draw is novel (tag() == kNoTag until committed); otherwise an
  /// existing tag is chosen with probability count/total. An empty lexicon
  /// forces a novel draw regardless of alpha.
  TagDraw sample_tag(double alpha);

  /// sample_tag + commit: interns a fresh tag on novelty, and counts one use
  /// either way. Returns the drawn tag with its novelty flag.
  TagDraw draw_tag(double alpha);

  /// Commit helpers used by the windowed entry loop.
  TagId commit_novel();
  void commit_existing(TagId tag);

  /// Pre-seed the lexicon with named tags at given counts (for tests and
  /// fixed-state sampling experiments).
  TagId add_tag(std::string_view name, uint64_t count);

  /// Move the lexicon out once generation is done.
  Lexicon take_lexicon() { return std::move(lexicon_); }

  friend Entry generate_entry(GeneratorState& state,
                              const GeneratorConfig& config,
                              double* alpha_used);

 private:
  Lexicon lexicon_;
  CumulativeCounts counts_;
  Rng rng_;
  uint64_t next_index_ = 0;
};

/// Generate the next entry: sample w, resolve alpha (after w, so schedules
/// may couple to it), then fill w slots. Each slot flips the innovation
/// coin once; an existing-tag draw is conditioned on avoiding tags already
/// in the window (bounded rejection, then an exact conditional draw), so
/// the per-slot novelty probability stays exactly alpha once the
/// vocabulary exceeds the window. When every existing tag is already in
/// the window the slot is forced novel — hence the first entry is all
/// novel — or, with alpha = 0, the window is unsatisfiable (vocabulary
/// smaller than w).
///
/// Synthetic timestamp = entry index (one step per entry); resource is
/// unique per entry; user is u0 unless num_users > 1, in which case it is
/// drawn uniformly. If alpha_used is non-null it receives the entry's
/// resolved alpha.
Entry generate_entry(GeneratorState& state, const GeneratorConfig& config,
                     double* alpha_used = nullptr);

/// A generated stream plus the per-entry true innovation rate actually used,
/// which serves as planted ground truth for estimator-recovery tests.
struct GeneratedStream {
  Stream stream;
  std::vector<double> true_alpha;
};

/// Run the full process: num_entries entries, reproducible from the seed.
GeneratedStream generate_stream(const GeneratorConfig& config);

}  // namespace tagsim
