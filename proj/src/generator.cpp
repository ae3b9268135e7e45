#include "tagsim/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tagsim/errors.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

namespace {

constexpr int kMaxSlotAttempts = 1000;

double parse_number(const std::string& field, std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(field + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

uint32_t parse_count(const std::string& field, std::string_view text) {
  uint32_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(field + ": not a positive integer: '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::map<uint32_t, double> parse_table(const std::string& field,
                                       std::string_view text) {
  std::map<uint32_t, double> table;
  for (std::string_view item : split(text, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(field + ": expected w=value, got '" +
                        std::string(item) + "'");
    }
    const uint32_t w = parse_count(field, item.substr(0, eq));
    const double v = parse_number(field, item.substr(eq + 1));
    table.emplace(w, v);
  }
  if (table.empty()) throw ConfigError(field + ": empty table");
  return table;
}

}  // namespace

// ---------------------------------------------------------------------------
// AlphaSchedule

AlphaSchedule AlphaSchedule::constant(double alpha) {
  AlphaSchedule s;
  s.kind_ = Kind::constant;
  s.constant_ = alpha;
  return s;
}

AlphaSchedule AlphaSchedule::time_decay(double a, double b) {
  AlphaSchedule s;
  s.kind_ = Kind::time_decay;
  s.decay_a_ = a;
  s.decay_b_ = b;
  return s;
}

AlphaSchedule AlphaSchedule::window_coupled(
    const std::map<uint32_t, double>& table) {
  AlphaSchedule s;
  s.kind_ = Kind::window_coupled;
  s.table_.assign(table.begin(), table.end());
  return s;
}

AlphaSchedule AlphaSchedule::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    return constant(parse_number("alpha", parts[0]));
  }
  const std::string_view head = parts[0];
  if (head == "constant" && parts.size() == 2) {
    return constant(parse_number("alpha", parts[1]));
  }
  if (head == "decay" && parts.size() == 3) {
    return time_decay(parse_number("alpha.decay.a", parts[1]),
                      parse_number("alpha.decay.b", parts[2]));
  }
  if (head == "coupled" && parts.size() == 2) {
    return window_coupled(parse_table("alpha.coupled", parts[1]));
  }
  throw ConfigError("alpha: unrecognized descriptor '" + text + "'");
}

double AlphaSchedule::resolve(uint32_t w, uint64_t n_total) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::time_decay: {
      const double a =
          decay_a_ * std::pow(static_cast<double>(n_total) + 1.0, -decay_b_);
      return std::clamp(a, 0.0, 1.0);
    }
    case Kind::window_coupled: {
      if (w <= table_.front().first) return table_.front().second;
      if (w >= table_.back().first) return table_.back().second;
      auto hi = std::lower_bound(
          table_.begin(), table_.end(), w,
          [](const auto& p, uint32_t value) { return p.first < value; });
      if (hi->first == w) return hi->second;
      auto lo = hi - 1;
      const double t = (std::log(static_cast<double>(w)) -
                        std::log(static_cast<double>(lo->first))) /
                       (std::log(static_cast<double>(hi->first)) -
                        std::log(static_cast<double>(lo->first)));
      return lo->second + t * (hi->second - lo->second);
    }
  }
  return constant_;
}

void AlphaSchedule::validate() const {
  switch (kind_) {
    case Kind::constant:
      if (!(constant_ >= 0.0 && constant_ <= 1.0)) {
        throw ConfigError("alpha: must be in [0, 1]");
      }
      break;
    case Kind::time_decay:
      if (!(decay_a_ >= 0.0) || !(decay_b_ >= 0.0)) {
        throw ConfigError("alpha.decay: a and b must be >= 0");
      }
      break;
    case Kind::window_coupled:
      if (table_.empty()) throw ConfigError("alpha.coupled: empty table");
      for (const auto& [w, a] : table_) {
        if (w < 1) throw ConfigError("alpha.coupled: window sizes must be >= 1");
        if (!(a >= 0.0 && a <= 1.0)) {
          throw ConfigError("alpha.coupled: values must be in [0, 1]");
        }
      }
      break;
  }
}

std::string AlphaSchedule::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::constant:
      out << "constant:" << format_double(constant_);
      break;
    case Kind::time_decay:
      out << "decay:" << format_double(decay_a_) << ":"
          << format_double(decay_b_);
      break;
    case Kind::window_coupled: {
      out << "coupled:";
      bool first = true;
      for (const auto& [w, a] : table_) {
        if (!first) out << ",";
        out << w << "=" << format_double(a);
        first = false;
      }
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// WindowSampler

WindowSampler WindowSampler::constant(uint32_t w) {
  WindowSampler s;
  s.kind_ = Kind::constant;
  s.constant_ = w;
  return s;
}

WindowSampler WindowSampler::uniform(uint32_t lo, uint32_t hi) {
  WindowSampler s;
  s.kind_ = Kind::uniform;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

WindowSampler WindowSampler::power_law(double exponent, uint32_t w_max) {
  WindowSampler s;
  s.kind_ = Kind::power_law;
  s.exponent_ = exponent;
  s.w_max_ = w_max;
  s.build_tables();
  return s;
}

WindowSampler WindowSampler::empirical(const std::map<uint32_t, double>& pmf) {
  WindowSampler s;
  s.kind_ = Kind::empirical;
  s.pmf_.assign(pmf.begin(), pmf.end());
  s.build_tables();
  return s;
}

WindowSampler WindowSampler::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    return constant(parse_count("window", parts[0]));
  }
  const std::string_view head = parts[0];
  if (head == "constant" && parts.size() == 2) {
    return constant(parse_count("window", parts[1]));
  }
  if (head == "uniform" && parts.size() == 3) {
    return uniform(parse_count("window.lo", parts[1]),
                   parse_count("window.hi", parts[2]));
  }
  if (head == "powerlaw" && parts.size() == 3) {
    return power_law(parse_number("window.exponent", parts[1]),
                     parse_count("window.max", parts[2]));
  }
  if (head == "pmf" && parts.size() == 2) {
    return empirical(parse_table("window.pmf", parts[1]));
  }
  throw ConfigError("window: unrecognized descriptor '" + text + "'");
}

void WindowSampler::build_tables() {
  if (kind_ == Kind::power_law) {
    pmf_.clear();
    double z = 0.0;
    for (uint32_t w = 1; w <= w_max_; ++w) {
      z += std::pow(static_cast<double>(w), -exponent_);
    }
    for (uint32_t w = 1; w <= w_max_; ++w) {
      pmf_.emplace_back(w, std::pow(static_cast<double>(w), -exponent_) / z);
    }
  }
  cdf_.clear();
  double acc = 0.0;
  for (const auto& [w, p] : pmf_) {
    acc += p;
    cdf_.push_back(acc);
  }
  if (!cdf_.empty()) cdf_.back() = 1.0;  // guard against round-off at the top
}

uint32_t WindowSampler::max_w() const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::uniform:
      return hi_;
    case Kind::power_law:
      return w_max_;
    case Kind::empirical:
      return pmf_.back().first;
  }
  return 1;
}

double WindowSampler::mean() const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::uniform:
      return (static_cast<double>(lo_) + static_cast<double>(hi_)) / 2.0;
    case Kind::power_law:
    case Kind::empirical: {
      double m = 0.0;
      for (const auto& [w, p] : pmf_) m += static_cast<double>(w) * p;
      return m;
    }
  }
  return constant_;
}

double WindowSampler::pmf(uint32_t w) const {
  switch (kind_) {
    case Kind::constant:
      return w == constant_ ? 1.0 : 0.0;
    case Kind::uniform:
      return (w >= lo_ && w <= hi_) ? 1.0 / (hi_ - lo_ + 1.0) : 0.0;
    case Kind::power_law:
    case Kind::empirical: {
      auto it = std::lower_bound(
          pmf_.begin(), pmf_.end(), w,
          [](const auto& p, uint32_t value) { return p.first < value; });
      if (it != pmf_.end() && it->first == w) return it->second;
      return 0.0;
    }
  }
  return 0.0;
}

uint32_t WindowSampler::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::uniform:
      return lo_ + static_cast<uint32_t>(rng.below(hi_ - lo_ + 1ULL));
    case Kind::power_law:
    case Kind::empirical: {
      const double u = rng.uniform01();
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      const std::size_t idx =
          std::min(static_cast<std::size_t>(it - cdf_.begin()),
                   pmf_.size() - 1);
      return pmf_[idx].first;
    }
  }
  return constant_;
}

void WindowSampler::validate() const {
  switch (kind_) {
    case Kind::constant:
      if (constant_ < 1) throw ConfigError("window: size must be >= 1");
      break;
    case Kind::uniform:
      if (lo_ < 1 || lo_ > hi_) {
        throw ConfigError("window.uniform: need 1 <= lo <= hi");
      }
      break;
    case Kind::power_law:
      if (!(exponent_ > 0.0)) {
        throw ConfigError("window.exponent: must be > 0");
      }
      if (w_max_ < 1) throw ConfigError("window.max: must be >= 1");
      break;
    case Kind::empirical: {
      if (pmf_.empty()) throw ConfigError("window.pmf: empty");
      double sum = 0.0;
      for (const auto& [w, p] : pmf_) {
        if (w < 1) throw ConfigError("window.pmf: sizes must be >= 1");
        if (!(p >= 0.0)) throw ConfigError("window.pmf: negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("window.pmf: probabilities sum to " +
                          format_double(sum) + ", expected 1");
      }
      break;
    }
  }
}

std::string WindowSampler::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::constant:
      out << "constant:" << constant_;
      break;
    case Kind::uniform:
      out << "uniform:" << lo_ << ":" << hi_;
      break;
    case Kind::power_law:
      out << "powerlaw:" << format_double(exponent_) << ":" << w_max_;
      break;
    case Kind::empirical: {
      out << "pmf:";
      bool first = true;
      for (const auto& [w, p] : pmf_) {
        if (!first) out << ",";
        out << w << "=" << format_double(p);
        first = false;
      }
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// GeneratorConfig / GeneratorState

void GeneratorConfig::validate() const {
  alpha.validate();
  window.validate();
  if (num_users < 1) throw ConfigError("users: must be >= 1");
}

TagDraw GeneratorState::sample_tag(double alpha) {
  // Consumption order per trial: innovation coin first, then (only for an
  // existing draw) one weighted selection.
  if (counts_.total() == 0) return {kNoTag, true};
  if (rng_.uniform01() < alpha) return {kNoTag, true};
  const uint64_t u = rng_.below(counts_.total());
  return {static_cast<TagId>(counts_.find(u)), false};
}

TagId GeneratorState::commit_novel() {
  const TagId id = lexicon_.intern("t" + std::to_string(lexicon_.size()));
  lexicon_.add_use(id);
  counts_.push_back(1);
  return id;
}

void GeneratorState::commit_existing(TagId tag) {
  lexicon_.add_use(tag);
  counts_.add(tag, 1);
}

TagDraw GeneratorState::draw_tag(double alpha) {
  TagDraw d = sample_tag(alpha);
  if (d.novel) {
    d.tag = commit_novel();
  } else {
    commit_existing(d.tag);
  }
  return d;
}

TagId GeneratorState::add_tag(std::string_view name, uint64_t count) {
  const TagId id = lexicon_.intern(name);
  if (counts_.size() < lexicon_.size()) {
    counts_.push_back(count);
  } else {
    counts_.add(id, count);
  }
  lexicon_.add_uses(id, count);
  return id;
}

Entry generate_entry(GeneratorState& state, const GeneratorConfig& config,
                     double* alpha_used) {
  const uint32_t w = config.window.sample(state.rng_);
  const double alpha = config.alpha.resolve(w, state.lexicon_.total());
  if (alpha_used != nullptr) *alpha_used = alpha;

  Entry entry;
  entry.index = state.next_index_++;
  entry.timestamp = static_cast<int64_t>(entry.index);
  entry.resource = static_cast<ResourceId>(entry.index);
  entry.user = config.num_users > 1
                   ? static_cast<UserId>(state.rng_.below(config.num_users))
                   : 0;
  entry.tags.reserve(w);

  const auto in_window = [&entry](TagId tag) {
    return std::find(entry.tags.begin(), entry.tags.end(), tag) !=
           entry.tags.end();
  };

  // Existing-tag draw conditioned on avoiding the current window: bounded
  // rejection (almost always one draw), then an exact conditional draw with
  // the window's mass taken out of the tree and restored afterwards. The
  // distribution is identical either way; the fallback only guarantees
  // termination when the window holds nearly all of the mass.
  const auto draw_existing_avoiding_window = [&]() -> TagId {
    for (int attempt = 0; attempt < kMaxSlotAttempts; ++attempt) {
      const auto t =
          static_cast<TagId>(state.counts_.find(state.rng_.below(
              state.counts_.total())));
      if (!in_window(t)) return t;
    }
    std::vector<std::pair<TagId, uint64_t>> removed;
    for (TagId t : entry.tags) {
      if (t >= state.counts_.size()) continue;  // deferred novel: no mass
      const uint64_t c = state.counts_.count(t);
      state.counts_.subtract(t, c);
      removed.emplace_back(t, c);
    }
    const auto chosen = static_cast<TagId>(
        state.counts_.find(state.rng_.below(state.counts_.total())));
    for (const auto& [t, c] : removed) state.counts_.add(t, c);
    return chosen;
  };

  // Deferred-commit bookkeeping for per_entry_update mode.
  std::vector<TagId> deferred_existing;

  for (uint32_t slot = 0; slot < w; ++slot) {
    const std::size_t vocab = state.lexicon_.size();
    bool novel;
    if (vocab == 0) {
      novel = true;  // forced: nothing to copy
    } else {
      novel = state.rng_.uniform01() < alpha;
      if (!novel && vocab == entry.tags.size()) {
        // Every existing tag is already in this window.
        if (alpha == 0.0) {
          throw WindowUnsatisfiableError(
              "cannot place " + std::to_string(w) +
              " distinct tags: vocabulary size " + std::to_string(vocab) +
              " with innovation disabled");
        }
        novel = true;  // forced
      }
    }

    TagId chosen;
    if (novel) {
      // Novel tags are distinct by construction. In deferred mode the id is
      // assigned now but its count lands in the tree at entry end.
      chosen = config.per_entry_update
                   ? state.lexicon_.intern(
                         "t" + std::to_string(state.lexicon_.size()))
                   : state.commit_novel();
    } else {
      chosen = draw_existing_avoiding_window();
      if (config.per_entry_update) {
        deferred_existing.push_back(chosen);
      } else {
        state.commit_existing(chosen);
      }
    }
    entry.tags.push_back(chosen);
  }

  if (config.per_entry_update) {
    // Commit all of the window's counts at once. Novel ids were assigned in
    // increasing order, so the count tree can append them in id order.
    for (TagId tag : entry.tags) {
      if (tag >= state.counts_.size()) {
        state.lexicon_.add_use(tag);
        state.counts_.push_back(1);
      }
    }
    for (TagId tag : deferred_existing) {
      state.lexicon_.add_use(tag);
      state.counts_.add(tag, 1);
    }
  }

  return entry;
}

GeneratedStream generate_stream(const GeneratorConfig& config) {
  config.validate();
  GeneratedStream out;
  out.stream.entries.reserve(config.num_entries);
  out.true_alpha.reserve(config.num_entries);
  for (uint32_t u = 0; u < config.num_users; ++u) {
    out.stream.users.intern("u" + std::to_string(u));
  }

  GeneratorState state(config.seed);
  for (uint64_t i = 0; i < config.num_entries; ++i) {
    double alpha = 0.0;
    Entry entry = generate_entry(state, config, &alpha);
    out.stream.resources.intern("r" + std::to_string(entry.index));
    out.stream.entries.push_back(std::move(entry));
    out.true_alpha.push_back(alpha);
  }
  out.stream.tags = state.take_lexicon();
  return out;
}

}  // namespace tagsim
