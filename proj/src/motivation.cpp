#include "tagsim/motivation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "tagsim/errors.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

namespace {

struct TagBuilder {
  std::unordered_map<ResourceId, uint64_t> per_resource;  // annotation counts
  uint64_t annotations = 0;
};

struct ProfileBuilder {
  uint64_t entries = 0;
  std::unordered_map<ResourceId, char> resources;
  std::unordered_map<TagId, std::size_t> tag_slot;
  std::vector<TagId> tag_order;  // first-use order, for deterministic sums
  std::vector<TagBuilder> tags;
};

double per_resource_entropy(const TagBuilder& tag) {
  // Entropy in bits of the tag's per-resource annotation distribution.
  // Iterate counts grouped by value so the sum order is deterministic.
  std::map<uint64_t, uint64_t> by_count;  // count value -> #resources
  for (const auto& [res, c] : tag.per_resource) by_count[c] += 1;
  const double total = static_cast<double>(tag.annotations);
  double h = 0.0;
  for (const auto& [c, reps] : by_count) {
    const double p = static_cast<double>(c) / total;
    h -= static_cast<double>(reps) * p * std::log2(p);
  }
  return h;
}

}  // namespace

std::vector<UserProfile> build_profiles(const Stream& stream) {
  std::unordered_map<UserId, ProfileBuilder> builders;
  for (const Entry& e : stream.entries) {
    ProfileBuilder& b = builders[e.user];
    b.entries += 1;
    b.resources.emplace(e.resource, 1);
    for (TagId t : e.tags) {
      auto [it, fresh] = b.tag_slot.emplace(t, b.tags.size());
      if (fresh) {
        b.tag_order.push_back(t);
        b.tags.emplace_back();
      }
      TagBuilder& tb = b.tags[it->second];
      tb.per_resource[e.resource] += 1;
      tb.annotations += 1;
    }
  }

  std::vector<UserProfile> profiles;
  profiles.reserve(builders.size());
  for (auto& [user, b] : builders) {
    UserProfile p;
    p.user = user;
    p.entries = b.entries;
    p.distinct_resources = b.resources.size();
    p.tags.reserve(b.tags.size());
    for (std::size_t i = 0; i < b.tags.size(); ++i) {
      const TagBuilder& tb = b.tags[i];
      TagUse use;
      use.resources = tb.per_resource.size();
      use.annotations = tb.annotations;
      use.weighted_entropy = per_resource_entropy(tb);
      p.total_annotations += tb.annotations;
      p.tags.push_back(use);
    }
    profiles.push_back(std::move(p));
  }
  std::sort(profiles.begin(), profiles.end(),
            [](const UserProfile& a, const UserProfile& b) {
              return a.user < b.user;
            });
  return profiles;
}

double m0(const UserProfile& profile) {
  if (profile.tags.empty()) throw EmptyProfileError("profile has no tags");
  uint64_t max_resources = 0;
  for (const TagUse& t : profile.tags) {
    max_resources = std::max(max_resources, t.resources);
  }
  const uint64_t n = (max_resources + 99) / 100;  // ceil(max / 100)
  uint64_t at_most_n = 0;
  for (const TagUse& t : profile.tags) {
    if (t.resources <= n) ++at_most_n;
  }
  return static_cast<double>(at_most_n) /
         static_cast<double>(profile.tags.size());
}

double conditional_entropy(const UserProfile& profile,
                           const MotivationConfig& config) {
  if (profile.tags.empty()) throw EmptyProfileError("profile has no tags");

  if (config.weighted_tag_entropy) {
    NeumaierSum h;
    double total = 0.0;
    for (const TagUse& t : profile.tags) {
      total += config.uniform_tag_weights
                   ? 1.0
                   : static_cast<double>(t.annotations);
    }
    for (const TagUse& t : profile.tags) {
      const double weight = config.uniform_tag_weights
                                ? 1.0
                                : static_cast<double>(t.annotations);
      h.add(t.weighted_entropy * (weight / total));
    }
    return h.value();
  }

  // Default variant: H(R|t) = log2 |R(t)|. Group tags by identical |R(t)|
  // so that a perfectly balanced profile yields log2(size) * 1.0 exactly
  // (this makes the ideal-categorizer M1 = 0 exact, not approximate).
  std::map<uint64_t, uint64_t> weight_by_size;  // |R(t)| -> summed weight
  uint64_t total = 0;
  for (const TagUse& t : profile.tags) {
    const uint64_t weight = config.uniform_tag_weights ? 1 : t.annotations;
    weight_by_size[t.resources] += weight;
    total += weight;
  }
  NeumaierSum h;
  for (const auto& [size, weight] : weight_by_size) {
    if (size <= 1) continue;  // log2(1) = 0
    h.add(std::log2(static_cast<double>(size)) *
          (static_cast<double>(weight) / static_cast<double>(total)));
  }
  return h.value();
}

double h_opt(const UserProfile& profile) {
  if (profile.tags.empty()) throw EmptyProfileError("profile has no tags");
  const uint64_t r = profile.distinct_resources;
  const uint64_t t = profile.tags.size();
  if (r <= t) return 0.0;
  return std::log2(static_cast<double>(r) / static_cast<double>(t));
}

double m1(const UserProfile& profile, const MotivationConfig& config) {
  const double opt = h_opt(profile);
  if (opt == 0.0) {
    throw ZeroHOptError("ideal-categorizer entropy is zero (|R| <= |T|)");
  }
  const double h = conditional_entropy(profile, config);
  return std::max(0.0, (h - opt) / opt);
}

MotivationScore m_score(const UserProfile& profile,
                        const MotivationConfig& config) {
  if (profile.entries <= config.min_entries_per_user) {
    throw NotEffectiveUserError(
        NotEffectiveUserError::Reason::too_few_entries,
        "user has " + std::to_string(profile.entries) +
            " entries; needs more than " +
            std::to_string(config.min_entries_per_user));
  }
  const double opt = h_opt(profile);
  if (opt == 0.0) {
    throw NotEffectiveUserError(
        NotEffectiveUserError::Reason::zero_h_opt,
        "ideal-categorizer entropy is zero (|R| <= |T|)");
  }

  MotivationScore score;
  score.user = profile.user;
  score.entries = profile.entries;
  score.vocabulary = profile.tags.size();
  score.resources = profile.distinct_resources;
  score.h = conditional_entropy(profile, config);
  score.h_opt = opt;
  score.m0 = m0(profile);
  score.m1 = std::max(0.0, (score.h - opt) / opt);
  score.m = (score.m0 + score.m1) / 2.0;
  return score;
}

std::vector<MotivationScore> score_users(const Stream& stream,
                                         const MotivationConfig& config) {
  std::vector<MotivationScore> scores;
  for (const UserProfile& p : build_profiles(stream)) {
    try {
      scores.push_back(m_score(p, config));
    } catch (const NotEffectiveUserError&) {
      // Not effective; skipped by design.
    }
  }
  return scores;
}

MHistogram m_histogram(const std::vector<MotivationScore>& scores, int bins) {
  if (scores.empty()) throw NoEffectiveUsersError("no effective users");
  if (bins < 1) throw ConfigError("histogram_bins: must be >= 1");

  MHistogram hist;
  hist.bins = bins;
  hist.count.assign(static_cast<std::size_t>(bins), 0);
  hist.fraction.assign(static_cast<std::size_t>(bins), 0.0);
  hist.users = scores.size();

  NeumaierSum mean;
  for (const MotivationScore& s : scores) {
    mean.add(s.m);
    int b = static_cast<int>(std::floor(s.m * static_cast<double>(bins)));
    if (b >= bins) b = bins - 1;  // m >= 1 lands in the last bin
    if (b < 0) b = 0;
    hist.count[static_cast<std::size_t>(b)] += 1;
  }
  for (int b = 0; b < bins; ++b) {
    hist.fraction[static_cast<std::size_t>(b)] =
        static_cast<double>(hist.count[static_cast<std::size_t>(b)]) /
        static_cast<double>(hist.users);
  }
  hist.mean_m = mean.value() / static_cast<double>(hist.users);
  return hist;
}

}  // namespace tagsim
