#pragma once

#include <cstdint>
#include <vector>

#include "tagsim/model.hpp"

namespace tagsim {

struct MotivationConfig {
  /// Effective users must have strictly more entries than this.
  uint64_t min_entries_per_user = 200;
  /// Weight each tag's entropy by its per-resource annotation counts
  /// instead of assuming uniformity over the tag's distinct resources.
  bool weighted_tag_entropy = false;
  /// Weight tags uniformly in the conditional entropy instead of by
  /// annotation share.
  bool uniform_tag_weights = false;
  int histogram_bins = 20;
};

/// One user's tagging record reduced to what the indices need.
struct TagUse {
  uint64_t resources = 0;    // |R(t)|: distinct resources carrying the tag
  uint64_t annotations = 0;  // times the tag was applied
  /// Entropy in bits of the tag's per-resource annotation distribution
  /// (used only by the weighted variant; equals log2(resources) when every
  /// resource got the tag once).
  double weighted_entropy = 0.0;
};

struct UserProfile {
  UserId user = 0;
  uint64_t entries = 0;
  uint64_t distinct_resources = 0;   // |R|
  uint64_t total_annotations = 0;    // sum of tag annotation counts
  std::vector<TagUse> tags;          // one per distinct tag, first-use order
};

/// Group a stream by user. Output is sorted by user id and covers every
/// user, effective or not.
std::vector<UserProfile> build_profiles(const Stream& stream);

/// Share of tags used on at most n resources, n = ceil(max |R(t)| / 100).
/// High for describers (many rarely-reused tags). Throws EmptyProfileError.
double m0(const UserProfile& profile);

/// H(R|T) in bits: sum over tags of p(t) * H(R|t), where p(t) defaults to
/// the tag's annotation share and H(R|t) to log2 |R(t)|. Terms are grouped
/// by identical |R(t)| so a balanced profile reproduces log2(size) exactly.
double conditional_entropy(const UserProfile& profile,
                           const MotivationConfig& config = {});

/// Entropy of the ideal categorizer: log2(|R| / |T|) when |R| > |T|,
/// otherwise 0.
double h_opt(const UserProfile& profile);

/// Excess entropy over the ideal categorizer, clamped at 0 from below:
/// max(0, (H - H_opt) / H_opt). Throws ZeroHOptError when H_opt is 0.
double m1(const UserProfile& profile, const MotivationConfig& config = {});

struct MotivationScore {
  UserId user = 0;
  uint64_t entries = 0;
  uint64_t vocabulary = 0;  // |T|
  uint64_t resources = 0;   // |R|
  double m0 = 0.0;
  double m1 = 0.0;
  double m = 0.0;  // (m0 + m1) / 2
  double h = 0.0;
  double h_opt = 0.0;
};

/// Score one effective user. Throws NotEffectiveUserError (with the failed
/// condition) when entries <= min_entries_per_user or H_opt = 0.
MotivationScore m_score(const UserProfile& profile,
                        const MotivationConfig& config = {});

/// Profiles -> scores for effective users only, sorted by user id.
std::vector<MotivationScore> score_users(const Stream& stream,
                                         const MotivationConfig& config = {});

struct MHistogram {
  int bins = 20;
  std::vector<uint64_t> count;     // per bin over [0, 1]; M > 1 -> last bin
  std::vector<double> fraction;    // count / users
  uint64_t users = 0;
  double mean_m = 0.0;             // over unclamped M values
};

/// Fraction-of-users histogram of M over [0, 1]. Throws
/// NoEffectiveUsersError when scores is empty.
MHistogram m_histogram(const std::vector<MotivationScore>& scores,
                       int bins = 20);

}  // namespace tagsim
