#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tagsim {

using TagId = uint32_t;
using UserId = uint32_t;
using ResourceId = uint32_t;

constexpr TagId kNoTag = UINT32_MAX;

/// One tagging event: a user annotates a resource with a set of distinct
/// tags (the window). Entries in a stream are sorted by timestamp with ties
/// broken by input order, and `index` is the position in that order.
struct Entry {
  uint64_t index = 0;
  UserId user = 0;
  ResourceId resource = 0;
  int64_t timestamp = 0;        // seconds since epoch, UTC
  std::vector<TagId> tags;      // pairwise distinct, non-empty
};

/// Window size of an entry: the number of distinct tags it carries.
inline uint32_t window_size(const Entry& e) {
  return static_cast<uint32_t>(e.tags.size());
}

/// Bidirectional mapping between opaque strings and dense integer ids.
/// Ids are assigned in first-appearance order and never change.
class Interner {
 public:
  uint32_t intern(std::string_view name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<uint32_t>(names_.size());
    it = ids_.emplace(std::string(name), id).first;
    // Map nodes are address-stable under rehash, so the pointer stays valid.
    names_.push_back(&it->first);
    return id;
  }

  std::optional<uint32_t> find(std::string_view name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(uint32_t id) const { return *names_[id]; }
  std::size_t size() const { return names_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct Eq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const {
      return a == b;
    }
  };

  std::unordered_map<std::string, uint32_t, Hash, Eq> ids_;
  std::vector<const std::string*> names_;
};

/// Tag vocabulary: interner plus per-id cumulative use counts and the total
/// annotation count N. Single-writer; safe to share read-only once built.
class Lexicon {
 public:
  /// Intern a tag without recording a use.
  TagId intern(std::string_view name) {
    const TagId id = interner_.intern(name);
    if (id >= counts_.size()) counts_.push_back(0);
    return id;
  }

  /// Intern and count one use in a single step.
  TagId intern_use(std::string_view name) {
    const TagId id = intern(name);
    add_use(id);
    return id;
  }

  void add_use(TagId id) {
    counts_[id] += 1;
    total_ += 1;
  }

  void add_uses(TagId id, uint64_t n) {
    counts_[id] += n;
    total_ += n;
  }

  std::optional<TagId> find(std::string_view name) const {
    return interner_.find(name);
  }

  const std::string& name(TagId id) const { return interner_.name(id); }
  uint64_t count(TagId id) const { return counts_[id]; }
  const std::vector<uint64_t>& counts() const { return counts_; }

  /// Vocabulary size |T|.
  std::size_t size() const { return interner_.size(); }

  /// Total annotations N (= sum of all counts).
  uint64_t total() const { return total_; }

 private:
  Interner interner_;
  std::vector<uint64_t> counts_;
  uint64_t total_ = 0;
};

/// Tag normalization applied before interning: trim surrounding ASCII
/// whitespace, then Unicode NFC. Case is preserved. Invalid UTF-8 passes
/// through trimmed but otherwise untouched.
struct NormalizeOptions {
  bool nfc = true;

  std::string describe() const { return nfc ? "trim,nfc" : "trim"; }
};

std::string normalize_tag(std::string_view raw, const NormalizeOptions& opts);

/// An in-memory entry stream with its interned vocabularies. Produced by
/// the generator or by ingest; consumed by every analysis module.
struct Stream {
  std::vector<Entry> entries;
  Lexicon tags;
  Interner users;
  Interner resources;

  std::size_t size() const { return entries.size(); }
};

}  // namespace tagsim
