#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tagsim/model.hpp"

namespace tagsim {

/// Entry-log format. auto_detect picks by file extension and, failing that,
/// by the first non-blank byte ('{' means jsonl).
enum class StreamFormat { auto_detect, jsonl, csv };

StreamFormat format_from_name(const std::string& name);
std::string to_string(StreamFormat f);

struct IngestConfig {
  StreamFormat format = StreamFormat::auto_detect;
  /// Tags removed from every window; normalized with the same options as
  /// stream tags before comparison.
  std::vector<std::string> excluded_tags;
  /// Entries whose window shrinks below this after dedup/exclusion are
  /// dropped (and counted in dropped_entries).
  uint32_t min_window_after_filter = 1;
  NormalizeOptions normalize;
};

/// Corpus summary in the four classic columns (users, vocabulary,
/// annotations, entries) plus parse accounting.
struct IngestStats {
  uint64_t users = 0;
  uint64_t vocabulary = 0;
  uint64_t annotations = 0;  // sum of window sizes after filtering
  uint64_t entries = 0;

  uint64_t skipped_lines = 0;           // structurally invalid lines
  uint64_t duplicate_tags_dropped = 0;  // within-window repeats
  uint64_t excluded_tags_removed = 0;
  uint64_t dropped_entries = 0;         // windows emptied or under minimum

  int64_t first_timestamp = 0;  // valid only when entries > 0
  int64_t last_timestamp = 0;
  std::string normalization;

  nlohmann::json to_json() const;
};

struct ParseResult {
  Stream stream;
  IngestStats stats;
};

/// Parse an entry log. Lines that fail structural parsing are counted in
/// skipped_lines; container-level problems (bad CSV header) throw
/// FormatError. Output entries are stably sorted by timestamp and indexed
/// in that order. Throws EmptyStreamError when nothing survives.
///
/// jsonl: one object per line with fields "ts" (integer seconds), "user",
/// "resource" (strings), "tags" (array of strings).
/// csv: header "timestamp,user,resource,tags"; the tags column joins tags
/// with '|', escaping literal '|' as "\|" and '\' as "\\". The first three
/// fields must not contain commas.
ParseResult parse_stream(std::istream& in, const IngestConfig& config);
ParseResult parse_string(std::string_view text, const IngestConfig& config);

/// Reads a file, transparently inflating gzip input (detected by magic
/// bytes, regardless of extension). Throws IoError if unreadable and
/// FormatError if gzip data is corrupt.
ParseResult parse_file(const std::filesystem::path& path,
                       const IngestConfig& config);

/// Serialization, the exact inverse of parsing: parse(serialize(s)) == s
/// field-for-field. Tags/users/resources are written as stored (already
/// normalized); entries are written in index order.
void write_jsonl(std::ostream& out, const Stream& stream);
void write_csv(std::ostream& out, const Stream& stream);
void write_stream_file(const std::filesystem::path& path, const Stream& stream,
                       StreamFormat format);

/// CSV tag-column helpers (exposed for tests).
std::string join_tags_field(const std::vector<std::string_view>& tags);
std::vector<std::string> split_tags_field(std::string_view field);

}  // namespace tagsim
