#include "tagsim/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "tagsim/errors.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

namespace {

constexpr std::string_view kCsvHeader = "timestamp,user,resource,tags";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

struct RawEntry {
  int64_t ts = 0;
  std::string user;
  std::string resource;
  std::vector<std::string> tags;
};

bool parse_jsonl_line(std::string_view line, RawEntry& out) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (!j.is_object()) return false;
  const auto ts = j.find("ts");
  const auto user = j.find("user");
  const auto resource = j.find("resource");
  const auto tags = j.find("tags");
  if (ts == j.end() || user == j.end() || resource == j.end() ||
      tags == j.end()) {
    return false;
  }
  if (!ts->is_number_integer() || !user->is_string() ||
      !resource->is_string() || !tags->is_array()) {
    return false;
  }
  out.ts = ts->get<int64_t>();
  out.user = user->get<std::string>();
  out.resource = resource->get<std::string>();
  out.tags.clear();
  for (const auto& t : *tags) {
    if (!t.is_string()) return false;
    out.tags.push_back(t.get<std::string>());
  }
  return true;
}

bool parse_csv_line(std::string_view line, RawEntry& out) {
  const std::size_t c1 = line.find(',');
  if (c1 == std::string_view::npos) return false;
  const std::size_t c2 = line.find(',', c1 + 1);
  if (c2 == std::string_view::npos) return false;
  const std::size_t c3 = line.find(',', c2 + 1);
  if (c3 == std::string_view::npos) return false;

  const std::string_view ts_field = line.substr(0, c1);
  const char* begin = ts_field.data();
  const char* end = begin + ts_field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out.ts);
  if (ec != std::errc() || ptr != end) return false;

  out.user = std::string(line.substr(c1 + 1, c2 - c1 - 1));
  out.resource = std::string(line.substr(c2 + 1, c3 - c2 - 1));
  out.tags = split_tags_field(line.substr(c3 + 1));
  return true;
}

std::string inflate_gzip(std::string_view bytes) {
  z_stream strm{};
  // 15 | 32: max window, auto-detect zlib or gzip wrapper.
  if (inflateInit2(&strm, 15 | 32) != Z_OK) {
    throw FormatError("cannot initialize decompressor");
  }
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  strm.avail_in = static_cast<uInt>(bytes.size());

  std::string out;
  char chunk[1 << 16];
  int rc = Z_OK;
  do {
    strm.next_out = reinterpret_cast<Bytef*>(chunk);
    strm.avail_out = sizeof(chunk);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw FormatError("corrupt gzip stream");
    }
    out.append(chunk, sizeof(chunk) - strm.avail_out);
  } while (rc != Z_STREAM_END && (strm.avail_in > 0 || strm.avail_out == 0));
  inflateEnd(&strm);
  if (rc != Z_STREAM_END) throw FormatError("truncated gzip stream");
  return out;
}

std::string deflate_gzip(std::string_view bytes) {
  z_stream strm{};
  // 15 | 16: gzip wrapper.
  if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 | 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw FormatError("cannot initialize compressor");
  }
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  strm.avail_in = static_cast<uInt>(bytes.size());

  std::string out;
  char chunk[1 << 16];
  int rc = Z_OK;
  do {
    strm.next_out = reinterpret_cast<Bytef*>(chunk);
    strm.avail_out = sizeof(chunk);
    rc = deflate(&strm, Z_FINISH);
    out.append(chunk, sizeof(chunk) - strm.avail_out);
  } while (rc != Z_STREAM_END);
  deflateEnd(&strm);
  return out;
}

void require_csv_safe(std::string_view field, const char* what) {
  if (field.find(',') != std::string_view::npos ||
      field.find('\n') != std::string_view::npos ||
      field.find('\r') != std::string_view::npos) {
    throw FormatError(std::string(what) +
                      " contains a comma or newline; use jsonl for this "
                      "stream: '" +
                      std::string(field) + "'");
  }
}

}  // namespace

StreamFormat format_from_name(const std::string& name) {
  std::string_view base = name;
  if (ends_with(base, ".gz")) base = base.substr(0, base.size() - 3);
  if (ends_with(base, ".jsonl")) return StreamFormat::jsonl;
  if (ends_with(base, ".csv")) return StreamFormat::csv;
  return StreamFormat::auto_detect;
}

std::string to_string(StreamFormat f) {
  switch (f) {
    case StreamFormat::jsonl:
      return "jsonl";
    case StreamFormat::csv:
      return "csv";
    case StreamFormat::auto_detect:
      return "auto";
  }
  return "auto";
}

nlohmann::json IngestStats::to_json() const {
  return nlohmann::json{
      {"users", users},
      {"vocabulary", vocabulary},
      {"annotations", annotations},
      {"entries", entries},
      {"skipped_lines", skipped_lines},
      {"duplicate_tags_dropped", duplicate_tags_dropped},
      {"excluded_tags_removed", excluded_tags_removed},
      {"dropped_entries", dropped_entries},
      {"first_timestamp", first_timestamp},
      {"last_timestamp", last_timestamp},
      {"normalization", normalization},
  };
}

ParseResult parse_string(std::string_view text, const IngestConfig& config) {
  StreamFormat format = config.format;
  if (format == StreamFormat::auto_detect) {
    const std::string_view lead = trim_view(text.substr(0, 256));
    format = (!lead.empty() && lead.front() == '{') ? StreamFormat::jsonl
                                                    : StreamFormat::csv;
  }

  IngestStats stats;
  stats.normalization = config.normalize.describe();

  std::unordered_set<std::string> excluded;
  for (const std::string& t : config.excluded_tags) {
    excluded.insert(normalize_tag(t, config.normalize));
  }

  std::vector<RawEntry> raw;
  bool saw_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim_view(line).empty()) continue;

    if (format == StreamFormat::csv && !saw_header) {
      if (line != kCsvHeader) {
        throw FormatError("csv header must be '" + std::string(kCsvHeader) +
                          "', got '" + std::string(line) + "'");
      }
      saw_header = true;
      continue;
    }

    RawEntry entry;
    const bool ok = format == StreamFormat::jsonl
                        ? parse_jsonl_line(line, entry)
                        : parse_csv_line(line, entry);
    if (!ok) {
      ++stats.skipped_lines;
      continue;
    }

    // Normalize, dedup within the window, drop excluded tags. Tags that
    // normalize to the empty string count as excluded.
    std::vector<std::string> kept;
    std::unordered_set<std::string_view> seen;
    kept.reserve(entry.tags.size());
    for (const std::string& t : entry.tags) {
      std::string norm = normalize_tag(t, config.normalize);
      if (norm.empty() || excluded.contains(norm)) {
        ++stats.excluded_tags_removed;
        continue;
      }
      if (seen.contains(norm)) {
        ++stats.duplicate_tags_dropped;
        continue;
      }
      kept.push_back(std::move(norm));
      seen.insert(kept.back());
    }
    if (kept.size() < config.min_window_after_filter || kept.empty()) {
      ++stats.dropped_entries;
      continue;
    }
    entry.tags = std::move(kept);
    raw.push_back(std::move(entry));
  }

  if (raw.empty()) throw EmptyStreamError("no valid entries");

  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawEntry& a, const RawEntry& b) {
                     return a.ts < b.ts;
                   });

  ParseResult result;
  result.stream.entries.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    RawEntry& r = raw[i];
    Entry e;
    e.index = i;
    e.timestamp = r.ts;
    e.user = result.stream.users.intern(r.user);
    e.resource = result.stream.resources.intern(r.resource);
    e.tags.reserve(r.tags.size());
    for (const std::string& t : r.tags) {
      e.tags.push_back(result.stream.tags.intern_use(t));
    }
    result.stream.entries.push_back(std::move(e));
  }

  stats.users = result.stream.users.size();
  stats.vocabulary = result.stream.tags.size();
  stats.annotations = result.stream.tags.total();
  stats.entries = result.stream.entries.size();
  stats.first_timestamp = result.stream.entries.front().timestamp;
  stats.last_timestamp = result.stream.entries.back().timestamp;
  result.stats = stats;
  return result;
}

ParseResult parse_stream(std::istream& in, const IngestConfig& config) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), config);
}

ParseResult parse_file(const std::filesystem::path& path,
                       const IngestConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
      static_cast<unsigned char>(bytes[1]) == 0x8b) {
    bytes = inflate_gzip(bytes);
  }
  IngestConfig cfg = config;
  if (cfg.format == StreamFormat::auto_detect) {
    cfg.format = format_from_name(path.filename().string());
  }
  return parse_string(bytes, cfg);
}

void write_jsonl(std::ostream& out, const Stream& stream) {
  for (const Entry& e : stream.entries) {
    nlohmann::json tags = nlohmann::json::array();
    for (TagId t : e.tags) tags.push_back(stream.tags.name(t));
    const nlohmann::json j{
        {"ts", e.timestamp},
        {"user", stream.users.name(e.user)},
        {"resource", stream.resources.name(e.resource)},
        {"tags", std::move(tags)},
    };
    out << j.dump() << '\n';
  }
}

void write_csv(std::ostream& out, const Stream& stream) {
  out << kCsvHeader << '\n';
  for (const Entry& e : stream.entries) {
    const std::string& user = stream.users.name(e.user);
    const std::string& resource = stream.resources.name(e.resource);
    require_csv_safe(user, "user");
    require_csv_safe(resource, "resource");
    std::vector<std::string_view> tags;
    tags.reserve(e.tags.size());
    for (TagId t : e.tags) {
      const std::string& name = stream.tags.name(t);
      // Commas are fine here: the tags column is everything after the third
      // comma. Newlines would still break the row.
      if (name.find('\n') != std::string::npos ||
          name.find('\r') != std::string::npos) {
        throw FormatError("tag contains a newline; use jsonl: '" + name + "'");
      }
      tags.push_back(name);
    }
    out << e.timestamp << ',' << user << ',' << resource << ','
        << join_tags_field(tags) << '\n';
  }
}

void write_stream_file(const std::filesystem::path& path, const Stream& stream,
                       StreamFormat format) {
  if (format == StreamFormat::auto_detect) {
    format = format_from_name(path.filename().string());
    if (format == StreamFormat::auto_detect) format = StreamFormat::jsonl;
  }
  std::ostringstream buf;
  if (format == StreamFormat::jsonl) {
    write_jsonl(buf, stream);
  } else {
    write_csv(buf, stream);
  }
  std::string bytes = buf.str();
  if (ends_with(path.filename().string(), ".gz")) {
    bytes = deflate_gzip(bytes);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string join_tags_field(const std::vector<std::string_view>& tags) {
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i > 0) out.push_back('|');
    for (char c : tags[i]) {
      if (c == '\\' || c == '|') out.push_back('\\');
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> split_tags_field(std::string_view field) {
  std::vector<std::string> tags;
  std::string current;
  bool escaped = false;
  for (char c : field) {
    if (escaped) {
      current.push_back(c);
      escaped = false;
    } else if (c == '\\') {
      escaped = true;
    } else if (c == '|') {
      tags.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (escaped) current.push_back('\\');  // trailing backslash kept literally
  tags.push_back(std::move(current));
  return tags;
}

}  // namespace tagsim
