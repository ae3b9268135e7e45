#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tagsim/errors.hpp"
#include "tagsim/ingest.hpp"

namespace fs = std::filesystem;
using tagsim::IngestConfig;
using tagsim::ParseResult;
using tagsim::Stream;
using tagsim::StreamFormat;

namespace {

const char* kThreeGood =
    "{\"ts\":100,\"user\":\"alice\",\"resource\":\"r1\",\"tags\":[\"web\",\"css\"]}\n"
    "{\"ts\":50,\"user\":\"bob\",\"resource\":\"r2\",\"tags\":[\"web\"]}\n"
    "\n"
    "{\"ts\":200,\"user\":\"alice\",\"resource\":\"r3\",\"tags\":[\"art\"]}\n";

// Field-by-field comparison through the interned names, so two streams that
// went through different serializations can still be checked for identity.
void check_same_stream(const Stream& a, const Stream& b) {
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& ea = a.entries[i];
    const auto& eb = b.entries[i];
    CHECK(ea.index == eb.index);
    CHECK(ea.timestamp == eb.timestamp);
    CHECK(a.users.name(ea.user) == b.users.name(eb.user));
    CHECK(a.resources.name(ea.resource) == b.resources.name(eb.resource));
    REQUIRE(ea.tags.size() == eb.tags.size());
    for (std::size_t j = 0; j < ea.tags.size(); ++j) {
      CHECK(a.tags.name(ea.tags[j]) == b.tags.name(eb.tags[j]));
    }
  }
}

}  // namespace

TEST_CASE("jsonl parsing: counts, sorting, and indices") {
  const ParseResult r = tagsim::parse_string(kThreeGood, IngestConfig{});
  CHECK(r.stats.entries == 3);
  CHECK(r.stats.users == 2);
  CHECK(r.stats.vocabulary == 3);
  CHECK(r.stats.annotations == 4);
  CHECK(r.stats.skipped_lines == 0);
  CHECK(r.stats.first_timestamp == 50);
  CHECK(r.stats.last_timestamp == 200);
  // Sorted by timestamp; index is the sorted position.
  REQUIRE(r.stream.entries.size() == 3);
  CHECK(r.stream.entries[0].timestamp == 50);
  CHECK(r.stream.entries[1].timestamp == 100);
  CHECK(r.stream.entries[2].timestamp == 200);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.stream.entries[i].index == i);
  }
  CHECK(r.stream.users.name(r.stream.entries[0].user) == "bob");
}

TEST_CASE("malformed lines are skipped and counted, blanks are free") {
  const std::string text =
      std::string(kThreeGood) +
      "not json at all\n"
      "{\"ts\":\"oops\",\"user\":\"x\",\"resource\":\"r\",\"tags\":[\"t\"]}\n"
      "{\"ts\":5,\"user\":\"x\",\"resource\":\"r\"}\n"
      "\n   \n";
  const ParseResult r = tagsim::parse_string(text, IngestConfig{});
  CHECK(r.stats.entries == 3);
  CHECK(r.stats.skipped_lines == 3);
}

TEST_CASE("equal timestamps preserve input order") {
  const char* text =
      "{\"ts\":7,\"user\":\"u\",\"resource\":\"first\",\"tags\":[\"a\"]}\n"
      "{\"ts\":7,\"user\":\"u\",\"resource\":\"second\",\"tags\":[\"b\"]}\n";
  const ParseResult r = tagsim::parse_string(text, IngestConfig{});
  REQUIRE(r.stream.entries.size() == 2);
  CHECK(r.stream.resources.name(r.stream.entries[0].resource) == "first");
  CHECK(r.stream.resources.name(r.stream.entries[1].resource) == "second");
}

TEST_CASE("csv parsing requires the canonical header") {
  const char* good =
      "timestamp,user,resource,tags\n"
      "10,u1,http://a,web|css\n";
  const ParseResult r = tagsim::parse_string(good, IngestConfig{});
  CHECK(r.stats.entries == 1);
  CHECK(r.stats.annotations == 2);

  IngestConfig csv;
  csv.format = StreamFormat::csv;
  CHECK_THROWS_AS(tagsim::parse_string("time,user,res,tags\n1,u,r,t\n", csv),
                  tagsim::FormatError);
}

TEST_CASE("csv tag column escapes pipes and backslashes") {
  const std::vector<std::string_view> tags = {"a|b", "c\\d", "plain"};
  const std::string field = tagsim::join_tags_field(tags);
  CHECK(field == "a\\|b|c\\\\d|plain");
  const auto back = tagsim::split_tags_field(field);
  REQUIRE(back.size() == 3);
  CHECK(back[0] == "a|b");
  CHECK(back[1] == "c\\d");
  CHECK(back[2] == "plain");
}

TEST_CASE("jsonl and csv round trips preserve every field") {
  const ParseResult original = tagsim::parse_string(kThreeGood, IngestConfig{});

  std::ostringstream js;
  tagsim::write_jsonl(js, original.stream);
  const ParseResult via_json = tagsim::parse_string(js.str(), IngestConfig{});
  check_same_stream(original.stream, via_json.stream);
  CHECK(via_json.stats.annotations == original.stats.annotations);
  CHECK(via_json.stats.vocabulary == original.stats.vocabulary);

  std::ostringstream cs;
  tagsim::write_csv(cs, original.stream);
  IngestConfig csv;
  csv.format = StreamFormat::csv;
  const ParseResult via_csv = tagsim::parse_string(cs.str(), csv);
  check_same_stream(original.stream, via_csv.stream);
}

TEST_CASE("csv writing rejects commas and newlines in identity fields") {
  const char* text =
      "{\"ts\":1,\"user\":\"a,b\",\"resource\":\"r\",\"tags\":[\"t\"]}\n";
  const ParseResult r = tagsim::parse_string(text, IngestConfig{});
  std::ostringstream out;
  CHECK_THROWS_AS(tagsim::write_csv(out, r.stream), tagsim::FormatError);
}

TEST_CASE("duplicate tags within a window collapse") {
  const char* text =
      "{\"ts\":1,\"user\":\"u\",\"resource\":\"r\",\"tags\":[\"a\",\"a\",\"b\",\"a\"]}\n";
  const ParseResult r = tagsim::parse_string(text, IngestConfig{});
  CHECK(r.stream.entries[0].tags.size() == 2);
  CHECK(r.stats.duplicate_tags_dropped == 2);
  CHECK(r.stats.annotations == 2);
}

TEST_CASE("excluded tags are removed after normalization") {
  IngestConfig cfg;
  cfg.excluded_tags = {"  cafe\xCC\x81  "};  // decomposed, padded
  const char* text =
      "{\"ts\":1,\"user\":\"u\",\"resource\":\"r\",\"tags\":[\"caf\xC3\xA9\",\"keep\"]}\n";
  const ParseResult r = tagsim::parse_string(text, cfg);
  REQUIRE(r.stream.entries.size() == 1);
  CHECK(r.stream.entries[0].tags.size() == 1);
  CHECK(r.stream.tags.name(r.stream.entries[0].tags[0]) == "keep");
  CHECK(r.stats.excluded_tags_removed == 1);
}

TEST_CASE("tags emptied by trimming count as excluded") {
  const char* text =
      "{\"ts\":1,\"user\":\"u\",\"resource\":\"r\",\"tags\":[\"   \",\"real\"]}\n";
  const ParseResult r = tagsim::parse_string(text, IngestConfig{});
  CHECK(r.stream.entries[0].tags.size() == 1);
  CHECK(r.stats.excluded_tags_removed == 1);
}

TEST_CASE("windows under the minimum size are dropped") {
  IngestConfig cfg;
  cfg.min_window_after_filter = 2;
  const char* text =
      "{\"ts\":1,\"user\":\"u\",\"resource\":\"r1\",\"tags\":[\"solo\"]}\n"
      "{\"ts\":2,\"user\":\"u\",\"resource\":\"r2\",\"tags\":[\"a\",\"b\"]}\n";
  const ParseResult r = tagsim::parse_string(text, cfg);
  CHECK(r.stats.entries == 1);
  CHECK(r.stats.dropped_entries == 1);
  CHECK(r.stream.entries[0].tags.size() == 2);
}

TEST_CASE("streams with nothing valid raise EmptyStreamError") {
  CHECK_THROWS_AS(tagsim::parse_string("", IngestConfig{}),
                  tagsim::EmptyStreamError);
  // Leading '{' routes auto-detection to jsonl; the broken line is skipped
  // and the stream comes out empty.
  CHECK_THROWS_AS(tagsim::parse_string("{not valid json}\n", IngestConfig{}),
                  tagsim::EmptyStreamError);
  // Anything else is treated as csv, where a bad header is a container-level
  // problem rather than a skippable record.
  CHECK_THROWS_AS(tagsim::parse_string("garbage\n", IngestConfig{}),
                  tagsim::FormatError);
}

TEST_CASE("normalization modes are recorded and applied") {
  const char* text =
      "{\"ts\":1,\"user\":\"u\",\"resource\":\"r\",\"tags\":[\" cafe\xCC\x81 \"]}\n";
  const ParseResult composed = tagsim::parse_string(text, IngestConfig{});
  CHECK(composed.stats.normalization == "trim,nfc");
  CHECK(composed.stream.tags.name(0) == "caf\xC3\xA9");

  IngestConfig raw;
  raw.normalize.nfc = false;
  const ParseResult trimmed = tagsim::parse_string(text, raw);
  CHECK(trimmed.stats.normalization == "trim");
  CHECK(trimmed.stream.tags.name(0) == "cafe\xCC\x81");
}

TEST_CASE("gzip files round trip through magic-byte detection") {
  const fs::path dir = fs::temp_directory_path() / "tagsim_ingest_test";
  fs::create_directories(dir);
  const fs::path plain = dir / "s.jsonl";
  const fs::path gz = dir / "s.jsonl.gz";

  const ParseResult original = tagsim::parse_string(kThreeGood, IngestConfig{});
  tagsim::write_stream_file(plain, original.stream, StreamFormat::auto_detect);
  tagsim::write_stream_file(gz, original.stream, StreamFormat::auto_detect);

  // The gzip file must actually be gzip (magic bytes) and smallish.
  std::ifstream in(gz, std::ios::binary);
  char magic[2] = {};
  in.read(magic, 2);
  CHECK(static_cast<unsigned char>(magic[0]) == 0x1f);
  CHECK(static_cast<unsigned char>(magic[1]) == 0x8b);

  const ParseResult via_plain = tagsim::parse_file(plain, IngestConfig{});
  const ParseResult via_gz = tagsim::parse_file(gz, IngestConfig{});
  check_same_stream(original.stream, via_plain.stream);
  check_same_stream(original.stream, via_gz.stream);

  fs::remove_all(dir);
}

TEST_CASE("ingest stats serialize to the expected keys") {
  const ParseResult r = tagsim::parse_string(kThreeGood, IngestConfig{});
  const auto j = r.stats.to_json();
  CHECK(j.at("entries") == 3);
  CHECK(j.at("users") == 2);
  CHECK(j.at("vocabulary") == 3);
  CHECK(j.at("annotations") == 4);
  CHECK(j.at("normalization") == "trim,nfc");
}
