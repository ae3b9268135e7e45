#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tagsim/errors.hpp"
#include "tagsim/ingest.hpp"
#include "tagsim/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

tagsim::SimulateOptions small_sim(const fs::path& dir) {
  tagsim::SimulateOptions opts;
  opts.generator.seed = 5;
  opts.generator.num_entries = 3000;
  opts.generator.num_users = 3;
  opts.generator.alpha = tagsim::AlphaSchedule::constant(0.2);
  opts.generator.window = tagsim::WindowSampler::uniform(1, 8);
  opts.output = dir / "stream.jsonl";
  opts.truth = dir / "truth.txt";
  return opts;
}

}  // namespace

TEST_CASE("simulate writes stream, truth, and manifest deterministically") {
  const fs::path dir = fs::temp_directory_path() / "tagsim_pipe_sim";
  fs::remove_all(dir);
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");

  auto a = small_sim(dir / "a");
  auto b = small_sim(dir / "b");
  tagsim::run_simulate(a);
  tagsim::run_simulate(b);

  CHECK(slurp(a.output) == slurp(b.output));
  CHECK(slurp(*a.truth) == slurp(*b.truth));
  CHECK(fs::exists(dir / "a" / "stream.jsonl.manifest.json"));

  // The stream parses back with as many entries as requested.
  const auto parsed = tagsim::parse_file(a.output, tagsim::IngestConfig{});
  CHECK(parsed.stats.entries == 3000);

  // One truth line per entry, each a valid number in [0, 1].
  std::ifstream truth(*a.truth);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(truth, line)) {
    const double v = std::stod(line);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    ++lines;
  }
  CHECK(lines == 3000);

  fs::remove_all(dir);
}

TEST_CASE("analyze produces the full report directory, byte-identical on reruns") {
  const fs::path dir = fs::temp_directory_path() / "tagsim_pipe_analyze";
  fs::remove_all(dir);
  fs::create_directories(dir);

  auto sim = small_sim(dir);
  sim.generator.num_entries = 5000;
  tagsim::run_simulate(sim);

  tagsim::AnalyzeOptions an;
  an.input = sim.output;
  an.alphaw.min_bin_entries = 50;
  an.motivation.min_entries_per_user = 100;

  const std::vector<std::string> expected = {
      "alpha_w_bins.tsv",   "alpha_w_summary.json", "heaps.tsv",
      "ingest_stats.json",  "m_histogram.tsv",      "manifest.json",
      "motivation.tsv",     "motivation_summary.json",
      "rank_frequency.tsv", "stats_summary.json",   "w_distribution.tsv"};

  an.output_dir = dir / "out1";
  tagsim::run_analyze(an);
  an.output_dir = dir / "out2";
  tagsim::run_analyze(an);

  for (const auto& name : expected) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir / "out1" / name));
    CHECK(slurp(dir / "out1" / name) == slurp(dir / "out2" / name));
  }

  // The TSVs open with their documented headers.
  CHECK(slurp(dir / "out1" / "alpha_w_bins.tsv")
            .starts_with("period\tbin\tmean_w\tmean_alpha\tcount"));
  CHECK(slurp(dir / "out1" / "motivation.tsv")
            .starts_with(
                "user\tentries\tvocabulary\tresources\tm0\tm1\tm\th\th_opt"));
  CHECK(slurp(dir / "out1" / "w_distribution.tsv").starts_with("w\tcount\tpmf"));

  fs::remove_all(dir);
}

TEST_CASE("report renders the headline numbers from a report directory") {
  const fs::path dir = fs::temp_directory_path() / "tagsim_pipe_report";
  fs::remove_all(dir);
  fs::create_directories(dir);

  auto sim = small_sim(dir);
  tagsim::run_simulate(sim);

  tagsim::AnalyzeOptions an;
  an.input = sim.output;
  an.output_dir = dir / "out";
  an.alphaw.min_bin_entries = 50;
  an.motivation.min_entries_per_user = 100;
  tagsim::run_analyze(an);

  const std::string text = tagsim::run_report(an.output_dir);
  CHECK(text.find("w: median=") != std::string::npos);
  CHECK(text.find("corpus: users=3") != std::string::npos);
  CHECK(text.find("entries=3000") != std::string::npos);
  CHECK(text.find("period 0:") != std::string::npos);
  CHECK(text.find("overall:") != std::string::npos);

  CHECK_THROWS_AS(tagsim::run_report(dir / "missing"), tagsim::IoError);

  fs::remove_all(dir);
}

TEST_CASE("analyze surfaces empty input as a stream error") {
  const fs::path dir = fs::temp_directory_path() / "tagsim_pipe_empty";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "empty.jsonl").close();

  tagsim::AnalyzeOptions an;
  an.input = dir / "empty.jsonl";
  an.output_dir = dir / "out";
  CHECK_THROWS_AS(tagsim::run_analyze(an), tagsim::EmptyStreamError);
  fs::remove_all(dir);
}
