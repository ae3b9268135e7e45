#include "tagsim/pipeline.hpp"

#include <fstream>

#include "tagsim/errors.hpp"
#include "tagsim/manifest.hpp"
#include "tagsim/report_io.hpp"
#include "tagsim/stats.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

namespace {

nlohmann::json generator_config_json(const GeneratorConfig& g,
                                     StreamFormat format) {
  return nlohmann::json{
      {"seed", g.seed},
      {"entries", g.num_entries},
      {"alpha", g.alpha.describe()},
      {"window", g.window.describe()},
      {"users", g.num_users},
      {"per_entry_update", g.per_entry_update},
      {"format", to_string(format)},
  };
}

nlohmann::json ingest_config_json(const IngestConfig& c) {
  return nlohmann::json{
      {"format", to_string(c.format)},
      {"excluded_tags", c.excluded_tags},
      {"min_window_after_filter", c.min_window_after_filter},
      {"normalization", c.normalize.describe()},
  };
}

nlohmann::json motivation_config_json(const MotivationConfig& c) {
  return nlohmann::json{
      {"min_entries_per_user", c.min_entries_per_user},
      {"weighted_tag_entropy", c.weighted_tag_entropy},
      {"uniform_tag_weights", c.uniform_tag_weights},
      {"histogram_bins", c.histogram_bins},
  };
}

nlohmann::json alphaw_config_json(const AlphaWConfig& c) {
  nlohmann::json j{
      {"num_bins", c.num_bins},
      {"min_bin_entries", c.min_bin_entries},
      {"period_days", c.period_days},
      {"rho_threshold", c.rho_threshold},
      {"binary_innovation", c.binary_innovation},
      {"burn_in_periods", c.burn_in_periods},
  };
  j["w_cap"] = c.w_cap ? nlohmann::json(*c.w_cap) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

void run_simulate(const SimulateOptions& opts) {
  opts.generator.validate();
  const GeneratedStream generated = generate_stream(opts.generator);

  if (opts.output.has_parent_path()) {
    std::filesystem::create_directories(opts.output.parent_path());
  }
  write_stream_file(opts.output, generated.stream, opts.format);

  if (opts.truth) {
    std::ofstream truth(*opts.truth, std::ios::binary);
    if (!truth) throw IoError("cannot write " + opts.truth->string());
    for (double a : generated.true_alpha) {
      truth << format_double(a) << '\n';
    }
  }

  if (opts.write_manifest) {
    Manifest manifest;
    manifest.command = "simulate";
    manifest.config = generator_config_json(opts.generator, opts.format);
    manifest.data = {
        {"entries", generated.stream.entries.size()},
        {"vocabulary", generated.stream.tags.size()},
        {"annotations", generated.stream.tags.total()},
        {"output_sha256", sha256_file(opts.output)},
    };
    if (opts.truth) {
      manifest.data["truth_sha256"] = sha256_file(*opts.truth);
    }
    manifest.write(opts.output.string() + ".manifest.json");
  }
}

void run_analyze(const AnalyzeOptions& opts) {
  const ParseResult parsed = parse_file(opts.input, opts.ingest);
  const Stream& stream = parsed.stream;

  const WDistribution dist = w_distribution(stream);
  const std::vector<RankCount> ranks = rank_frequency(stream.tags);
  const std::vector<GrowthPoint> heaps = heaps_curve(stream);

  // Zipf slope over ranks 10..1000, when that range holds enough points.
  LogLogFit zipf;
  bool have_zipf = false;
  {
    std::vector<std::pair<double, double>> points;
    points.reserve(ranks.size());
    for (const RankCount& r : ranks) {
      points.emplace_back(static_cast<double>(r.rank),
                          static_cast<double>(r.count));
    }
    try {
      zipf = loglog_slope(points, 10.0, 1000.0);
      have_zipf = true;
    } catch (const InsufficientPointsError&) {
    }
  }

  const AlphaWAnalysis alphaw = alpha_w_analysis(stream, opts.alphaw);

  const std::vector<MotivationScore> scores =
      score_users(stream, opts.motivation);
  MHistogram hist;
  bool have_hist = false;
  if (!scores.empty()) {
    hist = m_histogram(scores, opts.motivation.histogram_bins);
    have_hist = true;
  }

  std::filesystem::create_directories(opts.output_dir);
  const auto& dir = opts.output_dir;

  write_json_file(dir / "ingest_stats.json", parsed.stats.to_json());
  write_w_distribution_tsv(dir / "w_distribution.tsv", dist);
  write_rank_frequency_tsv(dir / "rank_frequency.tsv", ranks, stream.tags);
  write_heaps_tsv(dir / "heaps.tsv", heaps);
  write_json_file(dir / "stats_summary.json",
                  stats_summary_json(dist, heaps, have_zipf ? &zipf : nullptr));
  write_alpha_w_bins_tsv(dir / "alpha_w_bins.tsv", alphaw);
  write_json_file(dir / "alpha_w_summary.json",
                  alpha_w_summary_json(alphaw, opts.alphaw));
  write_motivation_tsv(dir / "motivation.tsv", scores, stream.users);
  if (have_hist) {
    write_m_histogram_tsv(dir / "m_histogram.tsv", hist);
  } else {
    std::ofstream out(dir / "m_histogram.tsv", std::ios::binary);
    out << "bin\tlo\thi\tcount\tfraction\n";
  }
  write_json_file(dir / "motivation_summary.json",
                  motivation_summary_json(scores, have_hist ? &hist : nullptr,
                                          opts.motivation,
                                          stream.users.size()));

  Manifest manifest;
  manifest.command = "analyze";
  manifest.config = {
      {"ingest", ingest_config_json(opts.ingest)},
      {"alphaw", alphaw_config_json(opts.alphaw)},
      {"motivation", motivation_config_json(opts.motivation)},
  };
  manifest.inputs.emplace_back(opts.input.filename().string(),
                               sha256_file(opts.input));
  // Data facts only (no wall clock): reruns on equal inputs are identical.
  manifest.data = {
      {"entries", parsed.stats.entries},
      {"first_timestamp", parsed.stats.first_timestamp},
      {"last_timestamp", parsed.stats.last_timestamp},
  };
  manifest.write(dir / "manifest.json");
}

std::string run_report(const std::filesystem::path& report_dir) {
  return render_report(report_dir);
}

}  // namespace tagsim
