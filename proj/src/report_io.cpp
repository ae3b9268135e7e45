#include "tagsim/report_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tagsim/errors.hpp"
#include "tagsim/util.hpp"

namespace tagsim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing report file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw IoError("corrupt report file: " + path.string());
  }
  return j;
}

nlohmann::json period_json(const BinnedAlphaReport& r) {
  nlohmann::json bins = nlohmann::json::array();
  for (const AlphaBin& b : r.bins) {
    bins.push_back({{"bin", b.bin},
                    {"count", b.count},
                    {"mean_w", b.mean_w},
                    {"mean_alpha", b.mean_alpha},
                    {"retained", b.retained}});
  }
  return nlohmann::json{{"period", r.period},
                        {"start", r.period_start},
                        {"entries", r.entries},
                        {"capped_out", r.capped_out},
                        {"w_max", r.w_max},
                        {"mean_alpha", r.mean_alpha},
                        {"degenerate_range", r.degenerate_range},
                        {"retained_bins", r.retained_bins},
                        {"rho", r.rho},
                        {"rho_threshold_used", r.rho_threshold_used},
                        {"classification", to_string(r.classification)},
                        {"bins", std::move(bins)}};
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_w_distribution_tsv(const std::filesystem::path& path,
                              const WDistribution& dist) {
  auto out = open_out(path);
  out << "w\tcount\tpmf\n";
  for (std::size_t i = 0; i < dist.w.size(); ++i) {
    out << dist.w[i] << '\t' << dist.count[i] << '\t'
        << format_double(dist.pmf[i]) << '\n';
  }
}

void write_rank_frequency_tsv(const std::filesystem::path& path,
                              const std::vector<RankCount>& ranks,
                              const Lexicon& lexicon) {
  auto out = open_out(path);
  out << "rank\tcount\ttag\n";
  for (const RankCount& r : ranks) {
    out << r.rank << '\t' << r.count << '\t' << lexicon.name(r.tag) << '\n';
  }
}

void write_heaps_tsv(const std::filesystem::path& path,
                     const std::vector<GrowthPoint>& curve) {
  auto out = open_out(path);
  out << "n\tv\n";
  for (const GrowthPoint& p : curve) {
    out << p.n << '\t' << p.v << '\n';
  }
}

void write_alpha_w_bins_tsv(const std::filesystem::path& path,
                            const AlphaWAnalysis& analysis) {
  auto out = open_out(path);
  out << "period\tbin\tmean_w\tmean_alpha\tcount\n";
  for (const BinnedAlphaReport& r : analysis.periods) {
    for (const AlphaBin& b : r.bins) {
      if (!b.retained) continue;
      out << r.period << '\t' << b.bin << '\t' << format_double(b.mean_w)
          << '\t' << format_double(b.mean_alpha) << '\t' << b.count << '\n';
    }
  }
}

nlohmann::json alpha_w_summary_json(const AlphaWAnalysis& analysis,
                                    const AlphaWConfig& config) {
  nlohmann::json config_json{
      {"num_bins", config.num_bins},
      {"min_bin_entries", config.min_bin_entries},
      {"period_days", config.period_days},
      {"rho_threshold", config.rho_threshold},
      {"binary_innovation", config.binary_innovation},
      {"burn_in_periods", config.burn_in_periods},
  };
  config_json["w_cap"] =
      config.w_cap ? nlohmann::json(*config.w_cap) : nlohmann::json(nullptr);

  nlohmann::json periods = nlohmann::json::array();
  uint64_t n_positive = 0, n_negative = 0, n_none = 0, n_insufficient = 0;
  for (const BinnedAlphaReport& r : analysis.periods) {
    periods.push_back(period_json(r));
    if (r.period < config.burn_in_periods) continue;
    switch (r.classification) {
      case Classification::positive:
        ++n_positive;
        break;
      case Classification::negative:
        ++n_negative;
        break;
      case Classification::none:
        ++n_none;
        break;
      case Classification::insufficient:
        ++n_insufficient;
        break;
    }
  }

  std::string dominant = "insufficient";
  uint64_t best = 0;
  // Deterministic tie-break: positive, then negative, then none.
  for (const auto& [name, count] :
       {std::pair<const char*, uint64_t>{"positive", n_positive},
        {"negative", n_negative},
        {"none", n_none}}) {
    if (count > best) {
      best = count;
      dominant = name;
    }
  }

  return nlohmann::json{
      {"config", std::move(config_json)},
      {"origin", analysis.origin},
      {"omitted_periods", analysis.omitted_periods},
      {"periods", std::move(periods)},
      {"overall", analysis.overall ? period_json(*analysis.overall)
                                   : nlohmann::json(nullptr)},
      {"summary",
       {{"positive", n_positive},
        {"negative", n_negative},
        {"none", n_none},
        {"insufficient", n_insufficient},
        {"dominant", dominant}}},
  };
}

void write_motivation_tsv(const std::filesystem::path& path,
                          const std::vector<MotivationScore>& scores,
                          const Interner& users) {
  auto out = open_out(path);
  out << "user\tentries\tvocabulary\tresources\tm0\tm1\tm\th\th_opt\n";
  for (const MotivationScore& s : scores) {
    out << users.name(s.user) << '\t' << s.entries << '\t' << s.vocabulary
        << '\t' << s.resources << '\t' << format_double(s.m0) << '\t'
        << format_double(s.m1) << '\t' << format_double(s.m) << '\t'
        << format_double(s.h) << '\t' << format_double(s.h_opt) << '\n';
  }
}

void write_m_histogram_tsv(const std::filesystem::path& path,
                           const MHistogram& hist) {
  auto out = open_out(path);
  out << "bin\tlo\thi\tcount\tfraction\n";
  const double width = 1.0 / static_cast<double>(hist.bins);
  for (int b = 0; b < hist.bins; ++b) {
    out << b << '\t' << format_double(width * b) << '\t'
        << format_double(width * (b + 1)) << '\t'
        << hist.count[static_cast<std::size_t>(b)] << '\t'
        << format_double(hist.fraction[static_cast<std::size_t>(b)]) << '\n';
  }
}

nlohmann::json stats_summary_json(const WDistribution& dist,
                                  const std::vector<GrowthPoint>& heaps,
                                  const LogLogFit* zipf_fit) {
  nlohmann::json j{
      {"entries", dist.total},
      {"w",
       {{"median", dist.median},
        {"mean", dist.mean},
        {"max", dist.w.empty() ? 0 : dist.w.back()},
        {"support", dist.w.size()}}},
  };
  if (!heaps.empty()) {
    j["heaps"] = {{"final_n", heaps.back().n}, {"final_v", heaps.back().v}};
  } else {
    j["heaps"] = nullptr;
  }
  if (zipf_fit != nullptr) {
    j["zipf"] = {{"slope", zipf_fit->slope},
                 {"intercept", zipf_fit->intercept},
                 {"r2", zipf_fit->r2},
                 {"points_used", zipf_fit->points_used}};
  } else {
    j["zipf"] = nullptr;
  }
  return j;
}

nlohmann::json motivation_summary_json(
    const std::vector<MotivationScore>& scores, const MHistogram* hist,
    const MotivationConfig& config, uint64_t total_users) {
  nlohmann::json j{
      {"config",
       {{"min_entries_per_user", config.min_entries_per_user},
        {"weighted_tag_entropy", config.weighted_tag_entropy},
        {"uniform_tag_weights", config.uniform_tag_weights},
        {"histogram_bins", config.histogram_bins}}},
      {"total_users", total_users},
      {"effective_users", scores.size()},
  };
  if (hist != nullptr) {
    j["mean_m"] = hist->mean_m;
    j["dominant"] = hist->mean_m >= 0.5 ? "describer-dominated"
                                        : "categorizer-dominated";
  } else {
    j["mean_m"] = nullptr;
    j["dominant"] = "no effective users";
  }
  return j;
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
}

std::string render_report(const std::filesystem::path& dir) {
  const nlohmann::json manifest = read_json(dir / "manifest.json");
  const nlohmann::json ingest = read_json(dir / "ingest_stats.json");
  const nlohmann::json stats = read_json(dir / "stats_summary.json");
  const nlohmann::json alphaw = read_json(dir / "alpha_w_summary.json");
  const nlohmann::json motivation = read_json(dir / "motivation_summary.json");

  std::ostringstream out;
  out << "report: " << dir.string() << "\n";
  for (const auto& input : manifest.value("inputs", nlohmann::json::array())) {
    out << "input: " << input.value("name", "?") << " sha256="
        << input.value("sha256", "?").substr(0, 12) << "...\n";
  }

  out << "corpus: users=" << ingest.value("users", 0ULL)
      << " vocabulary=" << ingest.value("vocabulary", 0ULL)
      << " annotations=" << ingest.value("annotations", 0ULL)
      << " entries=" << ingest.value("entries", 0ULL) << "\n";

  const auto& w = stats.at("w");
  out << "w: median=" << w.value("median", 0)
      << " mean=" << fixed(w.value("mean", 0.0), 2) << "\n";
  if (stats.contains("zipf") && !stats["zipf"].is_null()) {
    out << "zipf: slope=" << fixed(stats["zipf"].value("slope", 0.0), 3)
        << " r2=" << fixed(stats["zipf"].value("r2", 0.0), 3) << "\n";
  }
  if (stats.contains("heaps") && !stats["heaps"].is_null()) {
    out << "heaps: annotations=" << stats["heaps"].value("final_n", 0ULL)
        << " vocabulary=" << stats["heaps"].value("final_v", 0ULL) << "\n";
  }

  const auto& periods = alphaw.at("periods");
  out << "alpha-w: periods=" << periods.size()
      << " omitted=" << alphaw.value("omitted_periods", 0ULL) << "\n";
  for (const auto& p : periods) {
    out << "  period " << p.value("period", 0)
        << ": entries=" << p.value("entries", 0ULL)
        << " retained_bins=" << p.value("retained_bins", 0ULL)
        << " rho=" << fixed(p.value("rho", 0.0), 3) << " -> "
        << p.value("classification", "?") << "\n";
  }
  if (alphaw.contains("overall") && !alphaw["overall"].is_null()) {
    const auto& o = alphaw["overall"];
    out << "  overall: entries=" << o.value("entries", 0ULL)
        << " retained_bins=" << o.value("retained_bins", 0ULL)
        << " rho=" << fixed(o.value("rho", 0.0), 3) << " -> "
        << o.value("classification", "?") << "\n";
  }

  if (motivation["mean_m"].is_null()) {
    out << "motivation: no effective users\n";
  } else {
    out << "motivation: effective_users="
        << motivation.value("effective_users", 0ULL) << "/"
        << motivation.value("total_users", 0ULL)
        << " mean_M=" << fixed(motivation.value("mean_m", 0.0), 3) << " -> "
        << motivation.value("dominant", "?") << "\n";
  }
  return out.str();
}

}  // namespace tagsim
