#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tagsim/alphaw.hpp"
#include "tagsim/motivation.hpp"
#include "tagsim/stats.hpp"

namespace tagsim {

/// Writers for the analysis report directory. All numbers are printed in
/// shortest round-trip form; rows are emitted in a deterministic order, so
/// equal analyses produce byte-identical files.

/// Columns: w, count, pmf.
void write_w_distribution_tsv(const std::filesystem::path& path,
                              const WDistribution& dist);

/// Columns: rank, count, tag.
void write_rank_frequency_tsv(const std::filesystem::path& path,
                              const std::vector<RankCount>& ranks,
                              const Lexicon& lexicon);

/// Columns: n, v.
void write_heaps_tsv(const std::filesystem::path& path,
                     const std::vector<GrowthPoint>& curve);

/// Columns: period, bin, mean_w, mean_alpha, count — retained bins only,
/// one block per period in chronological order. These are the plot points.
void write_alpha_w_bins_tsv(const std::filesystem::path& path,
                            const AlphaWAnalysis& analysis);

/// Per-period rho and classification plus the overall report and the config
/// that produced them.
nlohmann::json alpha_w_summary_json(const AlphaWAnalysis& analysis,
                                    const AlphaWConfig& config);

/// Columns: user, entries, vocabulary, resources, m0, m1, m, h, h_opt —
/// sorted by user id; the user column is the original user string.
void write_motivation_tsv(const std::filesystem::path& path,
                          const std::vector<MotivationScore>& scores,
                          const Interner& users);

/// Columns: bin, lo, hi, count, fraction.
void write_m_histogram_tsv(const std::filesystem::path& path,
                           const MHistogram& hist);

nlohmann::json stats_summary_json(const WDistribution& dist,
                                  const std::vector<GrowthPoint>& heaps,
                                  const LogLogFit* zipf_fit);

nlohmann::json motivation_summary_json(const std::vector<MotivationScore>& scores,
                                       const MHistogram* hist,
                                       const MotivationConfig& config,
                                       uint64_t total_users);

/// Write any JSON value with sorted keys, 2-space indent, trailing newline.
void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& value);

/// Plain-text summary of a report directory (the `report` subcommand).
/// Throws IoError when required files are missing or unreadable.
std::string render_report(const std::filesystem::path& report_dir);

}  // namespace tagsim
