#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "tagsim/alphaw.hpp"
#include "tagsim/generator.hpp"
#include "tagsim/ingest.hpp"
#include "tagsim/motivation.hpp"

namespace tagsim {

/// High-level commands shared by the CLI and the Python bindings. They
/// throw tagsim errors; callers map those to exit codes or exceptions.

struct SimulateOptions {
  GeneratorConfig generator;
  std::filesystem::path output;            // entry log
  std::optional<std::filesystem::path> truth;  // per-entry true alpha
  StreamFormat format = StreamFormat::auto_detect;  // from extension
  bool write_manifest = true;
};

/// Generate a stream and write it, the optional truth side file (one alpha
/// per line, shortest round-trip form), and a manifest next to the output.
void run_simulate(const SimulateOptions& opts);

struct AnalyzeOptions {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  IngestConfig ingest;
  AlphaWConfig alphaw;
  MotivationConfig motivation;
};

/// Full pipeline: ingest -> stats -> alpha-w -> motivation. Writes the
/// report directory (created if needed):
///   manifest.json, ingest_stats.json, stats_summary.json,
///   w_distribution.tsv, rank_frequency.tsv, heaps.tsv,
///   alpha_w_bins.tsv, alpha_w_summary.json,
///   motivation.tsv, m_histogram.tsv, motivation_summary.json
/// Deterministic: equal input bytes and options give byte-identical
/// directories.
void run_analyze(const AnalyzeOptions& opts);

/// Render the human-readable summary of an analyze directory.
std::string run_report(const std::filesystem::path& report_dir);

}  // namespace tagsim
