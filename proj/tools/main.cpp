// tagsim command-line interface: simulate | analyze | report.
//
// Exit codes: 0 success, 1 data error (unreadable/empty/corrupt input),
// 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "tagsim/errors.hpp"
#include "tagsim/pipeline.hpp"
#include "tagsim/util.hpp"
#include "tagsim/version.hpp"

namespace {

tagsim::StreamFormat parse_format(const std::string& name) {
  if (name == "jsonl") return tagsim::StreamFormat::jsonl;
  if (name == "csv") return tagsim::StreamFormat::csv;
  if (name == "auto") return tagsim::StreamFormat::auto_detect;
  throw tagsim::ConfigError("format: expected jsonl, csv, or auto, got '" +
                            name + "'");
}

std::vector<std::string> read_tag_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tagsim::IoError("cannot open tag list " + path);
  std::vector<std::string> tags;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = tagsim::trim_view(line);
    if (!t.empty()) tags.emplace_back(t);
  }
  return tags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed tagging-process simulator and entry-stream analyzer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tagsim::kVersion);
  app.set_config("--config", "", "Read options from a key=value config file");

  // --- simulate ------------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "Generate a synthetic entry stream with planted innovation");
  std::string sim_out;
  std::string sim_truth;
  std::string sim_alpha = "constant:0.1";
  std::string sim_window = "constant:1";
  std::string sim_format = "auto";
  uint64_t sim_entries = 0;
  uint64_t sim_seed = 1;
  uint32_t sim_users = 1;
  bool sim_per_entry_update = false;
  bool sim_no_manifest = false;
  sim->add_option("--output,-o", sim_out, "Entry log to write (.jsonl/.csv, optional .gz)")
      ->required();
  sim->add_option("--entries,-n", sim_entries, "Number of entries")->required();
  sim->add_option("--alpha", sim_alpha,
                  "Innovation schedule: VALUE | constant:V | decay:A:B | "
                  "coupled:W=V,...")
      ->capture_default_str();
  sim->add_option("--window", sim_window,
                  "Window sampler: N | constant:N | uniform:LO:HI | "
                  "powerlaw:EXP:MAX | pmf:W=P,...")
      ->capture_default_str();
  sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  sim->add_option("--users", sim_users, "Number of synthetic users")
      ->capture_default_str();
  sim->add_flag("--per-entry-update", sim_per_entry_update,
                "Defer count updates to entry end (draws inside one window "
                "see entry-start counts)");
  sim->add_option("--truth", sim_truth,
                  "Side file receiving each entry's true alpha, one per line");
  sim->add_option("--format", sim_format, "jsonl | csv | auto (by extension)")
      ->capture_default_str();
  sim->add_flag("--no-manifest", sim_no_manifest,
                "Skip writing OUTPUT.manifest.json");

  // --- analyze ---------------------------------------------------------
  auto* ana = app.add_subcommand(
      "analyze", "Ingest an entry log and write the full report directory");
  std::string ana_input;
  std::string ana_out;
  std::string ana_format = "auto";
  std::string ana_exclude_file;
  uint32_t ana_min_window = 1;
  bool ana_no_nfc = false;
  int ana_period_days = 91;
  int ana_bins = 20;
  uint64_t ana_min_bin_entries = 100;
  uint32_t ana_w_cap = 0;
  double ana_rho_threshold = 0.2;
  bool ana_binary_innovation = false;
  int ana_burn_in = 0;
  uint64_t ana_min_entries_user = 200;
  bool ana_weighted_entropy = false;
  bool ana_uniform_weights = false;
  int ana_hist_bins = 20;
  int ana_threads = 1;
  ana->add_option("input", ana_input, "Entry log (.jsonl/.csv, optional .gz)")
      ->required();
  ana->add_option("--out,-o", ana_out, "Report directory to create")
      ->required();
  ana->add_option("--format", ana_format, "jsonl | csv | auto")
      ->capture_default_str();
  ana->add_option("--exclude-tags-file", ana_exclude_file,
                  "File with one tag per line to strip from every window");
  ana->add_option("--min-window", ana_min_window,
                  "Drop entries whose window shrinks below this after filtering")
      ->capture_default_str();
  ana->add_flag("--no-nfc", ana_no_nfc,
                "Normalize tags by trimming only (skip Unicode NFC)");
  ana->add_option("--period-days", ana_period_days,
                  "Period length in days for the per-period analysis")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ana->add_option("--bins", ana_bins, "Number of log-scale w bins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ana->add_option("--min-bin-entries", ana_min_bin_entries,
                  "Retain a bin only when its entry count exceeds this")
      ->capture_default_str();
  ana->add_option("--w-cap", ana_w_cap,
                  "Exclude entries with w above this from the alpha-w "
                  "analysis only (0 = no cap)")
      ->capture_default_str();
  ana->add_option("--rho-threshold", ana_rho_threshold,
                  "Minimum |rho| for a positive/negative call (the 95% null "
                  "critical value also applies)")
      ->capture_default_str();
  ana->add_flag("--binary-innovation", ana_binary_innovation,
                "Score entries 1 if any tag is novel instead of the novel "
                "fraction");
  ana->add_option("--burn-in", ana_burn_in,
                  "Leading periods excluded from the classification summary")
      ->capture_default_str();
  ana->add_option("--min-entries-per-user", ana_min_entries_user,
                  "Motivation indices include users with strictly more "
                  "entries than this")
      ->capture_default_str();
  ana->add_flag("--weighted-tag-entropy", ana_weighted_entropy,
                "Weight per-tag entropy by repeat annotations per resource");
  ana->add_flag("--uniform-tag-weights", ana_uniform_weights,
                "Weight tags uniformly in H(R|T) instead of by annotation "
                "share");
  ana->add_option("--histogram-bins", ana_hist_bins,
                  "Bins of the motivation histogram over [0,1]")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ana->add_option("--threads", ana_threads,
                  "Upper bound on worker threads (processing is currently "
                  "sequential; any cap >= 1 is honored)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  // --- report ----------------------------------------------------------
  auto* rep = app.add_subcommand(
      "report", "Print a plain-text summary of an analyze directory");
  std::string rep_dir;
  rep->add_option("dir", rep_dir, "Report directory written by analyze")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      tagsim::SimulateOptions opts;
      opts.generator.seed = sim_seed;
      opts.generator.num_entries = sim_entries;
      opts.generator.alpha = tagsim::AlphaSchedule::parse(sim_alpha);
      opts.generator.window = tagsim::WindowSampler::parse(sim_window);
      opts.generator.num_users = sim_users;
      opts.generator.per_entry_update = sim_per_entry_update;
      opts.output = sim_out;
      if (!sim_truth.empty()) opts.truth = sim_truth;
      opts.format = parse_format(sim_format);
      opts.write_manifest = !sim_no_manifest;
      tagsim::run_simulate(opts);
    } else if (ana->parsed()) {
      tagsim::AnalyzeOptions opts;
      opts.input = ana_input;
      opts.output_dir = ana_out;
      opts.ingest.format = parse_format(ana_format);
      if (!ana_exclude_file.empty()) {
        opts.ingest.excluded_tags = read_tag_list(ana_exclude_file);
      }
      opts.ingest.min_window_after_filter = ana_min_window;
      opts.ingest.normalize.nfc = !ana_no_nfc;
      opts.alphaw.num_bins = ana_bins;
      opts.alphaw.min_bin_entries = ana_min_bin_entries;
      if (ana_w_cap > 0) opts.alphaw.w_cap = ana_w_cap;
      opts.alphaw.period_days = ana_period_days;
      opts.alphaw.rho_threshold = ana_rho_threshold;
      opts.alphaw.binary_innovation = ana_binary_innovation;
      opts.alphaw.burn_in_periods = ana_burn_in;
      opts.motivation.min_entries_per_user = ana_min_entries_user;
      opts.motivation.weighted_tag_entropy = ana_weighted_entropy;
      opts.motivation.uniform_tag_weights = ana_uniform_weights;
      opts.motivation.histogram_bins = ana_hist_bins;
      tagsim::run_analyze(opts);
    } else if (rep->parsed()) {
      std::cout << tagsim::run_report(rep_dir);
    }
  } catch (const tagsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tagsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
