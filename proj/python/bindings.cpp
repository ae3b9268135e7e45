#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "tagsim/alphaw.hpp"
#include "tagsim/errors.hpp"
#include "tagsim/generator.hpp"
#include "tagsim/ingest.hpp"
#include "tagsim/pipeline.hpp"
#include "tagsim/version.hpp"

namespace py = pybind11;

namespace {

tagsim::StreamFormat parse_format(const std::string& name) {
  if (name == "auto") return tagsim::StreamFormat::auto_detect;
  if (name == "jsonl") return tagsim::StreamFormat::jsonl;
  if (name == "csv") return tagsim::StreamFormat::csv;
  throw tagsim::ConfigError("format must be auto, jsonl, or csv, got '" +
                            name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Windowed tagging-process simulation and entry-stream analysis";
  m.attr("__version__") = tagsim::kVersion;

  // Base first: translators run newest-first, so the specific config error
  // must be registered after the catch-all.
  py::register_exception<tagsim::Error>(m, "TagsimError", PyExc_RuntimeError);
  py::register_exception<tagsim::ConfigError>(m, "ConfigurationError",
                                              PyExc_ValueError);

  m.def(
      "simulate",
      [](const std::string& output, uint64_t entries, const std::string& alpha,
         const std::string& window, uint64_t seed, uint32_t users,
         bool per_entry_update, std::optional<std::string> truth,
         const std::string& format, bool manifest) {
        tagsim::SimulateOptions opts;
        opts.generator.num_entries = entries;
        opts.generator.alpha = tagsim::AlphaSchedule::parse(alpha);
        opts.generator.window = tagsim::WindowSampler::parse(window);
        opts.generator.seed = seed;
        opts.generator.num_users = users;
        opts.generator.per_entry_update = per_entry_update;
        opts.output = output;
        if (truth) opts.truth = *truth;
        opts.format = parse_format(format);
        opts.write_manifest = manifest;
        tagsim::run_simulate(opts);
        return output;
      },
      py::arg("output"), py::arg("entries"),
      py::arg("alpha") = "constant:0.1", py::arg("window") = "constant:1",
      py::arg("seed") = 1, py::arg("users") = 1,
      py::arg("per_entry_update") = false, py::arg("truth") = py::none(),
      py::arg("format") = "auto", py::arg("manifest") = true,
      py::call_guard<py::gil_scoped_release>(),
      "Generate a seeded synthetic tagging stream and write it to `output` "
      "(with an optional per-entry true-alpha side file). Returns the "
      "output path.");

  m.def(
      "analyze",
      [](const std::string& input, const std::string& out,
         const std::string& format, std::vector<std::string> exclude_tags,
         uint32_t min_window, bool nfc, int period_days, int bins,
         uint64_t min_bin_entries, std::optional<uint32_t> w_cap,
         double rho_threshold, bool binary_innovation, int burn_in_periods,
         uint64_t min_entries_per_user, bool weighted_tag_entropy,
         bool uniform_tag_weights, int histogram_bins) {
        tagsim::AnalyzeOptions opts;
        opts.input = input;
        opts.output_dir = out;
        opts.ingest.format = parse_format(format);
        opts.ingest.excluded_tags = std::move(exclude_tags);
        opts.ingest.min_window_after_filter = min_window;
        opts.ingest.normalize.nfc = nfc;
        opts.alphaw.period_days = period_days;
        opts.alphaw.num_bins = bins;
        opts.alphaw.min_bin_entries = min_bin_entries;
        opts.alphaw.w_cap = w_cap;
        opts.alphaw.rho_threshold = rho_threshold;
        opts.alphaw.binary_innovation = binary_innovation;
        opts.alphaw.burn_in_periods = burn_in_periods;
        opts.motivation.min_entries_per_user = min_entries_per_user;
        opts.motivation.weighted_tag_entropy = weighted_tag_entropy;
        opts.motivation.uniform_tag_weights = uniform_tag_weights;
        opts.motivation.histogram_bins = histogram_bins;
        tagsim::run_analyze(opts);
        return out;
      },
      py::arg("input"), py::arg("out"), py::arg("format") = "auto",
      py::arg("exclude_tags") = std::vector<std::string>{},
      py::arg("min_window") = 1, py::arg("nfc") = true,
      py::arg("period_days") = 91, py::arg("bins") = 20,
      py::arg("min_bin_entries") = 100, py::arg("w_cap") = py::none(),
      py::arg("rho_threshold") = 0.2, py::arg("binary_innovation") = false,
      py::arg("burn_in_periods") = 0, py::arg("min_entries_per_user") = 200,
      py::arg("weighted_tag_entropy") = false,
      py::arg("uniform_tag_weights") = false, py::arg("histogram_bins") = 20,
      py::call_guard<py::gil_scoped_release>(),
      "Run the full analysis pipeline on an entry log and write the report "
      "directory. Returns the directory path.");

  m.def(
      "report",
      [](const std::string& report_dir) {
        return tagsim::run_report(report_dir);
      },
      py::arg("report_dir"), py::call_guard<py::gil_scoped_release>(),
      "Render the plain-text summary of an analyze directory.");

  m.def("bin_index", &tagsim::bin_index, py::arg("w"), py::arg("w_max"),
        py::arg("num_bins") = 20,
        "Logarithmic bin of a window size among num_bins bins.");

  m.def(
      "spearman_rho",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return tagsim::spearman_rho(xs, ys);
      },
      py::arg("xs"), py::arg("ys"),
      "Spearman rank correlation with average ranks for ties.");

  m.def("spearman_critical", &tagsim::spearman_critical, py::arg("n"),
        py::arg("significance") = 0.05,
        "Two-sided critical |rho| under the independence null.");
}
