#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "vfa/agents.hpp"
#include "vfa/engine.hpp"
#include "vfa/errors.hpp"
#include "vfa/harness.hpp"
#include "vfa/rank.hpp"
#include "vfa/report.hpp"
#include "vfa/stats.hpp"

namespace py = pybind11;
using namespace vfa;

namespace {

// JSON crosses the boundary as text; the Python package wraps it with the json module.

std::vector<Rank> to_ranks(const std::vector<std::string>& keys) {
  std::vector<Rank> out;
  for (const auto& k : keys) {
    const auto r = rank_from_key(k);
    if (!r) throw UsageError("unknown rank \"" + k + "\"");
    out.push_back(*r);
  }
  return out;
}

EmpiricalDistribution indexed(const std::vector<std::int64_t>& counts,
                              const std::optional<std::vector<std::int64_t>>& support) {
  EmpiricalDistribution d;
  if (support) {
    d.support = *support;
  } else {
    for (std::size_t i = 0; i < counts.size(); ++i) d.support.push_back(static_cast<std::int64_t>(i));
  }
  if (d.support.size() != counts.size()) throw UsageError("support and counts differ in length");
  d.counts = counts;
  return d;
}

py::dict test_dict(const TestResult& t) {
  py::dict d;
  d["statistic"] = t.statistic;
  d["df"] = t.df;
  d["p_value"] = t.p_value;
  return d;
}

ExperimentConfig config_from_text(const std::string& config_json) {
  try {
    return config_from_json(nlohmann::json::parse(config_json));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_vfa, m) {
  m.doc() = "Blackjack draw experiments and distribution-shift tests (C++ core).";

  auto base = py::register_exception<Error>(m, "VfaError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataQualityError>(m, "DataQualityError", base.ptr());
  auto io = py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<LoadError>(m, "LoadError", io.ptr());
  py::register_exception<TestDegenerateError>(m, "TestDegenerateError", base.ptr());
  py::register_exception<DivergenceUndefinedError>(m, "DivergenceUndefinedError", base.ptr());

  // ---- engine ----
  m.def(
      "hand_value",
      [](const std::vector<std::string>& cards) {
        const auto v = hand_value(to_ranks(cards));
        return py::make_tuple(v.total, v.soft);
      },
      py::arg("cards"), "(total, soft) of a hand given as rank keys (\"2\"..\"10\", \"jack\", ..., \"ace\").");
  m.def(
      "dealer_should_hit", [](const std::vector<std::string>& cards) { return dealer_should_hit(to_ranks(cards)); },
      py::arg("cards"));
  m.def(
      "player_should_hit",
      [](int total, const std::string& upcard) { return player_should_hit(total, to_ranks({upcard}).front()); },
      py::arg("total"), py::arg("upcard"));
  m.def(
      "play_scripted",
      [](const std::vector<std::string>& cards) {
        ScriptedSource source{to_ranks(cards)};
        return entry_line(play_hand(source, 0));
      },
      py::arg("cards"), "Plays one hand from a fixed draw order; returns the JSON trial record.");
  m.def(
      "parse_rank", [](const std::string& text) { return std::string(rank_key(parse_rank(text))); },
      py::arg("response"), "Rank key named in a free-text agent response.");

  // ---- harness ----
  py::class_<TrialLog>(m, "TrialLog")
      .def_property_readonly("experiment_id", [](const TrialLog& l) { return l.config.experiment_id; })
      .def_property_readonly("config_hash", [](const TrialLog& l) { return l.config_hash; })
      .def_property_readonly("config_json", [](const TrialLog& l) { return config_to_json(l.config).dump(); })
      .def_property_readonly("trials", [](const TrialLog& l) { return l.config.trials; })
      .def_property_readonly("success_count", &TrialLog::success_count)
      .def_property_readonly("failure_count", &TrialLog::failure_count)
      .def("__len__", [](const TrialLog& l) { return l.entries.size(); })
      .def("to_jsonl", &serialize_log)
      .def("save", [](const TrialLog& l, const std::filesystem::path& p) { save_log(l, p); }, py::arg("path"))
      .def("verify_replay", &verify_replay, "Trial indices whose stored result differs from an engine replay.")
      .def("summary_json", [](const TrialLog& l) { return summary_to_json(summarize(l)).dump(); })
      .def("distributions",
           [](const TrialLog& l) {
             const auto d = extract_distributions(l);
             py::dict out;
             for (const auto* dist : {&d.player_cards, &d.dealer_cards, &d.player_totals, &d.dealer_totals}) {
               out[py::str(dist->label)] = py::make_tuple(dist->support, dist->counts);
             }
             return out;
           },
           "{label: (support, counts)}; card supports are rank ordinals 0..12.");

  m.def("parse_log", &parse_log, py::arg("text"));
  m.def("load_log", [](const std::filesystem::path& p) { return load_log(p); }, py::arg("path"));
  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::optional<std::filesystem::path>& output, bool resume) {
        auto config = config_from_text(config_json);
        if (output) config.output_path = *output;
        RunOptions options;
        options.resume = resume;
        py::gil_scoped_release release;
        return run_experiment(config, options);
      },
      py::arg("config_json"), py::arg("output") = py::none(), py::arg("resume") = false);
  m.def("config_hash", [](const std::string& config_json) { return config_hash(config_from_text(config_json)); },
        py::arg("config_json"));

  // ---- stats ----
  m.def(
      "to_probabilities",
      [](const std::vector<std::int64_t>& counts, double alpha) { return to_probabilities(indexed(counts, {}), alpha); },
      py::arg("counts"), py::arg("smoothing_alpha") = 0.0);
  m.def(
      "kl_divergence", [](const std::vector<double>& p, const std::vector<double>& q) { return kl_divergence(p, q); },
      py::arg("p"), py::arg("q"), "D_KL(p || q) in nats.");
  m.def("regularized_gamma_q", &regularized_gamma_q, py::arg("s"), py::arg("x"));
  m.def("chi_squared_sf", &chi_squared_sf, py::arg("statistic"), py::arg("df"));
  m.def(
      "chi_squared_gof",
      [](const std::vector<std::int64_t>& observed, const std::vector<std::int64_t>& expected,
         const std::optional<std::vector<std::int64_t>>& support) {
        const auto r = chi_squared_gof(indexed(observed, support), indexed(expected, support));
        auto d = test_dict(r.test);
        py::list bins;
        for (const auto& b : r.bins) bins.append(py::make_tuple(b.first, b.last, b.observed, b.expected));
        d["bins"] = bins;
        return d;
      },
      py::arg("observed"), py::arg("expected"), py::arg("support") = py::none());
  m.def(
      "anderson_darling_k",
      [](const std::vector<std::vector<double>>& samples) { return test_dict(anderson_darling_k(samples)); },
      py::arg("samples"));
  m.def(
      "detect_shift",
      [](double kl, double p_chi, double p_ad) {
        return std::string(verdict_key(detect_shift(kl, {0, 0, p_chi}, {0, 0, p_ad})));
      },
      py::arg("kl"), py::arg("p_chi_squared"), py::arg("p_anderson_darling"));

  // ---- report ----
  m.def(
      "analyze",
      [](const TrialLog& observed, const TrialLog& control, double alpha) {
        return bundle_to_json(analyze(observed, control, alpha)).dump();
      },
      py::arg("observed"), py::arg("control"), py::arg("smoothing_alpha") = kDefaultSmoothingAlpha,
      "Analysis bundle as JSON text.");
  m.def(
      "render_report",
      [](const std::string& bundle_json, const std::string& format) {
        return render_report(bundle_from_json(nlohmann::json::parse(bundle_json)), report_format_from_key(format));
      },
      py::arg("bundle_json"), py::arg("format") = "table");
}
