#include "vfa/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vfa/errors.hpp"

namespace vfa {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

SummaryStats summarize(const TrialLog& log) {
  SummaryStats s;
  std::int64_t player_wins = 0, dealer_wins = 0, ties = 0, dealer_busts = 0;
  double player_sum = 0.0, dealer_sum = 0.0;
  for (const auto& e : log.entries) {
    const auto* h = std::get_if<HandRecord>(&e);
    if (!h) {
      ++s.failed_trials;
      continue;
    }
    ++s.successes;
    switch (h->outcome) {
      case Outcome::PlayerWin: ++player_wins; break;
      case Outcome::DealerWin: ++dealer_wins; break;
      case Outcome::Tie: ++ties; break;
    }
    if (h->dealer_busted()) ++dealer_busts;
    player_sum += h->player_final;
    dealer_sum += h->dealer_final;
  }
  if (s.successes == 0) throw UsageError("summarize: log has no successful trials");
  const auto n = static_cast<double>(s.successes);
  s.player_win_rate = static_cast<double>(player_wins) / n;
  s.dealer_win_rate = static_cast<double>(dealer_wins) / n;
  s.tie_rate = static_cast<double>(ties) / n;
  s.dealer_bust_rate = static_cast<double>(dealer_busts) / n;
  s.average_player_final = player_sum / n;
  s.average_dealer_final = dealer_sum / n;
  return s;
}

namespace {

std::vector<double> as_reals(const EmpiricalDistribution& d) {
  std::vector<double> out;
  for (auto v : d.expand()) out.push_back(static_cast<double>(v));
  return out;
}

}  // namespace

ShiftReport compare_distributions(const EmpiricalDistribution& observed, const EmpiricalDistribution& control,
                                  double smoothing_alpha) {
  ShiftReport r;
  r.label = observed.label.empty() ? control.label : observed.label;
  const auto [obs, ctl] = align(observed, control);
  r.kl = kl_divergence(to_probabilities(obs, smoothing_alpha), to_probabilities(ctl, smoothing_alpha));

  std::vector<std::string> errors;
  try {
    auto chi = chi_squared_gof(obs, ctl);
    r.chi_squared = chi.test;
    r.pooling = std::move(chi.bins);
  } catch (const TestDegenerateError& e) {
    errors.emplace_back(e.what());
  }
  try {
    const std::vector<std::vector<double>> samples = {as_reals(obs), as_reals(ctl)};
    r.anderson_darling = anderson_darling_k(samples);
  } catch (const Error& e) {
    errors.emplace_back(e.what());
  }
  if (!errors.empty()) {
    std::string joined;
    for (const auto& m : errors) joined += (joined.empty() ? "" : "; ") + m;
    r.error = joined;
  }
  if (r.chi_squared && r.anderson_darling) r.verdict = detect_shift(r.kl, *r.chi_squared, *r.anderson_darling);
  return r;
}

namespace {

LogProvenance provenance(const TrialLog& log, const std::string& path) {
  return {path,           log.config.experiment_id, log.config_hash,    config_to_json(log.config),
          log.config.trials, log.success_count(),   log.failure_count()};
}

}  // namespace

AnalysisBundle analyze(const TrialLog& observed, const TrialLog& control, double smoothing_alpha,
                       const std::string& observed_path, const std::string& control_path) {
  const auto obs = extract_distributions(observed);
  const auto ctl = extract_distributions(control);
  AnalysisBundle b;
  b.smoothing_alpha = smoothing_alpha;
  b.reports.push_back(compare_distributions(obs.player_cards, ctl.player_cards, smoothing_alpha));
  b.reports.push_back(compare_distributions(obs.dealer_cards, ctl.dealer_cards, smoothing_alpha));
  b.reports.push_back(compare_distributions(obs.player_totals, ctl.player_totals, smoothing_alpha));
  b.reports.push_back(compare_distributions(obs.dealer_totals, ctl.dealer_totals, smoothing_alpha));
  b.reports[0].rank_values = b.reports[1].rank_values = true;
  b.observed = summarize(observed);
  b.control = summarize(control);
  b.observed_log = provenance(observed, observed_path);
  b.control_log = provenance(control, control_path);
  return b;
}

// ---- bundle JSON -----------------------------------------------------------

namespace {

ordered_json test_to_json(const std::optional<TestResult>& t) {
  if (!t) return nullptr;
  return ordered_json{{"statistic", t->statistic}, {"df", t->df}, {"p_value", t->p_value}};
}

std::optional<TestResult> test_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return TestResult{j.at("statistic").get<double>(), j.at("df").get<int>(), j.at("p_value").get<double>()};
}

ordered_json provenance_to_json(const LogProvenance& p) {
  return ordered_json{{"path", p.path},           {"experiment_id", p.experiment_id},
                      {"config_hash", p.config_hash}, {"config", p.config},
                      {"trials", p.trials},       {"successes", p.successes},
                      {"failures", p.failures}};
}

LogProvenance provenance_from_json(const json& j) {
  LogProvenance p;
  p.path = j.at("path").get<std::string>();
  p.experiment_id = j.at("experiment_id").get<std::string>();
  p.config_hash = j.at("config_hash").get<std::string>();
  p.config = config_to_json(config_from_json(j.at("config")));  // canonical key order
  p.trials = j.at("trials").get<std::int64_t>();
  p.successes = j.at("successes").get<std::int64_t>();
  p.failures = j.at("failures").get<std::int64_t>();
  return p;
}

SummaryStats summary_from_json(const json& j) {
  SummaryStats s;
  s.player_win_rate = j.at("player_win_rate").get<double>();
  s.dealer_win_rate = j.at("dealer_win_rate").get<double>();
  s.tie_rate = j.at("tie_rate").get<double>();
  s.dealer_bust_rate = j.at("dealer_bust_rate").get<double>();
  s.average_player_final = j.at("average_player_final").get<double>();
  s.average_dealer_final = j.at("average_dealer_final").get<double>();
  s.successes = j.at("successes").get<std::int64_t>();
  s.failed_trials = j.at("failed_trials").get<std::int64_t>();
  return s;
}

}  // namespace

ordered_json summary_to_json(const SummaryStats& s) {
  return ordered_json{{"player_win_rate", s.player_win_rate},
                      {"dealer_win_rate", s.dealer_win_rate},
                      {"tie_rate", s.tie_rate},
                      {"dealer_bust_rate", s.dealer_bust_rate},
                      {"average_player_final", s.average_player_final},
                      {"average_dealer_final", s.average_dealer_final},
                      {"successes", s.successes},
                      {"failed_trials", s.failed_trials}};
}

ordered_json bundle_to_json(const AnalysisBundle& b) {
  auto reports = ordered_json::array();
  for (const auto& r : b.reports) {
    auto pooling = ordered_json::array();
    for (const auto& bin : r.pooling) {
      pooling.push_back(ordered_json{
          {"first", bin.first}, {"last", bin.last}, {"observed", bin.observed}, {"expected", bin.expected}});
    }
    reports.push_back(ordered_json{{"label", r.label},
                                   {"support", r.rank_values ? "ranks" : "hand_totals"},
                                   {"kl_nats", r.kl},
                                   {"chi_squared", test_to_json(r.chi_squared)},
                                   {"anderson_darling", test_to_json(r.anderson_darling)},
                                   {"verdict", verdict_key(r.verdict)},
                                   {"pooling", pooling},
                                   {"error", r.error ? ordered_json(*r.error) : ordered_json(nullptr)}});
  }
  return ordered_json{{"kind", "vfa-analysis"},
                      {"smoothing_alpha", b.smoothing_alpha},
                      {"kl_direction", "observed||control"},
                      {"reports", reports},
                      {"observed_summary", summary_to_json(b.observed)},
                      {"control_summary", summary_to_json(b.control)},
                      {"observed_log", provenance_to_json(b.observed_log)},
                      {"control_log", provenance_to_json(b.control_log)}};
}

AnalysisBundle bundle_from_json(const json& j) {
  try {
    if (j.at("kind").get<std::string>() != "vfa-analysis") throw LoadError("not an analysis bundle");
    AnalysisBundle b;
    b.smoothing_alpha = j.at("smoothing_alpha").get<double>();
    for (const auto& r : j.at("reports")) {
      ShiftReport s;
      s.label = r.at("label").get<std::string>();
      s.rank_values = r.at("support").get<std::string>() == "ranks";
      s.kl = r.at("kl_nats").get<double>();
      s.chi_squared = test_from_json(r.at("chi_squared"));
      s.anderson_darling = test_from_json(r.at("anderson_darling"));
      s.verdict = r.at("verdict").get<std::string>() == "shift" ? Verdict::Shift : Verdict::NoShift;
      for (const auto& bin : r.at("pooling")) {
        s.pooling.push_back({bin.at("first").get<std::int64_t>(), bin.at("last").get<std::int64_t>(),
                             bin.at("observed").get<double>(), bin.at("expected").get<double>()});
      }
      if (!r.at("error").is_null()) s.error = r.at("error").get<std::string>();
      b.reports.push_back(std::move(s));
    }
    b.observed = summary_from_json(j.at("observed_summary"));
    b.control = summary_from_json(j.at("control_summary"));
    b.observed_log = provenance_from_json(j.at("observed_log"));
    b.control_log = provenance_from_json(j.at("control_log"));
    return b;
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed analysis bundle: ") + e.what());
  }
}

void save_bundle(const AnalysisBundle& bundle, const std::filesystem::path& path) {
  write_text(path, bundle_to_json(bundle).dump(2) + "\n");
}

AnalysisBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return bundle_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

// ---- formatting ------------------------------------------------------------

std::string significance_stars(double p) {
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "";
}

namespace {

std::string printf_string(const char* fmt, double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, precision, v);
  return buf;
}

}  // namespace

std::string format_kl(double kl) { return printf_string("%.*f", kl, 3); }

std::string format_statistic(double x) {
  if (x == 0.0 || !std::isfinite(x)) return printf_string("%.*f", x, 0);
  const int digits = static_cast<int>(std::floor(std::log10(std::abs(x)))) + 1;
  if (digits >= 3) {
    const double scale = std::pow(10.0, digits - 3);
    return printf_string("%.*f", std::round(x / scale) * scale, 0);
  }
  return printf_string("%.*f", x, 3 - digits);
}

std::string format_p_value(double p) {
  if (p < 0.0001) return "<0.0001";
  return printf_string("%.*f", p, 4);
}

ReportFormat report_format_from_key(std::string_view key) {
  if (key == "table" || key == "table-text" || key == "text") return ReportFormat::Table;
  if (key == "csv") return ReportFormat::Csv;
  if (key == "json" || key == "structured") return ReportFormat::Json;
  throw UsageError("report format must be table, csv or json; got \"" + std::string(key) + "\"");
}

namespace {

std::string support_name(std::int64_t v, bool ranks) {
  if (ranks && v >= 0 && v < static_cast<std::int64_t>(kRankCount)) {
    return std::string(rank_key(rank_from_index(static_cast<std::size_t>(v))));
  }
  return std::to_string(v);
}

std::string pooling_text(const ShiftReport& r) {
  std::string out;
  for (const auto& b : r.pooling) {
    if (!out.empty()) out += ' ';
    out += '[' + support_name(b.first, r.rank_values);
    if (b.last != b.first) out += ".." + support_name(b.last, r.rank_values);
    out += ']';
  }
  return out;
}

struct Row {
  std::string label, kl, chi, df, chi_p, ad, ad_p, verdict;
};

Row make_row(const ShiftReport& r) {
  Row row{r.label, format_kl(r.kl), "n/a", "n/a", "n/a", "n/a", "n/a", verdict_key(r.verdict)};
  if (r.chi_squared) {
    row.chi = format_statistic(r.chi_squared->statistic) + significance_stars(r.chi_squared->p_value);
    row.df = std::to_string(r.chi_squared->df);
    row.chi_p = format_p_value(r.chi_squared->p_value);
  }
  if (r.anderson_darling) {
    row.ad = format_statistic(r.anderson_darling->statistic) + significance_stars(r.anderson_darling->p_value);
    row.ad_p = format_p_value(r.anderson_darling->p_value);
  }
  return row;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string provenance_line(const char* role, const LogProvenance& p) {
  return std::string("# ") + role + ": " + (p.path.empty() ? "<memory>" : p.path) + " experiment=" +
         p.experiment_id + " config_hash=" + p.config_hash + " trials=" + std::to_string(p.trials) +
         " successes=" + std::to_string(p.successes) + " failed_excluded=" + std::to_string(p.failures) + "\n";
}

}  // namespace

std::string render_report(const AnalysisBundle& bundle, ReportFormat format) {
  if (format == ReportFormat::Json) return bundle_to_json(bundle).dump(2) + "\n";

  std::vector<Row> rows;
  for (const auto& r : bundle.reports) rows.push_back(make_row(r));
  const std::string precision_note =
      "# KL in nats (observed||control, smoothing alpha=" + format_statistic(bundle.smoothing_alpha) +
      ") to 3 decimals; statistics to 3 significant figures; p-values to 4 decimals\n"
      "# * p<=0.05, ** p<=0.01, *** p<=0.001; verdict = shift iff KL>0 and both p<=0.05\n";
  std::string footer = provenance_line("observed", bundle.observed_log) + provenance_line("control", bundle.control_log);
  for (const auto& r : bundle.reports) {
    footer += "# pooling " + r.label + ": " + pooling_text(r) + "\n";
    if (r.error) footer += "# error " + r.label + ": " + *r.error + "\n";
  }

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << precision_note;
    out << "comparison,kl_nats,chi_squared,df,p_chi_squared,anderson_darling,p_anderson_darling,verdict\n";
    for (const auto& r : rows) {
      out << r.label << ',' << r.kl << ',' << r.chi << ',' << r.df << ',' << r.chi_p << ',' << r.ad << ','
          << r.ad_p << ',' << r.verdict << '\n';
    }
    out << footer;
    return out.str();
  }

  const std::vector<std::string> headers = {"comparison", "KL", "chi2", "df", "p(chi2)", "A2", "p(AD)", "verdict"};
  std::vector<std::size_t> w(headers.size());
  for (std::size_t i = 0; i < headers.size(); ++i) w[i] = headers[i].size();
  for (const auto& r : rows) {
    const std::vector<const std::string*> cells = {&r.label, &r.kl, &r.chi, &r.df, &r.chi_p, &r.ad, &r.ad_p, &r.verdict};
    for (std::size_t i = 0; i < cells.size(); ++i) w[i] = std::max(w[i], cells[i]->size());
  }
  out << precision_note;
  for (std::size_t i = 0; i < headers.size(); ++i) out << pad(headers[i], w[i]) << (i + 1 < headers.size() ? "  " : "\n");
  for (const auto& r : rows) {
    const std::vector<const std::string*> cells = {&r.label, &r.kl, &r.chi, &r.df, &r.chi_p, &r.ad, &r.ad_p, &r.verdict};
    for (std::size_t i = 0; i < cells.size(); ++i) out << pad(*cells[i], w[i]) << (i + 1 < cells.size() ? "  " : "\n");
  }
  out << "\n" << render_summary(bundle.observed, "observed") << render_summary(bundle.control, "control");
  out << footer;
  return out.str();
}

std::string render_summary(const SummaryStats& s, const std::string& label) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: player_win_rate=%.3f dealer_bust_rate=%.3f avg_player_final=%.3f avg_dealer_final=%.3f "
                "tie_rate=%.3f successes=%lld failed=%lld\n",
                label.c_str(), s.player_win_rate, s.dealer_bust_rate, s.average_player_final,
                s.average_dealer_final, s.tie_rate, static_cast<long long>(s.successes),
                static_cast<long long>(s.failed_trials));
  return buf;
}

// ---- plot data -------------------------------------------------------------

PlotKind plot_kind_from_key(std::string_view key) {
  if (key == "card-frequencies") return PlotKind::CardFrequencies;
  if (key == "hand-values") return PlotKind::HandValues;
  throw UsageError("plot kind must be card-frequencies or hand-values; got \"" + std::string(key) + "\"");
}

std::string render_plot_data(std::span<const LabeledLog> logs, PlotKind kind) {
  if (logs.empty()) throw UsageError("plot data needs at least one log");
  const bool cards = kind == PlotKind::CardFrequencies;
  const auto support = cards ? rank_support() : hand_total_support();

  std::ostringstream out;
  out << "# kind: " << (cards ? "card-frequencies" : "hand-values") << "\n";
  out << "# frequencies normalized per log and per actor; each row sums to 1\n";
  for (const auto& l : logs) {
    if (!l.log) throw UsageError("plot data: null log");
    out << "# series " << l.label << ": experiment=" << l.log->config.experiment_id
        << " config_hash=" << l.log->config_hash << "\n";
  }
  out << "series,actor,n";
  for (auto v : support) out << ',' << support_name(v, cards);
  out << '\n';
  for (const auto& l : logs) {
    const auto d = extract_distributions(*l.log);
    const std::pair<const char*, const EmpiricalDistribution*> rows[] = {
        {"player", cards ? &d.player_cards : &d.player_totals},
        {"dealer", cards ? &d.dealer_cards : &d.dealer_totals}};
    for (const auto& [actor, dist] : rows) {
      out << l.label << ',' << actor << ',' << dist->total();
      for (double p : to_probabilities(*dist, 0.0)) out << ',' << printf_string("%.*f", p, 6);
      out << '\n';
    }
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace vfa
