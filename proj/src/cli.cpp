#include "hicite/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "hicite/engine.hpp"
#include "hicite/ingest.hpp"
#include "hicite/render.hpp"
#include "hicite/synth.hpp"

namespace hicite::cli {

namespace {

/// Thrown for a contradictory or unusable configuration; maps to exit 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::string format = "wostab";
  std::string out;
  std::string report;

  double k = 0.01;
  std::string tie_policy = "include";
  std::string counting = "integer";
  std::string doctypes = "article,review,letter";
  std::string years;
  std::vector<std::string> groups;
  bool all_countries = false;
  std::string output = "csv";
  int decimals = 2;
  bool per_cell = false;

  std::uint64_t seed = 1;
  std::size_t n = 1000;
  double alpha = 2.0;
  Citations cmax = 1000;
  double p_multi = 0.4;
};

const std::map<std::string, InputFormat> kFormats{{"wostab", InputFormat::WosTab},
                                                  {"canonical", InputFormat::CanonicalLines}};
const std::map<std::string, TiePolicy> kTiePolicies{{"include", TiePolicy::IncludeTies},
                                                    {"strict", TiePolicy::StrictRank},
                                                    {"exclude", TiePolicy::ExcludeTies}};
const std::map<std::string, CountingScheme> kSchemes{{"integer", CountingScheme::IntegerCount},
                                                     {"fractional", CountingScheme::FractionalWC}};
const std::map<std::string, OutputFormat> kOutputs{
    {"csv", OutputFormat::Csv}, {"md", OutputFormat::Markdown}, {"lines", OutputFormat::Lines}};

std::vector<std::string> keys(const std::map<std::string, auto>& m) {
  std::vector<std::string> out;
  for (const auto& [k, _] : m) out.push_back(k);
  return out;
}

int parse_int(std::string_view text, const char* what) {
  text = trim(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(std::string("bad ") + what + ": '" + std::string(text) + "'");
  return value;
}

/// "2012" or "1990..2010"; nullopt when unset.
std::optional<YearRange> parse_years(const std::string& text) {
  if (text.empty()) return std::nullopt;
  YearRange range;
  auto sep = text.find("..");
  if (sep == std::string::npos) {
    range.first = range.last = parse_int(text, "--years");
  } else {
    range.first = parse_int(std::string_view(text).substr(0, sep), "--years");
    range.last = parse_int(std::string_view(text).substr(sep + 2), "--years");
  }
  if (range.empty()) throw ConfigError("--years range is empty: " + text);
  return range;
}

DocTypeSet parse_doctypes(const std::string& text) {
  DocTypeSet set;
  std::string_view rest = text;
  while (true) {
    auto pos = rest.find(',');
    auto item = trim(rest.substr(0, pos));
    if (!item.empty()) {
      auto type = parse_doctype_name(item);
      if (!type) throw ConfigError("unknown document type '" + std::string(item) + "'");
      set.insert(*type);
    }
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  if (set.empty()) throw ConfigError("--doctypes selects no document type");
  return set;
}

ThresholdSpec threshold_spec(const RunConfig& cfg) {
  ThresholdSpec spec{cfg.k, kTiePolicies.at(cfg.tie_policy)};
  if (!(spec.k > 0.0 && spec.k < 1.0)) throw ConfigError("--k must lie strictly between 0 and 1");
  return spec;
}

StratifyOptions stratify_options(const RunConfig& cfg) {
  StratifyOptions opts;
  opts.scheme = kSchemes.at(cfg.counting);
  opts.doctypes = parse_doctypes(cfg.doctypes);
  if (auto years = parse_years(cfg.years)) opts.years = *years;
  return opts;
}

void write_report(const RunConfig& cfg, const IngestReport& report, std::ostream& err, bool always) {
  if (!cfg.report.empty()) {
    std::ofstream file(cfg.report);
    if (!file) throw ConfigError("cannot write report to " + cfg.report);
    file << render_report(report) << '\n';
  } else if (always || report.rejected > 0) {
    err << render_report(report) << '\n';
  }
}

ParseResult load(const RunConfig& cfg) {
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw ConfigError("cannot read input " + cfg.input);
  return parse_export(in, kFormats.at(cfg.format));
}

/// Runs `body` against the --out file, or `out` when no path is given.
template <typename Body>
void with_output(const std::string& path, std::ostream& out, Body body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write " + path);
  body(file);
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto parsed = load(cfg);
  with_output(cfg.out, out, [&](std::ostream& os) { write_canonical(parsed.corpus, os); });
  write_report(cfg, parsed.report, err, /*always=*/true);
  return parsed.report.rejected == 0 ? kOk : kRowsRejected;
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = threshold_spec(cfg);
  const auto opts = stratify_options(cfg);
  auto parsed = load(cfg);
  write_report(cfg, parsed.report, err, false);
  const auto view = stratify(parsed.corpus, opts);
  const auto table = compute_thresholds(parsed.corpus, view, spec);
  out << render_thresholds(table, kOutputs.at(cfg.output));
  return kOk;
}

int cmd_indicators(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = threshold_spec(cfg);
  const auto opts = stratify_options(cfg);
  if (cfg.decimals < 0 || cfg.decimals > 12) throw ConfigError("--decimals must be in 0..12");
  auto parsed = load(cfg);
  write_report(cfg, parsed.report, err, false);

  const auto& corpus = parsed.corpus;
  const auto view = stratify(corpus, opts);
  const auto table = compute_thresholds(corpus, view, spec);
  const auto marks = mark_top(corpus, view, table, spec);

  std::vector<std::string> groups;
  if (cfg.all_countries) {
    groups = countries_in(corpus, view);
  } else {
    for (const auto& g : cfg.groups) {
      auto label = normalize_country(g);
      if (!label.empty()) groups.push_back(std::move(label));
    }
  }
  const std::string period = period_label(opts.years, !cfg.years.empty());

  std::vector<IndicatorRow> rows;
  if (!cfg.per_cell) {
    for (auto& ind : aggregate_report(corpus, view, marks, groups, spec)) rows.push_back({period, std::nullopt, ind});
  } else {
    // Group-major, cells in stratum order within each group; WORLD last.
    std::vector<std::vector<GroupIndicator>> by_cell;
    for (const auto& [key, _] : view.cells()) by_cell.push_back(aggregate_report(corpus, view, marks, groups, spec, key));
    for (std::size_t g = 0; g <= groups.size(); ++g) {
      std::size_t c = 0;
      for (const auto& [key, _] : view.cells()) rows.push_back({period, key, by_cell[c++][g]});
    }
  }
  out << render_indicators(rows, kOutputs.at(cfg.output), cfg.decimals, cfg.per_cell);
  return kOk;
}

int cmd_synth_gen(const RunConfig& cfg, std::ostream& out) {
  synth::GenParams params;
  params.seed = cfg.seed;
  params.n = cfg.n;
  params.alpha = cfg.alpha;
  params.cmax = cfg.cmax;
  params.p_multi = cfg.p_multi;
  if (auto years = parse_years(cfg.years)) params.years = *years;
  try {
    params.validate();
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  }
  const auto corpus = synth::gen_corpus(params);
  with_output(cfg.out, out, [&](std::ostream& os) { write_canonical(corpus, os); });
  return kOk;
}

int cmd_synth_fixture(const RunConfig& cfg, std::ostream& out) {
  const auto corpus = synth::gen_example_fixture();
  if (auto problem = synth::check_example_fixture(corpus)) throw ConfigError("fixture self-check failed: " + *problem);
  with_output(cfg.out, out, [&](std::ostream& os) { write_canonical(corpus, os); });
  return kOk;
}

void add_input(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "Input file")->required();
  sub->add_option("--format", cfg.format, "Input format")->check(CLI::IsMember(keys(kFormats)));
  sub->add_option("--report", cfg.report, "Write the ingest report (JSON) here instead of stderr");
}

void add_method(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--k", cfg.k, "Top fraction, 0 < k < 1");
  sub->add_option("--tie-policy", cfg.tie_policy, "Ties at the threshold")->check(CLI::IsMember(keys(kTiePolicies)));
  sub->add_option("--counting", cfg.counting, "Counting scheme")->check(CLI::IsMember(keys(kSchemes)));
  sub->add_option("--doctypes", cfg.doctypes, "Admitted document types (comma list)");
  sub->add_option("--years", cfg.years, "Year or inclusive range A..B");
  sub->add_option("--output", cfg.output, "Output format")->check(CLI::IsMember(keys(kOutputs)));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Top-k% highly cited paper indicators"};
  app.name("hicite");
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Validate an export and write canonical lines");
  add_input(ingest, cfg);
  ingest->add_option("--out", cfg.out, "Canonical output file (default stdout)");

  auto* thresholds = app.add_subcommand("thresholds", "Per-cell top-k% citation thresholds");
  add_input(thresholds, cfg);
  add_method(thresholds, cfg);

  auto* indicators = app.add_subcommand("indicators", "Group excellence indicators");
  add_input(indicators, cfg);
  add_method(indicators, cfg);
  auto* groups = indicators->add_option("--groups", cfg.groups, "Country labels (comma list)")->delimiter(',');
  indicators->add_flag("--all-countries", cfg.all_countries, "One row per country in the corpus")->excludes(groups);
  indicators->add_option("--decimals", cfg.decimals, "Decimals in rendered percents");
  indicators->add_flag("--per-cell", cfg.per_cell, "Emit one row per group and cell");

  auto* synth_cmd = app.add_subcommand("synth", "Synthetic corpora");
  synth_cmd->require_subcommand(1);
  auto* gen = synth_cmd->add_subcommand("gen", "Seeded random corpus");
  gen->add_option("--n", cfg.n, "Record count");
  gen->add_option("--seed", cfg.seed, "Random seed");
  gen->add_option("--alpha", cfg.alpha, "Citation power-law exponent (> 1)");
  gen->add_option("--cmax", cfg.cmax, "Largest citation count");
  gen->add_option("--p-multi", cfg.p_multi, "Probability of a second category");
  gen->add_option("--years", cfg.years, "Year or inclusive range A..B");
  gen->add_option("--out", cfg.out, "Output file (default stdout)");
  auto* fixture = synth_cmd->add_subcommand("fixture", "Worked-example fixture (1,320,618 records)");
  fixture->add_option("--out", cfg.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(cfg, out, err);
    if (thresholds->parsed()) return cmd_thresholds(cfg, out, err);
    if (indicators->parsed()) return cmd_indicators(cfg, out, err);
    if (gen->parsed()) return cmd_synth_gen(cfg, out);
    if (fixture->parsed()) return cmd_synth_fixture(cfg, out);
  } catch (const ConfigError& e) {
    err << "hicite: " << e.what() << '\n';
  } catch (const IngestError& e) {
    err << "hicite: " << to_string(e.code()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "hicite: " << e.what() << '\n';
  }
  return kFailure;
}

}  // namespace hicite::cli
