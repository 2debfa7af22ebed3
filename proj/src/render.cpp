#include "hicite/render.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace hicite {

namespace {

using Table = std::vector<std::vector<std::string>>;

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

// `numeric[i]` right-aligns column i in markdown.
std::string render_table(const std::vector<std::string>& header, const std::vector<bool>& numeric,
                         const Table& rows, OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::Csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  } else {
    auto line = [&](const std::vector<std::string>& cells) {
      out << '|';
      for (const auto& c : cells) out << ' ' << md_escape(c) << " |";
      out << '\n';
    };
    line(header);
    out << '|';
    for (bool right : numeric) out << (right ? " ---: |" : " --- |");
    out << '\n';
    for (const auto& r : rows) line(r);
  }
  return out.str();
}

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::string optional_percent(const std::optional<double>& v, int decimals) {
  return v ? format_percent(*v, decimals) : std::string();
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_percent(double ratio, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = ratio * 100.0 * scale;
  // Half-up, with slack for products such as 0.005 * 100 * 100 landing just
  // under the half.
  const double rounded = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, std::fabs(scaled)));
  auto units = static_cast<long long>(rounded);
  std::string digits = std::to_string(units < 0 ? -units : units);
  if (decimals > 0) {
    if (digits.size() <= std::size_t(decimals)) digits.insert(0, std::size_t(decimals) + 1 - digits.size(), '0');
    digits.insert(digits.size() - std::size_t(decimals), ".");
  }
  return (units < 0 ? "-" : "") + digits + "%";
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(value);
}

std::string format_grouped(double value) {
  std::string text = format_real(value);
  if (text.find_first_of("eE") != std::string::npos) return text;
  const std::size_t sign = (!text.empty() && text[0] == '-') ? 1 : 0;
  std::size_t end = text.find('.');
  if (end == std::string::npos) end = text.size();
  for (std::size_t i = end; i > sign + 3; i -= 3) text.insert(i - 3, ",");
  return text;
}

std::string period_label(const YearRange& years, bool bounded) {
  if (!bounded) return "all";
  if (years.first == years.last) return std::to_string(years.first);
  return std::to_string(years.first) + "-" + std::to_string(years.last);
}

std::string render_indicators(const std::vector<IndicatorRow>& rows, OutputFormat format, int decimals,
                              bool per_cell) {
  if (format == OutputFormat::Lines) {
    std::ostringstream out;
    for (const auto& row : rows) {
      const auto& g = row.indicator;
      nlohmann::ordered_json obj;
      obj["period"] = row.period;
      if (per_cell && row.cell) {
        obj["year"] = row.cell->year;
        obj["doctype"] = to_string(row.cell->doctype);
        obj["category"] = row.cell->category;
      }
      obj["group"] = g.group;
      obj["group_total"] = g.group_total;
      obj["group_top"] = g.group_top;
      obj["world_total"] = g.world_total;
      obj["world_top"] = g.world_top;
      obj["activity"] = g.activity;
      obj["activity_pct"] = format_percent(g.activity, decimals);
      obj["pp_top"] = optional_json(g.pp_top);
      obj["pp_top_pct"] = g.pp_top ? nlohmann::ordered_json(format_percent(*g.pp_top, decimals)) : nullptr;
      obj["world_share"] = optional_json(g.world_share);
      obj["world_share_pct"] =
          g.world_share ? nlohmann::ordered_json(format_percent(*g.world_share, decimals)) : nullptr;
      obj["expected_top"] = g.expected_top;
      out << obj.dump() << '\n';
    }
    return out.str();
  }

  const bool md = format == OutputFormat::Markdown;
  auto count = [&](double v) { return md ? format_grouped(v) : format_real(v); };

  std::vector<std::string> header{"period"};
  std::vector<bool> numeric{false};
  if (per_cell) {
    header.insert(header.end(), {"year", "doctype", "category"});
    numeric.insert(numeric.end(), {true, false, false});
  }
  for (const char* name : {"group", "group_total", "group_top", "world_total", "world_top", "activity",
                           "activity_pct", "pp_top", "pp_top_pct", "world_share", "world_share_pct",
                           "expected_top"}) {
    header.emplace_back(name);
    numeric.push_back(std::string_view(name) != "group");
  }

  Table table;
  for (const auto& row : rows) {
    const auto& g = row.indicator;
    std::vector<std::string> cells{row.period};
    if (per_cell) {
      if (row.cell) {
        cells.insert(cells.end(), {std::to_string(row.cell->year), std::string(to_string(row.cell->doctype)),
                                   row.cell->category});
      } else {
        cells.insert(cells.end(), {"", "", ""});
      }
    }
    cells.insert(cells.end(), {g.group, count(g.group_total), count(g.group_top), count(g.world_total),
                               count(g.world_top), format_real(g.activity), format_percent(g.activity, decimals),
                               optional_real(g.pp_top), optional_percent(g.pp_top, decimals),
                               optional_real(g.world_share), optional_percent(g.world_share, decimals),
                               count(g.expected_top)});
    table.push_back(std::move(cells));
  }
  return render_table(header, numeric, table, format);
}

std::string render_thresholds(const ThresholdTable& table, OutputFormat format) {
  if (format == OutputFormat::Lines) {
    std::ostringstream out;
    for (const auto& c : table.cells()) {
      nlohmann::ordered_json obj;
      obj["year"] = c.key.year;
      obj["doctype"] = to_string(c.key.doctype);
      obj["category"] = c.key.category;
      obj["n_cell"] = c.n_cell;
      obj["rank"] = c.rank;
      obj["threshold"] = c.threshold;
      obj["n_top"] = c.n_top;
      obj["tie_policy"] = to_string(table.spec().tie_policy);
      out << obj.dump() << '\n';
    }
    return out.str();
  }
  const bool md = format == OutputFormat::Markdown;
  auto count = [&](std::size_t v) { return md ? format_grouped(double(v)) : std::to_string(v); };
  Table rows;
  for (const auto& c : table.cells()) {
    rows.push_back({std::to_string(c.key.year), std::string(to_string(c.key.doctype)), c.key.category,
                    count(c.n_cell), count(c.rank), std::to_string(c.threshold), count(c.n_top)});
  }
  return render_table({"year", "doctype", "category", "n_cell", "rank", "threshold", "n_top"},
                      {true, false, false, true, true, true, true}, rows, format);
}

}  // namespace hicite
