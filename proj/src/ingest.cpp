#include "hicite/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <ios>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

namespace hicite {

namespace {

using nlohmann::json;

constexpr std::string_view kCanonicalKeys[] = {"id",        "year",       "doctype",
                                               "citations", "categories", "countries"};

Rejection reject(std::size_t line, ReasonCode code, std::string message) {
  return Rejection{line, code, std::move(message)};
}

// Parses a non-negative decimal integer occupying the whole (trimmed) text.
template <typename T>
std::optional<T> parse_unsigned(std::string_view text) {
  text = trim(text);
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void strip_line_end(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

std::optional<std::string_view> field(const RawRow& raw, const char* tag) {
  auto it = raw.fields.find(tag);
  if (it == raw.fields.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::variant<PublicationRecord, Rejection> validate_wos(const RawRow& raw) {
  const auto line = raw.source_line;
  PublicationRecord rec;

  auto ut = field(raw, "UT");
  if (!ut || trim(*ut).empty()) return reject(line, ReasonCode::MissingRequiredField, "UT is empty");
  rec.id = std::string(trim(*ut));

  auto py = field(raw, "PY");
  if (!py || trim(*py).empty()) return reject(line, ReasonCode::MissingRequiredField, "PY is empty");
  auto year = parse_unsigned<int>(*py);
  if (!year) return reject(line, ReasonCode::MalformedNumber, "PY is not a non-negative integer: " + std::string(*py));
  rec.year = *year;

  auto tc = field(raw, "TC");
  if (!tc || trim(*tc).empty()) return reject(line, ReasonCode::MissingRequiredField, "TC is empty");
  auto cites = parse_unsigned<Citations>(*tc);
  if (!cites) return reject(line, ReasonCode::MalformedNumber, "TC is not a non-negative integer: " + std::string(*tc));
  rec.citations = *cites;

  rec.categories = split_list(field(raw, "WC").value_or(""));
  if (rec.categories.empty()) return reject(line, ReasonCode::MissingRequiredField, "WC is empty");

  rec.doctype = doctype_from_string(field(raw, "DT").value_or(""));
  rec.countries = extract_countries(field(raw, "C1").value_or(""));
  return rec;
}

std::variant<PublicationRecord, Rejection> validate_canonical(const json& object, std::size_t line) {
  PublicationRecord rec;

  for (const auto& [key, _] : object.items()) {
    if (std::find(std::begin(kCanonicalKeys), std::end(kCanonicalKeys), key) == std::end(kCanonicalKeys))
      return reject(line, ReasonCode::MalformedRecord, "unknown key: " + key);
  }
  auto member = [&](const char* key) -> const json* {
    auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
  };
  auto string_array = [](const json& value) -> std::optional<std::vector<std::string>> {
    if (!value.is_array()) return std::nullopt;
    std::vector<std::string> out;
    for (const auto& item : value) {
      if (!item.is_string()) return std::nullopt;
      out.push_back(item.get<std::string>());
    }
    return out;
  };
  auto non_negative = [](const json& value) -> std::optional<std::uint64_t> {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0) return std::uint64_t(value.get<std::int64_t>());
    return std::nullopt;
  };

  auto id = member("id");
  if (!id || id->is_null() || (id->is_string() && trim(id->get_ref<const std::string&>()).empty()))
    return reject(line, ReasonCode::MissingRequiredField, "id is missing");
  if (!id->is_string()) return reject(line, ReasonCode::MalformedRecord, "id is not a string");
  rec.id = std::string(trim(id->get_ref<const std::string&>()));

  auto year = member("year");
  if (!year || year->is_null()) return reject(line, ReasonCode::MissingRequiredField, "year is missing");
  auto y = non_negative(*year);
  if (!y || *y > std::uint64_t(std::numeric_limits<int>::max()))
    return reject(line, ReasonCode::MalformedNumber, "year is not a non-negative integer: " + year->dump());
  rec.year = int(*y);

  auto cites = member("citations");
  if (!cites || cites->is_null()) return reject(line, ReasonCode::MissingRequiredField, "citations is missing");
  auto c = non_negative(*cites);
  if (!c) return reject(line, ReasonCode::MalformedNumber, "citations is not a non-negative integer: " + cites->dump());
  rec.citations = *c;

  if (auto dt = member("doctype"); dt && !dt->is_null()) {
    if (!dt->is_string()) return reject(line, ReasonCode::MalformedRecord, "doctype is not a string");
    rec.doctype = doctype_from_string(dt->get_ref<const std::string&>());
  }

  auto cats = member("categories");
  if (!cats || cats->is_null()) return reject(line, ReasonCode::MissingRequiredField, "categories is missing");
  auto cat_list = string_array(*cats);
  if (!cat_list) return reject(line, ReasonCode::MalformedRecord, "categories is not an array of strings");
  std::unordered_set<std::string> seen;
  for (auto& cat : *cat_list) {
    std::string label(trim(cat));
    if (!label.empty() && seen.insert(label).second) rec.categories.push_back(std::move(label));
  }
  if (rec.categories.empty()) return reject(line, ReasonCode::MissingRequiredField, "categories is empty");

  if (auto ctry = member("countries"); ctry && !ctry->is_null()) {
    auto list = string_array(*ctry);
    if (!list) return reject(line, ReasonCode::MalformedRecord, "countries is not an array of strings");
    seen.clear();
    for (auto& name : *list) {
      auto label = normalize_country(name);
      if (!label.empty() && seen.insert(label).second) rec.countries.push_back(std::move(label));
    }
  }
  return rec;
}

}  // namespace

std::string_view to_string(ReasonCode code) {
  switch (code) {
    case ReasonCode::MissingHeader: return "MissingHeader";
    case ReasonCode::DuplicateId: return "DuplicateId";
    case ReasonCode::MissingRequiredField: return "MissingRequiredField";
    case ReasonCode::MalformedNumber: return "MalformedNumber";
    case ReasonCode::MalformedRecord: return "MalformedRecord";
  }
  return "MalformedRecord";
}

std::string render_report(const IngestReport& report) {
  nlohmann::ordered_json out;
  out["accepted"] = report.accepted;
  out["rejected"] = report.rejected;
  out["reasons"] = nlohmann::ordered_json::array();
  for (const auto& r : report.reasons) {
    out["reasons"].push_back({{"line", r.line}, {"code", to_string(r.code)}, {"message", r.message}});
  }
  return out.dump(2);
}

bool Corpus::add(PublicationRecord record) {
  check_record(record);
  auto [it, inserted] = by_id_.try_emplace(record.id, records_.size());
  if (!inserted) return false;
  records_.push_back(std::move(record));
  return true;
}

std::size_t Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? npos : it->second;
}

void Corpus::reserve(std::size_t n) {
  records_.reserve(n);
  by_id_.reserve(n);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  while (true) {
    auto pos = text.find(';');
    auto item = trim(text.substr(0, pos));
    if (!item.empty() && seen.insert(item).second) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

std::vector<std::string> extract_countries(std::string_view addresses) {
  // Address segments are separated by ';'. A segment may open with a
  // bracketed author list, which can itself contain ';' and ','.
  std::vector<std::string_view> segments;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < addresses.size(); ++i) {
    char c = addresses[i];
    if (c == '[') ++depth;
    else if (c == ']' && depth > 0) --depth;
    else if (c == ';' && depth == 0) {
      segments.push_back(addresses.substr(start, i - start));
      start = i + 1;
    }
  }
  segments.push_back(addresses.substr(start));

  std::vector<std::string> out;
  for (auto seg : segments) {
    seg = trim(seg);
    if (!seg.empty() && seg.front() == '[') {
      auto close = seg.find(']');
      seg = close == std::string_view::npos ? std::string_view{} : seg.substr(close + 1);
    }
    auto comma = seg.rfind(',');
    if (comma != std::string_view::npos) seg = seg.substr(comma + 1);
    seg = trim(seg);
    if (!seg.empty() && seg.back() == '.') seg.remove_suffix(1);
    auto label = normalize_country(seg);
    if (!label.empty() && std::find(out.begin(), out.end(), label) == out.end()) out.push_back(std::move(label));
  }
  return out;
}

std::vector<std::string> parse_wos_header(std::string_view line) {
  if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
  std::vector<std::string> tags;
  std::unordered_set<std::string> seen;
  while (true) {
    auto pos = line.find('\t');
    std::string tag(trim(line.substr(0, pos)));
    if (!tag.empty() && !seen.insert(tag).second)
      throw IngestError(ReasonCode::MissingHeader, "header repeats tag " + tag);
    tags.push_back(std::move(tag));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  for (const char* required : {"UT", "PY", "TC", "WC"}) {
    if (!seen.count(required))
      throw IngestError(ReasonCode::MissingHeader, std::string("header lacks required tag ") + required);
  }
  return tags;
}

RawRow tokenize_wos(std::string_view line, const std::vector<std::string>& header, std::size_t source_line) {
  RawRow row;
  row.source_line = source_line;
  std::size_t column = 0;
  while (column < header.size()) {
    auto pos = line.find('\t');
    if (!header[column].empty()) row.fields.emplace(header[column], std::string(line.substr(0, pos)));
    ++column;
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return row;
}

std::variant<RawRow, Rejection> tokenize_canonical(std::string_view line, std::size_t source_line) {
  json value = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded() || !value.is_object())
    return reject(source_line, ReasonCode::MalformedRecord, "line is not a JSON object");
  RawRow row;
  row.source_line = source_line;
  for (auto& [key, member] : value.items()) row.fields.emplace(key, member.dump());
  return row;
}

std::variant<PublicationRecord, Rejection> validate(const RawRow& raw, InputFormat format) {
  if (format == InputFormat::WosTab) return validate_wos(raw);
  json object = json::object();
  for (const auto& [key, text] : raw.fields) {
    object[key] = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (object[key].is_discarded())
      return reject(raw.source_line, ReasonCode::MalformedRecord, key + " is not JSON text");
  }
  return validate_canonical(object, raw.source_line);
}

ParseResult parse_export(std::istream& in, InputFormat format) {
  ParseResult result;
  auto& report = result.report;
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  if (format == InputFormat::WosTab) {
    while (std::getline(in, line)) {
      ++line_no;
      strip_line_end(line);
      if (!is_blank(line)) break;
    }
    if (line_no == 0 || is_blank(line)) throw IngestError(ReasonCode::MissingHeader, "stream has no header row");
    header = parse_wos_header(line);
  }

  auto note = [&](Rejection r) {
    ++report.rejected;
    report.reasons.push_back(std::move(r));
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_line_end(line);
    if (line.empty()) continue;

    std::variant<PublicationRecord, Rejection> checked;
    if (format == InputFormat::WosTab) {
      checked = validate_wos(tokenize_wos(line, header, line_no));
    } else {
      json value = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (value.is_discarded() || !value.is_object()) {
        note(reject(line_no, ReasonCode::MalformedRecord, "line is not a JSON object"));
        continue;
      }
      checked = validate_canonical(value, line_no);
    }

    if (auto* r = std::get_if<Rejection>(&checked)) {
      note(std::move(*r));
      continue;
    }
    auto& rec = std::get<PublicationRecord>(checked);
    std::string id = rec.id;
    if (!result.corpus.add(std::move(rec))) {
      note(reject(line_no, ReasonCode::DuplicateId, "duplicate id " + id));
      continue;
    }
    ++report.accepted;
  }
  return result;
}

std::string canonical_line(const PublicationRecord& record) {
  nlohmann::ordered_json out;
  out["id"] = record.id;
  out["year"] = record.year;
  out["doctype"] = to_string(record.doctype);
  out["citations"] = record.citations;
  out["categories"] = record.categories;
  out["countries"] = record.countries;
  return out.dump();
}

std::size_t write_canonical(const Corpus& corpus, std::ostream& out) {
  std::size_t written = 0;
  for (const auto& rec : corpus.records()) {
    out << canonical_line(rec) << '\n';
    if (!out) throw std::ios_base::failure("write failed after " + std::to_string(written) + " records");
    ++written;
  }
  out.flush();
  if (!out) throw std::ios_base::failure("flush failed");
  return written;
}

}  // namespace hicite
