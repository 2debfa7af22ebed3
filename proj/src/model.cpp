#include "hicite/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace hicite {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
  });
}

}  // namespace

std::string_view to_string(DocType type) {
  switch (type) {
    case DocType::Article: return "Article";
    case DocType::Review: return "Review";
    case DocType::Letter: return "Letter";
    case DocType::Other: return "Other";
  }
  return "Other";
}

std::optional<DocType> parse_doctype_name(std::string_view text) {
  text = trim(text);
  for (DocType type : kAllDocTypes) {
    if (iequals(text, to_string(type))) return type;
  }
  return std::nullopt;
}

DocType doctype_from_string(std::string_view text) {
  auto type = parse_doctype_name(text);
  return type ? *type : DocType::Other;
}

DocTypeSet::DocTypeSet(std::initializer_list<DocType> types) {
  for (DocType t : types) insert(t);
}

DocTypeSet DocTypeSet::citable() {
  return {DocType::Article, DocType::Review, DocType::Letter};
}

std::string_view trim(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string normalize_country(std::string_view text) {
  std::string out(trim(text));
  for (char& c : out) c = char(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

namespace {

const std::string* first_repeat(const std::vector<std::string>& items) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (items[i] == items[j]) return &items[i];
    }
  }
  return nullptr;
}

}  // namespace

void check_record(const PublicationRecord& record) {
  if (record.id.empty()) throw InvariantError("record id is empty");
  if (record.categories.empty()) throw InvariantError("record " + record.id + " has no categories");
  for (const auto& c : record.categories) {
    if (c.empty()) throw InvariantError("record " + record.id + " has an empty category");
  }
  if (const auto* dup = first_repeat(record.categories))
    throw InvariantError("record " + record.id + " repeats category " + *dup);
  if (const auto* dup = first_repeat(record.countries))
    throw InvariantError("record " + record.id + " repeats country " + *dup);
}

std::strong_ordering compare_strata(const StratumKey& a, const StratumKey& b) {
  return a <=> b;
}

std::string_view to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::IncludeTies: return "include";
    case TiePolicy::StrictRank: return "strict";
    case TiePolicy::ExcludeTies: return "exclude";
  }
  return "include";
}

void ThresholdSpec::validate() const {
  if (!(k > 0.0 && k < 1.0)) {
    throw InvariantError("k must lie strictly between 0 and 1, got " + std::to_string(k));
  }
}

std::size_t nearest_rank(double k, std::size_t n) {
  if (n == 0) return 0;
  const double product = k * double(n);
  const double nearest = std::round(product);
  double r = (std::fabs(product - nearest) <= 1e-9 * std::max(1.0, product)) ? nearest
                                                                              : std::ceil(product);
  return std::clamp<std::size_t>(static_cast<std::size_t>(r), 1, n);
}

std::string_view to_string(CountingScheme scheme) {
  return scheme == CountingScheme::IntegerCount ? "integer" : "fractional";
}

std::map<std::string, double> fractional_weights(const PublicationRecord& record) {
  std::map<std::string, double> weights;
  const double w = 1.0 / double(record.categories.size());
  for (const auto& c : record.categories) weights.emplace(c, w);
  return weights;
}

void GroupIndicator::derive_ratios(double k) {
  activity = world_total > 0.0 ? group_total / world_total : 0.0;
  pp_top = group_total > 0.0 ? std::optional(group_top / group_total) : std::nullopt;
  world_share = world_top > 0.0 ? std::optional(group_top / world_top) : std::nullopt;
  expected_top = k * group_total;
}

}  // namespace hicite
