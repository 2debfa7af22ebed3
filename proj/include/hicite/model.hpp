#pragma once

// Domain vocabulary: publication records, normalization cells, threshold
// specifications and indicator results. Everything here is a plain value.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hicite {

using Citations = std::uint64_t;

enum class DocType : std::uint8_t { Article, Review, Letter, Other };

inline constexpr DocType kAllDocTypes[] = {DocType::Article, DocType::Review, DocType::Letter,
                                           DocType::Other};

/// Canonical spelling: "Article", "Review", "Letter", "Other".
std::string_view to_string(DocType type);

/// Case-insensitive; anything other than article/review/letter maps to Other.
DocType doctype_from_string(std::string_view text);

/// Strict inverse of to_string (case-insensitive). Returns nullopt for
/// anything that is not one of the four names.
std::optional<DocType> parse_doctype_name(std::string_view text);

/// A small set of document types, stored as a bitmask.
class DocTypeSet {
 public:
  DocTypeSet() = default;
  DocTypeSet(std::initializer_list<DocType> types);

  /// Articles, reviews and letters.
  static DocTypeSet citable();

  void insert(DocType type) { bits_ |= bit(type); }
  bool contains(DocType type) const { return (bits_ & bit(type)) != 0; }
  bool empty() const { return bits_ == 0; }
  bool operator==(const DocTypeSet&) const = default;

 private:
  static std::uint8_t bit(DocType type) { return std::uint8_t(1u << static_cast<unsigned>(type)); }
  std::uint8_t bits_ = 0;
};

/// Inclusive year interval.
struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const { return first <= year && year <= last; }
  bool empty() const { return first > last; }
  bool operator==(const YearRange&) const = default;
};

/// Upper-cased, whitespace-trimmed country label.
std::string normalize_country(std::string_view text);

/// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

struct PublicationRecord {
  std::string id;
  int year = 0;
  DocType doctype = DocType::Other;
  Citations citations = 0;
  std::vector<std::string> categories;  // non-empty, duplicate-free, ordered
  std::vector<std::string> countries;   // duplicate-free, may be empty

  bool operator==(const PublicationRecord&) const = default;
};

/// Thrown when a value violates a domain invariant.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvariantError if the record breaks a type invariant.
void check_record(const PublicationRecord& record);

/// One normalization cell. Ordered lexicographically by (year, doctype, category).
struct StratumKey {
  int year = 0;
  DocType doctype = DocType::Article;
  std::string category;

  auto operator<=>(const StratumKey&) const = default;
  bool operator==(const StratumKey&) const = default;
};

std::strong_ordering compare_strata(const StratumKey& a, const StratumKey& b);

enum class TiePolicy : std::uint8_t { IncludeTies, StrictRank, ExcludeTies };

std::string_view to_string(TiePolicy policy);

struct ThresholdSpec {
  double k = 0.01;
  TiePolicy tie_policy = TiePolicy::IncludeTies;

  /// Throws InvariantError unless 0 < k < 1.
  void validate() const;
};

/// Nearest rank ceil(k * n), clamped to [1, n]. Products within 1e-9 (relative)
/// of an integer are snapped to it so that decimal k such as 0.07 does not
/// overshoot by one through binary rounding.
std::size_t nearest_rank(double k, std::size_t n);

struct CellThreshold {
  StratumKey key;
  std::size_t n_cell = 0;
  std::size_t rank = 0;
  Citations threshold = 0;
  std::size_t n_top = 0;

  bool operator==(const CellThreshold&) const = default;
};

enum class CountingScheme : std::uint8_t { IntegerCount, FractionalWC };

std::string_view to_string(CountingScheme scheme);

/// Weight of each category of the record: 1/m with m = |categories|.
std::map<std::string, double> fractional_weights(const PublicationRecord& record);

/// Weight of one (record, category) incidence under the scheme.
inline double incidence_weight(CountingScheme scheme, std::size_t category_count) {
  return scheme == CountingScheme::IntegerCount ? 1.0 : 1.0 / double(category_count);
}

struct GroupIndicator {
  std::string group;
  double group_total = 0.0;
  double world_total = 0.0;
  double group_top = 0.0;
  double world_top = 0.0;
  double activity = 0.0;
  std::optional<double> pp_top;       // absent when group_total == 0
  std::optional<double> world_share;  // absent when world_top == 0
  double expected_top = 0.0;

  /// Fills the ratio fields from the four totals.
  void derive_ratios(double k);

  bool operator==(const GroupIndicator&) const = default;
};

}  // namespace hicite
