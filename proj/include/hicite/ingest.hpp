#pragma once

// Streaming readers and writers for bibliographic exports.
//
// Two input formats are understood:
//   WosTab          tab-separated rows under a header of field tags. Only UT,
//                   PY, DT, TC, WC and C1 are interpreted; other tags are
//                   carried in the raw row and ignored.
//   CanonicalLines  one JSON object per line with exactly the keys id, year,
//                   doctype, citations, categories, countries.
//
// Empty lines are skipped; every other line after the header is a data row.
// Bad rows never abort a run. Each one is counted and explained in the
// IngestReport; only a missing or unusable WosTab header is fatal.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hicite/model.hpp"

namespace hicite {

enum class InputFormat { WosTab, CanonicalLines };

enum class ReasonCode {
  MissingHeader,
  DuplicateId,
  MissingRequiredField,
  MalformedNumber,
  MalformedRecord,
};

std::string_view to_string(ReasonCode code);

struct Rejection {
  std::size_t line = 0;
  ReasonCode code = ReasonCode::MalformedRecord;
  std::string message;

  bool operator==(const Rejection&) const = default;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<Rejection> reasons;

  std::size_t total_rows() const { return accepted + rejected; }
  bool operator==(const IngestReport&) const = default;
};

/// Structured-text (JSON) rendering of a report.
std::string render_report(const IngestReport& report);

/// Fatal ingestion failure: the WosTab header is absent or unusable.
class IngestError : public std::runtime_error {
 public:
  IngestError(ReasonCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ReasonCode code() const { return code_; }

 private:
  ReasonCode code_;
};

/// One tokenized data row. For WosTab the values are raw cell text; for
/// CanonicalLines they are the JSON text of each member.
struct RawRow {
  std::size_t source_line = 0;
  std::map<std::string, std::string> fields;
};

/// The world reference set: records in ingestion order, unique by id.
class Corpus {
 public:
  Corpus() = default;

  /// Appends the record unless its id is already present. Returns false on a
  /// duplicate. Throws InvariantError if the record is invalid.
  bool add(PublicationRecord record);

  const std::vector<PublicationRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const PublicationRecord& operator[](std::size_t i) const { return records_[i]; }

  /// Position of the record with this id, or npos.
  std::size_t find(std::string_view id) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void reserve(std::size_t n);

  bool operator==(const Corpus& other) const { return records_ == other.records_; }

 private:
  std::vector<PublicationRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct ParseResult {
  Corpus corpus;
  IngestReport report;
};

/// Single pass over the stream. Throws IngestError(MissingHeader) when a WosTab
/// stream has no usable header row.
ParseResult parse_export(std::istream& in, InputFormat format);

/// Field mapping of a WosTab header line. Throws IngestError(MissingHeader)
/// if a required tag (UT, PY, TC, WC) is absent or a tag repeats.
std::vector<std::string> parse_wos_header(std::string_view line);

/// Splits a WosTab data line against the header tags.
RawRow tokenize_wos(std::string_view line, const std::vector<std::string>& header,
                    std::size_t source_line);

/// Splits a canonical line into its members. A line that is not a JSON object
/// yields a Rejection.
std::variant<RawRow, Rejection> tokenize_canonical(std::string_view line, std::size_t source_line);

std::variant<PublicationRecord, Rejection> validate(const RawRow& raw, InputFormat format);

/// Countries named in a C1 address field, in first-seen order.
std::vector<std::string> extract_countries(std::string_view addresses);

/// Splits a semicolon list, trimming entries and dropping empty and repeated ones.
std::vector<std::string> split_list(std::string_view text);

/// Canonical line for one record (no trailing newline).
std::string canonical_line(const PublicationRecord& record);

/// Writes one canonical line per record. Throws std::ios_base::failure when
/// the stream goes bad.
std::size_t write_canonical(const Corpus& corpus, std::ostream& out);

}  // namespace hicite
