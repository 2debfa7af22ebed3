#pragma once

// Percentile-class excellence indicators.
//
// A corpus is split into normalization cells (year x document type x subject
// category). Within each cell the top-k% threshold is the citation count at
// nearest rank ceil(k*N) when the cell is sorted from most to least cited.
// Records meeting the threshold are marked, and group (country) indicators are
// aggregated over cell incidences with integer or fractional weights.
//
// Thresholds always use unweighted cell membership; counting weights only
// enter aggregation.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hicite/ingest.hpp"
#include "hicite/model.hpp"

namespace hicite {

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One (record, category) membership. `record` indexes the source corpus.
struct Incidence {
  std::uint32_t record = 0;
  double weight = 1.0;

  bool operator==(const Incidence&) const = default;
};

struct StratifyOptions {
  CountingScheme scheme = CountingScheme::IntegerCount;
  DocTypeSet doctypes = DocTypeSet::citable();
  YearRange years{std::numeric_limits<int>::min(), std::numeric_limits<int>::max()};
};

class StratifiedView {
 public:
  using CellMap = std::map<StratumKey, std::vector<Incidence>>;

  StratifiedView(CellMap cells, StratifyOptions options, std::size_t admitted)
      : cells_(std::move(cells)), options_(options), admitted_(admitted) {}

  /// Non-empty cells in compare_strata order; incidences in corpus order.
  const CellMap& cells() const { return cells_; }
  const std::vector<Incidence>* find(const StratumKey& key) const;

  CountingScheme scheme() const { return options_.scheme; }
  const StratifyOptions& options() const { return options_; }

  /// Number of distinct records that passed the doctype and year filters.
  std::size_t admitted_records() const { return admitted_; }
  bool empty() const { return cells_.empty(); }

 private:
  CellMap cells_;
  StratifyOptions options_;
  std::size_t admitted_ = 0;
};

/// Throws EngineError if the doctype filter or year range is empty.
StratifiedView stratify(const Corpus& corpus, const StratifyOptions& options);

/// Threshold of one cell given its citation multiset. Throws EngineError on an
/// empty multiset. The key of the result is left default.
CellThreshold cell_threshold(std::span<const Citations> citations, const ThresholdSpec& spec);

class ThresholdTable {
 public:
  ThresholdTable() = default;
  ThresholdTable(std::vector<CellThreshold> cells, ThresholdSpec spec);

  /// Sorted by key.
  const std::vector<CellThreshold>& cells() const { return cells_; }
  const CellThreshold* find(const StratumKey& key) const;
  const ThresholdSpec& spec() const { return spec_; }
  std::size_t size() const { return cells_.size(); }

 private:
  std::vector<CellThreshold> cells_;
  ThresholdSpec spec_;
};

ThresholdTable compute_thresholds(const Corpus& corpus, const StratifiedView& view, const ThresholdSpec& spec);

/// Highly-cited flags, parallel to each cell's incidence list in the view.
class MarkSet {
 public:
  using FlagMap = std::map<StratumKey, std::vector<bool>>;

  MarkSet(FlagMap flags, ThresholdSpec spec) : flags_(std::move(flags)), spec_(spec) {}

  const FlagMap& flags() const { return flags_; }
  const ThresholdSpec& spec() const { return spec_; }

  /// Flag vector of a cell, or nullptr when the cell carries no marks entry.
  const std::vector<bool>* find(const StratumKey& key) const;

  /// Corpus positions of the records marked in the cell, in corpus order.
  std::vector<std::uint32_t> marked_records(const StratifiedView& view, const StratumKey& key) const;

  /// Cells in which the record at corpus position `record` is highly cited.
  std::vector<StratumKey> cells_of(const StratifiedView& view, std::uint32_t record) const;

  std::size_t count(const StratumKey& key) const;

 private:
  FlagMap flags_;
  ThresholdSpec spec_;
};

/// Throws EngineError (InconsistentTable) if the table names a cell the view
/// does not have.
MarkSet mark_top(const Corpus& corpus, const StratifiedView& view, const ThresholdTable& table,
                 const ThresholdSpec& spec);

inline constexpr const char* kWorldLabel = "WORLD";

/// Indicator for one country. With `cell` set, only that cell's incidences
/// are counted.
GroupIndicator group_indicator(const Corpus& corpus, const StratifiedView& view, const MarkSet& marks,
                               const std::string& group, const ThresholdSpec& spec,
                               const std::optional<StratumKey>& cell = std::nullopt);

/// One row per requested group, in request order, followed by the world row.
std::vector<GroupIndicator> aggregate_report(const Corpus& corpus, const StratifiedView& view,
                                             const MarkSet& marks, const std::vector<std::string>& groups,
                                             const ThresholdSpec& spec,
                                             const std::optional<StratumKey>& cell = std::nullopt);

/// Distinct country labels among records admitted to the view, sorted.
std::vector<std::string> countries_in(const Corpus& corpus, const StratifiedView& view);

}  // namespace hicite
