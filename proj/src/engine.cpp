#include "hicite/engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

namespace hicite {

namespace {

// Sums weights by multiplicity so the result does not depend on the order in
// which incidences are visited.
class WeightTally {
 public:
  void add(double weight) { ++counts_[weight]; }

  double sum() const {
    double total = 0.0;
    for (const auto& [weight, count] : counts_) total += weight * double(count);
    return total;
  }

 private:
  std::map<double, std::uint64_t> counts_;
};

struct GroupTallies {
  WeightTally total;
  WeightTally top;
};

std::string key_text(const StratumKey& key) {
  return std::to_string(key.year) + "/" + std::string(to_string(key.doctype)) + "/" + key.category;
}

}  // namespace

const std::vector<Incidence>* StratifiedView::find(const StratumKey& key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

StratifiedView stratify(const Corpus& corpus, const StratifyOptions& options) {
  if (options.doctypes.empty()) throw EngineError("doctype filter is empty");
  if (options.years.empty()) throw EngineError("year range is empty");
  if (corpus.size() > std::numeric_limits<std::uint32_t>::max()) throw EngineError("corpus too large");

  StratifiedView::CellMap cells;
  std::size_t admitted = 0;
  StratumKey key;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& rec = corpus[i];
    if (!options.doctypes.contains(rec.doctype) || !options.years.contains(rec.year)) continue;
    ++admitted;
    const double w = incidence_weight(options.scheme, rec.categories.size());
    key.year = rec.year;
    key.doctype = rec.doctype;
    for (const auto& category : rec.categories) {
      key.category = category;
      cells[key].push_back(Incidence{static_cast<std::uint32_t>(i), w});
    }
  }
  return StratifiedView(std::move(cells), options, admitted);
}

CellThreshold cell_threshold(std::span<const Citations> citations, const ThresholdSpec& spec) {
  spec.validate();
  if (citations.empty()) throw EngineError("EmptyCell: no citation values");

  CellThreshold out;
  out.n_cell = citations.size();
  out.rank = nearest_rank(spec.k, out.n_cell);

  std::vector<Citations> sorted(citations.begin(), citations.end());
  auto nth = sorted.begin() + std::ptrdiff_t(out.rank - 1);
  std::nth_element(sorted.begin(), nth, sorted.end(), std::greater<>{});
  out.threshold = *nth;

  std::size_t at_least = 0, above = 0;
  for (Citations c : citations) {
    at_least += c >= out.threshold;
    above += c > out.threshold;
  }
  switch (spec.tie_policy) {
    case TiePolicy::IncludeTies: out.n_top = at_least; break;
    case TiePolicy::StrictRank: out.n_top = out.rank; break;
    case TiePolicy::ExcludeTies: out.n_top = above; break;
  }
  return out;
}

ThresholdTable::ThresholdTable(std::vector<CellThreshold> cells, ThresholdSpec spec)
    : cells_(std::move(cells)), spec_(spec) {
  std::sort(cells_.begin(), cells_.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
}

const CellThreshold* ThresholdTable::find(const StratumKey& key) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                             [](const CellThreshold& c, const StratumKey& k) { return c.key < k; });
  return (it != cells_.end() && it->key == key) ? &*it : nullptr;
}

ThresholdTable compute_thresholds(const Corpus& corpus, const StratifiedView& view, const ThresholdSpec& spec) {
  spec.validate();
  std::vector<CellThreshold> cells;
  cells.reserve(view.cells().size());
  std::vector<Citations> values;
  for (const auto& [key, members] : view.cells()) {
    values.clear();
    values.reserve(members.size());
    for (const auto& inc : members) values.push_back(corpus[inc.record].citations);
    auto cell = cell_threshold(values, spec);
    cell.key = key;
    cells.push_back(std::move(cell));
  }
  return ThresholdTable(std::move(cells), spec);
}

const std::vector<bool>* MarkSet::find(const StratumKey& key) const {
  auto it = flags_.find(key);
  return it == flags_.end() ? nullptr : &it->second;
}

std::vector<std::uint32_t> MarkSet::marked_records(const StratifiedView& view, const StratumKey& key) const {
  std::vector<std::uint32_t> out;
  const auto* flags = find(key);
  const auto* members = view.find(key);
  if (!flags || !members) return out;
  for (std::size_t i = 0; i < members->size(); ++i) {
    if ((*flags)[i]) out.push_back((*members)[i].record);
  }
  return out;
}

std::vector<StratumKey> MarkSet::cells_of(const StratifiedView& view, std::uint32_t record) const {
  std::vector<StratumKey> out;
  for (const auto& [key, flags] : flags_) {
    const auto* members = view.find(key);
    if (!members) continue;
    for (std::size_t i = 0; i < members->size(); ++i) {
      if ((*members)[i].record == record && flags[i]) {
        out.push_back(key);
        break;
      }
    }
  }
  return out;
}

std::size_t MarkSet::count(const StratumKey& key) const {
  const auto* flags = find(key);
  return flags ? std::size_t(std::count(flags->begin(), flags->end(), true)) : 0;
}

MarkSet mark_top(const Corpus& corpus, const StratifiedView& view, const ThresholdTable& table,
                 const ThresholdSpec& spec) {
  MarkSet::FlagMap flags;
  for (const auto& cell : table.cells()) {
    const auto* members = view.find(cell.key);
    if (!members) throw EngineError("InconsistentTable: cell " + key_text(cell.key) + " is not in the view");
    if (members->size() != cell.n_cell)
      throw EngineError("InconsistentTable: cell " + key_text(cell.key) + " size differs from the view");

    std::vector<bool> marked(members->size(), false);
    const Citations t = cell.threshold;
    std::vector<std::size_t> ties;
    std::size_t above = 0;
    for (std::size_t i = 0; i < members->size(); ++i) {
      const Citations c = corpus[(*members)[i].record].citations;
      if (c > t) {
        marked[i] = true;
        ++above;
      } else if (c == t) {
        if (spec.tie_policy == TiePolicy::IncludeTies) marked[i] = true;
        else if (spec.tie_policy == TiePolicy::StrictRank) ties.push_back(i);
      }
    }
    if (spec.tie_policy == TiePolicy::StrictRank) {
      const std::size_t quota = cell.rank > above ? cell.rank - above : 0;
      const std::size_t take = std::min(quota, ties.size());
      auto id_of = [&](std::size_t i) -> const std::string& { return corpus[(*members)[i].record].id; };
      std::partial_sort(ties.begin(), ties.begin() + std::ptrdiff_t(take), ties.end(),
                        [&](std::size_t a, std::size_t b) { return id_of(a) < id_of(b); });
      for (std::size_t j = 0; j < take; ++j) marked[ties[j]] = true;
    }
    flags.emplace(cell.key, std::move(marked));
  }
  return MarkSet(std::move(flags), spec);
}

std::vector<GroupIndicator> aggregate_report(const Corpus& corpus, const StratifiedView& view,
                                             const MarkSet& marks, const std::vector<std::string>& groups,
                                             const ThresholdSpec& spec, const std::optional<StratumKey>& cell) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<std::size_t> request_slot;
  for (const auto& g : groups) {
    auto label = normalize_country(g);
    auto [it, inserted] = slot_of.try_emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    request_slot.push_back(it->second);
  }

  std::vector<GroupTallies> tallies(labels.size());
  GroupTallies world;

  auto visit = [&](const StratumKey& key, const std::vector<Incidence>& members) {
    const auto* flags = marks.find(key);
    if (!flags || flags->size() != members.size())
      throw EngineError("marks are inconsistent with the view at cell " + key_text(key));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& inc = members[i];
      const bool top = (*flags)[i];
      world.total.add(inc.weight);
      if (top) world.top.add(inc.weight);
      if (slot_of.empty()) continue;
      for (const auto& country : corpus[inc.record].countries) {
        auto it = slot_of.find(country);
        if (it == slot_of.end()) continue;
        tallies[it->second].total.add(inc.weight);
        if (top) tallies[it->second].top.add(inc.weight);
      }
    }
  };

  if (cell) {
    if (const auto* members = view.find(*cell)) visit(*cell, *members);
  } else {
    for (const auto& [key, members] : view.cells()) visit(key, members);
  }

  const double world_total = world.total.sum();
  const double world_top = world.top.sum();
  auto make_row = [&](const std::string& label, const GroupTallies& t) {
    GroupIndicator row;
    row.group = label;
    row.group_total = t.total.sum();
    row.group_top = t.top.sum();
    row.world_total = world_total;
    row.world_top = world_top;
    row.derive_ratios(spec.k);
    return row;
  };

  std::vector<GroupIndicator> rows;
  rows.reserve(groups.size() + 1);
  for (std::size_t slot : request_slot) rows.push_back(make_row(labels[slot], tallies[slot]));
  rows.push_back(make_row(kWorldLabel, world));
  return rows;
}

GroupIndicator group_indicator(const Corpus& corpus, const StratifiedView& view, const MarkSet& marks,
                               const std::string& group, const ThresholdSpec& spec,
                               const std::optional<StratumKey>& cell) {
  return aggregate_report(corpus, view, marks, {group}, spec, cell).front();
}

std::vector<std::string> countries_in(const Corpus& corpus, const StratifiedView& view) {
  const auto& opts = view.options();
  std::set<std::string> seen;
  for (const auto& rec : corpus.records()) {
    if (!opts.doctypes.contains(rec.doctype) || !opts.years.contains(rec.year)) continue;
    seen.insert(rec.countries.begin(), rec.countries.end());
  }
  return {seen.begin(), seen.end()};
}

}  // namespace hicite
