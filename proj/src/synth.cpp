#include "hicite/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

namespace hicite::synth {

namespace {

constexpr const char* kWorldLabelOracle = "WORLD";

// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

std::string make_id(const std::string& prefix, std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 9) digits.insert(0, 9 - digits.size(), '0');
  return prefix + digits;
}

// Smallest r in [1, n] with r >= k*n, up to a relative 1e-9 slack.
std::size_t oracle_rank(double k, std::size_t n) {
  const double target = k * double(n);
  const double slack = 1e-9 * std::max(1.0, target);
  std::size_t r = 1;
  while (r < n && double(r) < target - slack) ++r;
  return r;
}

bool contains(const std::vector<std::string>& items, const std::string& value) {
  return std::find(items.begin(), items.end(), value) != items.end();
}

}  // namespace

void GenParams::validate() const {
  if (!(alpha > 1.0)) throw InvariantError("alpha must exceed 1");
  double mix = 0.0;
  for (double p : doctype_mix) {
    if (p < 0.0) throw InvariantError("doctype_mix has a negative entry");
    mix += p;
  }
  if (std::fabs(mix - 1.0) > 1e-9) throw InvariantError("doctype_mix must sum to 1");
  for (double p : {p_multi, p_multi_country, p_no_country}) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvariantError("probabilities must lie in [0, 1]");
  }
  if (years.empty()) throw InvariantError("year range is empty");
  if (categories.empty()) throw InvariantError("category pool is empty");
  if (p_multi > 0.0 && categories.size() < 2) throw InvariantError("p_multi > 0 needs at least two categories");
  if (p_multi_country > 0.0 && countries.size() < 2 && !countries.empty())
    throw InvariantError("p_multi_country > 0 needs at least two countries");
  if (id_prefix.empty()) throw InvariantError("id prefix is empty");
}

std::vector<double> citation_pmf(double alpha, Citations cmax) {
  std::vector<double> pmf(cmax + 1);
  double total = 0.0;
  for (Citations c = 0; c <= cmax; ++c) {
    pmf[c] = std::pow(double(c + 1), -alpha);
    total += pmf[c];
  }
  for (double& p : pmf) p /= total;
  return pmf;
}

Corpus gen_corpus(const GenParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);

  const auto pmf = citation_pmf(params.alpha, params.cmax);
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
  std::array<double, 4> doc_cdf{};
  std::partial_sum(params.doctype_mix.begin(), params.doctype_mix.end(), doc_cdf.begin());

  auto pick = [&](std::size_t n) { return std::size_t(unit(rng) * double(n)) % n; };
  const auto year_span = std::size_t(params.years.last - params.years.first) + 1;

  Corpus corpus;
  corpus.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    PublicationRecord rec;
    rec.id = make_id(params.id_prefix, i + 1);
    rec.year = params.years.first + int(pick(year_span));

    const double u_doc = unit(rng) * doc_cdf.back();
    rec.doctype = kAllDocTypes[std::min<std::size_t>(
        std::size_t(std::upper_bound(doc_cdf.begin(), doc_cdf.end(), u_doc) - doc_cdf.begin()), 3)];

    const double u_cite = unit(rng) * cdf.back();
    rec.citations = std::min<Citations>(
        Citations(std::upper_bound(cdf.begin(), cdf.end(), u_cite) - cdf.begin()), params.cmax);

    const auto& cats = params.categories;
    std::size_t first = pick(cats.size());
    rec.categories.push_back(cats[first]);
    if (unit(rng) < params.p_multi) {
      std::size_t second = (first + 1 + pick(cats.size() - 1)) % cats.size();
      rec.categories.push_back(cats[second]);
    }

    const auto& pool = params.countries;
    if (!pool.empty() && unit(rng) >= params.p_no_country) {
      std::size_t a = pick(pool.size());
      rec.countries.push_back(normalize_country(pool[a]));
      if (pool.size() > 1 && unit(rng) < params.p_multi_country) {
        std::size_t b = (a + 1 + pick(pool.size() - 1)) % pool.size();
        rec.countries.push_back(normalize_country(pool[b]));
      }
    }
    corpus.add(std::move(rec));
  }
  return corpus;
}

std::size_t OracleThreshold::n_top(TiePolicy policy) const {
  switch (policy) {
    case TiePolicy::IncludeTies: return n_include;
    case TiePolicy::StrictRank: return n_strict;
    case TiePolicy::ExcludeTies: return n_exclude;
  }
  return n_include;
}

OracleThreshold oracle_threshold(std::span<const Citations> citations, double k) {
  if (citations.empty()) throw std::invalid_argument("EmptyCell: no citation values");
  OracleThreshold out;
  out.rank = oracle_rank(k, citations.size());

  // Count of values >= v for every distinct candidate, scanned from the top.
  std::map<Citations, std::size_t, std::greater<>> histogram;
  for (Citations c : citations) ++histogram[c];
  std::size_t at_least = 0;
  for (const auto& [value, count] : histogram) {
    at_least += count;
    if (at_least >= out.rank) {
      out.threshold = value;
      break;
    }
  }

  for (Citations c : citations) {
    if (c >= out.threshold) ++out.n_include;
    if (c > out.threshold) ++out.n_exclude;
  }
  out.n_strict = out.n_exclude + std::min(out.n_include - out.n_exclude, out.rank - out.n_exclude);
  return out;
}

bool oracle_is_marked(const Corpus& corpus, std::span<const std::size_t> cell_records, std::size_t record,
                      const ThresholdSpec& spec) {
  std::vector<Citations> values;
  for (auto pos : cell_records) values.push_back(corpus[pos].citations);
  const auto cut = oracle_threshold(values, spec.k);
  const Citations c = corpus[record].citations;
  switch (spec.tie_policy) {
    case TiePolicy::IncludeTies: return c >= cut.threshold;
    case TiePolicy::ExcludeTies: return c > cut.threshold;
    case TiePolicy::StrictRank: {
      if (c != cut.threshold) return c > cut.threshold;
      // Ties are admitted in ascending id order until the quota is filled.
      std::size_t smaller_ties = 0;
      for (auto pos : cell_records) {
        if (corpus[pos].citations == cut.threshold && corpus[pos].id < corpus[record].id) ++smaller_ties;
      }
      return cut.n_exclude + smaller_ties < cut.rank;
    }
  }
  return false;
}

GroupIndicator oracle_group_share(const Corpus& corpus, const ThresholdSpec& spec, CountingScheme scheme,
                                  const DocTypeSet& filter, const YearRange& years,
                                  const std::optional<std::string>& group) {
  using Cell = std::tuple<int, int, std::string>;
  const auto& records = corpus.records();
  auto admitted = [&](const PublicationRecord& r) { return filter.contains(r.doctype) && years.contains(r.year); };

  std::map<Cell, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!admitted(records[i])) continue;
    for (const auto& cat : records[i].categories) members[{records[i].year, int(records[i].doctype), cat}].push_back(i);
  }

  // Per cell: the threshold and, under the strict policy, the sorted ids of
  // the ties that fit in the quota.
  struct CellCut {
    Citations threshold;
    std::vector<std::string> admitted_ties;
  };
  std::map<Cell, CellCut> cuts;
  for (const auto& [cell, list] : members) {
    std::vector<Citations> values;
    for (auto pos : list) values.push_back(records[pos].citations);
    const auto cut = oracle_threshold(values, spec.k);
    CellCut cc{cut.threshold, {}};
    if (spec.tie_policy == TiePolicy::StrictRank) {
      std::vector<std::string> tie_ids;
      for (auto pos : list) {
        if (records[pos].citations == cut.threshold) tie_ids.push_back(records[pos].id);
      }
      std::sort(tie_ids.begin(), tie_ids.end());
      tie_ids.resize(std::min(tie_ids.size(), cut.rank - cut.n_exclude));
      cc.admitted_ties = std::move(tie_ids);
    }
    cuts.emplace(cell, std::move(cc));
  }

  const std::string label = group ? normalize_country(*group) : std::string(kWorldLabelOracle);
  GroupIndicator out;
  out.group = label;
  for (const auto& rec : records) {
    if (!admitted(rec)) continue;
    const bool in_group = !group || contains(rec.countries, label);
    const double w = scheme == CountingScheme::IntegerCount ? 1.0 : 1.0 / double(rec.categories.size());
    for (const auto& cat : rec.categories) {
      const auto& cut = cuts.at({rec.year, int(rec.doctype), cat});
      bool top = false;
      switch (spec.tie_policy) {
        case TiePolicy::IncludeTies: top = rec.citations >= cut.threshold; break;
        case TiePolicy::ExcludeTies: top = rec.citations > cut.threshold; break;
        case TiePolicy::StrictRank:
          top = rec.citations > cut.threshold ||
                (rec.citations == cut.threshold &&
                 std::binary_search(cut.admitted_ties.begin(), cut.admitted_ties.end(), rec.id));
          break;
      }
      out.world_total += w;
      if (top) out.world_top += w;
      if (in_group) {
        out.group_total += w;
        if (top) out.group_top += w;
      }
    }
  }
  out.activity = out.world_total > 0 ? out.group_total / out.world_total : 0.0;
  if (out.group_total > 0) out.pp_top = out.group_top / out.group_total;
  if (out.world_top > 0) out.world_share = out.group_top / out.world_top;
  out.expected_top = spec.k * out.group_total;
  return out;
}

Corpus gen_example_fixture() {
  using F = ExampleFixture;
  constexpr std::size_t n = F::kRecords;
  constexpr std::size_t top_block = F::kAbove53 + F::kAt53;
  constexpr std::size_t rest = n - top_block;
  constexpr std::size_t brazil_rest = F::kBrazil - F::kBrazilTop;
  constexpr std::size_t stride = 1'000'003;  // coprime with n

  // Citations and BRAZIL flag by descending rank (1-based).
  auto citations_at = [&](std::size_t rank) -> Citations {
    if (rank <= F::kAbove53) return 54 + (F::kAbove53 - rank) / 50;
    if (rank <= top_block) return 53;
    return 52 * (n - rank) / (rest - 1);
  };
  std::vector<bool> brazil(n + 1, false);
  for (std::size_t j = 1; j <= F::kBrazilTop; ++j) brazil[68 * j] = true;
  for (std::size_t j = 0; j < brazil_rest; ++j) brazil[top_block + 1 + j * rest / brazil_rest] = true;

  // Scatter ranks over file positions with a fixed stride permutation.
  std::vector<std::size_t> rank_at(n);
  for (std::size_t rank = 1; rank <= n; ++rank) rank_at[((rank - 1) * stride) % n] = rank;

  Corpus corpus;
  corpus.reserve(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t rank = rank_at[pos];
    PublicationRecord rec;
    rec.id = "WOS:" + make_id("", pos + 1);
    rec.year = F::kYear;
    rec.doctype = DocType::Article;
    rec.citations = citations_at(rank);
    rec.categories = {F::kCategory};
    if (brazil[rank]) rec.countries.emplace_back(F::kCountry);
    if (rank % 4 == 0) rec.countries.emplace_back("USA");
    corpus.add(std::move(rec));
  }

  if (auto problem = check_example_fixture(corpus)) throw std::logic_error("fixture self-check failed: " + *problem);
  return corpus;
}

std::optional<std::string> check_example_fixture(const Corpus& corpus) {
  using F = ExampleFixture;
  if (corpus.size() != F::kRecords) return "record count " + std::to_string(corpus.size());
  std::size_t above = 0, at = 0, brazil = 0, brazil_top = 0;
  for (const auto& rec : corpus.records()) {
    if (rec.year != F::kYear || rec.doctype != DocType::Article || rec.categories.size() != 1 ||
        rec.categories.front() != F::kCategory)
      return "record " + rec.id + " is outside the single 2012 article cell";
    above += rec.citations > F::kThreshold;
    at += rec.citations == F::kThreshold;
    if (contains(rec.countries, F::kCountry)) {
      ++brazil;
      brazil_top += rec.citations >= F::kThreshold;
    }
  }
  if (above != F::kAbove53) return "records above 53: " + std::to_string(above);
  if (at != F::kAt53) return "records at 53: " + std::to_string(at);
  if (brazil != F::kBrazil) return "BRAZIL records: " + std::to_string(brazil);
  if (brazil_top != F::kBrazilTop) return "BRAZIL records cited 53+: " + std::to_string(brazil_top);
  return std::nullopt;
}

}  // namespace hicite::synth
