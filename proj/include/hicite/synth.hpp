#pragma once

// Synthetic corpora and brute-force oracles.
//
// The oracles here re-derive thresholds, marks and group indicators by direct
// enumeration. They must not call into the engine: every engine result is
// checked against them.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hicite/ingest.hpp"
#include "hicite/model.hpp"

namespace hicite::synth {

struct GenParams {
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  /// Citation law P(C = c) proportional to (c + 1)^-alpha on [0, cmax].
  double alpha = 2.0;
  Citations cmax = 1000;
  YearRange years{2010, 2012};
  /// Probabilities of Article, Review, Letter, Other.
  std::array<double, 4> doctype_mix{0.7, 0.15, 0.1, 0.05};
  std::vector<std::string> categories{"Ecology", "Plant Sciences", "Zoology", "Physics, Applied",
                                      "Chemistry, Organic", "Oncology", "Mathematics", "Economics"};
  /// Probability that a record is assigned two categories instead of one.
  double p_multi = 0.4;
  std::vector<std::string> countries{"BRAZIL", "RUSSIA", "INDIA", "CHINA", "SOUTH AFRICA"};
  /// Probability that a record carries a second country.
  double p_multi_country = 0.2;
  /// Probability that a record carries no country at all.
  double p_no_country = 0.05;
  std::string id_prefix = "S";

  /// Throws InvariantError on an invalid parameter.
  void validate() const;
};

/// Normalized pmf of the truncated citation law, index c = 0..cmax.
std::vector<double> citation_pmf(double alpha, Citations cmax);

/// Exactly params.n records with sequential ids; deterministic in params.
Corpus gen_corpus(const GenParams& params);

struct OracleThreshold {
  std::size_t rank = 0;
  Citations threshold = 0;
  std::size_t n_include = 0;
  std::size_t n_strict = 0;
  std::size_t n_exclude = 0;

  std::size_t n_top(TiePolicy policy) const;
};

/// Exhaustive threshold: the largest candidate value v with at least
/// ceil(k*N) values >= v. Throws std::invalid_argument (EmptyCell) on an
/// empty multiset.
OracleThreshold oracle_threshold(std::span<const Citations> citations, double k);

/// Marked status of one record in one cell, re-derived from scratch.
/// `cell_records` are corpus positions of the cell's members.
bool oracle_is_marked(const Corpus& corpus, std::span<const std::size_t> cell_records, std::size_t record,
                      const ThresholdSpec& spec);

/// Group indicator by naive enumeration over (record x category) incidences.
/// An empty `group` yields the world row.
GroupIndicator oracle_group_share(const Corpus& corpus, const ThresholdSpec& spec, CountingScheme scheme,
                                  const DocTypeSet& filter, const YearRange& years,
                                  const std::optional<std::string>& group);

/// Constants of the worked-example fixture.
struct ExampleFixture {
  static constexpr std::size_t kRecords = 1'320'618;
  static constexpr std::size_t kAbove53 = 13'000;
  static constexpr std::size_t kAt53 = 300;
  static constexpr std::size_t kBrazil = 36'927;
  static constexpr std::size_t kBrazilTop = 195;
  static constexpr int kYear = 2012;
  static constexpr Citations kThreshold = 53;
  static constexpr const char* kCategory = "All Fields";
  static constexpr const char* kCountry = "BRAZIL";
};

/// 1,320,618 articles from 2012 in one category whose top-1% threshold is 53
/// and which include 36,927 BRAZIL records, 195 of them cited 53 or more
/// times. Throws std::logic_error if the construction misses a count.
Corpus gen_example_fixture();

/// Checks every count constraint of the fixture; returns the first violation
/// as text, or nullopt.
std::optional<std::string> check_example_fixture(const Corpus& corpus);

}  // namespace hicite::synth
