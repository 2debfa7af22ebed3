#include <gtest/gtest.h>

#include <sstream>
#include <streambuf>

#include "hicite/ingest.hpp"
#include "hicite/synth.hpp"
#include "test_support.hpp"

using namespace hicite;
using hicite::testing::make_record;

namespace {

const std::string kHeader = "PT\tUT\tPY\tDT\tTC\tWC\tC1\n";

std::string wos_row(const std::string& ut, const std::string& py, const std::string& dt, const std::string& tc,
                    const std::string& wc, const std::string& c1) {
  return "J\t" + ut + "\t" + py + "\t" + dt + "\t" + tc + "\t" + wc + "\t" + c1 + "\n";
}

ParseResult parse_text(const std::string& text, InputFormat format) {
  std::istringstream in(text);
  return parse_export(in, format);
}

RawRow wos_raw(std::map<std::string, std::string> fields) {
  return RawRow{1, std::move(fields)};
}

}  // namespace

TEST(WosTab, SplitsCategoriesAndExtractsCountries) {
  auto result = parse_text(kHeader + wos_row("WOS:1", "2012", "Article", "10", "Plant Sciences; Ecology",
                                             "[A] Univ X, Sao Paulo, Brazil; [B] Univ Y, Columbus, OH, USA"),
                           InputFormat::WosTab);
  ASSERT_EQ(result.report.accepted, 1u);
  const auto& r = result.corpus[0];
  EXPECT_EQ(r.id, "WOS:1");
  EXPECT_EQ(r.year, 2012);
  EXPECT_EQ(r.doctype, DocType::Article);
  EXPECT_EQ(r.citations, 10u);
  EXPECT_EQ(r.categories, (std::vector<std::string>{"Plant Sciences", "Ecology"}));
  EXPECT_EQ(r.countries, (std::vector<std::string>{"BRAZIL", "USA"}));
}

TEST(WosTab, NegativeCitationsRejected) {
  auto result = parse_text(kHeader + wos_row("WOS:1", "2012", "Article", "-3", "Ecology", ""), InputFormat::WosTab);
  EXPECT_EQ(result.report.accepted, 0u);
  EXPECT_EQ(result.report.rejected, 1u);
  ASSERT_EQ(result.report.reasons.size(), 1u);
  EXPECT_EQ(result.report.reasons[0].code, ReasonCode::MalformedNumber);
  EXPECT_EQ(result.report.reasons[0].line, 2u);
}

TEST(Validate, DocTypeIsCaseInsensitive) {
  auto out = validate(wos_raw({{"UT", "a"}, {"PY", "2012"}, {"DT", "ARTICLE"}, {"TC", "1"}, {"WC", "Ecology"}}),
                      InputFormat::WosTab);
  ASSERT_TRUE(std::holds_alternative<PublicationRecord>(out));
  EXPECT_EQ(std::get<PublicationRecord>(out).doctype, DocType::Article);
}

TEST(Validate, UnknownDocTypeBecomesOther) {
  auto out = validate(wos_raw({{"UT", "a"}, {"PY", "2012"}, {"DT", "Editorial Material"}, {"TC", "1"},
                               {"WC", "Ecology"}}),
                      InputFormat::WosTab);
  ASSERT_TRUE(std::holds_alternative<PublicationRecord>(out));
  EXPECT_EQ(std::get<PublicationRecord>(out).doctype, DocType::Other);
}

TEST(Validate, DuplicateCategoriesCollapse) {
  auto out = validate(wos_raw({{"UT", "a"}, {"PY", "2012"}, {"TC", "1"}, {"WC", "Ecology; Ecology"}}),
                      InputFormat::WosTab);
  ASSERT_TRUE(std::holds_alternative<PublicationRecord>(out));
  EXPECT_EQ(std::get<PublicationRecord>(out).categories, std::vector<std::string>{"Ecology"});
}

TEST(Validate, EmptyCategoriesRejected) {
  auto out = validate(wos_raw({{"UT", "a"}, {"PY", "2012"}, {"TC", "1"}, {"WC", ""}}), InputFormat::WosTab);
  ASSERT_TRUE(std::holds_alternative<Rejection>(out));
  EXPECT_EQ(std::get<Rejection>(out).code, ReasonCode::MissingRequiredField);
}

TEST(Validate, RequiredFieldsAndNumbers) {
  auto code = [](std::map<std::string, std::string> f) {
    auto out = validate(RawRow{3, std::move(f)}, InputFormat::WosTab);
    return std::holds_alternative<Rejection>(out) ? std::optional(std::get<Rejection>(out).code) : std::nullopt;
  };
  EXPECT_EQ(code({{"UT", ""}, {"PY", "2012"}, {"TC", "1"}, {"WC", "E"}}), ReasonCode::MissingRequiredField);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", ""}, {"TC", "1"}, {"WC", "E"}}), ReasonCode::MissingRequiredField);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", "2012"}, {"TC", " "}, {"WC", "E"}}), ReasonCode::MissingRequiredField);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", "20x2"}, {"TC", "1"}, {"WC", "E"}}), ReasonCode::MalformedNumber);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", "2012"}, {"TC", "1.5"}, {"WC", "E"}}), ReasonCode::MalformedNumber);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", "2012"}, {"TC", "+4"}, {"WC", "E"}}), ReasonCode::MalformedNumber);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", "2012"}, {"TC", "99999999999999999999999"}, {"WC", "E"}}),
            ReasonCode::MalformedNumber);
  EXPECT_EQ(code({{"UT", "a"}, {"PY", "2012"}, {"TC", " 4 "}, {"WC", "E"}}), std::nullopt);
}

TEST(ExtractCountries, LastCommaOfEachAddress) {
  EXPECT_EQ(extract_countries("Univ X, Sao Paulo, Brazil"), std::vector<std::string>{"BRAZIL"});
  EXPECT_EQ(extract_countries("Ohio State Univ, Columbus, OH 43210, USA; Univ Amsterdam, Amsterdam, Netherlands."),
            (std::vector<std::string>{"USA", "NETHERLANDS"}));
  EXPECT_EQ(extract_countries("[Smith, J; Doe, K] Univ X, Rio, Brazil; [Li, Q] Tsinghua Univ, Beijing, Peoples R China"),
            (std::vector<std::string>{"BRAZIL", "PEOPLES R CHINA"}));
  EXPECT_EQ(extract_countries("A, Brazil; B, BRAZIL"), std::vector<std::string>{"BRAZIL"});
  EXPECT_TRUE(extract_countries("").empty());
  EXPECT_TRUE(extract_countries(" ; ").empty());
}

TEST(WosTab, MissingHeaderIsFatal) {
  EXPECT_THROW(parse_text("", InputFormat::WosTab), IngestError);
  EXPECT_THROW(parse_text("\n\n", InputFormat::WosTab), IngestError);
  try {
    parse_text("PT\tPY\tTC\tWC\nJ\t2012\t1\tE\n", InputFormat::WosTab);
    FAIL() << "expected MissingHeader";
  } catch (const IngestError& e) {
    EXPECT_EQ(e.code(), ReasonCode::MissingHeader);
  }
  EXPECT_THROW(parse_text("UT\tPY\tTC\tWC\tUT\n", InputFormat::WosTab), IngestError);
}

TEST(WosTab, DuplicateIdKeepsFirst) {
  auto result = parse_text(kHeader + wos_row("X", "2012", "Article", "5", "E", "") +
                               wos_row("X", "2013", "Review", "9", "F", "") + wos_row("Y", "2012", "Article", "1", "E", ""),
                           InputFormat::WosTab);
  EXPECT_EQ(result.report.accepted, 2u);
  EXPECT_EQ(result.report.rejected, 1u);
  EXPECT_EQ(result.report.reasons[0].code, ReasonCode::DuplicateId);
  EXPECT_EQ(result.report.reasons[0].line, 3u);
  EXPECT_EQ(result.corpus[result.corpus.find("X")].citations, 5u);
}

TEST(WosTab, ToleratesCrlfBomShortRowsAndExtraTags) {
  std::string text = "\xEF\xBB\xBFPT\tAU\tUT\tPY\tTC\tWC\tZZ\r\n"
                     "J\tDoe, J\tW1\t2010\t3\tEcology\textra\r\n"
                     "\r\n"
                     "J\tRoe, K\tW2\t2011\t4\tZoology\r\n";
  auto result = parse_text(text, InputFormat::WosTab);
  EXPECT_EQ(result.report.accepted, 2u);
  EXPECT_EQ(result.report.rejected, 0u);
  EXPECT_EQ(result.corpus[1].categories, std::vector<std::string>{"Zoology"});
  EXPECT_EQ(result.corpus[1].doctype, DocType::Other);
}

TEST(WosTab, AccountingIsExactOnFaultInjectedInput) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 20; ++round) {
    std::string text = kHeader;
    std::size_t rows = 0;
    for (int i = 0; i < 300; ++i) {
      std::string ut = "U" + std::to_string(rng() % 250);  // some duplicates
      std::string py = (rng() % 17 == 0) ? "yr" : std::to_string(1990 + rng() % 20);
      std::string tc = (rng() % 13 == 0) ? "-1" : std::to_string(rng() % 100);
      std::string wc = (rng() % 11 == 0) ? " ; " : "Ecology; Zoology";
      switch (rng() % 23) {
        case 0: text += "garbage without tabs\n"; break;
        case 1: text += "\t\t\t\t\t\t\n"; break;
        case 2: text += "J\t" + ut + "\n"; break;
        default: text += wos_row(ut, py, "Article", tc, wc, "X, Brazil");
      }
      ++rows;
    }
    auto result = parse_text(text, InputFormat::WosTab);
    EXPECT_EQ(result.report.accepted + result.report.rejected, rows);
    EXPECT_EQ(result.report.reasons.size(), result.report.rejected);
    EXPECT_EQ(result.corpus.size(), result.report.accepted);
  }
}

TEST(Canonical, EmptyCorpusWritesNothing) {
  std::ostringstream out;
  EXPECT_EQ(write_canonical(Corpus{}, out), 0u);
  EXPECT_TRUE(out.str().empty());
}

TEST(Canonical, SingleRecordRoundTrip) {
  Corpus c = hicite::testing::make_corpus(
      {make_record("WOS:1", 2012, DocType::Letter, 53, {"Plant Sciences", "Ecology"}, {"BRAZIL"})});
  std::ostringstream out;
  EXPECT_EQ(write_canonical(c, out), 1u);
  EXPECT_EQ(out.str(),
            "{\"id\":\"WOS:1\",\"year\":2012,\"doctype\":\"Letter\",\"citations\":53,"
            "\"categories\":[\"Plant Sciences\",\"Ecology\"],\"countries\":[\"BRAZIL\"]}\n");
  auto back = parse_text(out.str(), InputFormat::CanonicalLines);
  EXPECT_EQ(back.report.rejected, 0u);
  EXPECT_EQ(back.corpus, c);
}

TEST(Canonical, RandomCorpusRoundTripIsIdentity) {
  synth::GenParams params;
  params.n = 10'000;
  params.seed = 2024;
  params.categories.push_back("Quotes \"and\" back\\slash");
  params.countries.push_back("CÔTE D'IVOIRE");
  const auto corpus = synth::gen_corpus(params);

  std::ostringstream first;
  write_canonical(corpus, first);
  auto parsed = parse_text(first.str(), InputFormat::CanonicalLines);
  ASSERT_EQ(parsed.report.rejected, 0u);
  ASSERT_EQ(parsed.corpus.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) ASSERT_EQ(parsed.corpus[i], corpus[i]) << "record " << i;

  std::ostringstream second;
  write_canonical(parsed.corpus, second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Canonical, RejectsBadLines) {
  const std::string text =
      "{\"id\":\"a\",\"year\":2012,\"doctype\":\"Article\",\"citations\":1,\"categories\":[\"E\"],\"countries\":[]}\n"
      "not json\n"
      "[1,2]\n"
      "{\"id\":\"b\",\"year\":2012,\"citations\":1,\"categories\":[\"E\"],\"journal\":\"X\"}\n"
      "{\"id\":\"c\",\"year\":2012,\"citations\":-1,\"categories\":[\"E\"]}\n"
      "{\"id\":\"d\",\"year\":2012,\"citations\":1.5,\"categories\":[\"E\"]}\n"
      "{\"id\":\"e\",\"year\":2012,\"citations\":1,\"categories\":[]}\n"
      "{\"id\":\"f\",\"citations\":1,\"categories\":[\"E\"]}\n"
      "{\"id\":\"g\",\"year\":2012,\"citations\":1,\"categories\":\"E\"}\n"
      "{\"id\":\"a\",\"year\":2013,\"citations\":1,\"categories\":[\"E\"]}\n"
      "{\"id\":\"h\",\"year\":2012,\"citations\":\"7\",\"categories\":[\"E\"]}\n";
  auto result = parse_text(text, InputFormat::CanonicalLines);
  EXPECT_EQ(result.report.accepted, 1u);
  EXPECT_EQ(result.report.rejected, 10u);
  std::vector<ReasonCode> codes;
  for (const auto& r : result.report.reasons) codes.push_back(r.code);
  EXPECT_EQ(codes, (std::vector<ReasonCode>{ReasonCode::MalformedRecord, ReasonCode::MalformedRecord,
                                            ReasonCode::MalformedRecord, ReasonCode::MalformedNumber,
                                            ReasonCode::MalformedNumber, ReasonCode::MissingRequiredField,
                                            ReasonCode::MissingRequiredField, ReasonCode::MalformedRecord,
                                            ReasonCode::DuplicateId, ReasonCode::MalformedNumber}));
}

TEST(Canonical, OptionalFieldsDefault) {
  auto result = parse_text("{\"id\":\"a\",\"year\":2012,\"citations\":0,\"categories\":[\"E\"]}\n",
                           InputFormat::CanonicalLines);
  ASSERT_EQ(result.report.accepted, 1u);
  EXPECT_EQ(result.corpus[0].doctype, DocType::Other);
  EXPECT_TRUE(result.corpus[0].countries.empty());
}

TEST(Ingest, DeterministicOnIdenticalBytes) {
  std::string text = kHeader;
  for (int i = 0; i < 200; ++i) {
    text += wos_row("U" + std::to_string(i % 150), std::to_string(2000 + i % 5), i % 3 ? "Article" : "Review",
                    i % 19 ? std::to_string(i) : "x", "A; B", "X, Brazil; Y, Chile");
  }
  auto a = parse_text(text, InputFormat::WosTab);
  auto b = parse_text(text, InputFormat::WosTab);
  EXPECT_EQ(a.corpus, b.corpus);
  EXPECT_EQ(a.report, b.report);
}

namespace {

// Produces a WosTab stream row by row without ever holding the whole file.
class GeneratedExport : public std::streambuf {
 public:
  explicit GeneratedExport(std::size_t rows) : rows_(rows) { refill(); }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    return refill() ? traits_type::to_int_type(*gptr()) : traits_type::eof();
  }

 private:
  bool refill() {
    if (next_ > rows_) return false;
    line_ = next_ == 0 ? kHeader
                       : wos_row("G" + std::to_string(next_), "2012", "Article", std::to_string(next_ % 97),
                                 "Ecology", "Univ, Town, Brazil");
    ++next_;
    setg(line_.data(), line_.data(), line_.data() + line_.size());
    return true;
  }

  std::size_t rows_;
  std::size_t next_ = 0;
  std::string line_;
};

}  // namespace

TEST(Ingest, StreamsInputLargerThanAnyBuffer) {
  constexpr std::size_t rows = 200'000;  // ~12 MB of text, served one row at a time
  GeneratedExport source(rows);
  std::istream in(&source);
  auto result = parse_export(in, InputFormat::WosTab);
  EXPECT_EQ(result.report.accepted, rows);
  EXPECT_EQ(result.corpus.size(), rows);
  EXPECT_EQ(result.corpus[rows - 1].id, "G" + std::to_string(rows));
}

TEST(Canonical, WriteFailurePropagates) {
  Corpus c = hicite::testing::make_corpus({make_record("a", 2012, DocType::Article, 1, {"E"})});
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  EXPECT_THROW(write_canonical(c, out), std::ios_base::failure);
}

TEST(Report, RendersStructuredText) {
  IngestReport report{1, 1, {{4, ReasonCode::MalformedNumber, "TC is not a non-negative integer: -3"}}};
  EXPECT_EQ(render_report(report),
            "{\n  \"accepted\": 1,\n  \"rejected\": 1,\n  \"reasons\": [\n    {\n      \"line\": 4,\n"
            "      \"code\": \"MalformedNumber\",\n      \"message\": \"TC is not a non-negative integer: -3\"\n"
            "    }\n  ]\n}");
}
