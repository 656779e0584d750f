#include <random>

#include <gtest/gtest.h>

#include "polifilter/pipeline.hpp"
#include "support/test_support.hpp"

namespace pf = polifilter;
using pf::Stage;
using pf::Verdict;
using namespace pf::testing;

namespace {

pf::PipelineDecision run_case(const RoutingCase& c, StubHard& hard, StubDetector& det, StubSoft& soft) {
    pf::PipelineConfig config;
    config.language_fallback = c.fallback;
    hard.relevant = c.hard_relevant;
    det.guess = routing_guess(c);
    soft.mode = c.soft == 0 ? StubSoft::Mode::Politics : c.soft == 1 ? StubSoft::Mode::Multi : StubSoft::Mode::Fail;
    const auto record = routing_record(c);
    if (c.soft == 3) return pf::route(record, config, hard, det, nullptr);
    return pf::route(record, config, hard, det, &soft);
}

pf::MetadataRecord article(std::string id) {
    pf::MetadataRecord r;
    r.id = std::move(id);
    r.doctype = "article";
    r.title = "Title";
    return r;
}

}  // namespace

TEST(Route, ExhaustiveRoutingTable) {
    const auto cases = all_routing_cases();
    ASSERT_GE(cases.size(), 144u);
    for (const auto& c : cases) {
        StubHard hard;
        StubDetector det;
        StubSoft soft;
        const auto d = run_case(c, hard, det, soft);
        const auto want = expected_routing(c);
        SCOPED_TRACE(testing::Message() << "doctype_ok=" << c.doctype_ok << " ddc=" << c.ddc << " abstract=" << c.abstract
                                        << " language=" << c.language << " soft=" << c.soft
                                        << " hard=" << c.hard_relevant);
        EXPECT_EQ(d.verdict, want.verdict);
        EXPECT_EQ(d.deciding_stage, want.stage);
        EXPECT_EQ(hard.calls.load(), want.hard_calls);
        EXPECT_EQ(det.calls.load(), want.detector_calls);
        EXPECT_EQ(soft.calls.load(), want.soft_calls);
        EXPECT_EQ(hard.last_mode, want.hard_mode);
        EXPECT_EQ(d.degraded, want.degraded);
    }
}

TEST(Route, TraceInvariants) {
    for (const auto& c : all_routing_cases()) {
        StubHard hard;
        StubDetector det;
        StubSoft soft;
        const auto d = run_case(c, hard, det, soft);
        ASSERT_FALSE(d.trace.empty());
        EXPECT_EQ(d.trace.front().stage, Stage::TypeSource);
        EXPECT_EQ(d.trace.back().stage, d.deciding_stage);
        // Stages appear in pipeline order and at most once.
        const std::vector<Stage> order = {Stage::TypeSource, Stage::Ddc,        Stage::Abstract,
                                          Stage::Language,   Stage::SoftFilter, Stage::HardFilter};
        std::size_t cursor = 0;
        for (const auto& step : d.trace) {
            const auto pos = std::find(order.begin(), order.end(), step.stage) - order.begin();
            ASSERT_GE(static_cast<std::size_t>(pos), cursor);
            cursor = static_cast<std::size_t>(pos) + 1;
        }
        EXPECT_NE(d.deciding_stage, Stage::Abstract);
        if (d.deciding_stage == Stage::HardFilter) {
            EXPECT_TRUE(std::holds_alternative<pf::HardDecision>(d.evidence));
        }
        if (d.deciding_stage == Stage::SoftFilter && d.verdict != Verdict::Excluded) {
            EXPECT_TRUE(std::holds_alternative<pf::Classification>(d.evidence));
        }
    }
}

TEST(Route, DdcDominatesRegardlessOfOtherFields) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        auto r = random_record(rng, "x" + std::to_string(i));
        r.doctype = "review";
        r.ddc = {"nonsense", "327.1"};
        StubHard hard;
        StubDetector det;
        StubSoft soft;
        const auto d = pf::route(r, pf::PipelineConfig{}, hard, det, &soft);
        EXPECT_EQ(d.verdict, Verdict::Politics);
        EXPECT_EQ(d.deciding_stage, Stage::Ddc);
        EXPECT_EQ(hard.calls + det.calls + soft.calls, 0);
    }
}

TEST(Route, TypeSourceOutcomes) {
    StubHard hard;
    StubDetector det;
    pf::PipelineConfig config;
    auto r = article("a");
    r.doctype.reset();
    auto d = pf::route(r, config, hard, det, nullptr);
    EXPECT_EQ(d.verdict, Verdict::Excluded);
    EXPECT_EQ(d.trace.back().outcome, "doctype-not-allowed:absent");

    config.allowed_sources = std::set<std::string>{"Journal A"};
    r = article("b");
    r.source = "Journal B";
    d = pf::route(r, config, hard, det, nullptr);
    EXPECT_EQ(d.trace.back().outcome, "source-not-allowed:Journal B");
    r.source = "Journal A";
    r.ddc = {"321"};
    EXPECT_EQ(pf::route(r, config, hard, det, nullptr).verdict, Verdict::Politics);

    r = article("");
    d = pf::route(r, config, hard, det, nullptr);
    EXPECT_EQ(d.verdict, Verdict::Excluded);
    EXPECT_EQ(d.trace.back().outcome, "invalid-record:missing-id");
}

TEST(Route, LanguageOutcomes) {
    StubHard hard;
    StubDetector det;
    pf::PipelineConfig config;
    config.language_fallback = pf::LanguageFallback::Exclude;
    auto r = article("l");
    r.abstract = words(30);
    det.guess = pf::LangGuess{"de", 0.2};
    EXPECT_EQ(pf::route(r, config, hard, det, nullptr).trace.back().outcome, "low-confidence:de");
    det.guess = pf::LangGuess{"es", 0.9};
    EXPECT_EQ(pf::route(r, config, hard, det, nullptr).trace.back().outcome, "not-permitted:es");
    det.guess.reset();
    EXPECT_EQ(pf::route(r, config, hard, det, nullptr).trace.back().outcome, "undetermined");
    det.guess = pf::LangGuess{"fr", 0.9};
    const auto d = pf::route(r, config, hard, det, nullptr);
    EXPECT_EQ(d.trace[3].outcome, "permitted:fr");
    EXPECT_EQ(d.trace[4].outcome, "disabled");
}

TEST(Route, SoftOutageWithoutFallbackExcludes) {
    StubHard hard;
    StubDetector det{pf::LangGuess{"en", 0.9}};
    StubSoft soft;
    soft.mode = StubSoft::Mode::Fail;
    pf::PipelineConfig config;
    config.soft_fallback = false;
    auto r = article("s");
    r.abstract = words(30);
    const auto d = pf::route(r, config, hard, det, &soft);
    EXPECT_EQ(d.verdict, Verdict::Excluded);
    EXPECT_EQ(d.deciding_stage, Stage::SoftFilter);
    EXPECT_EQ(d.trace.back().outcome, "transport-error:stub outage");
    EXPECT_EQ(hard.calls, 0);
}

TEST(Route, ComponentExceptionExcludesAtStage) {
    struct Throwing {
        std::optional<pf::LangGuess> detect(std::string_view) const { throw std::runtime_error("boom"); }
    };
    StubHard hard;
    auto r = article("e");
    r.abstract = words(30);
    const auto d = pf::route(r, pf::PipelineConfig{}, hard, Throwing{}, nullptr);
    EXPECT_EQ(d.verdict, Verdict::Excluded);
    EXPECT_EQ(d.deciding_stage, Stage::Language);
    EXPECT_EQ(d.trace.back().outcome, "error:boom");
}

TEST(Route, RealComponentsEndToEnd) {
    const auto lexicon = pf::load_lexicon(kTableOneLexicon);
    const pf::NgramDetector detector;
    auto r = article("de1");
    r.title = "Die Außenpolitik Deutschlands";
    r.abstract = words(5);
    const auto d = pf::route(r, pf::PipelineConfig{}, lexicon, detector, nullptr);
    EXPECT_EQ(d.verdict, Verdict::Politics);
    EXPECT_EQ(d.deciding_stage, Stage::HardFilter);
    const auto j = pf::to_json(d);
    EXPECT_EQ(j["verdict"], "POLITICS");
    EXPECT_EQ(j["evidence"]["kind"], "hard");
    EXPECT_EQ(j["evidence"]["total_milli"], 1000);
    EXPECT_EQ(j["evidence"]["mode"], "title-keywords");
    EXPECT_EQ(j["trace"][2]["outcome"], "too-short");
    EXPECT_FALSE(j.contains("degraded"));
}

TEST(RouteBatch, PreservesOrderAndIsDeterministic) {
    const auto lexicon = pf::load_lexicon(kTableOneLexicon);
    StubDetector det{pf::LangGuess{"en", 0.9}};
    std::mt19937_64 rng(31);
    std::vector<pf::MetadataRecord> records;
    for (int i = 0; i < 500; ++i) {
        auto r = random_record(rng, "b" + std::to_string(i));
        r.doctype = i % 7 ? "article" : "book";
        if (i % 11 == 0) r.ddc = {"324"};
        records.push_back(r);
    }
    const auto serial = pf::route_batch(std::span<const pf::MetadataRecord>(records), pf::PipelineConfig{}, lexicon, det,
                                        static_cast<const pf::SoftBackend*>(nullptr), 1);
    const auto parallel = pf::route_batch(std::span<const pf::MetadataRecord>(records), pf::PipelineConfig{}, lexicon,
                                          det, static_cast<const pf::SoftBackend*>(nullptr), 8);
    ASSERT_EQ(serial.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(serial[i].id, records[i].id);
        EXPECT_EQ(pf::to_json(serial[i]), pf::to_json(parallel[i]));
    }
}

TEST(DecisionCounts, TalliesVerdicts) {
    pf::DecisionCounts counts;
    pf::PipelineDecision d;
    d.verdict = Verdict::Politics;
    counts.add(d);
    d.verdict = Verdict::Multi;
    d.degraded = true;
    counts.add(d);
    d.verdict = Verdict::Excluded;
    d.degraded = false;
    counts.add(d);
    EXPECT_EQ(counts.to_json(), (nlohmann::json{{"read", 3}, {"politics", 1}, {"multi", 1}, {"excluded", 1}, {"degraded", 1}}));
}

TEST(PipelineConfig, Validation) {
    pf::PipelineConfig config;
    EXPECT_NO_THROW(config.validate());
    config.min_language_confidence = 1.5;
    EXPECT_THROW(config.validate(), std::invalid_argument);
    config = {};
    config.allowed_doctypes.clear();
    EXPECT_THROW(config.validate(), std::invalid_argument);
}
