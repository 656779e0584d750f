#include <random>

#include <gtest/gtest.h>

#include "polifilter/records.hpp"
#include "support/test_support.hpp"

namespace pf = polifilter;
using pf::testing::words;

TEST(Normalize, EmptyInputHasNoTokens) {
    EXPECT_TRUE(pf::normalize("").tokens.empty());
    EXPECT_TRUE(pf::normalize("  \t\n ").tokens.empty());
}

TEST(Normalize, LowercasesAndSplitsGerman) {
    const auto n = pf::normalize("Die Außenpolitik Deutschlands");
    EXPECT_EQ(n.tokens, (std::vector<std::string>{"die", "außenpolitik", "deutschlands"}));
    EXPECT_EQ(n.raw, "Die Außenpolitik Deutschlands");
}

TEST(Normalize, SplitsOnEmDash) {
    EXPECT_EQ(pf::normalize("policy—making").tokens, (std::vector<std::string>{"policy", "making"}));
}

TEST(Normalize, DropsPunctuationOnlyFragments) {
    EXPECT_EQ(pf::normalize("war, peace & (elections)!").tokens,
              (std::vector<std::string>{"war", "peace", "elections"}));
    EXPECT_TRUE(pf::normalize("... -- !!").tokens.empty());
}

TEST(Normalize, ComposesDecomposedInput) {
    // "é" as e + combining acute must equal the precomposed form.
    EXPECT_EQ(pf::normalize("État").tokens, pf::normalize("État").tokens);
    EXPECT_EQ(pf::normalize("État").tokens.front(), "état");
}

TEST(Normalize, IdempotentOnRandomText) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const std::string text = pf::testing::random_text(rng, 30) + " L'État, U.S. 3.5% ÄRA—ära";
        const auto once = pf::normalize(text);
        const auto twice = pf::normalize(once.reconstruct());
        ASSERT_EQ(once.tokens, twice.tokens) << text;
        for (const auto& token : once.tokens) {
            ASSERT_FALSE(token.empty());
            ASSERT_EQ(token.find_first_of(" \t\n\r"), std::string::npos);
        }
    }
}

TEST(ValidAbstract, AbsentAbstractIsInvalid) {
    pf::MetadataRecord r{.id = "a"};
    EXPECT_FALSE(pf::has_valid_abstract(r, 20));
}

TEST(ValidAbstract, TwentyWordBoundary) {
    pf::MetadataRecord r{.id = "a"};
    r.abstract = words(20);
    EXPECT_TRUE(pf::has_valid_abstract(r, 20));
    r.abstract = words(19);
    EXPECT_FALSE(pf::has_valid_abstract(r, 20));
    EXPECT_FALSE(pf::has_valid_abstract(r));  // default is 20
}

TEST(ValidAbstract, MonotoneInMinWords) {
    pf::MetadataRecord r{.id = "a"};
    for (std::size_t n : {0u, 1u, 5u, 19u, 20u, 33u}) {
        r.abstract = words(n);
        for (std::size_t k = 1; k <= 40; ++k)
            if (pf::has_valid_abstract(r, k)) {
                for (std::size_t smaller = 1; smaller <= k; ++smaller) EXPECT_TRUE(pf::has_valid_abstract(r, smaller));
            }
    }
}

TEST(ValidAbstract, ZeroMinWordsRejected) {
    pf::MetadataRecord r{.id = "a"};
    EXPECT_THROW(pf::has_valid_abstract(r, 0), std::invalid_argument);
}

TEST(Ddc, RangeExamples) {
    pf::MetadataRecord r{.id = "a"};
    r.ddc = {"321"};
    EXPECT_TRUE(pf::ddc_in_politics_range(r));
    r.ddc = {"328.3"};
    EXPECT_TRUE(pf::ddc_in_politics_range(r));
    r.ddc = {"330"};
    EXPECT_FALSE(pf::ddc_in_politics_range(r));
    r.ddc = {};
    EXPECT_FALSE(pf::ddc_in_politics_range(r));
}

TEST(Ddc, Boundaries) {
    EXPECT_TRUE(pf::ddc_code_in_politics_range("320"));
    EXPECT_TRUE(pf::ddc_code_in_politics_range("328.999"));
    EXPECT_FALSE(pf::ddc_code_in_politics_range("319.9"));
    EXPECT_FALSE(pf::ddc_code_in_politics_range("329"));
    EXPECT_TRUE(pf::ddc_code_in_politics_range(" 323 "));
}

TEST(Ddc, UnparseableCodesIgnored) {
    EXPECT_FALSE(pf::ddc_class_number("ddc").has_value());
    EXPECT_FALSE(pf::ddc_class_number("32x").has_value());
    EXPECT_FALSE(pf::ddc_class_number(".5").has_value());
    EXPECT_FALSE(pf::ddc_class_number("").has_value());
    pf::MetadataRecord r{.id = "a"};
    r.ddc = {"garbage", "n/a", "322"};
    EXPECT_TRUE(pf::ddc_in_politics_range(r));
}

TEST(Ddc, AddingNonMatchingCodeKeepsTrue) {
    pf::MetadataRecord r{.id = "a"};
    r.ddc = {"324"};
    for (const char* extra : {"500", "x", "", "910.2"}) {
        r.ddc.push_back(extra);
        EXPECT_TRUE(pf::ddc_in_politics_range(r));
    }
}

TEST(Validate, ReportsFirstViolation) {
    pf::MetadataRecord r;
    EXPECT_EQ(pf::validate(r), "missing-id");
    r.id = "x";
    EXPECT_FALSE(pf::validate(r).has_value());
    r.language = "EN";
    EXPECT_EQ(pf::validate(r), "invalid-field:language");
    r.language = "en";
    r.year = 1399;
    EXPECT_EQ(pf::validate(r), "invalid-field:year");
    r.year = 2100;
    EXPECT_FALSE(pf::validate(r).has_value());
}
