#include <gtest/gtest.h>

#include "polifilter/langdetect.hpp"

namespace pf = polifilter;

namespace {

const pf::NgramDetector& detector() {
    static const pf::NgramDetector instance;
    return instance;
}

// Held-out texts, none of which appear in the embedded reference material.
struct Sample {
    const char* code;
    const char* text;
};

const Sample kHeldOut[] = {
    {"en",
     "This article examines how parliamentary coalitions negotiate budget reforms after national elections. "
     "Drawing on interviews with party officials and a dataset of cabinet agreements, we show that smaller "
     "partners secure more concessions when the opposition is fragmented and when public trust in the "
     "government is low. The findings suggest that institutional design shapes the bargaining power of "
     "junior parties in ways that earlier studies have overlooked."},
    {"en",
     "We measured the growth rate of wheat seedlings under three irrigation schedules during a dry summer. "
     "Plants that received water every second day developed deeper roots and produced more grain than those "
     "watered daily, although the difference was smaller on clay soils. These results could help farmers "
     "save water without losing yield in regions that face longer periods of drought."},
    {"de",
     "Der Beitrag untersucht, wie sich die Zusammenarbeit zwischen Bund und Ländern in der Bildungspolitik "
     "seit der Föderalismusreform verändert hat. Auf der Grundlage von Experteninterviews und einer Analyse "
     "von Gesetzesentwürfen zeigt sich, dass die Länder ihre Spielräume unterschiedlich nutzen. Während "
     "einige Länder eigene Wege gehen, orientieren sich andere weiterhin stark an gemeinsamen Vereinbarungen "
     "und an den Empfehlungen der Kultusministerkonferenz."},
    {"de",
     "Im Rahmen dieser Studie wurden die Auswirkungen unterschiedlicher Düngemittel auf das Wachstum von "
     "Kartoffeln über drei Jahre hinweg beobachtet. Die Ergebnisse zeigen, dass organischer Dünger auf "
     "sandigen Böden zu höheren Erträgen führt, während auf lehmigen Böden kaum Unterschiede festzustellen "
     "waren. Weitere Untersuchungen sollen klären, welche Rolle das Wetter dabei spielt."},
    {"fr",
     "Cet article analyse la manière dont les maires des petites communes rurales participent aux décisions "
     "prises au niveau intercommunal. À partir d'entretiens menés dans trois départements, nous montrons que "
     "les élus locaux disposent d'une marge de manœuvre limitée, mais qu'ils savent mobiliser leurs réseaux "
     "pour défendre les intérêts de leur territoire. Ces résultats invitent à nuancer l'idée d'un déclin du "
     "pouvoir municipal."},
    {"fr",
     "Nous avons étudié la croissance de jeunes chênes plantés dans des parcelles soumises à différents "
     "régimes d'éclaircie. Les arbres situés dans les zones les plus ouvertes ont grandi plus vite pendant "
     "les deux premières années, mais cette avance a disparu par la suite. Il semble donc que la lumière ne "
     "soit pas le seul facteur qui limite le développement des jeunes arbres en forêt."},
};

}  // namespace

TEST(NgramDetector, HeldOutSelfTest) {
    for (const auto& sample : kHeldOut) {
        const auto guess = detector().detect(sample.text);
        ASSERT_TRUE(guess.has_value()) << sample.text;
        EXPECT_EQ(guess->code, sample.code) << sample.text;
        EXPECT_GE(guess->confidence, 0.9) << sample.text;
        EXPECT_LE(guess->confidence, 1.0);
    }
}

TEST(NgramDetector, TooShortIsUndetermined) {
    EXPECT_FALSE(detector().detect("").has_value());
    EXPECT_FALSE(detector().detect("   ").has_value());
    EXPECT_FALSE(detector().detect("Politik heute").has_value());
    EXPECT_FALSE(detector().detect("!!! ... ---").has_value());
}

TEST(NgramDetector, Deterministic) {
    const pf::NgramDetector other;
    for (const auto& sample : kHeldOut) EXPECT_EQ(detector().detect(sample.text), other.detect(sample.text));
}

TEST(NgramDetector, CustomSamples) {
    const pf::NgramDetector custom({{"aa", "aaa aab aba baa aaa aaa"}, {"zz", "zzz zzy zyz yzz zzz zzz"}});
    EXPECT_EQ(custom.languages(), (std::vector<std::string>{"aa", "zz"}));
    const auto guess = custom.detect("aaa aba aab");
    ASSERT_TRUE(guess);
    EXPECT_EQ(guess->code, "aa");
}

TEST(NgramDetector, CoversSevenLanguages) {
    EXPECT_EQ(detector().languages().size(), 7u);
}

TEST(IsPermitted, Examples) {
    const auto& permitted = pf::default_permitted_languages();
    EXPECT_TRUE(pf::is_permitted(pf::LangGuess{"en", 0.97}, permitted, 0.5));
    EXPECT_FALSE(pf::is_permitted(pf::LangGuess{"es", 0.99}, permitted, 0.5));
    EXPECT_FALSE(pf::is_permitted(pf::LangGuess{"de", 0.3}, permitted, 0.5));
    EXPECT_TRUE(pf::is_permitted(pf::LangGuess{"de", 0.5}, permitted, 0.5));
    EXPECT_FALSE(pf::is_permitted(std::nullopt, permitted, 0.0));
}

TEST(IsPermitted, MonotoneInThresholdAndSet) {
    const std::set<std::string> small = {"en"};
    const std::set<std::string> large = {"en", "de", "fr"};
    for (int c = 0; c <= 20; ++c) {
        for (const char* code : {"en", "de", "es"}) {
            const pf::LangGuess guess{code, c / 20.0};
            for (int t = 0; t <= 20; ++t) {
                for (int lower = 0; lower <= t; ++lower)
                    if (pf::is_permitted(guess, large, t / 20.0)) {
                        EXPECT_TRUE(pf::is_permitted(guess, large, lower / 20.0));
                    }
                if (pf::is_permitted(guess, small, t / 20.0)) {
                    EXPECT_TRUE(pf::is_permitted(guess, large, t / 20.0));
                }
            }
        }
    }
}
