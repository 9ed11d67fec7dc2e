#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace synnet;

namespace {

const non_accepted_lexicon& lex() {
    static const auto l = non_accepted_lexicon::standard();
    return l;
}

std::vector<flag_kind> kinds(const std::vector<advisory_flag>& fs) {
    std::vector<flag_kind> out;
    for (const auto& f : fs) out.push_back(f.kind);
    return out;
}

raw_utterance child(std::string text, std::vector<context_turn> before = {}) {
    raw_utterance u;
    u.tokens = tokenize(text);
    u.preceding = std::move(before);
    return u;
}

} // namespace

TEST(Lexicon, StandardTable) {
    for (const char* w : {"ah", "awoh", "ay", "hey", "hmm", "huh", "ka", "ma", "mm", "mmhm", "oh", "oop", "oops", "ow",
                          "sh", "ssh", "uh", "uhhuh", "uhoh", "um", "whoops", "woo", "yum", "an", "s"}) {
        auto f = classify_token(token::make(w), lex());
        ASSERT_TRUE(f) << w;
        EXPECT_EQ(f->kind, flag_kind::non_accepted_item) << w;
    }
    for (const char* w : {"choo", "Moo", "Woof", "Bee"}) EXPECT_EQ(classify_token(token::make(w), lex())->kind, flag_kind::onomatopoeia);
    EXPECT_EQ(classify_token(token::make("a"), lex())->kind, flag_kind::schwa_candidate);
    EXPECT_EQ(classify_token(token::make("ta"), lex())->kind, flag_kind::ta_candidate);
    EXPECT_FALSE(classify_token(token::make("telephone"), lex()));
    EXPECT_FALSE(classify_token(token::make("xxx"), lex()));
    EXPECT_EQ(classify_token(token::make("Oh"), lex(), 4)->span, std::vector<ordno>{4});
}

TEST(Lexicon, ParseAndDisjointness) {
    auto l = non_accepted_lexicon::parse("# comment\n[non_accepted]\nOh\nuh  # trailing\n[onomatopoeia]\nmoo\n"
                                         "[context_sensitive]\na\n");
    EXPECT_EQ(l.items(), (std::set<std::string>{"oh", "uh"}));
    EXPECT_TRUE(l.is_onomatopoeia("moo"));
    EXPECT_THROW(non_accepted_lexicon::parse("oh\n"), lexicon_error);
    EXPECT_THROW(non_accepted_lexicon::parse("[weird]\n"), lexicon_error);
    EXPECT_THROW(non_accepted_lexicon::parse("[non_accepted]\nmoo\n[onomatopoeia]\nMoo\n"), lexicon_error);
    EXPECT_THROW(non_accepted_lexicon({"a"}, {}, {"a"}), lexicon_error);
}

TEST(Lexicon, ShippedFileMatchesStandard) {
    auto l = non_accepted_lexicon::parse(read_file(fixtures::data_dir() / "lexicon.txt"));
    const auto& s = non_accepted_lexicon::standard();
    EXPECT_EQ(l.items(), s.items());
    EXPECT_EQ(l.onomatopoeia(), s.onomatopoeia());
    EXPECT_EQ(l.context_sensitive(), s.context_sensitive());
}

TEST(Onomatopoeia, Stripped) {
    EXPECT_EQ(join_surfaces(strip_onomatopoeia(make_tokens({"cow", "moo", "big", "Woof"}), lex())), "cow big");
}

TEST(Duplication, Examples) {
    auto a = flag_duplication(make_tokens({"Look", "at", "in", "there"}));
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].drop, 3u);
    EXPECT_EQ(a[0].span, (std::vector<ordno>{2, 3}));
    EXPECT_NE(a[0].suggestion.find("look at there"), std::string::npos) << a[0].suggestion;

    auto b = flag_duplication(make_tokens({"one", "that", "screwdriver"}));
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].drop, 1u);

    auto c = flag_duplication(make_tokens({"get", "another", "one", "paper"}));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].drop, 3u);
    EXPECT_NE(c[0].suggestion.find("get another paper"), std::string::npos);
}

TEST(Duplication, NoFalseAlarms) {
    EXPECT_TRUE(flag_duplication(make_tokens({"put", "in", "there"})).empty());
    EXPECT_TRUE(flag_duplication(make_tokens({"telephone", "go", "right", "there"})).empty());
    EXPECT_TRUE(flag_duplication(make_tokens({"in", "xxx", "on"})).empty());
}

TEST(Duplication, MorHintsOverrideWordLists) {
    auto ts = make_tokens({"up", "down", "stairs"});
    EXPECT_TRUE(flag_duplication(ts).empty());
    EXPECT_EQ(flag_duplication(ts, {"prep", "prep", "n"}).size(), 1u);
    EXPECT_EQ(parse_mor_hints("v|put & ZERO prep|in adv:loc|there ."), (std::vector<std::string>{"v", "prep", "adv:loc"}));
}

TEST(Discourse, ItemsListsFarewells) {
    auto ok = flag_discourse_item(make_tokens({"ok", "put", "in"}));
    ASSERT_TRUE(ok);
    EXPECT_EQ(ok->kind, flag_kind::discourse_item);
    EXPECT_EQ(ok->arc, (dependency_arc{1, 2}));

    auto list = flag_discourse_item(make_tokens({"one", "two", "three"}));
    ASSERT_TRUE(list);
    EXPECT_EQ(list->kind, flag_kind::list_sequence);

    auto bye = flag_discourse_item(make_tokens({"bye", "bye", "mommy"}));
    ASSERT_TRUE(bye);
    EXPECT_EQ(bye->drop, 2u);

    EXPECT_FALSE(flag_discourse_item(make_tokens({"ok"})));
    EXPECT_FALSE(flag_discourse_item(make_tokens({"put", "in", "there"})));
}

TEST(Patterns, Flags) {
    EXPECT_EQ(kinds(flag_patterns(make_tokens({"me", "do", "it"}))), std::vector<flag_kind>{flag_kind::pronoun_case});
    EXPECT_EQ(kinds(flag_patterns(make_tokens({"my", "fix", "it"}), {"pro:poss:det", "v", "pro"})),
              std::vector<flag_kind>{flag_kind::pronoun_case});
    EXPECT_EQ(kinds(flag_patterns(make_tokens({"no", "play", "that"}))), std::vector<flag_kind>{flag_kind::missing_copula});
    EXPECT_EQ(kinds(flag_patterns(make_tokens({"that", "my", "pen"}))), std::vector<flag_kind>{flag_kind::missing_copula});
    EXPECT_EQ(kinds(flag_patterns(make_tokens({"wheels", "mine"}))), std::vector<flag_kind>{flag_kind::missing_copula});
    EXPECT_TRUE(flag_patterns(make_tokens({"that", "is", "my", "pen"})).empty());
    EXPECT_TRUE(flag_patterns(make_tokens({"put", "in", "there"})).empty());
}

TEST(Imitation, SubsetOfRecentAdultTurn) {
    auto u = child("the wire", {{"*MOT:", "look at the wire .", 3, {}}});
    auto f = flag_imitation(u);
    ASSERT_TRUE(f);
    EXPECT_EQ(f->span, (std::vector<ordno>{1, 2}));

    auto twice = child("wire wire", {{"*MOT:", "the wire .", 3, {}}});
    EXPECT_FALSE(flag_imitation(twice));

    std::vector<context_turn> far = {{"*MOT:", "the wire .", 1, {}},
                                     {"*PAT:", "a .", 2, {}},
                                     {"*MOT:", "b .", 3, {}},
                                     {"*PAT:", "c .", 4, {}}};
    EXPECT_FALSE(flag_imitation(child("wire", far)));
    EXPECT_TRUE(flag_imitation(child("wire", far), 4));
    EXPECT_THROW(flag_imitation(child("wire", far), 0), std::invalid_argument);
}

TEST(Imitation, UntranscribedMarkerOnPreviousTurn) {
    tier_line com{"%com:", "<aft> Untranscribed adult conversation", 5, 0};
    auto u = child("need it", {{"*PAT:", "oh the wire's gone ?", 4, {com}}});
    auto f = flag_imitation(u);
    ASSERT_TRUE(f);
    EXPECT_NE(f->suggestion.find("line 5"), std::string::npos);
    EXPECT_FALSE(flag_imitation(child("need it", {{"*PAT:", "hello", 4, {}}})));
}

TEST(Assess, PeterUtterances) {
    auto us = extract_child_utterances(parse_chat(read_file(fixtures::peter_transcript())));
    auto f0 = assess(us[0], lex());
    EXPECT_EQ(kinds(f0), std::vector<flag_kind>{flag_kind::imitation_candidate});
    // The last one ("put in there") follows only *MOT:/*CHI: turns without the marker.
    EXPECT_TRUE(assess(us[5], lex()).empty());
}

TEST(CriteriaProperty, DeterministicAndAdvisoryOnly) {
    std::mt19937_64 rng(53);
    for (int k = 0; k < 200; ++k) {
        auto doc = fixtures::random_document(rng);
        const auto before = doc;
        for (const auto& u : doc.utterances) {
            auto a = assess(u.tokens, lex());
            auto b = assess(u.tokens, lex());
            EXPECT_EQ(a, b);
            for (const auto& f : a) {
                EXPECT_FALSE(f.span.empty());
                for (auto p : f.span) {
                    EXPECT_GE(p, 1u);
                    EXPECT_LE(p, u.tokens.size());
                }
            }
        }
        EXPECT_EQ(doc, before);
    }
}
