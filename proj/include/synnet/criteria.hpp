#pragma once

// Advisory flags for the human annotator. Nothing here decides whether an
// utterance is accepted; every flag is a suggestion attached to token spans.

#include <synnet/annotation.hpp>
#include <synnet/chat.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synnet {

enum class flag_kind { non_accepted_item, onomatopoeia, imitation_candidate, duplication, discourse_item,
                       schwa_candidate, ta_candidate, list_sequence, pronoun_case, missing_copula };

inline std::string_view to_string(flag_kind k) {
    switch (k) {
    case flag_kind::non_accepted_item: return "non_accepted_item";
    case flag_kind::onomatopoeia: return "onomatopoeia";
    case flag_kind::imitation_candidate: return "imitation_candidate";
    case flag_kind::duplication: return "duplication";
    case flag_kind::discourse_item: return "discourse_item";
    case flag_kind::schwa_candidate: return "schwa_candidate";
    case flag_kind::ta_candidate: return "ta_candidate";
    case flag_kind::list_sequence: return "list_sequence";
    case flag_kind::pronoun_case: return "pronoun_case";
    case flag_kind::missing_copula: return "missing_copula";
    }
    return "non_accepted_item";
}

struct advisory_flag {
    flag_kind kind;
    /// 1-based token positions, ascending.
    std::vector<ordno> span;
    std::string suggestion;
    /// Token suggested to stay out of the structure (duplication).
    std::optional<ordno> drop;
    /// Arc suggested for the structure (discourse items).
    std::optional<dependency_arc> arc;

    friend bool operator==(const advisory_flag&, const advisory_flag&) = default;
};

class lexicon_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Word lists for non-accepted items. The three sets are pairwise disjoint.
class non_accepted_lexicon {
public:
    non_accepted_lexicon(std::set<std::string> items, std::set<std::string> onomatopoeia,
                         std::set<std::string> context_sensitive)
        : items_(fold(items)), onomatopoeia_(fold(onomatopoeia)), context_sensitive_(fold(context_sensitive)) {
        check_disjoint(items_, onomatopoeia_, "non_accepted", "onomatopoeia");
        check_disjoint(items_, context_sensitive_, "non_accepted", "context_sensitive");
        check_disjoint(onomatopoeia_, context_sensitive_, "onomatopoeia", "context_sensitive");
    }

    /// The published list of non-accepted elements and onomatopoeia. "a",
    /// "an", "s" and "ta" are rejected only in some contexts.
    static non_accepted_lexicon standard() {
        return {{"ah", "awoh", "ay", "hey", "hmm", "huh", "ka", "ma", "mm", "mmhm", "oh", "oop", "oops", "ow",
                 "sh", "ssh", "uh", "uhhuh", "uhoh", "um", "whoops", "woo", "yum"},
                {"choo", "moo", "woof", "bee"},
                {"a", "an", "s", "ta"}};
    }

    /// Plain text, one item per line under [non_accepted], [onomatopoeia] and
    /// [context_sensitive] section headers. '#' starts a comment.
    static non_accepted_lexicon parse(std::string_view text) {
        std::set<std::string> sets[3];
        int current = -1;
        std::size_t line_no = 0;
        for (auto raw : detail::split_lines(text)) {
            ++line_no;
            auto line = raw.substr(0, raw.find('#'));
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line == "[non_accepted]") current = 0;
                else if (line == "[onomatopoeia]") current = 1;
                else if (line == "[context_sensitive]") current = 2;
                else throw lexicon_error("lexicon line " + std::to_string(line_no) + ": unknown section " +
                                         std::string(line));
                continue;
            }
            if (current < 0)
                throw lexicon_error("lexicon line " + std::to_string(line_no) + ": item outside a section");
            std::istringstream words{std::string(line)};
            for (std::string w; words >> w;) sets[current].insert(w);
        }
        return {sets[0], sets[1], sets[2]};
    }

    const std::set<std::string>& items() const { return items_; }
    const std::set<std::string>& onomatopoeia() const { return onomatopoeia_; }
    const std::set<std::string>& context_sensitive() const { return context_sensitive_; }

    bool is_onomatopoeia(const std::string& norm) const { return onomatopoeia_.count(norm) > 0; }

private:
    static std::set<std::string> fold(const std::set<std::string>& in) {
        std::set<std::string> out;
        for (const auto& s : in) out.insert(fold_case(s));
        return out;
    }

    static void check_disjoint(const std::set<std::string>& a, const std::set<std::string>& b, const char* an,
                               const char* bn) {
        for (const auto& x : a)
            if (b.count(x)) throw lexicon_error("'" + x + "' is listed in both " + an + " and " + bn);
    }

    std::set<std::string> items_;
    std::set<std::string> onomatopoeia_;
    std::set<std::string> context_sensitive_;
};

inline std::optional<advisory_flag> classify_token(const token& t, const non_accepted_lexicon& lex, ordno position = 1) {
    if (!t.is_word()) return std::nullopt;
    const auto& w = t.norm;
    if (lex.context_sensitive().count(w)) {
        if (w == "a")
            return advisory_flag{flag_kind::schwa_candidate, {position},
                                 "schwa: filler syllable, or a proto-functional determiner/pronoun; decide from context",
                                 {}, {}};
        if (w == "ta")
            return advisory_flag{flag_kind::ta_candidate, {position},
                                 "'ta': treat as the preposition 'to' where it sits in a preposition slot", {}, {}};
        return advisory_flag{flag_kind::non_accepted_item, {position},
                             "'" + t.surface + "' is rejected only in some contexts; decide from context", {}, {}};
    }
    if (lex.items().count(w))
        return advisory_flag{flag_kind::non_accepted_item, {position},
                             "'" + t.surface + "' is not accepted as a lexical item", {}, {}};
    if (lex.onomatopoeia().count(w))
        return advisory_flag{flag_kind::onomatopoeia, {position},
                             "onomatopoeia: treat as nonexistent when its lexical item is present", {}, {}};
    return std::nullopt;
}

/// Removes every onomatopoeia token, keeping the rest in order.
inline std::vector<token> strip_onomatopoeia(const std::vector<token>& tokens, const non_accepted_lexicon& lex) {
    std::vector<token> out;
    for (const auto& t : tokens)
        if (!(t.is_word() && lex.is_onomatopoeia(t.norm))) out.push_back(t);
    return out;
}

// Imitation.

inline constexpr std::string_view untranscribed_marker = "untranscribed adult conversation";

namespace detail {

inline std::map<std::string, int> word_multiset(const std::vector<token>& ts) {
    std::map<std::string, int> m;
    for (const auto& t : ts)
        if (t.is_word()) ++m[t.norm];
    return m;
}

inline bool multiset_subset(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
    for (const auto& [w, n] : a) {
        auto it = b.find(w);
        if (it == b.end() || it->second < n) return false;
    }
    return true;
}

inline std::vector<ordno> all_positions(std::size_t n) {
    std::vector<ordno> v;
    for (std::size_t i = 1; i <= n; ++i) v.push_back(static_cast<ordno>(i));
    return v;
}

} // namespace detail

/// Flags an utterance whose words all occur in one of the last `window`
/// adult turns, or which directly follows a turn annotated with an
/// untranscribed adult conversation.
inline std::optional<advisory_flag> flag_imitation(const raw_utterance& u, std::size_t window = 3,
                                                   const strip_set& strip = {}) {
    if (window < 1) throw std::invalid_argument("imitation window must be at least 1");
    const auto child = detail::word_multiset(u.tokens);
    if (child.empty()) return std::nullopt;
    const auto span = detail::all_positions(u.tokens.size());

    std::size_t seen = 0;
    for (auto it = u.preceding.rbegin(); it != u.preceding.rend() && seen < window; ++it) {
        if (it->code == u.speaker) continue;
        ++seen;
        if (detail::multiset_subset(child, detail::word_multiset(tokenize(it->text, strip))))
            return advisory_flag{flag_kind::imitation_candidate, span,
                                 "every word also occurs in " + it->code + " line " + std::to_string(it->line_no) +
                                     " (\"" + it->text + "\"); possible imitation",
                                 {}, {}};
    }
    if (!u.preceding.empty()) {
        const auto& last = u.preceding.back();
        for (const auto& d : last.dependents)
            if (detail::contains_ci(d.text, untranscribed_marker))
                return advisory_flag{flag_kind::imitation_candidate, span,
                                     "produced right after an untranscribed adult conversation (" + d.code +
                                         " line " + std::to_string(d.line_no) + "); possible imitation",
                                     {}, {}};
    }
    return std::nullopt;
}

// Part-of-speech hints.

/// POS tags of a %mor tier, one per word ("v|go" gives "v"). Items without
/// '|' (punctuation, stray fragments) are skipped.
inline std::vector<std::string> parse_mor_hints(std::string_view mor) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(mor, strip_set(""))) {
        auto bar = t.surface.find('|');
        if (bar == std::string::npos) continue;
        out.push_back(t.surface.substr(0, bar));
    }
    return out;
}

namespace detail {

enum class word_class { other, preposition, determiner, demonstrative, quantifier, verb };

inline word_class class_from_hint(std::string_view tag) {
    if (tag == "prep") return word_class::preposition;
    if (tag == "pro:dem" || tag == "det:dem") return word_class::demonstrative;
    if (tag == "qn" || tag == "quant" || tag == "det:num" || tag == "num") return word_class::quantifier;
    if (tag.substr(0, 3) == "det" || tag.find(":det") != std::string_view::npos) return word_class::determiner;
    if (tag == "v" || tag.substr(0, 2) == "v:" || tag == "cop" || tag == "aux" || tag == "part") return word_class::verb;
    return word_class::other;
}

inline word_class class_from_word(const std::string& w) {
    static const std::set<std::string> preps = {
        "about", "above", "across", "after", "against", "along", "among", "around", "at", "before",
        "behind", "below", "beneath", "beside", "between", "by", "during", "for", "from", "in", "inside",
        "into", "near", "of", "off", "on", "onto", "outside", "over", "through", "to", "toward", "towards",
        "under", "underneath", "upon", "with", "within", "without"};
    static const std::set<std::string> dets = {"the", "a", "an", "my", "your", "his", "her", "its",
                                               "our", "their", "another", "every", "each"};
    static const std::set<std::string> dems = {"this", "that", "these", "those"};
    static const std::set<std::string> quants = {"one", "two", "three", "four", "five", "some", "any",
                                                 "all", "many", "much", "few", "several", "both"};
    if (preps.count(w)) return word_class::preposition;
    if (dets.count(w)) return word_class::determiner;
    if (dems.count(w)) return word_class::demonstrative;
    if (quants.count(w)) return word_class::quantifier;
    return word_class::other;
}

inline std::vector<word_class> classes(const std::vector<token>& tokens, const std::vector<std::string>& hints) {
    std::vector<word_class> out;
    const bool use_hints = hints.size() == tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto c = use_hints ? class_from_hint(hints[i]) : word_class::other;
        if (c == word_class::other) c = class_from_word(tokens[i].norm);
        out.push_back(c);
    }
    return out;
}

inline std::string words_except(const std::vector<token>& tokens, std::size_t skip) {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i == skip || !tokens[i].is_word()) continue;
        if (!s.empty()) s += ' ';
        s += tokens[i].norm;
    }
    return s;
}

} // namespace detail

/// Adjacent functional words of the same role: preposition + preposition,
/// determiner + determiner, or determiner and quantifier in either order.
/// `hints` are %mor tags aligned with `tokens`; ignored when the counts differ.
inline std::vector<advisory_flag> flag_duplication(const std::vector<token>& tokens,
                                                   const std::vector<std::string>& hints = {}) {
    using detail::word_class;
    std::vector<advisory_flag> out;
    const auto cls = detail::classes(tokens, hints);
    auto is_det = [](word_class c) { return c == word_class::determiner || c == word_class::demonstrative; };
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (!tokens[i].is_word() || !tokens[i + 1].is_word()) continue;
        const auto a = cls[i], b = cls[i + 1];
        std::optional<std::size_t> drop;
        if (a == word_class::preposition && b == word_class::preposition) drop = i + 1;
        else if (a == word_class::determiner && b == word_class::determiner) drop = i + 1;
        else if (is_det(a) && b == word_class::quantifier) drop = i + 1;
        else if (a == word_class::quantifier && is_det(b)) drop = i;
        if (!drop) continue;
        const auto keep = *drop == i ? i + 1 : i;
        advisory_flag f{flag_kind::duplication,
                        {static_cast<ordno>(i + 1), static_cast<ordno>(i + 2)},
                        "duplicated functional word: keep '" + tokens[keep].surface + "', treat '" +
                            tokens[*drop].surface + "' as an independent lexical item: " +
                            detail::words_except(tokens, *drop),
                        static_cast<ordno>(*drop + 1),
                        {}};
        out.push_back(std::move(f));
        ++i;
    }
    return out;
}

// Discourse items and lists.

struct discourse_config {
    std::set<std::string> items = {"hello", "hi", "ok", "okay", "bye", "goodbye", "thanks", "yes", "yeah"};
    std::set<std::string> farewells = {"bye", "goodbye", "byebye", "bye-bye"};
};

namespace detail {

inline bool is_numeral(const std::string& w) {
    static const std::set<std::string> names = {"one",    "two",     "three",    "four",    "five",
                                                "six",    "seven",   "eight",    "nine",    "ten",
                                                "eleven", "twelve",  "thirteen", "fourteen", "fifteen",
                                                "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
    if (names.count(w)) return true;
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

} // namespace detail

/// Lists of numerals, farewell sequences, and utterance-initial discourse
/// items such as "ok" or "hello".
inline std::optional<advisory_flag> flag_discourse_item(const std::vector<token>& tokens,
                                                        const discourse_config& cfg = {}) {
    std::vector<ordno> words;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i].is_word()) words.push_back(static_cast<ordno>(i + 1));
    if (words.empty()) return std::nullopt;
    auto norm = [&](ordno p) -> const std::string& { return tokens[p - 1].norm; };

    if (words.size() >= 2 && std::all_of(words.begin(), words.end(), [&](ordno p) { return detail::is_numeral(norm(p)); }))
        return advisory_flag{flag_kind::list_sequence, words, "produced as a list: no structure", {}, {}};

    for (std::size_t k = 1; k < words.size(); ++k) {
        const auto p = words[k];
        if (!cfg.farewells.count(norm(p))) continue;
        return advisory_flag{flag_kind::discourse_item, {p},
                             "'" + tokens[p - 1].surface +
                                 "' sits among farewell expressions: pragmatic use, keep it out of any structure",
                             p, {}};
    }

    if (words.size() >= 2 && cfg.items.count(norm(words[0]))) {
        const auto from = words[0], to = words[1];
        return advisory_flag{flag_kind::discourse_item, {from},
                             "non-structural item: link '" + tokens[from - 1].surface + "' to '" +
                                 tokens[to - 1].surface + "', the first element of the following sentence",
                             {}, dependency_arc{from, to}};
    }
    return std::nullopt;
}

/// Pronoun-case errors, a missing "to be", and "no" standing in for "don't".
/// These only point at the pattern; acceptance stays with the annotator.
inline std::vector<advisory_flag> flag_patterns(const std::vector<token>& tokens,
                                                const std::vector<std::string>& hints = {}) {
    std::vector<advisory_flag> out;
    std::vector<std::size_t> words;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i].is_word()) words.push_back(i);
    if (words.size() < 2) return out;
    const bool use_hints = hints.size() == tokens.size();
    auto w = [&](std::size_t k) -> const std::string& { return tokens[words[k]].norm; };
    auto pos = [&](std::size_t k) { return static_cast<ordno>(words[k] + 1); };
    auto verb_hint = [&](std::size_t k) {
        return use_hints && detail::class_from_hint(hints[words[k]]) == detail::word_class::verb;
    };

    static const std::set<std::string> object_pronouns = {"me", "him", "them", "us"};
    if (object_pronouns.count(w(0)) || (w(0) == "my" && verb_hint(1)))
        out.push_back({flag_kind::pronoun_case, {pos(0), pos(1)},
                       "pronoun in subject position with the wrong case (e.g. 'my fix it' for 'I fix it'); "
                       "counts as structured",
                       {}, {}});

    if (w(0) == "no")
        out.push_back({flag_kind::missing_copula, {pos(0), pos(1)},
                       "'no' may stand for \"don't\": negation as a member of the structure, unless context reads "
                       "it as 'No, ...'",
                       {}, {}});

    static const std::set<std::string> be_forms = {"is", "are", "am", "was", "were", "be", "been", "being"};
    static const std::set<std::string> subjects = {"that", "this", "it", "there", "here", "i", "you",
                                                   "he",   "she",  "we", "they"};
    static const std::set<std::string> predicates = {"mine", "yours", "hers", "ours", "theirs", "my", "your",
                                                     "a",    "the",   "his",  "her"};
    bool has_be = false;
    for (std::size_t k = 0; k < words.size(); ++k) {
        const auto& x = w(k);
        if (be_forms.count(x) || x.find('\'') != std::string::npos) has_be = true;
    }
    if (!has_be && w(0) != "no") {
        const bool ing = w(1).size() > 4 && w(1).substr(w(1).size() - 3) == "ing";
        const bool possessive_predicate = std::any_of(words.begin() + 1, words.end(), [&](std::size_t i) {
            const auto& x = tokens[i].norm;
            return x == "mine" || x == "yours" || x == "hers" || x == "ours" || x == "theirs";
        });
        if ((subjects.count(w(0)) && (predicates.count(w(1)) || ing)) || possessive_predicate)
            out.push_back({flag_kind::missing_copula, {pos(0), pos(1)},
                           "predication without 'to be' (e.g. 'wheels mine', 'that my pen'); treat as structured",
                           {}, {}});
    }
    return out;
}

/// Every flag for one utterance, in a fixed order: per-token items,
/// duplication, discourse/list, patterns.
inline std::vector<advisory_flag> assess(const std::vector<token>& tokens, const non_accepted_lexicon& lex,
                                         const std::vector<std::string>& hints = {},
                                         const discourse_config& dcfg = {}) {
    std::vector<advisory_flag> out;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (auto f = classify_token(tokens[i], lex, static_cast<ordno>(i + 1))) out.push_back(std::move(*f));
    for (auto& f : flag_duplication(tokens, hints)) out.push_back(std::move(f));
    if (auto f = flag_discourse_item(tokens, dcfg)) out.push_back(std::move(*f));
    for (auto& f : flag_patterns(tokens, hints)) out.push_back(std::move(f));
    return out;
}

/// assess() plus the imitation check, with %mor hints taken from the utterance.
inline std::vector<advisory_flag> assess(const raw_utterance& u, const non_accepted_lexicon& lex,
                                         std::size_t imitation_window = 3, const strip_set& strip = {}) {
    std::vector<std::string> hints;
    if (const auto* mor = u.dependent("%mor:")) hints = parse_mor_hints(mor->text);
    auto out = assess(u.tokens, lex, hints);
    if (auto f = flag_imitation(u, imitation_window, strip)) out.push_back(std::move(*f));
    return out;
}

inline nlohmann::json flag_to_json(const advisory_flag& f) {
    nlohmann::json j = {{"kind", to_string(f.kind)}, {"span", f.span}, {"suggestion", f.suggestion}};
    j["drop"] = f.drop ? nlohmann::json(*f.drop) : nlohmann::json(nullptr);
    j["arc"] = f.arc ? nlohmann::json({{"dependent", f.arc->from}, {"head", f.arc->to}}) : nlohmann::json(nullptr);
    return j;
}

} // namespace synnet
