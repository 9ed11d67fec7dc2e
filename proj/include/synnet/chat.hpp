#pragma once

// Reading CHAT-style transcripts and pulling out one speaker's main-tier lines.

#include <synnet/age.hpp>
#include <synnet/token.hpp>

#include <json.hpp>

#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synnet {

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

inline std::size_t utf8_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xE) return 3;
    if ((lead >> 3) == 0x1E) return 4;
    return 1;
}

inline bool contains_ci(std::string_view hay, std::string_view needle) {
    return fold_case(hay).find(fold_case(needle)) != std::string::npos;
}

} // namespace detail

inline bool is_speaker_code(std::string_view code) {
    if (code.size() != 5 || code[0] != '*' || code[4] != ':') return false;
    for (std::size_t i = 1; i < 4; ++i)
        if (code[i] < 'A' || code[i] > 'Z') return false;
    return true;
}

inline bool is_dependent_code(std::string_view code) {
    if (code.size() < 3 || code.front() != '%' || code.back() != ':') return false;
    for (std::size_t i = 1; i + 1 < code.size(); ++i)
        if (code[i] < 'a' || code[i] > 'z') return false;
    return true;
}

/// Set of characters removed from main-tier text before tokenizing. Members
/// are UTF-8 encoded code points.
class strip_set {
public:
    static constexpr std::string_view default_chars = ".,;:!?<>\xC2\xBF*";

    strip_set() : strip_set(default_chars) {}

    explicit strip_set(std::string_view chars) {
        while (!chars.empty()) {
            auto n = std::min(detail::utf8_length(static_cast<unsigned char>(chars.front())), chars.size());
            std::string cp(chars.substr(0, n));
            if (std::find(chars_.begin(), chars_.end(), cp) == chars_.end()) chars_.push_back(cp);
            chars.remove_prefix(n);
        }
    }

    const std::vector<std::string>& chars() const { return chars_; }

    bool contains_any(std::string_view s) const {
        for (const auto& c : chars_)
            if (s.find(c) != std::string_view::npos) return true;
        return false;
    }

    /// Replaces every stripped code point with a space.
    std::string apply(std::string_view text) const {
        std::string out;
        out.reserve(text.size());
        while (!text.empty()) {
            auto n = std::min(detail::utf8_length(static_cast<unsigned char>(text.front())), text.size());
            auto cp = text.substr(0, n);
            bool hit = std::find(chars_.begin(), chars_.end(), cp) != chars_.end();
            if (hit) out += ' ';
            else out.append(cp);
            text.remove_prefix(n);
        }
        return out;
    }

private:
    std::vector<std::string> chars_;
};

/// Strips punctuation and splits on whitespace.
inline std::vector<token> tokenize(std::string_view text, const strip_set& strip = {}) {
    std::vector<token> out;
    auto cleaned = strip.apply(text);
    std::string_view rest = cleaned;
    while (true) {
        while (!rest.empty() && detail::is_space(rest.front())) rest.remove_prefix(1);
        if (rest.empty()) break;
        std::size_t n = 0;
        while (n < rest.size() && !detail::is_space(rest[n])) ++n;
        out.push_back(token::make(rest.substr(0, n)));
        rest.remove_prefix(n);
    }
    return out;
}

struct tier_line {
    std::string code;
    std::string text;
    std::size_t line_no = 1;
    /// Index in transcript::entries of the owning speaker line (dependents only).
    std::optional<std::size_t> parent;

    bool is_speaker() const { return !code.empty() && code.front() == '*'; }
};

enum class diagnostic_kind { malformed_code, orphan_dependent, orphan_continuation, unrecognized_line };

inline std::string_view to_string(diagnostic_kind k) {
    switch (k) {
    case diagnostic_kind::malformed_code: return "malformed_code";
    case diagnostic_kind::orphan_dependent: return "orphan_dependent";
    case diagnostic_kind::orphan_continuation: return "orphan_continuation";
    case diagnostic_kind::unrecognized_line: return "unrecognized_line";
    }
    return "unrecognized_line";
}

struct diagnostic {
    diagnostic_kind kind;
    std::size_t line_no;
    std::string message;
};

struct transcript {
    std::vector<tier_line> entries;
    std::string corpus_id;
    std::optional<age> child_age;
    std::vector<diagnostic> diagnostics;
};

/// Classifies every line. Continuation lines (leading whitespace) are merged
/// into the preceding tier line. Malformed codes, orphan dependents and
/// unrecognized lines are skipped and reported in `diagnostics`. Header lines
/// (starting with '@') are ignored.
inline transcript parse_chat(std::string_view text, std::string corpus_id = {}) {
    transcript t;
    t.corpus_id = std::move(corpus_id);
    std::optional<std::size_t> last_speaker;
    bool last_kept = false;

    auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        std::string_view line = lines[i];
        if (detail::trim(line).empty()) continue;

        if (detail::is_space(line.front())) {
            if (last_kept) {
                auto& prev = t.entries.back().text;
                auto extra = detail::trim(line);
                if (!prev.empty()) prev += ' ';
                prev.append(extra);
            } else {
                t.diagnostics.push_back({diagnostic_kind::orphan_continuation, line_no,
                                         "continuation line without a preceding tier line"});
            }
            continue;
        }
        if (line.front() == '@') {
            constexpr std::string_view age_header = "@Age of CHI:";
            if (line.substr(0, age_header.size()) == age_header && !t.child_age) {
                auto v = detail::trim(line.substr(age_header.size()));
                if (!v.empty() && v.back() == '.') v.remove_suffix(1);
                t.child_age = age::parse(v);
            }
            last_kept = false;
            continue;
        }
        if (line.front() != '*' && line.front() != '%') {
            t.diagnostics.push_back({diagnostic_kind::unrecognized_line, line_no,
                                     "unrecognized line: " + std::string(detail::trim(line))});
            last_kept = false;
            continue;
        }

        auto colon = line.find(':');
        std::string_view code = colon == std::string_view::npos ? line : line.substr(0, colon + 1);
        std::string_view rest = colon == std::string_view::npos ? std::string_view{} : line.substr(colon + 1);
        bool speaker = line.front() == '*';
        bool well_formed = speaker ? is_speaker_code(code) : is_dependent_code(code);
        if (well_formed && !rest.empty() && !detail::is_space(rest.front())) well_formed = false;
        if (!well_formed) {
            t.diagnostics.push_back({diagnostic_kind::malformed_code, line_no,
                                     "malformed tier code: " + std::string(code.substr(0, 16))});
            last_kept = false;
            continue;
        }

        tier_line tl{std::string(code), std::string(detail::trim(rest)), line_no, std::nullopt};
        if (speaker) {
            last_speaker = t.entries.size();
        } else {
            if (!last_speaker) {
                t.diagnostics.push_back({diagnostic_kind::orphan_dependent, line_no,
                                         "dependent tier " + tl.code + " before any speaker line"});
                last_kept = false;
                continue;
            }
            tl.parent = last_speaker;
        }
        t.entries.push_back(std::move(tl));
        last_kept = true;
    }
    return t;
}

/// A speaker turn seen around an extracted utterance, with its dependent tiers.
struct context_turn {
    std::string code;
    std::string text;
    std::size_t line_no = 1;
    std::vector<tier_line> dependents;
};

struct raw_utterance {
    std::vector<token> tokens;
    std::string corpus_id;
    std::string speaker = "*CHI:";
    std::size_t line_no = 1;
    /// Speaker turns before this one, nearest last.
    std::vector<context_turn> preceding;
    /// Speaker turns after this one, nearest first.
    std::vector<context_turn> following;
    /// Dependent tiers (%mor, %act, ...) of this line.
    std::vector<tier_line> dependents;

    /// True for the CHAT "0" line (nothing said).
    bool is_null() const {
        return tokens.size() == 1 && tokens.front().kind == token_kind::null_marker;
    }

    std::string text() const { return join_surfaces(tokens); }

    const tier_line* dependent(std::string_view code) const {
        for (const auto& d : dependents)
            if (d.code == code) return &d;
        return nullptr;
    }
};

struct extract_options {
    std::string speaker = "*CHI:";
    strip_set strip;
    /// Speaker turns kept on each side as context.
    std::size_t context_window = 3;
};

inline std::vector<raw_utterance> extract_child_utterances(const transcript& t, const extract_options& opt = {}) {
    if (!is_speaker_code(opt.speaker))
        throw std::invalid_argument("invalid speaker code: " + opt.speaker);

    std::vector<context_turn> turns;
    for (const auto& e : t.entries) {
        if (e.is_speaker()) turns.push_back({e.code, e.text, e.line_no, {}});
        else if (!turns.empty()) turns.back().dependents.push_back(e);
    }

    std::vector<raw_utterance> out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (turns[i].code != opt.speaker) continue;
        raw_utterance u;
        u.tokens = tokenize(turns[i].text, opt.strip);
        u.corpus_id = t.corpus_id;
        u.speaker = opt.speaker;
        u.line_no = turns[i].line_no;
        u.dependents = turns[i].dependents;
        std::size_t lo = i > opt.context_window ? i - opt.context_window : 0;
        for (std::size_t j = lo; j < i; ++j) u.preceding.push_back(turns[j]);
        for (std::size_t j = i + 1; j < turns.size() && j <= i + opt.context_window; ++j)
            u.following.push_back(turns[j]);
        out.push_back(std::move(u));
    }
    return out;
}

inline std::vector<token> normalize(const raw_utterance& u) { return normalize(u.tokens); }

inline nlohmann::json utterances_to_json(const std::vector<raw_utterance>& us) {
    auto arr = nlohmann::json::array();
    for (const auto& u : us) {
        auto toks = nlohmann::json::array();
        for (const auto& t : u.tokens) toks.push_back(t.surface);
        arr.push_back({{"corpus", u.corpus_id}, {"line_no", u.line_no}, {"tokens", toks}});
    }
    return arr;
}

} // namespace synnet
