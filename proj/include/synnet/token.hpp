#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace synnet {

enum class token_kind { word, untranscribed, null_marker };

inline std::string_view to_string(token_kind k) {
    switch (k) {
    case token_kind::word: return "word";
    case token_kind::untranscribed: return "untranscribed";
    case token_kind::null_marker: return "null_marker";
    }
    return "word";
}

/// ASCII case fold. Bytes outside ASCII pass through unchanged, so UTF-8
/// sequences are preserved.
inline std::string fold_case(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    });
    return out;
}

/// One transcribed item. `norm` is the word-type identity used for graph nodes.
struct token {
    std::string surface;
    std::string norm;
    token_kind kind = token_kind::word;

    static token make(std::string_view surface) {
        token t;
        t.surface = std::string(surface);
        t.norm = fold_case(surface);
        if (t.norm == "xxx" || t.norm == "yyy")
            t.kind = token_kind::untranscribed;
        else if (t.norm == "0")
            t.kind = token_kind::null_marker;
        return t;
    }

    bool is_word() const { return kind == token_kind::word; }

    friend bool operator==(const token&, const token&) = default;
};

/// Re-derives norm and kind from the surface form. Idempotent.
inline std::vector<token> normalize(const std::vector<token>& tokens) {
    std::vector<token> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(token::make(t.surface));
    return out;
}

inline std::vector<token> make_tokens(const std::vector<std::string>& surfaces) {
    std::vector<token> out;
    out.reserve(surfaces.size());
    for (const auto& s : surfaces) out.push_back(token::make(s));
    return out;
}

inline std::string join_surfaces(const std::vector<token>& tokens, std::string_view sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += sep;
        out += tokens[i].surface;
    }
    return out;
}

} // namespace synnet
