#pragma once

#include <synnet/token.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synnet {

/// 1-based token position inside an utterance (the DGA "ordno").
using ordno = std::uint32_t;

/// Arc from the dependent (complement side) to its head.
struct dependency_arc {
    ordno from = 0;
    ordno to = 0;

    friend auto operator<=>(const dependency_arc&, const dependency_arc&) = default;
};

using arc_set = std::set<dependency_arc>;

/// A connected group of tokens. Isolated words are size-1 structures.
struct structure {
    std::set<ordno> members;
    arc_set arcs;

    std::size_t size() const { return members.size(); }

    static structure single(ordno p) { return {{p}, {}}; }

    /// Members are taken to be the arc endpoints.
    static structure from_arcs(const arc_set& arcs) {
        structure s;
        s.arcs = arcs;
        for (const auto& a : arcs) {
            s.members.insert(a.from);
            s.members.insert(a.to);
        }
        return s;
    }

    friend bool operator==(const structure&, const structure&) = default;
};

enum class decision_status { accepted, rejected, isolated_words };

enum class decision_reason { onomatopoeia, untranscribed, imitation, unstructured, list_sequence,
                             attention_vocative, ambiguous, other };

inline std::string_view to_string(decision_status s) {
    switch (s) {
    case decision_status::accepted: return "accepted";
    case decision_status::rejected: return "rejected";
    case decision_status::isolated_words: return "isolated_words";
    }
    return "accepted";
}

inline std::string_view to_string(decision_reason r) {
    switch (r) {
    case decision_reason::onomatopoeia: return "onomatopoeia";
    case decision_reason::untranscribed: return "untranscribed";
    case decision_reason::imitation: return "imitation";
    case decision_reason::unstructured: return "unstructured";
    case decision_reason::list_sequence: return "list_sequence";
    case decision_reason::attention_vocative: return "attention_vocative";
    case decision_reason::ambiguous: return "ambiguous";
    case decision_reason::other: return "other";
    }
    return "other";
}

inline std::optional<decision_status> parse_status(std::string_view s) {
    for (auto v : {decision_status::accepted, decision_status::rejected, decision_status::isolated_words})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

inline std::optional<decision_reason> parse_reason(std::string_view s) {
    for (auto v : {decision_reason::onomatopoeia, decision_reason::untranscribed, decision_reason::imitation,
                   decision_reason::unstructured, decision_reason::list_sequence,
                   decision_reason::attention_vocative, decision_reason::ambiguous, decision_reason::other})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

struct annotation_decision {
    decision_status status = decision_status::accepted;
    std::optional<decision_reason> reason;
    std::string note;

    friend bool operator==(const annotation_decision&, const annotation_decision&) = default;
};

/// Tokens are stored in ordno order: tokens[i] has ordno i+1.
struct annotated_utterance {
    std::vector<token> tokens;
    std::vector<structure> structures;
    annotation_decision decision;
    /// Transcript line the utterance came from, when known.
    std::optional<std::size_t> source_line;

    friend bool operator==(const annotated_utterance&, const annotated_utterance&) = default;
};

struct annotated_document {
    std::string corpus_id;
    std::vector<annotated_utterance> utterances;

    friend bool operator==(const annotated_document&, const annotated_document&) = default;
};

struct violation {
    /// Index of the offending utterance, counting from 0.
    std::size_t utterance = 0;
    /// Short machine code, e.g. "self-loop", "multiple heads", "cycle".
    std::string code;
    std::string message;
};

class validation_error : public std::runtime_error {
public:
    explicit validation_error(std::vector<violation> vs)
        : std::runtime_error(summarize(vs)), violations_(std::move(vs)) {}

    const std::vector<violation>& violations() const { return violations_; }

private:
    static std::string summarize(const std::vector<violation>& vs) {
        std::string s = "invalid annotation:";
        for (const auto& v : vs) s += " [utterance " + std::to_string(v.utterance) + "] " + v.message + ";";
        return s;
    }

    std::vector<violation> violations_;
};

/// Checks that `arcs` form a rooted in-tree over `members`: arcs stay inside
/// the member set, no self-loops, one head per node, no cycles, exactly one
/// root. Returns violation codes (empty when the shape is valid).
inline std::vector<std::pair<std::string, std::string>> check_in_tree(const std::set<ordno>& members,
                                                                      const arc_set& arcs) {
    std::vector<std::pair<std::string, std::string>> out;
    auto pos = [](ordno p) { return std::to_string(p); };

    std::map<ordno, ordno> head;
    bool shape_ok = true;
    for (const auto& a : arcs) {
        if (a.from == a.to) {
            out.emplace_back("self-loop", "arc " + pos(a.from) + "->" + pos(a.to) + " is a self-loop");
            shape_ok = false;
            continue;
        }
        if (!members.count(a.from) || !members.count(a.to)) {
            out.emplace_back("arc outside structure",
                             "arc " + pos(a.from) + "->" + pos(a.to) + " leaves the structure");
            shape_ok = false;
            continue;
        }
        auto [it, fresh] = head.emplace(a.from, a.to);
        if (!fresh) {
            out.emplace_back("multiple heads", "token " + pos(a.from) + " has more than one head");
            shape_ok = false;
        }
    }
    if (!shape_ok) return out;

    // Walk up from every node; with single heads a revisit means a cycle.
    bool cyclic = false;
    for (auto m : members) {
        std::set<ordno> seen{m};
        auto cur = m;
        for (auto it = head.find(cur); it != head.end(); it = head.find(cur)) {
            cur = it->second;
            if (!seen.insert(cur).second) {
                cyclic = true;
                break;
            }
        }
        if (cyclic) break;
    }
    if (cyclic) {
        out.emplace_back("cycle", "arcs contain a cycle");
        return out;
    }

    std::size_t roots = 0;
    for (auto m : members)
        if (!head.count(m)) ++roots;
    if (roots != 1)
        out.emplace_back("disconnected", "structure has " + std::to_string(roots) + " roots, expected 1");
    return out;
}

/// Root (the member without an outgoing arc) of a valid structure.
inline ordno structure_root(const structure& s) {
    std::set<ordno> dependents;
    for (const auto& a : s.arcs) dependents.insert(a.from);
    for (auto m : s.members)
        if (!dependents.count(m)) return m;
    throw std::invalid_argument("structure has no root");
}

inline std::vector<violation> validate(const annotated_utterance& u, std::size_t index = 0) {
    std::vector<violation> out;
    auto add = [&](std::string code, std::string msg) { out.push_back({index, std::move(code), std::move(msg)}); };

    if (u.decision.status == decision_status::rejected && !u.decision.reason)
        add("missing reason", "rejected utterance needs a reason");

    const auto n = u.tokens.size();
    std::set<ordno> used;
    for (std::size_t si = 0; si < u.structures.size(); ++si) {
        const auto& s = u.structures[si];
        const std::string tag = "structure " + std::to_string(si + 1) + ": ";
        if (s.members.empty()) {
            add("empty structure", tag + "no members");
            continue;
        }
        bool in_range = true;
        for (auto m : s.members) {
            if (m < 1 || m > n) {
                add("member out of range", tag + "token " + std::to_string(m) + " does not exist");
                in_range = false;
                continue;
            }
            if (!u.tokens[m - 1].is_word())
                add("non-lexical member", tag + "token " + std::to_string(m) + " (" + u.tokens[m - 1].surface +
                                              ") is not a lexical item");
            if (!used.insert(m).second)
                add("overlapping structures", tag + "token " + std::to_string(m) + " is in two structures");
        }
        if (!in_range) continue;
        if (u.decision.status == decision_status::isolated_words && !s.arcs.empty())
            add("arcs in isolated_words", tag + "isolated-word utterances carry no arcs");
        for (auto& [code, msg] : check_in_tree(s.members, s.arcs)) add(code, tag + msg);
    }
    return out;
}

/// Empty iff every utterance satisfies the type invariants.
inline std::vector<violation> validate(const annotated_document& doc) {
    std::vector<violation> out;
    for (std::size_t i = 0; i < doc.utterances.size(); ++i) {
        auto vs = validate(doc.utterances[i], i);
        out.insert(out.end(), vs.begin(), vs.end());
    }
    return out;
}

/// Structures that count for size statistics and graph nodes. Rejected
/// utterances contribute nothing. An isolated_words utterance with no listed
/// structures contributes each of its lexical tokens as a size-1 structure.
inline std::vector<structure> contributing_structures(const annotated_utterance& u) {
    switch (u.decision.status) {
    case decision_status::rejected: return {};
    case decision_status::accepted: return u.structures;
    case decision_status::isolated_words:
        if (!u.structures.empty()) return u.structures;
        std::vector<structure> out;
        for (std::size_t i = 0; i < u.tokens.size(); ++i)
            if (u.tokens[i].is_word()) out.push_back(structure::single(static_cast<ordno>(i + 1)));
        return out;
    }
    return {};
}

} // namespace synnet
