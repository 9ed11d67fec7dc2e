#pragma once

#include <synnet/synnet.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace synnet;

inline std::filesystem::path data_dir() { return SYNNET_DATA_DIR; }
inline std::filesystem::path peter_transcript() { return data_dir() / "peter07" / "peter07.cha"; }
inline std::filesystem::path peter_annotation() { return data_dir() / "peter07" / "peter07.xml"; }

inline annotated_document peter_document() {
    auto doc = read_dga_xml(read_file(peter_annotation()));
    return doc;
}

inline std::vector<std::string> words(const std::vector<token>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(t.norm);
    return out;
}

// A random in-tree on positions 1..n: each node of a shuffled order picks a
// head among the nodes before it.
inline arc_set random_in_tree(std::mt19937_64& rng, std::size_t n) {
    std::vector<ordno> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<ordno>(i + 1);
    std::shuffle(order.begin(), order.end(), rng);
    arc_set arcs;
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        arcs.insert({order[i], order[pick(rng)]});
    }
    return arcs;
}

// A random head/complement tree over positions [lo, hi], n-ary.
inline constituency_node random_tree(std::mt19937_64& rng, ordno lo, ordno hi) {
    if (lo == hi) return constituency_node::leaf(lo);
    const std::size_t span = hi - lo + 1;
    std::uniform_int_distribution<std::size_t> kids_d(2, std::min<std::size_t>(span, 4));
    const auto kids = kids_d(rng);
    // Choose kids-1 distinct cut points inside the span.
    std::vector<ordno> cuts;
    for (ordno p = lo + 1; p <= hi; ++p) cuts.push_back(p);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(kids - 1);
    std::sort(cuts.begin(), cuts.end());
    std::vector<constituency_node> children;
    ordno start = lo;
    for (auto c : cuts) {
        children.push_back(random_tree(rng, start, c - 1));
        start = c;
    }
    children.push_back(random_tree(rng, start, hi));
    std::uniform_int_distribution<std::size_t> head_d(0, children.size() - 1);
    return constituency_node::phrase(std::move(children), head_d(rng));
}

// A random valid annotated document. Words come from a small vocabulary so
// documents share word types; some utterances carry xxx or are rejected.
inline annotated_document random_document(std::mt19937_64& rng, std::size_t max_utterances = 6) {
    static const std::vector<std::string> vocab = {"telephone", "go", "right", "there", "need", "it",  "my",
                                                   "put",       "in", "that",  "look",  "at",   "Wire", "ok",
                                                   "pete's",    "na\xC3\xAFve", "a&b", "<x>"};
    std::uniform_int_distribution<std::size_t> n_utt(0, max_utterances);
    std::uniform_int_distribution<std::size_t> n_tok(1, 8);
    std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
    std::uniform_real_distribution<double> u(0, 1);

    annotated_document doc;
    doc.corpus_id = u(rng) < 0.2 ? "" : "c" + std::to_string(rng() % 100);
    const auto count = n_utt(rng);
    for (std::size_t k = 0; k < count; ++k) {
        annotated_utterance a;
        const auto n = n_tok(rng);
        for (std::size_t i = 0; i < n; ++i) {
            double r = u(rng);
            a.tokens.push_back(token::make(r < 0.1 ? "xxx" : r < 0.12 ? "yyy" : vocab[word(rng)]));
        }
        if (u(rng) < 0.5) a.source_line = static_cast<std::size_t>(rng() % 500 + 1);

        std::vector<ordno> lexical;
        for (std::size_t i = 0; i < n; ++i)
            if (a.tokens[i].is_word()) lexical.push_back(static_cast<ordno>(i + 1));

        const double mode = u(rng);
        if (mode < 0.15) {
            a.decision = {decision_status::rejected,
                          static_cast<decision_reason>(rng() % 8), u(rng) < 0.5 ? "" : "note \"quoted\" & more"};
        } else if (mode < 0.25) {
            a.decision = {decision_status::isolated_words, std::nullopt, ""};
            for (auto p : lexical)
                if (u(rng) < 0.5) a.structures.push_back(structure::single(p));
        } else {
            // Partition a shuffled subset of lexical positions into in-trees.
            std::shuffle(lexical.begin(), lexical.end(), rng);
            std::size_t i = 0;
            while (i < lexical.size()) {
                std::uniform_int_distribution<std::size_t> len_d(1, lexical.size() - i);
                const auto len = len_d(rng);
                std::vector<ordno> part(lexical.begin() + i, lexical.begin() + i + len);
                i += len;
                if (u(rng) < 0.2) continue;
                structure s;
                s.members.insert(part.begin(), part.end());
                for (std::size_t j = 1; j < part.size(); ++j) {
                    std::uniform_int_distribution<std::size_t> pick(0, j - 1);
                    s.arcs.insert({part[j], part[pick(rng)]});
                }
                a.structures.push_back(std::move(s));
            }
        }
        canonicalize(a);
        doc.utterances.push_back(std::move(a));
    }
    return doc;
}

} // namespace fixtures
