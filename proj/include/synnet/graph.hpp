#pragma once

// Word-type graphs accumulated from annotated documents. Nodes are case-folded
// word forms; each distinct link appears once no matter how often it occurs.

#include <synnet/annotation.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace synnet {

using word_edge = std::pair<std::string, std::string>;

struct edge_source {
    std::string corpus;
    /// Utterance index within its document, counting from 0.
    std::size_t utterance = 0;
    std::optional<std::size_t> line;

    friend bool operator==(const edge_source&, const edge_source&) = default;
};

/// Arc whose endpoints fold to the same word type. Dropped at build time.
struct dropped_self_loop {
    std::string word;
    edge_source source;
};

struct syntax_graph {
    std::set<std::string> nodes;
    /// Directed graphs hold (dependent, head) pairs. Undirected graphs hold
    /// each link once with first < second.
    std::set<word_edge> edges;
    /// First occurrence of every edge.
    std::map<word_edge, edge_source> provenance;
    bool directed = true;
    std::vector<dropped_self_loop> dropped;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }

    bool has_edge(const std::string& a, const std::string& b) const {
        if (directed) return edges.count({a, b}) > 0;
        return edges.count(a < b ? word_edge{a, b} : word_edge{b, a}) > 0;
    }
};

/// Graph equality ignores provenance and the drop log.
inline bool same_shape(const syntax_graph& a, const syntax_graph& b) {
    return a.directed == b.directed && a.nodes == b.nodes && a.edges == b.edges;
}

/// Adds one document to `g`. Accepted structures contribute their members as
/// nodes and their arcs as edges; see contributing_structures().
inline void accumulate(syntax_graph& g, const annotated_document& doc) {
    for (std::size_t ui = 0; ui < doc.utterances.size(); ++ui) {
        const auto& u = doc.utterances[ui];
        const edge_source src{doc.corpus_id, ui, u.source_line};
        for (const auto& s : contributing_structures(u)) {
            for (auto m : s.members) g.nodes.insert(u.tokens.at(m - 1).norm);
            for (const auto& a : s.arcs) {
                const auto& from = u.tokens.at(a.from - 1).norm;
                const auto& to = u.tokens.at(a.to - 1).norm;
                if (from == to) {
                    g.dropped.push_back({from, src});
                    continue;
                }
                word_edge e{from, to};
                if (g.edges.insert(e).second) g.provenance.emplace(e, src);
            }
        }
    }
}

inline syntax_graph build_graph(std::span<const annotated_document> docs) {
    syntax_graph g;
    for (const auto& d : docs) accumulate(g, d);
    return g;
}

inline syntax_graph undirected_view(const syntax_graph& g) {
    if (!g.directed) return g;
    syntax_graph u;
    u.directed = false;
    u.nodes = g.nodes;
    u.dropped = g.dropped;
    for (const auto& e : g.edges) {
        word_edge k = e.first < e.second ? e : word_edge{e.second, e.first};
        if (!u.edges.insert(k).second) continue;
        if (auto it = g.provenance.find(e); it != g.provenance.end()) u.provenance.emplace(k, it->second);
    }
    return u;
}

/// Keeps the given nodes and the edges between them.
inline syntax_graph induced_subgraph(const syntax_graph& g, const std::set<std::string>& keep) {
    syntax_graph s;
    s.directed = g.directed;
    for (const auto& n : g.nodes)
        if (keep.count(n)) s.nodes.insert(n);
    for (const auto& e : g.edges) {
        if (!keep.count(e.first) || !keep.count(e.second)) continue;
        s.edges.insert(e);
        if (auto it = g.provenance.find(e); it != g.provenance.end()) s.provenance.emplace(e, it->second);
    }
    return s;
}

struct component {
    /// Sorted word types.
    std::vector<std::string> members;
    std::size_t size() const { return members.size(); }
};

/// Weakly connected components, largest first. Equal sizes are ordered by
/// their sorted member lists, so the first element (the GCC) is deterministic.
inline std::vector<component> components(const syntax_graph& g) {
    std::vector<std::string> names(g.nodes.begin(), g.nodes.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;

    std::vector<std::size_t> parent(names.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : g.edges) {
        auto ra = find(index.at(a)), rb = find(index.at(b));
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    std::map<std::size_t, component> by_root;
    for (std::size_t i = 0; i < names.size(); ++i) by_root[find(i)].members.push_back(names[i]);
    std::vector<component> out;
    for (auto& [_, c] : by_root) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const component& a, const component& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.members < b.members;
    });
    return out;
}

/// Undirected subgraph induced by the largest component. Empty for an empty graph.
inline syntax_graph giant_component(const syntax_graph& g) {
    auto comps = components(g);
    auto u = undirected_view(g);
    if (comps.empty()) return u;
    return induced_subgraph(u, {comps.front().members.begin(), comps.front().members.end()});
}

/// Dense 0/1 matrix with rows and columns in lexicographic node order.
struct adjacency_matrix {
    std::vector<std::string> index;
    std::vector<std::uint8_t> a;

    std::size_t n() const { return index.size(); }
    std::uint8_t at(std::size_t i, std::size_t j) const { return a[i * n() + j]; }

    bool symmetric() const {
        for (std::size_t i = 0; i < n(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }
};

/// Directed: A_ij = 1 iff w_i -> w_j. Undirected: A_ij = 1 iff either
/// direction is present. An undirected graph always yields the symmetric form.
inline adjacency_matrix adjacency(const syntax_graph& g, bool directed) {
    adjacency_matrix m;
    m.index.assign(g.nodes.begin(), g.nodes.end());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < m.index.size(); ++i) pos[m.index[i]] = i;
    const auto n = m.index.size();
    m.a.assign(n * n, 0);
    const bool symmetric = !directed || !g.directed;
    for (const auto& [from, to] : g.edges) {
        auto i = pos.at(from), j = pos.at(to);
        m.a[i * n + j] = 1;
        if (symmetric) m.a[j * n + i] = 1;
    }
    return m;
}

/// Undirected adjacency lists over lexicographically indexed nodes. This is
/// the representation the metric routines run on.
struct adjacency_list {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> adj;

    std::size_t n() const { return adj.size(); }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& a : adj) twice += a.size();
        return twice / 2;
    }

    std::size_t degree(std::size_t i) const { return adj[i].size(); }

    bool linked(std::size_t i, std::size_t j) const {
        return std::binary_search(adj[i].begin(), adj[i].end(), j);
    }

    /// Builds from an index edge list; duplicates and self-loops are ignored.
    static adjacency_list from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
        adjacency_list l;
        l.names.resize(n);
        for (std::size_t i = 0; i < n; ++i) l.names[i] = std::to_string(i);
        l.adj.resize(n);
        for (auto [a, b] : edges) {
            if (a == b) continue;
            l.adj[a].push_back(b);
            l.adj[b].push_back(a);
        }
        for (auto& a : l.adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        return l;
    }
};

inline adjacency_list to_adjacency_list(const syntax_graph& g) {
    adjacency_list l;
    l.names.assign(g.nodes.begin(), g.nodes.end());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < l.names.size(); ++i) pos[l.names[i]] = i;
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (const auto& [a, b] : g.edges) es.emplace_back(pos.at(a), pos.at(b));
    auto names = std::move(l.names);
    l = adjacency_list::from_edges(names.size(), es);
    l.names = std::move(names);
    return l;
}

// Exports.

/// "from<TAB>to" lines, then a "# isolated" section listing nodes with no edges.
inline std::string to_edge_list(const syntax_graph& g) {
    std::string out = "# edges\n";
    std::set<std::string> linked;
    for (const auto& [a, b] : g.edges) {
        out += a + '\t' + b + '\n';
        linked.insert(a);
        linked.insert(b);
    }
    out += "# isolated\n";
    for (const auto& n : g.nodes)
        if (!linked.count(n)) out += n + '\n';
    return out;
}

inline nlohmann::json graph_to_json(const syntax_graph& g) {
    std::map<std::string, std::size_t> in, out;
    for (const auto& n : g.nodes) in[n] = out[n] = 0;
    for (const auto& [a, b] : g.edges) {
        ++out[a];
        ++in[b];
    }
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges) {
        nlohmann::json je = {{"from", e.first}, {"to", e.second}};
        if (auto it = g.provenance.find(e); it != g.provenance.end()) {
            je["corpus"] = it->second.corpus;
            je["utterance"] = it->second.utterance;
            je["line"] = it->second.line ? nlohmann::json(*it->second.line) : nlohmann::json(nullptr);
        }
        edges.push_back(std::move(je));
    }
    nlohmann::json j = {{"directed", g.directed}, {"nodes", g.nodes}, {"edges", edges}};
    if (g.directed) {
        j["in_degree"] = in;
        j["out_degree"] = out;
    }
    return j;
}

/// One line per row, entries separated by spaces, preceded by the index line.
inline std::string to_matrix_text(const adjacency_matrix& m) {
    std::string out = "#";
    for (const auto& w : m.index) out += ' ' + w;
    out += '\n';
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) {
            if (j) out += ' ';
            out += m.at(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

} // namespace synnet
