#pragma once

// Unlabeled head/complement constituency trees and their projection onto
// word-to-word dependency arcs. Every complement contributes one arc from its
// head word to the head word of the enclosing phrase, so a tree with n leaves
// projects to n-1 arcs forming an in-tree rooted at the head word of the tree.

#include <synnet/annotation.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synnet {

class projection_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Either a leaf (one token position) or a phrase whose children are kept in
/// surface order with one of them designated as head.
class constituency_node {
public:
    static constituency_node leaf(ordno position) {
        constituency_node n;
        n.position_ = position;
        return n;
    }

    /// `children` in surface order; `head_index` selects the head child. All
    /// other children are complements.
    static constituency_node phrase(std::vector<constituency_node> children, std::size_t head_index) {
        constituency_node n;
        n.children_ = std::move(children);
        n.head_index_ = head_index;
        return n;
    }

    /// Head first, complements after it in the surface.
    static constituency_node head_first(constituency_node head, std::vector<constituency_node> complements) {
        std::vector<constituency_node> kids{std::move(head)};
        for (auto& c : complements) kids.push_back(std::move(c));
        return phrase(std::move(kids), 0);
    }

    bool is_leaf() const { return children_.empty(); }
    ordno position() const { return position_; }
    const std::vector<constituency_node>& children() const { return children_; }
    std::size_t head_index() const { return head_index_; }
    const constituency_node& head_child() const { return children_.at(head_index_); }

    /// Marks the root as headed by a finite verb. Informational: the root of
    /// the projection is always the tree's head word.
    bool finite_verb_head = false;

    std::size_t leaf_count() const {
        if (is_leaf()) return 1;
        std::size_t n = 0;
        for (const auto& c : children_) n += c.leaf_count();
        return n;
    }

    void collect_leaves(std::vector<ordno>& out) const {
        if (is_leaf()) {
            out.push_back(position_);
            return;
        }
        for (const auto& c : children_) c.collect_leaves(out);
    }

    friend bool operator==(const constituency_node&, const constituency_node&) = default;

private:
    ordno position_ = 0;
    std::vector<constituency_node> children_;
    std::size_t head_index_ = 0;
};

/// Structural problems of a tree: phrases without complements, bad head
/// indices, repeated or zero leaf positions.
inline std::vector<std::string> check_tree(const constituency_node& tree) {
    std::vector<std::string> problems;
    std::set<ordno> seen;
    auto walk = [&](auto&& self, const constituency_node& n) -> void {
        if (n.is_leaf()) {
            if (n.position() == 0) problems.push_back("leaf position 0 (positions start at 1)");
            else if (!seen.insert(n.position()).second)
                problems.push_back("leaf position " + std::to_string(n.position()) + " used twice");
            return;
        }
        if (n.children().size() < 2) problems.push_back("phrase without complements");
        if (n.head_index() >= n.children().size()) {
            problems.push_back("phrase head index out of range");
            return;
        }
        for (const auto& c : n.children()) self(self, c);
    };
    walk(walk, tree);
    return problems;
}

/// Leaf: its position. Phrase: head word of its head child.
inline ordno head_word(const constituency_node& n) {
    const constituency_node* cur = &n;
    while (!cur->is_leaf()) cur = &cur->head_child();
    return cur->position();
}

inline arc_set project(const constituency_node& tree) {
    if (auto problems = check_tree(tree); !problems.empty()) throw projection_error("malformed tree: " + problems.front());
    arc_set arcs;
    auto walk = [&](auto&& self, const constituency_node& n) -> void {
        if (n.is_leaf()) return;
        const auto head = head_word(n);
        for (std::size_t i = 0; i < n.children().size(); ++i) {
            const auto& c = n.children()[i];
            self(self, c);
            if (i != n.head_index()) arcs.insert({head_word(c), head});
        }
    };
    walk(walk, tree);
    return arcs;
}

/// Rebuilds a tree from an in-tree over the positions in `order` (surface
/// order). Dependents of each head are merged nearest-first; ties go to the
/// left dependent. project(invert(a, order)) == a for every in-tree a.
inline constituency_node invert(const arc_set& arcs, const std::vector<ordno>& order) {
    std::set<ordno> members(order.begin(), order.end());
    if (members.size() != order.size()) throw projection_error("surface order repeats a position");
    if (members.empty()) throw projection_error("cannot invert over zero tokens");
    if (auto problems = check_in_tree(members, arcs); !problems.empty())
        throw projection_error("arcs are not an in-tree: " + problems.front().second);

    std::map<ordno, std::size_t> surface;
    for (std::size_t i = 0; i < order.size(); ++i) surface[order[i]] = i;
    std::map<ordno, std::vector<ordno>> deps;
    for (const auto& a : arcs) deps[a.to].push_back(a.from);

    auto build = [&](auto&& self, ordno head) -> constituency_node {
        auto node = constituency_node::leaf(head);
        auto it = deps.find(head);
        if (it == deps.end()) return node;
        auto ds = it->second;
        const auto hs = static_cast<long>(surface[head]);
        std::sort(ds.begin(), ds.end(), [&](ordno a, ordno b) {
            auto da = std::labs(static_cast<long>(surface[a]) - hs);
            auto db = std::labs(static_cast<long>(surface[b]) - hs);
            if (da != db) return da < db;
            return surface[a] < surface[b];
        });
        for (auto d : ds) {
            auto sub = self(self, d);
            if (surface[d] < surface[head]) node = constituency_node::phrase({std::move(sub), std::move(node)}, 1);
            else node = constituency_node::phrase({std::move(node), std::move(sub)}, 0);
        }
        return node;
    };

    ordno root = 0;
    for (auto m : order) {
        bool has_head = std::any_of(arcs.begin(), arcs.end(), [&](const dependency_arc& a) { return a.from == m; });
        if (!has_head) root = m;
    }
    return build(build, root);
}

/// Bracketed notation: "[*put [*in there]]". Words become leaves numbered
/// 1, 2, ... in reading order. In each phrase the child prefixed with '*' is
/// the head; with no '*' the first child is the head. A '!' before the
/// outermost bracket sets finite_verb_head.
struct bracketed_tree {
    constituency_node tree;
    std::vector<std::string> words;
};

inline bracketed_tree parse_bracketed(std::string_view text) {
    bracketed_tree out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) ++i;
    };
    auto fail = [&](const std::string& msg) -> projection_error {
        return projection_error("bracketed tree, offset " + std::to_string(i) + ": " + msg);
    };

    // Returns the node and whether it was starred.
    auto parse = [&](auto&& self) -> std::pair<constituency_node, bool> {
        skip();
        bool starred = false;
        if (i < text.size() && text[i] == '*') {
            starred = true;
            ++i;
        }
        if (i >= text.size()) throw fail("unexpected end");
        if (text[i] == '[') {
            ++i;
            std::vector<constituency_node> kids;
            std::optional<std::size_t> head;
            while (true) {
                skip();
                if (i >= text.size()) throw fail("missing ']'");
                if (text[i] == ']') {
                    ++i;
                    break;
                }
                auto [child, star] = self(self);
                if (star) {
                    if (head) throw fail("two heads in one phrase");
                    head = kids.size();
                }
                kids.push_back(std::move(child));
            }
            if (kids.empty()) throw fail("empty phrase");
            if (kids.size() == 1) return {std::move(kids.front()), starred};
            return {constituency_node::phrase(std::move(kids), head.value_or(0)), starred};
        }
        std::size_t start = i;
        while (i < text.size() && text[i] != '[' && text[i] != ']' && text[i] != ' ' && text[i] != '\t' &&
               text[i] != '\n')
            ++i;
        if (i == start) throw fail("expected a word");
        out.words.emplace_back(text.substr(start, i - start));
        return {constituency_node::leaf(static_cast<ordno>(out.words.size())), starred};
    };

    skip();
    bool finite = false;
    if (i < text.size() && text[i] == '!') {
        finite = true;
        ++i;
    }
    auto [tree, _] = parse(parse);
    skip();
    if (i != text.size()) throw fail("trailing input");
    tree.finite_verb_head = finite;
    out.tree = std::move(tree);
    return out;
}

/// Renders a tree in the notation accepted by parse_bracketed, marking every
/// head child with '*'.
inline std::string to_bracketed(const constituency_node& n, const std::vector<std::string>& words) {
    if (n.is_leaf()) {
        auto p = n.position();
        return p >= 1 && p <= words.size() ? words[p - 1] : std::to_string(p);
    }
    std::string s = "[";
    for (std::size_t i = 0; i < n.children().size(); ++i) {
        if (i) s += ' ';
        if (i == n.head_index()) s += '*';
        s += to_bracketed(n.children()[i], words);
    }
    return s + "]";
}

} // namespace synnet
