#pragma once

// DGA XML documents, extended with dependency and decision markup:
//
//   <DGAdoc corpus="peter07">
//   <s status="rejected" reason="untranscribed" note="..." line="12">
//   <tok><orth>put</orth><ordno>1</ordno></tok>
//   ...
//   <dep head="1" dependent="2"/>     one per arc, dependent -> head
//   <unit ordno="3"/>                 a size-1 structure
//   </s>
//   </DGAdoc>
//
// Structures are the weakly connected components of the dep arcs plus the
// units. Absent status means accepted. Plain DGA files (tokens only) read as
// accepted utterances with no structures.

#include <synnet/annotation.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace synnet {

/// Malformed XML. `line` is 0 when the parser gave no location.
class xml_error : public std::runtime_error {
public:
    xml_error(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Well-formed XML that does not describe a valid DGA document.
class document_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string latin1_to_utf8(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    for (unsigned char c : in) {
        if (c < 0x80) {
            out += static_cast<char>(c);
        } else {
            out += static_cast<char>(0xC0 | (c >> 6));
            out += static_cast<char>(0x80 | (c & 0x3F));
        }
    }
    return out;
}

inline bool declares_latin1(std::string_view xml) {
    auto end = xml.find("?>");
    if (xml.substr(0, 5) != "<?xml" || end == std::string_view::npos) return false;
    auto decl = fold_case(xml.substr(0, end));
    return decl.find("iso-8859-1") != std::string::npos || decl.find("latin1") != std::string::npos ||
           decl.find("latin-1") != std::string::npos;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

inline ordno parse_ordno(const std::string& s, const std::string& where) {
    ordno v = 0;
    auto t = trim(s);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size() || t.empty())
        throw document_error(where + ": '" + s + "' is not a valid ordno");
    return v;
}

/// Groups arcs into weakly connected components.
inline std::vector<structure> components_of(const arc_set& arcs) {
    std::map<ordno, ordno> parent;
    auto find = [&](ordno x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& a : arcs) {
        parent.try_emplace(a.from, a.from);
        parent.try_emplace(a.to, a.to);
    }
    for (const auto& a : arcs) parent[find(a.from)] = find(a.to);
    std::map<ordno, structure> by_root;
    for (const auto& [node, _] : parent) by_root[find(node)].members.insert(node);
    for (const auto& a : arcs) by_root[find(a.from)].arcs.insert(a);
    std::vector<structure> out;
    for (auto& [_, s] : by_root) out.push_back(std::move(s));
    return out;
}

} // namespace detail

/// Orders structures by their smallest member.
inline void canonicalize(annotated_utterance& u) {
    std::sort(u.structures.begin(), u.structures.end(), [](const structure& a, const structure& b) {
        if (a.members.empty() || b.members.empty()) return a.members.size() < b.members.size();
        return *a.members.begin() < *b.members.begin();
    });
}

inline void canonicalize(annotated_document& doc) {
    for (auto& u : doc.utterances) canonicalize(u);
}

inline annotated_document read_dga_xml(std::string_view bytes) {
    namespace pt = boost::property_tree;
    std::string text = detail::declares_latin1(bytes) ? detail::latin1_to_utf8(bytes) : std::string(bytes);
    std::istringstream in(text);
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw xml_error("malformed XML at line " + std::to_string(e.line()) + ": " + e.message(), e.line());
    }

    auto root = tree.get_child_optional("DGAdoc");
    if (!root) throw document_error("missing DGAdoc root element");

    annotated_document doc;
    doc.corpus_id = root->get("<xmlattr>.corpus", std::string{});

    std::size_t sentence = 0;
    for (const auto& [name, s] : *root) {
        if (name != "s") continue;
        ++sentence;
        const std::string where = "sentence " + std::to_string(sentence);
        annotated_utterance u;

        if (auto st = s.get_optional<std::string>("<xmlattr>.status")) {
            auto v = parse_status(*st);
            if (!v) throw document_error(where + ": unknown status '" + *st + "'");
            u.decision.status = *v;
        }
        if (auto r = s.get_optional<std::string>("<xmlattr>.reason")) {
            auto v = parse_reason(*r);
            if (!v) throw document_error(where + ": unknown reason '" + *r + "'");
            u.decision.reason = *v;
        }
        u.decision.note = s.get("<xmlattr>.note", std::string{});
        if (auto line = s.get_optional<std::string>("<xmlattr>.line"))
            u.source_line = detail::parse_ordno(*line, where + " line attribute");

        std::vector<std::pair<ordno, std::string>> toks;
        arc_set arcs;
        std::vector<structure> units;
        for (const auto& [child, node] : s) {
            if (child == "tok") {
                auto orth = node.get_optional<std::string>("orth");
                auto no = node.get_optional<std::string>("ordno");
                if (!orth || !no) throw document_error(where + ": tok without orth or ordno");
                toks.emplace_back(detail::parse_ordno(*no, where), *orth);
            } else if (child == "dep") {
                auto head = node.get_optional<std::string>("<xmlattr>.head");
                auto dep = node.get_optional<std::string>("<xmlattr>.dependent");
                if (!head || !dep) throw document_error(where + ": dep needs head and dependent attributes");
                arcs.insert({detail::parse_ordno(*dep, where), detail::parse_ordno(*head, where)});
            } else if (child == "unit") {
                auto no = node.get_optional<std::string>("<xmlattr>.ordno");
                if (!no) throw document_error(where + ": unit needs an ordno attribute");
                units.push_back(structure::single(detail::parse_ordno(*no, where)));
            }
        }

        std::stable_sort(toks.begin(), toks.end(), [](auto& a, auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (toks[i].first != i + 1) {
                bool dup = i > 0 && toks[i].first == toks[i - 1].first;
                throw document_error(where + (dup ? ": duplicate ordno " : ": ordno gap before ") +
                                     std::to_string(toks[i].first));
            }
            u.tokens.push_back(token::make(toks[i].second));
        }

        u.structures = detail::components_of(arcs);
        u.structures.insert(u.structures.end(), units.begin(), units.end());
        canonicalize(u);
        doc.utterances.push_back(std::move(u));
    }
    return doc;
}

/// Refuses documents that fail validate().
inline std::string write_dga_xml(const annotated_document& doc) {
    if (auto vs = validate(doc); !vs.empty()) throw validation_error(std::move(vs));
    using detail::xml_escape;

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!DOCTYPE DGAdoc SYSTEM \"dga.dtd\">\n";
    out += "<DGAdoc";
    if (!doc.corpus_id.empty()) out += " corpus=\"" + xml_escape(doc.corpus_id) + "\"";
    out += ">\n";
    for (const auto& u : doc.utterances) {
        out += "<s";
        if (u.decision.status != decision_status::accepted)
            out += " status=\"" + std::string(to_string(u.decision.status)) + "\"";
        if (u.decision.reason) out += " reason=\"" + std::string(to_string(*u.decision.reason)) + "\"";
        if (!u.decision.note.empty()) out += " note=\"" + xml_escape(u.decision.note) + "\"";
        if (u.source_line) out += " line=\"" + std::to_string(*u.source_line) + "\"";
        out += ">\n";
        for (std::size_t i = 0; i < u.tokens.size(); ++i) {
            out += "<tok>\n       <orth>" + xml_escape(u.tokens[i].surface) + "</orth>\n       <ordno>" +
                   std::to_string(i + 1) + "</ordno>\n</tok>\n";
        }
        auto sorted = u;
        canonicalize(sorted);
        for (const auto& s : sorted.structures) {
            if (s.arcs.empty()) {
                out += "<unit ordno=\"" + std::to_string(*s.members.begin()) + "\"/>\n";
                continue;
            }
            for (const auto& a : s.arcs)
                out += "<dep head=\"" + std::to_string(a.to) + "\" dependent=\"" + std::to_string(a.from) + "\"/>\n";
        }
        out += "</s>\n";
    }
    out += "</DGAdoc>\n";
    return out;
}

// JSON mirror of the XML schema, shared by the CLI and the HTTP service.

inline nlohmann::json structure_to_json(const structure& s) {
    auto arcs = nlohmann::json::array();
    for (const auto& a : s.arcs) arcs.push_back({{"dependent", a.from}, {"head", a.to}});
    return {{"members", s.members}, {"arcs", arcs}};
}

inline structure structure_from_json(const nlohmann::json& j) {
    structure s;
    for (const auto& m : j.at("members")) s.members.insert(m.get<ordno>());
    if (j.contains("arcs"))
        for (const auto& a : j.at("arcs")) s.arcs.insert({a.at("dependent").get<ordno>(), a.at("head").get<ordno>()});
    return s;
}

inline nlohmann::json decision_to_json(const annotation_decision& d) {
    nlohmann::json j = {{"status", to_string(d.status)}, {"note", d.note}};
    j["reason"] = d.reason ? nlohmann::json(to_string(*d.reason)) : nlohmann::json(nullptr);
    return j;
}

inline annotation_decision decision_from_json(const nlohmann::json& j) {
    annotation_decision d;
    auto st = parse_status(j.at("status").get<std::string>());
    if (!st) throw document_error("unknown status " + j.at("status").dump());
    d.status = *st;
    if (j.contains("reason") && !j.at("reason").is_null()) {
        auto r = parse_reason(j.at("reason").get<std::string>());
        if (!r) throw document_error("unknown reason " + j.at("reason").dump());
        d.reason = *r;
    }
    if (j.contains("note")) d.note = j.at("note").get<std::string>();
    return d;
}

inline nlohmann::json document_to_json(const annotated_document& doc) {
    auto utts = nlohmann::json::array();
    for (const auto& u : doc.utterances) {
        auto toks = nlohmann::json::array();
        for (std::size_t i = 0; i < u.tokens.size(); ++i)
            toks.push_back({{"orth", u.tokens[i].surface}, {"ordno", i + 1}, {"kind", to_string(u.tokens[i].kind)}});
        auto structs = nlohmann::json::array();
        for (const auto& s : u.structures) structs.push_back(structure_to_json(s));
        nlohmann::json ju = {{"tokens", toks}, {"structures", structs}, {"decision", decision_to_json(u.decision)}};
        ju["line"] = u.source_line ? nlohmann::json(*u.source_line) : nlohmann::json(nullptr);
        utts.push_back(std::move(ju));
    }
    return {{"corpus", doc.corpus_id}, {"utterances", utts}};
}

inline annotated_document document_from_json(const nlohmann::json& j) {
    annotated_document doc;
    doc.corpus_id = j.value("corpus", std::string{});
    for (const auto& ju : j.at("utterances")) {
        annotated_utterance u;
        for (const auto& t : ju.at("tokens")) u.tokens.push_back(token::make(t.at("orth").get<std::string>()));
        for (const auto& s : ju.at("structures")) u.structures.push_back(structure_from_json(s));
        u.decision = decision_from_json(ju.at("decision"));
        if (ju.contains("line") && !ju.at("line").is_null()) u.source_line = ju.at("line").get<std::size_t>();
        doc.utterances.push_back(std::move(u));
    }
    return doc;
}

} // namespace synnet
