#pragma once

// Annotation workspace served over HTTP. Documents are extended DGA XML files
// in one directory, one file per corpus; the document id is the file stem.
// Saves use optimistic locking on an in-memory revision counter.
//
//   GET /docs                      document summaries
//   GET /docs/{id}                 document, revision, flags per utterance
//   PUT /docs/{id}/utterances/{n}  {"revision", "structures", "decision"}
//   GET /metrics?docs=a,b          metrics over the union of the documents

#include <synnet/criteria.hpp>
#include <synnet/dga.hpp>
#include <synnet/metrics.hpp>
#include <synnet/pipeline.hpp>

#include <httplib.h>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace synnet {

enum class service_status { not_found, conflict, invalid, bad_request };

class service_error : public std::runtime_error {
public:
    service_error(service_status s, const std::string& what, std::vector<violation> vs = {},
                  std::uint64_t revision = 0)
        : std::runtime_error(what), status_(s), violations_(std::move(vs)), revision_(revision) {}

    service_status status() const { return status_; }
    const std::vector<violation>& violations() const { return violations_; }
    /// Current revision, for conflicts.
    std::uint64_t revision() const { return revision_; }

private:
    service_status status_;
    std::vector<violation> violations_;
    std::uint64_t revision_;
};

struct doc_summary {
    std::string id;
    bool readable = true;
    std::string error;
    std::size_t utterances = 0;
    /// Utterances that carry structures or a non-default decision.
    std::size_t decided = 0;
};

struct document_view {
    std::string id;
    std::uint64_t revision = 0;
    annotated_document doc;
    std::vector<std::vector<advisory_flag>> flags;
};

class workspace {
public:
    explicit workspace(fs::path dir, pipeline_config cfg = {}) : dir_(std::move(dir)), cfg_(std::move(cfg)) {
        if (!fs::is_directory(dir_)) throw std::invalid_argument("workspace is not a directory: " + dir_.string());
    }

    const fs::path& dir() const { return dir_; }

    std::vector<std::string> document_ids() const {
        std::vector<std::string> ids;
        for (const auto& e : fs::directory_iterator(dir_))
            if (e.is_regular_file() && e.path().extension() == ".xml") ids.push_back(e.path().stem().string());
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    std::vector<doc_summary> list_documents() const {
        std::vector<doc_summary> out;
        for (const auto& id : document_ids()) {
            doc_summary s;
            s.id = id;
            try {
                auto& slot = entry(id);
                std::shared_lock lock(slot.mutex);
                auto doc = load(id);
                s.utterances = doc.utterances.size();
                for (const auto& u : doc.utterances)
                    if (!u.structures.empty() || u.decision.status != decision_status::accepted) ++s.decided;
            } catch (const std::exception& e) {
                s.readable = false;
                s.error = e.what();
            }
            out.push_back(std::move(s));
        }
        return out;
    }

    document_view get_document(const std::string& id) const {
        require(id);
        auto& slot = entry(id);
        std::shared_lock lock(slot.mutex);
        document_view v;
        v.id = id;
        v.revision = slot.revision;
        v.doc = load(id);
        for (const auto& u : v.doc.utterances) v.flags.push_back(assess(u.tokens, cfg_.lexicon));
        return v;
    }

    /// Replaces the structures and decision of utterance `index` (from 0).
    /// Returns the new revision.
    std::uint64_t save_annotation(const std::string& id, std::uint64_t revision, std::size_t index,
                                  std::vector<structure> structures, annotation_decision decision) {
        require(id);
        auto& slot = entry(id);
        std::unique_lock lock(slot.mutex);
        if (revision != slot.revision)
            throw service_error(service_status::conflict,
                                "stale revision " + std::to_string(revision) + ", current is " +
                                    std::to_string(slot.revision),
                                {}, slot.revision);
        auto doc = load(id);
        if (index >= doc.utterances.size())
            throw service_error(service_status::not_found, "utterance " + std::to_string(index) + " does not exist");
        auto& u = doc.utterances[index];
        u.structures = std::move(structures);
        u.decision = std::move(decision);
        canonicalize(u);
        if (auto vs = validate(u, index); !vs.empty())
            throw service_error(service_status::invalid, "annotation violates structure rules", std::move(vs));

        const auto path = file_of(id);
        auto tmp = path;
        tmp += ".tmp";
        write_file(tmp, write_dga_xml(doc));
        fs::rename(tmp, path);
        return ++slot.revision;
    }

    /// Same computation as the pipeline, over the union of the documents.
    metrics_report preview_metrics(const std::vector<std::string>& ids) const {
        std::vector<annotated_document> docs;
        std::string name;
        for (const auto& id : ids) {
            require(id);
            auto& slot = entry(id);
            std::shared_lock lock(slot.mutex);
            auto doc = load(id);
            if (auto vs = validate(doc); !vs.empty())
                throw service_error(service_status::invalid, "document " + id + " is invalid", std::move(vs));
            docs.push_back(std::move(doc));
            name += (name.empty() ? "" : "+") + id;
        }
        return compute_report(name, docs, cfg_.metrics);
    }

private:
    struct slot {
        std::shared_mutex mutex;
        std::uint64_t revision = 0;
    };

    fs::path file_of(const std::string& id) const { return dir_ / (id + ".xml"); }

    void require(const std::string& id) const {
        const bool plain = !id.empty() && id.find('/') == std::string::npos && id.find('\\') == std::string::npos &&
                           id != "." && id != "..";
        if (!plain || !fs::is_regular_file(file_of(id)))
            throw service_error(service_status::not_found, "no document '" + id + "'");
    }

    annotated_document load(const std::string& id) const {
        auto doc = read_dga_xml(read_file(file_of(id)));
        if (doc.corpus_id.empty()) doc.corpus_id = id;
        return doc;
    }

    slot& entry(const std::string& id) const {
        std::lock_guard lock(slots_mutex_);
        auto& p = slots_[id];
        if (!p) p = std::make_unique<slot>();
        return *p;
    }

    fs::path dir_;
    pipeline_config cfg_;
    mutable std::mutex slots_mutex_;
    mutable std::map<std::string, std::unique_ptr<slot>> slots_;
};

// JSON views.

inline nlohmann::json violations_to_json(const std::vector<violation>& vs) {
    auto arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back({{"utterance", v.utterance}, {"code", v.code}, {"message", v.message}});
    return arr;
}

inline nlohmann::json summary_to_json(const doc_summary& s) {
    return {{"id", s.id}, {"readable", s.readable}, {"error", s.error}, {"utterances", s.utterances},
            {"decided", s.decided}};
}

inline nlohmann::json view_to_json(const document_view& v) {
    auto flags = nlohmann::json::array();
    for (const auto& fs : v.flags) {
        auto arr = nlohmann::json::array();
        for (const auto& f : fs) arr.push_back(flag_to_json(f));
        flags.push_back(std::move(arr));
    }
    return {{"id", v.id}, {"revision", v.revision}, {"document", document_to_json(v.doc)}, {"flags", flags}};
}

namespace detail {

inline int http_status(service_status s) {
    switch (s) {
    case service_status::not_found: return 404;
    case service_status::conflict: return 409;
    case service_status::invalid: return 422;
    case service_status::bad_request: return 400;
    }
    return 400;
}

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const service_error& e) {
        nlohmann::json body = {{"error", e.what()}};
        if (!e.violations().empty()) body["violations"] = violations_to_json(e.violations());
        if (e.status() == service_status::conflict) body["revision"] = e.revision();
        send_json(res, http_status(e.status()), body);
    } catch (const nlohmann::json::exception& e) {
        send_json(res, 400, {{"error", std::string("bad request body: ") + e.what()}});
    } catch (const document_error& e) {
        send_json(res, 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
        send_json(res, 500, {{"error", e.what()}});
    }
}

} // namespace detail

/// Registers the JSON API on `srv`; serves `static_dir` at "/" when given.
inline void mount(httplib::Server& srv, workspace& ws, const std::optional<fs::path>& static_dir = {}) {
    using detail::guarded;
    using detail::send_json;

    srv.Get("/docs", [&ws](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            auto arr = nlohmann::json::array();
            for (const auto& s : ws.list_documents()) arr.push_back(summary_to_json(s));
            send_json(res, 200, arr);
        });
    });

    srv.Get("/docs/:id", [&ws](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, view_to_json(ws.get_document(req.path_params.at("id")))); });
    });

    srv.Put("/docs/:id/utterances/:n", [&ws](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::size_t index = 0;
            const auto& n = req.path_params.at("n");
            auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), index);
            if (ec != std::errc{} || p != n.data() + n.size())
                throw service_error(service_status::bad_request, "utterance index must be a number");
            auto body = nlohmann::json::parse(req.body);
            std::vector<structure> structures;
            for (const auto& s : body.at("structures")) structures.push_back(structure_from_json(s));
            auto decision = body.contains("decision") ? decision_from_json(body.at("decision")) : annotation_decision{};
            auto rev = ws.save_annotation(req.path_params.at("id"), body.at("revision").get<std::uint64_t>(), index,
                                          std::move(structures), std::move(decision));
            send_json(res, 200, {{"revision", rev}});
        });
    });

    srv.Get("/metrics", [&ws](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::vector<std::string> ids;
            if (req.has_param("docs")) {
                std::string all = req.get_param_value("docs");
                for (std::size_t start = 0; start <= all.size();) {
                    auto comma = all.find(',', start);
                    auto id = all.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                    if (!id.empty()) ids.push_back(id);
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            } else {
                ids = ws.document_ids();
            }
            send_json(res, 200, report_to_json(ws.preview_metrics(ids)));
        });
    });

    if (static_dir) srv.set_mount_point("/", static_dir->string());
}

} // namespace synnet
