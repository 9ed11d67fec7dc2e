#pragma once

// Corpus series processing: transcript -> utterances -> annotation -> graph ->
// metrics, one corpus at a time, with failures isolated per corpus.

#include <synnet/chat.hpp>
#include <synnet/criteria.hpp>
#include <synnet/dga.hpp>
#include <synnet/graph.hpp>
#include <synnet/metrics.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <stdexcept>
#include <string>
#include <vector>

namespace synnet {

namespace fs = std::filesystem;

/// Bad configuration or series description. The CLI maps it to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& p, std::string_view content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + p.string());
}

struct pipeline_config {
    extract_options extract;
    std::size_t imitation_window = 3;
    metrics_config metrics;
    non_accepted_lexicon lexicon = non_accepted_lexicon::standard();
    /// Corpora processed concurrently; 0 picks the hardware concurrency.
    std::size_t jobs = 0;
};

/// key=value lines; '#' starts a comment. Keys: strip_chars, speaker,
/// context_window, imitation_window, small_world_tol, poisson_n (gcc|words),
/// lexicon (path, relative to `base`), jobs.
inline pipeline_config parse_config(std::string_view text, const fs::path& base = {}) {
    pipeline_config cfg;
    std::size_t line_no = 0;
    auto to_size = [&](std::string_view v, const std::string& key) {
        std::size_t out = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || p != v.data() + v.size() || v.empty())
            throw config_error("config line " + std::to_string(line_no) + ": " + key + " needs a non-negative integer");
        return out;
    };
    for (auto raw : detail::split_lines(text)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw config_error("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key(detail::trim(line.substr(0, eq)));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key == "strip_chars") {
            cfg.extract.strip = strip_set(value);
        } else if (key == "speaker") {
            if (!is_speaker_code(value)) throw config_error("config: invalid speaker code '" + std::string(value) + "'");
            cfg.extract.speaker = std::string(value);
        } else if (key == "context_window") {
            cfg.extract.context_window = to_size(value, key);
        } else if (key == "imitation_window") {
            cfg.imitation_window = to_size(value, key);
            if (cfg.imitation_window < 1) throw config_error("config: imitation_window must be at least 1");
        } else if (key == "small_world_tol") {
            double v = 0;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || p != value.data() + value.size() || v < 0)
                throw config_error("config: small_world_tol needs a non-negative number");
            cfg.metrics.small_world_tol = v;
        } else if (key == "poisson_n") {
            if (value == "gcc") cfg.metrics.poisson_n = poisson_population::gcc;
            else if (value == "words") cfg.metrics.poisson_n = poisson_population::words;
            else throw config_error("config: poisson_n must be gcc or words");
        } else if (key == "lexicon") {
            auto path = base / fs::path(std::string(value));
            try {
                cfg.lexicon = non_accepted_lexicon::parse(read_file(path));
            } catch (const std::exception& e) {
                throw config_error(std::string("config: lexicon: ") + e.what());
            }
        } else if (key == "jobs") {
            cfg.jobs = to_size(value, key);
        } else {
            throw config_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

struct series_entry {
    std::string corpus_id;
    fs::path transcript;
    std::optional<fs::path> annotation;
    std::optional<age> child_age;
};

struct corpus_series {
    std::vector<series_entry> entries;
};

/// One corpus per line: "id transcript annotation age", whitespace separated,
/// '-' for a missing annotation or age. Relative paths resolve against `base`.
/// Ids must be unique and ages, where given, non-decreasing.
inline corpus_series parse_series(std::string_view text, const fs::path& base = {}) {
    corpus_series s;
    std::set<std::string> ids;
    std::optional<age> last_age;
    std::size_t line_no = 0;
    for (auto raw : detail::split_lines(text)) {
        ++line_no;
        auto line = detail::trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream in{std::string(line)};
        for (std::string w; in >> w;) f.push_back(w);
        if (f.size() < 2 || f.size() > 4)
            throw config_error("series line " + std::to_string(line_no) + ": expected 'id transcript [annotation] [age]'");
        series_entry e;
        e.corpus_id = f[0];
        if (!ids.insert(e.corpus_id).second) throw config_error("series: duplicate corpus id '" + e.corpus_id + "'");
        e.transcript = base / f[1];
        if (f.size() > 2 && f[2] != "-") e.annotation = base / f[2];
        if (f.size() > 3 && f[3] != "-") {
            e.child_age = age::parse(f[3]);
            if (!e.child_age) throw config_error("series line " + std::to_string(line_no) + ": bad age '" + f[3] + "'");
            if (last_age && *e.child_age < *last_age)
                throw config_error("series line " + std::to_string(line_no) + ": ages are not in chronological order");
            last_age = e.child_age;
        }
        s.entries.push_back(std::move(e));
    }
    return s;
}

/// Annotation skeleton for freshly extracted utterances: every utterance
/// accepted with no structures yet, except those with no lexical item at
/// all (only xxx/yyy/0), which are pre-marked rejected as untranscribed.
inline annotated_document make_skeleton(const std::string& corpus_id, const std::vector<raw_utterance>& us) {
    annotated_document doc;
    doc.corpus_id = corpus_id;
    for (const auto& u : us) {
        annotated_utterance a;
        a.tokens = u.tokens;
        a.source_line = u.line_no;
        bool lexical = std::any_of(u.tokens.begin(), u.tokens.end(), [](const token& t) { return t.is_word(); });
        if (!lexical) a.decision = {decision_status::rejected, decision_reason::untranscribed, "no lexical items"};
        doc.utterances.push_back(std::move(a));
    }
    return doc;
}

/// Utterance JSON with the advisory flags of each utterance attached.
inline nlohmann::json extraction_to_json(const std::vector<raw_utterance>& us, const pipeline_config& cfg) {
    auto j = utterances_to_json(us);
    for (std::size_t i = 0; i < us.size(); ++i) {
        auto flags = nlohmann::json::array();
        for (const auto& f : assess(us[i], cfg.lexicon, cfg.imitation_window, cfg.extract.strip))
            flags.push_back(flag_to_json(f));
        j[i]["flags"] = std::move(flags);
    }
    return j;
}

struct corpus_result {
    std::string corpus_id;
    std::optional<metrics_report> report;
    /// Empty on success.
    std::string error;
    std::vector<violation> violations;
    std::vector<diagnostic> diagnostics;
    std::vector<raw_utterance> utterances;
    std::optional<annotated_document> skeleton;
    syntax_graph graph;

    bool ok() const { return error.empty(); }
};

inline corpus_result process_corpus(const series_entry& e, const pipeline_config& cfg) {
    corpus_result r;
    r.corpus_id = e.corpus_id;
    try {
        auto t = parse_chat(read_file(e.transcript), e.corpus_id);
        r.diagnostics = t.diagnostics;
        r.utterances = extract_child_utterances(t, cfg.extract);

        annotated_document doc;
        if (e.annotation) {
            doc = read_dga_xml(read_file(*e.annotation));
            if (doc.corpus_id.empty()) doc.corpus_id = e.corpus_id;
            r.violations = validate(doc);
            if (!r.violations.empty()) {
                r.error = "invalid annotation " + e.annotation->string() + " (" +
                          std::to_string(r.violations.size()) + " violations)";
                return r;
            }
        } else {
            doc = make_skeleton(e.corpus_id, r.utterances);
            r.skeleton = doc;
        }
        const std::vector<annotated_document> docs{doc};
        r.graph = build_graph(docs);
        auto rep = compute_report(e.corpus_id, docs, cfg.metrics);
        rep.child_age = e.child_age ? e.child_age : t.child_age;
        r.report = std::move(rep);
    } catch (const std::exception& ex) {
        r.error = ex.what();
        r.report.reset();
    }
    return r;
}

/// Processes every corpus, concurrently, and returns results in series order.
inline std::vector<corpus_result> run(const corpus_series& series, const pipeline_config& cfg = {}) {
    std::vector<corpus_result> out(series.entries.size());
    std::size_t jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < series.entries.size(); start += jobs) {
        std::vector<std::future<corpus_result>> batch;
        for (std::size_t i = start; i < std::min(start + jobs, series.entries.size()); ++i)
            batch.push_back(std::async(std::launch::async, process_corpus, std::cref(series.entries[i]), std::cref(cfg)));
        for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
    }
    return out;
}

enum class report_format { csv, json };

inline std::string emit(const std::vector<metrics_report>& reports, report_format format) {
    if (format == report_format::csv) {
        std::string out;
        const auto& cols = csv_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
        out += '\n';
        for (const auto& r : reports) out += to_csv_row(r) + '\n';
        return out;
    }
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr.dump(2) + "\n";
}

inline std::vector<metrics_report> reports_from_json(std::string_view text) {
    std::vector<metrics_report> out;
    for (const auto& j : nlohmann::json::parse(text)) out.push_back(report_from_json(j));
    return out;
}

} // namespace synnet
