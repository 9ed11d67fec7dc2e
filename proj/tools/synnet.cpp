// synnet: command-line front end.
//
//   synnet extract TRANSCRIPT [-o DIR]           utterance JSON + skeleton DGA XML
//   synnet analyze (--series FILE | XML...) [-o DIR]   graphs + metrics.json
//   synnet report METRICS_JSON [--format csv|json]
//   synnet run --series FILE [--format csv|json] [-o DIR]
//   synnet serve --workspace DIR [--port N]
//   synnet project "[*put [*in there]]"
//
// Exit codes: 0 success, 1 some corpus failed, 2 configuration error.

#include <synnet/projection.hpp>
#include <synnet/service.hpp>
#include <synnet/synnet.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace synnet;

constexpr int exit_ok = 0;
constexpr int exit_partial = 1;
constexpr int exit_config = 2;

struct common_options {
    std::string config_path;
    std::string speaker;
    std::string strip_chars;
    bool strip_given = false;
};

pipeline_config load_config(const common_options& o) {
    pipeline_config cfg;
    if (!o.config_path.empty()) {
        fs::path p(o.config_path);
        std::string text;
        try {
            text = read_file(p);
        } catch (const std::exception& e) {
            throw config_error(e.what());
        }
        cfg = parse_config(text, p.parent_path());
    }
    if (!o.speaker.empty()) {
        if (!is_speaker_code(o.speaker)) throw config_error("invalid speaker code '" + o.speaker + "'");
        cfg.extract.speaker = o.speaker;
    }
    if (o.strip_given) cfg.extract.strip = strip_set(o.strip_chars);
    return cfg;
}

corpus_series load_series(const std::string& path) {
    try {
        fs::path p(path);
        return parse_series(read_file(p), p.parent_path());
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
}

void write_outputs(const corpus_result& r, const pipeline_config& cfg, const fs::path& out) {
    write_file(out / (r.corpus_id + ".utterances.json"), extraction_to_json(r.utterances, cfg).dump(2) + "\n");
    if (r.skeleton) write_file(out / (r.corpus_id + ".skeleton.xml"), write_dga_xml(*r.skeleton));
    if (r.ok()) {
        write_file(out / (r.corpus_id + ".edges.tsv"), to_edge_list(r.graph));
        write_file(out / (r.corpus_id + ".graph.json"), graph_to_json(r.graph).dump(2) + "\n");
    }
}

void report_failure(const corpus_result& r) {
    std::cerr << "synnet: corpus " << r.corpus_id << ": " << r.error << "\n";
    for (const auto& v : r.violations)
        std::cerr << "  utterance " << v.utterance << ": " << v.code << ": " << v.message << "\n";
}

void report_diagnostics(const std::string& corpus, const std::vector<diagnostic>& ds) {
    for (const auto& d : ds)
        std::cerr << "synnet: " << corpus << ":" << d.line_no << ": " << to_string(d.kind) << ": " << d.message << "\n";
}

/// Runs the series, writes side outputs, and returns reports of the corpora
/// that succeeded together with the exit code.
std::pair<std::vector<metrics_report>, int> run_series(const corpus_series& series, const pipeline_config& cfg,
                                                       const std::string& out_dir) {
    auto results = run(series, cfg);
    std::vector<metrics_report> reports;
    int code = exit_ok;
    for (const auto& r : results) {
        report_diagnostics(r.corpus_id, r.diagnostics);
        if (!out_dir.empty()) write_outputs(r, cfg, out_dir);
        if (r.ok()) {
            reports.push_back(*r.report);
        } else {
            report_failure(r);
            code = exit_partial;
        }
    }
    return {reports, code};
}

std::optional<report_format> parse_format(const std::string& s) {
    if (s == "csv") return report_format::csv;
    if (s == "json") return report_format::json;
    return std::nullopt;
}

void output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Syntactic networks from child speech transcripts"};
    app.require_subcommand(1);

    common_options common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "key=value configuration file");
        sub->add_option("--speaker", common.speaker, "speaker code to extract, e.g. *CHI:");
        sub->add_option("--strip", common.strip_chars, "characters removed before tokenizing")
            ->each([&](const std::string&) { common.strip_given = true; });
    };

    // extract
    auto* extract = app.add_subcommand("extract", "CHAT transcript to utterance JSON and skeleton DGA XML");
    std::string transcript_path, corpus_id, extract_out = ".";
    extract->add_option("transcript", transcript_path, "CHAT transcript")->required();
    extract->add_option("--corpus", corpus_id, "corpus id (default: file stem)");
    extract->add_option("-o,--out-dir", extract_out, "output directory");
    add_common(extract);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "annotations to graphs and metrics");
    std::string series_path, analyze_out = ".";
    std::vector<std::string> xml_paths;
    analyze->add_option("--series", series_path, "corpus series file");
    analyze->add_option("annotations", xml_paths, "annotated DGA XML files, one corpus each");
    analyze->add_option("-o,--out-dir", analyze_out, "output directory");
    add_common(analyze);

    // report
    auto* report = app.add_subcommand("report", "metrics JSON to CSV or JSON");
    std::string metrics_path, format = "csv", report_out;
    report->add_option("metrics", metrics_path, "metrics.json written by analyze")->required();
    report->add_option("--format", format, "csv or json");
    report->add_option("-o,--output", report_out, "output file (default stdout)");

    // run
    auto* runcmd = app.add_subcommand("run", "analyze a series and emit the report in one step");
    std::string run_series_path, run_format = "csv", run_out_dir, run_output;
    runcmd->add_option("--series", run_series_path, "corpus series file")->required();
    runcmd->add_option("--format", run_format, "csv or json");
    runcmd->add_option("-o,--out-dir", run_out_dir, "directory for side outputs");
    runcmd->add_option("--output", run_output, "report file (default stdout)");
    add_common(runcmd);

    // serve
    auto* serve = app.add_subcommand("serve", "serve a directory of DGA XML files to the annotation UI");
    std::string workspace_dir, host = "127.0.0.1", static_dir;
    int port = 8080;
    serve->add_option("--workspace", workspace_dir, "directory of DGA XML documents")->required();
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port");
    serve->add_option("--static", static_dir, "UI assets served at /");
    add_common(serve);

    // project
    auto* projectcmd = app.add_subcommand("project", "project a bracketed head/complement tree to arcs");
    std::string tree_text;
    projectcmd->add_option("tree", tree_text, "e.g. \"[*put [*in there]]\"")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) {
            auto cfg = load_config(common);
            fs::path p(transcript_path);
            if (corpus_id.empty()) corpus_id = p.stem().string();
            std::string text;
            try {
                text = read_file(p);
            } catch (const std::exception& e) {
                std::cerr << "synnet: " << e.what() << "\n";
                return exit_partial;
            }
            auto t = parse_chat(text, corpus_id);
            report_diagnostics(corpus_id, t.diagnostics);
            auto us = extract_child_utterances(t, cfg.extract);
            fs::path out(extract_out);
            write_file(out / (corpus_id + ".utterances.json"), extraction_to_json(us, cfg).dump(2) + "\n");
            write_file(out / (corpus_id + ".skeleton.xml"), write_dga_xml(make_skeleton(corpus_id, us)));
            std::cerr << "synnet: " << us.size() << " utterances from " << corpus_id << "\n";
            return exit_ok;
        }

        if (*analyze) {
            auto cfg = load_config(common);
            if (series_path.empty() == xml_paths.empty()) {
                std::cerr << "synnet: analyze needs either --series or annotation files\n";
                return exit_config;
            }
            std::vector<metrics_report> reports;
            int code = exit_ok;
            fs::path out(analyze_out);
            if (!series_path.empty()) {
                std::tie(reports, code) = run_series(load_series(series_path), cfg, analyze_out);
            } else {
                for (const auto& x : xml_paths) {
                    const auto id = fs::path(x).stem().string();
                    try {
                        auto doc = read_dga_xml(read_file(x));
                        if (auto vs = validate(doc); !vs.empty()) throw validation_error(vs);
                        const std::vector<annotated_document> docs{doc};
                        auto g = build_graph(docs);
                        write_file(out / (id + ".edges.tsv"), to_edge_list(g));
                        write_file(out / (id + ".graph.json"), graph_to_json(g).dump(2) + "\n");
                        reports.push_back(compute_report(id, docs, cfg.metrics));
                    } catch (const std::exception& e) {
                        std::cerr << "synnet: corpus " << id << ": " << e.what() << "\n";
                        code = exit_partial;
                    }
                }
            }
            write_file(out / "metrics.json", emit(reports, report_format::json));
            return code;
        }

        if (*report) {
            auto fmt = parse_format(format);
            if (!fmt) {
                std::cerr << "synnet: unknown format '" << format << "'\n";
                return exit_config;
            }
            output(emit(reports_from_json(read_file(metrics_path)), *fmt), report_out);
            return exit_ok;
        }

        if (*runcmd) {
            auto fmt = parse_format(run_format);
            if (!fmt) {
                std::cerr << "synnet: unknown format '" << run_format << "'\n";
                return exit_config;
            }
            auto cfg = load_config(common);
            auto [reports, code] = run_series(load_series(run_series_path), cfg, run_out_dir);
            output(emit(reports, *fmt), run_output);
            return code;
        }

        if (*serve) {
            auto cfg = load_config(common);
            workspace ws(workspace_dir, cfg);
            httplib::Server srv;
            std::optional<fs::path> assets;
            if (!static_dir.empty()) assets = fs::path(static_dir);
            mount(srv, ws, assets);
            std::cerr << "synnet: serving " << workspace_dir << " on http://" << host << ":" << port << "\n";
            if (!srv.listen(host, port)) {
                std::cerr << "synnet: cannot listen on " << host << ":" << port << "\n";
                return exit_config;
            }
            return exit_ok;
        }

        if (*projectcmd) {
            auto bt = parse_bracketed(tree_text);
            for (const auto& a : project(bt.tree))
                std::cout << bt.words[a.from - 1] << "\t" << bt.words[a.to - 1] << "\n";
            return exit_ok;
        }
    } catch (const config_error& e) {
        std::cerr << "synnet: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "synnet: " << e.what() << "\n";
        return exit_partial;
    }
    return exit_ok;
}
