#pragma once

// Network statistics on the giant connected component and structure-size
// statistics on annotated documents.

#include <synnet/annotation.hpp>
#include <synnet/age.hpp>
#include <synnet/graph.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace synnet {

/// Mean undirected degree, 2m/n. Absent on an empty graph.
inline std::optional<double> avg_degree(const adjacency_list& g) {
    if (g.n() == 0) return std::nullopt;
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.n());
}

/// Fraction of ordered neighbour pairs (j, k), j != k, that are linked.
/// Nodes of degree below 2 have clustering 0.
inline double clustering_local(const adjacency_list& g, std::size_t i) {
    if (i >= g.n()) throw std::out_of_range("clustering_local: node " + std::to_string(i) + " not in graph");
    const auto& nb = g.adj[i];
    const auto k = nb.size();
    if (k < 2) return 0.0;
    std::uint64_t ordered = 0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (g.linked(nb[a], nb[b])) ordered += 2;
    return static_cast<double>(ordered) / static_cast<double>(k * (k - 1));
}

inline std::optional<double> clustering_avg(const adjacency_list& g) {
    if (g.n() == 0) return std::nullopt;
    double sum = 0;
    for (std::size_t i = 0; i < g.n(); ++i) sum += clustering_local(g, i);
    return sum / static_cast<double>(g.n());
}

/// Mean shortest-path length over unordered node pairs. The graph must be
/// connected with at least two nodes.
inline double path_length(const adjacency_list& g) {
    const auto n = g.n();
    if (n < 2) throw std::invalid_argument("path_length needs at least two nodes");
    std::uint64_t total = 0;
    std::vector<std::int64_t> dist(n);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        queue.assign(1, s);
        std::size_t reached = 1;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto w : g.adj[v]) {
                if (dist[w] >= 0) continue;
                dist[w] = dist[v] + 1;
                ++reached;
                queue.push_back(w);
            }
        }
        if (reached != n) throw std::invalid_argument("path_length: graph is not connected");
        for (std::size_t t = s + 1; t < n; ++t) total += static_cast<std::uint64_t>(dist[t]);
    }
    const auto pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(total) / pairs;
}

/// Expected path length of a random graph with N nodes, z1 first and z2
/// second neighbours on average. Absent unless N >= 1, z1 > 0 and z2 > z1.
inline std::optional<double> poisson_baseline(double n, double z1, double z2) {
    if (!(n >= 1) || !(z1 > 0) || !(z2 > z1)) return std::nullopt;
    return 1.0 + std::log(n / z1) / std::log(z2 / z1);
}

/// L close to the random baseline (within tol * D) and L <= N/10.
inline bool small_world(double l, double d_random, double n, double tol = 0.5) {
    return std::abs(l - d_random) <= tol * d_random && l <= n / 10.0;
}

/// Pearson correlation of the degrees at the two ends of each edge. Computed
/// from exact integer sums; absent when there are no edges or the
/// denominator vanishes (every edge joins equal degrees, e.g. regular graphs).
inline std::optional<double> assortativity(const adjacency_list& g) {
    // rho = (c*S_jk - (c*S_sum/2)^2) / (c*S_sq/2 - (c*S_sum/2)^2), c = 1/m.
    // Multiplying through by 4m^2 keeps everything integral.
    std::int64_t m = 0, s_jk = 0, s_sum = 0, s_sq = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (auto k : g.adj[i]) {
            if (k < i) continue;
            const auto a = static_cast<std::int64_t>(g.degree(i));
            const auto b = static_cast<std::int64_t>(g.degree(k));
            ++m;
            s_jk += a * b;
            s_sum += a + b;
            s_sq += a * a + b * b;
        }
    }
    if (m == 0) return std::nullopt;
    const auto num = 4 * m * s_jk - s_sum * s_sum;
    const auto den = 2 * m * s_sq - s_sum * s_sum;
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

struct structure_stats {
    std::size_t total_size = 0;
    std::size_t count = 0;

    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return static_cast<double>(total_size) / static_cast<double>(count);
    }
};

/// Sizes of every contributing structure; isolated words count as size 1.
inline structure_stats avg_structure_size(std::span<const annotated_document> docs) {
    structure_stats st;
    for (const auto& d : docs)
        for (const auto& u : d.utterances)
            for (const auto& s : contributing_structures(u)) {
                st.total_size += s.size();
                ++st.count;
            }
    return st;
}

enum class poisson_population { gcc, words };

struct metrics_config {
    double small_world_tol = 0.5;
    poisson_population poisson_n = poisson_population::gcc;
};

struct metrics_report {
    std::string corpus_id;
    std::optional<age> child_age;
    std::size_t n_words = 0;
    std::size_t n_edges = 0;
    std::size_t gcc_size = 0;
    std::size_t gcc_edges = 0;
    std::optional<double> avg_degree;
    std::optional<double> clustering;
    std::optional<double> path_length;
    std::optional<double> z1;
    std::optional<double> z2;
    std::optional<double> poisson_d;
    std::optional<bool> small_world;
    std::optional<double> rho;
    std::optional<double> s_avg;
    std::size_t structure_count = 0;
    std::size_t structure_total = 0;

    friend bool operator==(const metrics_report&, const metrics_report&) = default;
};

inline metrics_report compute_report(std::string corpus_id, std::span<const annotated_document> docs,
                                     const metrics_config& cfg = {}) {
    metrics_report r;
    r.corpus_id = std::move(corpus_id);
    const auto g = build_graph(docs);
    r.n_words = g.node_count();
    r.n_edges = g.edge_count();

    const auto gcc = to_adjacency_list(giant_component(g));
    r.gcc_size = gcc.n();
    r.gcc_edges = gcc.edge_count();
    r.avg_degree = synnet::avg_degree(gcc);
    r.clustering = clustering_avg(gcc);
    if (gcc.n() >= 2) r.path_length = synnet::path_length(gcc);
    r.rho = assortativity(gcc);

    // Poisson convention: z1 = <k>, z2 = <k>^2.
    if (r.avg_degree) {
        r.z1 = *r.avg_degree;
        r.z2 = *r.avg_degree * *r.avg_degree;
        const double n = static_cast<double>(cfg.poisson_n == poisson_population::gcc ? r.gcc_size : r.n_words);
        r.poisson_d = poisson_baseline(n, *r.z1, *r.z2);
    }
    if (r.path_length && r.poisson_d)
        r.small_world = synnet::small_world(*r.path_length, *r.poisson_d, static_cast<double>(r.gcc_size),
                                            cfg.small_world_tol);

    const auto st = avg_structure_size(docs);
    r.s_avg = st.mean();
    r.structure_count = st.count;
    r.structure_total = st.total_size;
    return r;
}

// Serialization.

/// Shortest decimal that round-trips.
inline std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {"corpus_id", "N_w",         "gcc_size", "avg_degree",
                                                  "C",         "L",           "D_poisson", "small_world",
                                                  "rho",       "S_avg",       "structure_count"};
    return cols;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string opt_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

inline nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

inline std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace detail

inline std::string to_csv_row(const metrics_report& r) {
    using detail::opt_cell;
    std::string row = detail::csv_field(r.corpus_id);
    row += ',' + std::to_string(r.n_words);
    row += ',' + std::to_string(r.gcc_size);
    row += ',' + opt_cell(r.avg_degree);
    row += ',' + opt_cell(r.clustering);
    row += ',' + opt_cell(r.path_length);
    row += ',' + opt_cell(r.poisson_d);
    row += ',' + (r.small_world ? std::string(*r.small_world ? "true" : "false") : std::string{});
    row += ',' + opt_cell(r.rho);
    row += ',' + opt_cell(r.s_avg);
    row += ',' + std::to_string(r.structure_count);
    return row;
}

inline nlohmann::json report_to_json(const metrics_report& r) {
    using detail::opt_json;
    nlohmann::json j;
    j["corpus_id"] = r.corpus_id;
    j["age"] = r.child_age ? nlohmann::json(r.child_age->str()) : nlohmann::json(nullptr);
    j["N_w"] = r.n_words;
    j["edges"] = r.n_edges;
    j["gcc_size"] = r.gcc_size;
    j["gcc_edges"] = r.gcc_edges;
    j["avg_degree"] = opt_json(r.avg_degree);
    j["C"] = opt_json(r.clustering);
    j["L"] = opt_json(r.path_length);
    j["z1"] = opt_json(r.z1);
    j["z2"] = opt_json(r.z2);
    j["D_poisson"] = opt_json(r.poisson_d);
    j["small_world"] = r.small_world ? nlohmann::json(*r.small_world) : nlohmann::json(nullptr);
    // Degrees at the two endpoint vertices of each edge.
    j["rho"] = opt_json(r.rho);
    j["S_avg"] = opt_json(r.s_avg);
    j["structure_count"] = r.structure_count;
    j["structure_total"] = r.structure_total;
    return j;
}

inline metrics_report report_from_json(const nlohmann::json& j) {
    using detail::opt_from;
    metrics_report r;
    r.corpus_id = j.at("corpus_id").get<std::string>();
    if (j.contains("age") && !j.at("age").is_null()) r.child_age = age::parse(j.at("age").get<std::string>());
    r.n_words = j.at("N_w").get<std::size_t>();
    r.n_edges = j.value("edges", std::size_t{0});
    r.gcc_size = j.at("gcc_size").get<std::size_t>();
    r.gcc_edges = j.value("gcc_edges", std::size_t{0});
    r.avg_degree = opt_from(j, "avg_degree");
    r.clustering = opt_from(j, "C");
    r.path_length = opt_from(j, "L");
    r.z1 = opt_from(j, "z1");
    r.z2 = opt_from(j, "z2");
    r.poisson_d = opt_from(j, "D_poisson");
    if (j.contains("small_world") && !j.at("small_world").is_null()) r.small_world = j.at("small_world").get<bool>();
    r.rho = opt_from(j, "rho");
    r.s_avg = opt_from(j, "S_avg");
    r.structure_count = j.at("structure_count").get<std::size_t>();
    r.structure_total = j.value("structure_total", std::size_t{0});
    return r;
}

} // namespace synnet
