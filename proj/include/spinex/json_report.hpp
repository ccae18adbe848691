#pragma once

// JSON emission for the benchmark report and explainability output. Kept
// separate so the core headers stay dependency-free.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinex/bench.hpp"
#include "spinex/core.hpp"
#include "spinex/explain.hpp"

namespace spinex::jsonio {

using nlohmann::json;

namespace detail {

inline json opt(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

inline json matrix_rows(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline json runs_to_json(const std::vector<bench::RunRecord>& records) {
    json out = json::array();
    for (const auto& rec : records) {
        json metrics;
        metrics["n_clusters"] = rec.metrics.n_clusters;
        metrics["silhouette"] = detail::opt(rec.metrics.silhouette);
        metrics["calinski_harabasz"] = detail::opt(rec.metrics.calinski_harabasz);
        metrics["davies_bouldin"] = detail::opt(rec.metrics.davies_bouldin);
        metrics["homogeneity"] = detail::opt(rec.metrics.homogeneity);
        metrics["completeness"] = detail::opt(rec.metrics.completeness);
        metrics["v_measure"] = detail::opt(rec.metrics.v_measure);
        out.push_back({{"algorithm", rec.algorithm},
                       {"dataset", rec.dataset},
                       {"seed", rec.seed},
                       {"metrics", std::move(metrics)},
                       {"wall_time", rec.wall_time}});
    }
    return out;
}

inline json ranking_to_json(const bench::RankingTable& table) {
    json out = json::array();
    for (const auto& row : table.rows) {
        json entry;
        entry["algorithm"] = row.algorithm;
        for (std::size_t m = 0; m < 6; ++m) {
            entry[bench::metric_names[m]] = detail::opt(row.metric_means[m]);
        }
        entry["mean_across_metrics"] = detail::opt(row.mean_across);
        entry["rank"] = row.rank;
        out.push_back(std::move(entry));
    }
    return out;
}

inline json complexity_to_json(const bench::ComplexityReport& report) {
    json series = json::array();
    for (const auto& s : report.series) {
        json medians = json::array();
        for (const auto& [n, med] : s.medians) {
            medians.push_back({{"n", n}, {"median_seconds", med}});
        }
        series.push_back({{"algorithm", s.algorithm},
                          {"d", s.d},
                          {"slope", s.slope},
                          {"class", s.complexity_class},
                          {"medians", std::move(medians)}});
    }
    json aggregate = json::object();
    for (const auto& [name, value] : report.aggregate) {
        aggregate[name] = {{"mean_slope", value.first}, {"class", value.second}};
    }
    return json{{"series", std::move(series)}, {"aggregate", std::move(aggregate)}};
}

/// Aggregated benchmark report with the stable top-level key set.
inline json report_json(const std::vector<bench::RunRecord>& records,
                        const bench::RankingTable& table, const std::vector<std::string>& front,
                        const bench::ComplexityReport& complexity, const DecisionLog& log) {
    json report;
    report["runs"] = runs_to_json(records);
    report["ranking"] = ranking_to_json(table);
    report["pareto"] = front;
    report["complexity"] = complexity_to_json(complexity);
    report["decision_logs"] = log.messages();
    return report;
}

inline void write_report_json(const std::vector<bench::RunRecord>& records,
                              const bench::RankingTable& table,
                              const std::vector<std::string>& front,
                              const bench::ComplexityReport& complexity, const DecisionLog& log,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << report_json(records, table, front, complexity, log).dump(2) << '\n';
}

inline json similarity_analysis_to_json(const explain::SimilarityAnalysis& analysis) {
    json contributions = json::object();
    for (std::size_t f = 0; f < analysis.contributions.cols(); ++f) {
        json column = json::array();
        for (std::size_t j = 0; j < analysis.contributions.rows(); ++j) {
            column.push_back(analysis.contributions(j, f));
        }
        contributions["Feature_" + std::to_string(f)] = std::move(column);
    }
    return json{{"similarities", analysis.similarities},
                {"contributions", std::move(contributions)}};
}

inline json neighbor_analysis_to_json(const explain::NeighborAnalysis& analysis) {
    return json{{"nearest_neighbors", analysis.neighbor_indices},
                {"neighbor_contributions", detail::matrix_rows(analysis.contributions)}};
}

inline json explanation_to_json(const explain::ObservationExplanation& obs) {
    json out = json::object();
    if (obs.similarity) out["similarity_analysis"] = similarity_analysis_to_json(*obs.similarity);
    if (obs.neighbors) out["neighbor_analysis"] = neighbor_analysis_to_json(*obs.neighbors);
    return out;
}

inline json explain_report_to_json(const explain::ExplainabilityReport& report) {
    json out = json::object();
    for (std::size_t i = 0; i < report.observations.size(); ++i) {
        out[std::to_string(i)] = explanation_to_json(report.observations[i]);
    }
    return out;
}

}  // namespace spinex::jsonio
