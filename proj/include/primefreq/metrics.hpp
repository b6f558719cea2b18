#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "primefreq/csv.hpp"
#include "primefreq/encode.hpp"
#include "primefreq/errors.hpp"

namespace primefreq {

/// 201 bins over [-1, 1]: the odd count puts one bin dead on zero, where
/// a quasi-orthogonal codebook piles up.
inline constexpr int kHistogramBins = 201;

/// Pairwise-similarity log-density floor keeping empty bins finite.
inline constexpr double kDensityFloor = 1e-12;

/// Reports above this row count would cost more than a desk-scale run
/// should; the O(N^2 dim) pair enumeration is capped here.
inline constexpr Eigen::Index kMaxReportRows = 20000;

/// Coherence statistics of one codebook.
struct GramReport {
    long long n = 0;
    int dim = 0;
    double e_rms = 0.0;
    double mu_max = 0.0;
    double mean_offdiag = 0.0;
    std::optional<double> welch;             // absent when n <= dim
    std::optional<double> optimality_ratio;  // mu_max / welch, absent when welch absent or 0
    std::optional<double> excess_coherence;  // mu_max - welch, absent when welch absent
    std::vector<long long> histogram;        // kHistogramBins counts over [-1, 1]
    CodebookMeta meta;
};

/// All pairwise inner products G_ij for i < j, in row-major pair order.
/// Rows must already be unit-norm (see normalize_rows).
inline std::vector<double> gram_offdiag(const Codebook& cb) {
    const Eigen::Index n = cb.rows.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(cb.rows.row(i).norm() - 1.0) > 1e-6) {
            throw not_normalized_error("row " + std::to_string(i) +
                                       " is not unit-norm; call normalize_rows first");
        }
    }
    std::vector<double> sims;
    sims.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::VectorXd block =
            cb.rows.bottomRows(n - i - 1) * cb.rows.row(i).transpose();
        for (Eigen::Index j = 0; j < block.size(); ++j) sims.push_back(block(j));
    }
    return sims;
}

/// Quadratic mean of the pairwise similarities. Ordered and unordered
/// enumerations agree by symmetry, so the i<j half suffices.
inline double rms_error(const std::vector<double>& sims) {
    if (sims.empty()) throw empty_input_error("rms_error needs at least one similarity");
    double sum_sq = 0.0;
    for (double s : sims) sum_sq += s * s;
    return std::sqrt(sum_sq / static_cast<double>(sims.size()));
}

/// Lowest achievable worst-case |cosine similarity| for n unit vectors in
/// R^dim: sqrt((n - dim) / (dim (n - 1))). Defined only for n > dim.
inline std::optional<double> welch_bound(long long n, int dim) {
    if (n <= dim) return std::nullopt;
    return std::sqrt(static_cast<double>(n - dim) /
                     (static_cast<double>(dim) * static_cast<double>(n - 1)));
}

/// Full coherence report. Accepts any normalizable codebook; rows are
/// normalized on a copy before the Gram pass.
inline GramReport report(const Codebook& cb) {
    if (cb.rows.rows() < 2) throw empty_input_error("report needs at least two rows");
    if (cb.rows.rows() > kMaxReportRows) {
        throw error("report capped at N <= " + std::to_string(kMaxReportRows));
    }
    const Codebook unit = normalize_rows(cb);
    const std::vector<double> sims = gram_offdiag(unit);

    GramReport rep;
    rep.n = cb.rows.rows();
    rep.dim = static_cast<int>(cb.rows.cols());
    rep.meta = cb.meta;
    rep.histogram.assign(kHistogramBins, 0);

    double sum = 0.0;
    double sum_sq = 0.0;
    double max_abs = 0.0;
    const double bin_width = 2.0 / kHistogramBins;
    for (double s : sims) {
        sum += s;
        sum_sq += s * s;
        max_abs = std::max(max_abs, std::abs(s));
        int bin = static_cast<int>((s + 1.0) / bin_width);
        bin = std::min(std::max(bin, 0), kHistogramBins - 1);
        ++rep.histogram[static_cast<std::size_t>(bin)];
    }
    rep.mean_offdiag = sum / static_cast<double>(sims.size());
    rep.e_rms = std::sqrt(sum_sq / static_cast<double>(sims.size()));
    rep.mu_max = max_abs;
    rep.welch = welch_bound(rep.n, rep.dim);
    if (rep.welch) {
        rep.excess_coherence = rep.mu_max - *rep.welch;
        if (*rep.welch > 0.0) rep.optimality_ratio = rep.mu_max / *rep.welch;
    }
    return rep;
}

/// log10 probability density per histogram bin, floored so empty bins
/// stay finite and plottable.
inline std::vector<double> log_density(const std::vector<long long>& histogram) {
    long long total = 0;
    for (long long c : histogram) total += c;
    const double bin_width = 2.0 / static_cast<double>(histogram.size());
    std::vector<double> out(histogram.size());
    for (std::size_t i = 0; i < histogram.size(); ++i) {
        const double density =
            static_cast<double>(histogram[i]) / (static_cast<double>(total) * bin_width);
        out[i] = std::log10(density + kDensityFloor);
    }
    return out;
}

// ----------------------------------------------------------------------
// Serialization: a flat JSON object and a one-line CSV record, both with
// generation metadata.
// ----------------------------------------------------------------------

inline nlohmann::json to_json(const GramReport& rep) {
    nlohmann::json j;
    j["n"] = rep.n;
    j["dim"] = rep.dim;
    j["e_rms"] = rep.e_rms;
    j["mu_max"] = rep.mu_max;
    j["mean_offdiag"] = rep.mean_offdiag;
    j["welch"] = rep.welch ? nlohmann::json(*rep.welch) : nlohmann::json(nullptr);
    j["optimality_ratio"] =
        rep.optimality_ratio ? nlohmann::json(*rep.optimality_ratio) : nlohmann::json(nullptr);
    j["excess_coherence"] =
        rep.excess_coherence ? nlohmann::json(*rep.excess_coherence) : nlohmann::json(nullptr);
    j["histogram"] = rep.histogram;
    j["source"] = to_string(rep.meta.source);
    j["sigma"] = rep.meta.sigma ? nlohmann::json(*rep.meta.sigma) : nlohmann::json(nullptr);
    j["seed"] = rep.meta.seed ? nlohmann::json(*rep.meta.seed) : nlohmann::json(nullptr);
    j["generator"] = rep.meta.generator;
    return j;
}

inline std::string report_csv_header() {
    return "source,n,dim,sigma,seed,e_rms,mu_max,mean_offdiag,welch,"
           "optimality_ratio,excess_coherence,config_hash";
}

inline std::string report_csv_row(const GramReport& rep, std::uint64_t config_hash) {
    auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    std::string row;
    row += to_string(rep.meta.source);
    row += ',' + std::to_string(rep.n);
    row += ',' + std::to_string(rep.dim);
    row += ',' + (rep.meta.sigma ? format_double(*rep.meta.sigma) : std::string());
    row += ',' + (rep.meta.seed ? std::to_string(*rep.meta.seed) : std::string());
    row += ',' + format_double(rep.e_rms);
    row += ',' + format_double(rep.mu_max);
    row += ',' + format_double(rep.mean_offdiag);
    row += ',' + opt(rep.welch);
    row += ',' + opt(rep.optimality_ratio);
    row += ',' + opt(rep.excess_coherence);
    row += ',' + std::to_string(config_hash);
    return row;
}

} // namespace primefreq
