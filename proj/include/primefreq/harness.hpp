#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "primefreq/baseline.hpp"
#include "primefreq/basis.hpp"
#include "primefreq/csv.hpp"
#include "primefreq/encode.hpp"
#include "primefreq/errors.hpp"
#include "primefreq/metrics.hpp"
#include "primefreq/svg.hpp"
#include "primefreq/synth.hpp"

namespace primefreq {

namespace detail {

// Index-addressed work pool: results land in caller-owned slots keyed by
// cell index, so report order never depends on scheduling.
template <typename Fn>
inline void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, count == 0 ? 1 : count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw empty_population_error("quantile of empty population");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline double median(const std::vector<double>& values) { return quantile(values, 0.5); }

inline double mean(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

} // namespace detail

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ----------------------------------------------------------------------
// Orthogonality / Welch grids
// ----------------------------------------------------------------------

struct GridSpec {
    std::vector<long long> n_values{500, 1000, 2000};
    std::vector<int> d_values{16, 64, 256};
    std::vector<Source> sources{Source::static_prime, Source::gaussian_baseline};
    std::vector<std::uint64_t> seeds{42, 43, 44, 45, 46};
};

inline void validate_grid(const GridSpec& spec) {
    if (spec.n_values.empty() || spec.d_values.empty() || spec.sources.empty()) {
        throw empty_input_error("grid spec needs nonempty n, d and source lists");
    }
    for (Source s : spec.sources) {
        if (s != Source::gaussian_baseline) {
            for (int d : spec.d_values) {
                if (d % 2 != 0) {
                    throw invalid_dimension_error(
                        "prime sources need even dimensions, got " + std::to_string(d));
                }
            }
        }
    }
    if (std::find(spec.sources.begin(), spec.sources.end(), Source::gaussian_baseline) !=
            spec.sources.end() &&
        spec.seeds.empty()) {
        throw empty_input_error("gaussian cells need at least one seed");
    }
}

struct SourceSummary {
    double mean_e_rms = 0.0;
    double median_e_rms = 0.0;
    std::optional<double> mean_ratio;
    std::optional<double> median_ratio;
};

struct OrthogonalityResult {
    std::vector<GramReport> reports; // canonical order: source, n, d, seed
    std::map<Source, SourceSummary> summary;
    struct CellPair {
        long long n = 0;
        int d = 0;
        double prime_e_rms = 0.0;
        double gaussian_mean_e_rms = 0.0;
    };
    std::vector<CellPair> cell_pairs; // present when both sources ran
};

namespace detail {

struct GridCell {
    Source source;
    long long n;
    int d;
    std::optional<std::uint64_t> seed; // gaussian only
};

inline std::vector<GridCell> enumerate_cells(const GridSpec& spec, bool welch_valid_only) {
    std::vector<GridCell> cells;
    for (Source source : spec.sources) {
        for (long long n : spec.n_values) {
            for (int d : spec.d_values) {
                if (welch_valid_only && n <= d) continue;
                if (source == Source::gaussian_baseline) {
                    for (std::uint64_t seed : spec.seeds) cells.push_back({source, n, d, seed});
                } else {
                    // deterministic source: one cell, seeds do not apply
                    cells.push_back({source, n, d, std::nullopt});
                }
            }
        }
    }
    return cells;
}

inline std::vector<GramReport> run_grid_cells(const std::vector<GridCell>& cells,
                                              PrimeTable& primes, unsigned threads) {
    int max_d = 0;
    for (const auto& c : cells) max_d = std::max(max_d, c.d);
    if (max_d > 0) primes.ensure_count(static_cast<std::size_t>(max_d) / 2 + 1);

    std::vector<GramReport> reports(cells.size());
    parallel_for(cells.size(), threads, [&](std::size_t i) {
        const GridCell& cell = cells[i];
        Codebook cb;
        if (cell.source == Source::gaussian_baseline) {
            cb = generate_gaussian({*cell.seed, cell.n, cell.d});
        } else {
            cb = generate_static(build_static(cell.d, primes), cell.n);
        }
        reports[i] = report(cb);
    });
    return reports;
}

} // namespace detail

/// One GramReport per (source, n, d[, seed]) cell, plus a paired
/// per-source summary. Prime cells are deterministic and ignore seeds.
inline OrthogonalityResult run_orthogonality_grid(const GridSpec& spec, PrimeTable& primes,
                                                  unsigned threads = 0) {
    validate_grid(spec);
    const auto cells = detail::enumerate_cells(spec, /*welch_valid_only=*/false);
    OrthogonalityResult result;
    result.reports = detail::run_grid_cells(cells, primes, threads);

    for (Source source : spec.sources) {
        std::vector<double> e_rms, ratios;
        for (const GramReport& rep : result.reports) {
            if (rep.meta.source != source) continue;
            e_rms.push_back(rep.e_rms);
            if (rep.optimality_ratio) ratios.push_back(*rep.optimality_ratio);
        }
        SourceSummary s;
        s.mean_e_rms = detail::mean(e_rms);
        s.median_e_rms = detail::median(e_rms);
        if (!ratios.empty()) {
            s.mean_ratio = detail::mean(ratios);
            s.median_ratio = detail::median(ratios);
        }
        result.summary[source] = s;
    }

    const bool has_prime = std::find(spec.sources.begin(), spec.sources.end(),
                                     Source::static_prime) != spec.sources.end();
    const bool has_gauss = std::find(spec.sources.begin(), spec.sources.end(),
                                     Source::gaussian_baseline) != spec.sources.end();
    if (has_prime && has_gauss) {
        for (long long n : spec.n_values) {
            for (int d : spec.d_values) {
                OrthogonalityResult::CellPair pair{n, d, 0.0, 0.0};
                int gauss_count = 0;
                for (const GramReport& rep : result.reports) {
                    if (rep.n != n || rep.dim != d) continue;
                    if (rep.meta.source == Source::static_prime) {
                        pair.prime_e_rms = rep.e_rms;
                    } else if (rep.meta.source == Source::gaussian_baseline) {
                        pair.gaussian_mean_e_rms += rep.e_rms;
                        ++gauss_count;
                    }
                }
                if (gauss_count > 0) pair.gaussian_mean_e_rms /= gauss_count;
                result.cell_pairs.push_back(pair);
            }
        }
    }
    return result;
}

struct PopulationSample {
    long long n = 0;
    int d = 0;
    std::optional<std::uint64_t> seed;
    double optimality_ratio = 0.0;
    double excess_coherence = 0.0;
};

struct PopulationSummary {
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
};

struct WelchPopulation {
    std::vector<GramReport> reports;
    std::map<Source, std::vector<PopulationSample>> samples;
    std::map<Source, PopulationSummary> ratio_quantiles;
    std::map<Source, PopulationSummary> excess_quantiles;
};

/// Optimality-ratio / excess-coherence populations over the Welch-valid
/// (N > D) cells of the grid.
inline WelchPopulation run_welch_population(const GridSpec& spec, PrimeTable& primes,
                                            unsigned threads = 0) {
    validate_grid(spec);
    const auto cells = detail::enumerate_cells(spec, /*welch_valid_only=*/true);
    if (cells.empty()) {
        throw empty_population_error("no cells with N > D in the grid");
    }
    WelchPopulation pop;
    pop.reports = detail::run_grid_cells(cells, primes, threads);
    for (const GramReport& rep : pop.reports) {
        if (!rep.optimality_ratio || !rep.excess_coherence) continue;
        pop.samples[rep.meta.source].push_back(
            {rep.n, rep.dim, rep.meta.seed, *rep.optimality_ratio, *rep.excess_coherence});
    }
    if (pop.samples.empty()) {
        throw empty_population_error("no valid Welch samples in the grid");
    }
    for (const auto& [source, samples] : pop.samples) {
        std::vector<double> ratios, excesses;
        for (const PopulationSample& s : samples) {
            ratios.push_back(s.optimality_ratio);
            excesses.push_back(s.excess_coherence);
        }
        pop.ratio_quantiles[source] = {detail::quantile(ratios, 0.25),
                                       detail::quantile(ratios, 0.5),
                                       detail::quantile(ratios, 0.75)};
        pop.excess_quantiles[source] = {detail::quantile(excesses, 0.25),
                                        detail::quantile(excesses, 0.5),
                                        detail::quantile(excesses, 0.75)};
    }
    return pop;
}

// ----------------------------------------------------------------------
// Dual-regime reconstruction study
// ----------------------------------------------------------------------

enum class Regime { manifold, hashing };

inline const char* to_string(Regime r) {
    return r == Regime::manifold ? "manifold" : "hashing";
}

struct RegimeCell {
    std::size_t dataset_index = 0;
    double sigma = 0.0;
    int d_out = 0;
};

struct RegimeResult {
    DatasetKind kind = DatasetKind::spiral;
    double noise = 0.0;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    int d_out = 0;
    Regime regime = Regime::hashing;
    double injectivity_radius = 0.0;
    double data_max_abs = 0.0;
    double recon_mse = 0.0;
    double latent_norm_min = 0.0;
    double latent_norm_max = 0.0;
    double pca_var_fraction = 0.0;
    Eigen::MatrixXd pca_scores; // N x 2, plots only
    double intra_class_sim = 0.0;
    double inter_class_sim = 0.0;
};

/// Default sigma treated as a manifold-regime claim: cells at this sigma
/// whose data exceeds the injectivity radius are misconfigurations.
inline const std::vector<double> kManifoldSigmas = {0.007};

inline std::vector<RegimeResult> run_regime_cells(
    const std::vector<Dataset2D>& datasets, const std::vector<RegimeCell>& cells,
    PrimeTable& primes, unsigned threads = 0,
    const std::vector<double>& manifold_sigmas = kManifoldSigmas) {
    if (datasets.empty() || cells.empty()) {
        throw empty_input_error("regime study needs datasets and cells");
    }
    int max_d = 0;
    for (const auto& c : cells) max_d = std::max(max_d, c.d_out);
    primes.ensure_count(static_cast<std::size_t>(max_d));

    std::vector<RegimeResult> results(cells.size());
    detail::parallel_for(cells.size(), threads, [&](std::size_t i) {
        const RegimeCell& cell = cells[i];
        const Dataset2D& ds = datasets.at(cell.dataset_index);
        const auto n = ds.points.rows();
        PrimeBasis basis = build_dynamic(2, cell.d_out, cell.sigma, primes);

        RegimeResult r;
        r.kind = ds.kind;
        r.noise = ds.noise;
        r.seed = ds.seed;
        r.sigma = cell.sigma;
        r.d_out = cell.d_out;
        r.injectivity_radius = basis.injectivity_radius();
        r.data_max_abs = ds.points.cwiseAbs().maxCoeff();
        const bool overdetermined = cell.d_out >= 2 * 2;
        r.regime = (overdetermined && r.data_max_abs < r.injectivity_radius)
                       ? Regime::manifold
                       : Regime::hashing;
        const bool claims_manifold =
            std::find(manifold_sigmas.begin(), manifold_sigmas.end(), cell.sigma) !=
            manifold_sigmas.end();
        if (claims_manifold && r.regime != Regime::manifold) {
            throw injectivity_violation_error(
                std::string("dataset ") + to_string(ds.kind) + " (noise " +
                format_double(ds.noise) + ") exceeds the injectivity radius " +
                format_double(r.injectivity_radius) + " at sigma " +
                format_double(cell.sigma) + ", D " + std::to_string(cell.d_out));
        }

        const Eigen::MatrixXd latent = forward(basis, ds.points);
        const Eigen::MatrixXd recon = reverse(basis, latent);
        r.recon_mse = (recon - ds.points).squaredNorm() /
                      static_cast<double>(ds.points.size());

        const Eigen::VectorXd norms = latent.rowwise().norm();
        r.latent_norm_min = norms.minCoeff();
        r.latent_norm_max = norms.maxCoeff();

        // Top-2 PCA of the latent cloud, for plots only.
        Eigen::MatrixXd centered = latent.rowwise() - latent.colwise().mean();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success) throw numerical_error("PCA SVD failed");
        r.pca_scores = centered * svd.matrixV().leftCols(2);
        const double total_var = svd.singularValues().squaredNorm();
        r.pca_var_fraction =
            total_var > 0.0
                ? (svd.singularValues().head(2).squaredNorm() / total_var)
                : 0.0;

        // Mean latent cosine similarity within and across classes.
        double intra = 0.0, inter = 0.0;
        long long intra_count = 0, inter_count = 0;
        const Eigen::MatrixXd gram = latent * latent.transpose();
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = a + 1; b < n; ++b) {
                const double sim = gram(a, b) / (norms(a) * norms(b));
                if (ds.labels[static_cast<std::size_t>(a)] ==
                    ds.labels[static_cast<std::size_t>(b)]) {
                    intra += sim;
                    ++intra_count;
                } else {
                    inter += sim;
                    ++inter_count;
                }
            }
        }
        r.intra_class_sim = intra_count ? intra / static_cast<double>(intra_count) : 0.0;
        r.inter_class_sim = inter_count ? inter / static_cast<double>(inter_count) : 0.0;
        results[i] = std::move(r);
    });
    return results;
}

/// Cross product of datasets, sigmas and output dimensions.
inline std::vector<RegimeResult> run_regime_study(
    const std::vector<Dataset2D>& datasets, const std::vector<double>& sigmas,
    const std::vector<int>& d_outs, PrimeTable& primes, unsigned threads = 0,
    const std::vector<double>& manifold_sigmas = kManifoldSigmas) {
    std::vector<RegimeCell> cells;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        for (double sigma : sigmas) {
            for (int d : d_outs) cells.push_back({i, sigma, d});
        }
    }
    return run_regime_cells(datasets, cells, primes, threads, manifold_sigmas);
}

// ----------------------------------------------------------------------
// Classification study
// ----------------------------------------------------------------------

struct ClassificationConfig {
    std::vector<double> sigmas{0.007, 0.02, 1.0};
    std::vector<int> d_outs{4, 128};
    Eigen::Index points = 600;
    std::uint64_t seed = 42;
    // Noisy variants. The spiral generator divides its noise by 3*pi when
    // scaling to the unit disk, so the circles default uses the same
    // effective coordinate noise.
    double spiral_noise = 0.5;
    double circles_noise = 0.5 / (3.0 * std::numbers::pi);
};

inline const std::array<const char*, 4> kClassificationDatasets = {
    "clean_spiral", "noisy_spiral", "clean_circles", "noisy_circles"};

struct ClassificationCell {
    double sigma = 0.0;
    int d_out = 0;
    Eigen::Matrix4d centered;   // cosine sims of mean-centered flattened reconstructions
    Eigen::Matrix4d uncentered; // raw cosine sims
};

struct ClassificationStudy {
    ClassificationConfig config;
    std::vector<ClassificationCell> cells;
};

/// Encode-decode the four fixed datasets and compare flattened
/// reconstructions pairwise. Clean/noisy variants share each shape's seed
/// so they perturb identical points; the two shapes use offset seeds so
/// their point parameters are unrelated.
inline ClassificationStudy run_classification_study(const ClassificationConfig& cfg,
                                                    PrimeTable& primes,
                                                    unsigned threads = 0) {
    if (cfg.sigmas.empty() || cfg.d_outs.empty()) {
        throw empty_input_error("classification study needs sigmas and d_outs");
    }
    const std::array<Dataset2D, 4> datasets = {
        make_spiral(cfg.points, 0.0, cfg.seed),
        make_spiral(cfg.points, cfg.spiral_noise, cfg.seed),
        make_circles(cfg.points, 0.0, cfg.seed + 1),
        make_circles(cfg.points, cfg.circles_noise, cfg.seed + 1),
    };

    std::vector<std::pair<double, int>> grid;
    for (double s : cfg.sigmas) {
        for (int d : cfg.d_outs) grid.emplace_back(s, d);
    }
    int max_d = 0;
    for (auto [s, d] : grid) max_d = std::max(max_d, d);
    primes.ensure_count(static_cast<std::size_t>(max_d));

    ClassificationStudy study;
    study.config = cfg;
    study.cells.resize(grid.size());
    detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
        const auto [sigma, d_out] = grid[i];
        PrimeBasis basis = build_dynamic(2, d_out, sigma, primes);
        std::array<Eigen::VectorXd, 4> flat;
        for (std::size_t a = 0; a < 4; ++a) {
            const Eigen::MatrixXd recon = reverse(basis, forward(basis, datasets[a].points));
            flat[a] = Eigen::Map<const Eigen::VectorXd>(recon.data(), recon.size());
        }
        ClassificationCell cell;
        cell.sigma = sigma;
        cell.d_out = d_out;
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) {
                const Eigen::VectorXd& va = flat[a];
                const Eigen::VectorXd& vb = flat[b];
                cell.uncentered(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    va.dot(vb) / (va.norm() * vb.norm());
                const Eigen::VectorXd ca = va.array() - va.mean();
                const Eigen::VectorXd cb = vb.array() - vb.mean();
                cell.centered(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    ca.dot(cb) / (ca.norm() * cb.norm());
            }
        }
        study.cells[i] = std::move(cell);
    });
    return study;
}

// ----------------------------------------------------------------------
// Complexity smoke benchmark
// ----------------------------------------------------------------------

struct BenchConfig {
    std::vector<long long> n_values{65536, 131072, 262144};
    std::vector<int> d_values{128, 256};
    int d_in = 8;
    int trials = 5;
};

struct BenchRow {
    std::string op;
    long long n = 0;
    int d_out = 0;
    double seconds = 0.0; // median over trials
};

struct BenchResult {
    BenchConfig config;
    std::vector<BenchRow> rows;

    std::optional<double> seconds(const std::string& op, long long n, int d_out) const {
        for (const BenchRow& r : rows) {
            if (r.op == op && r.n == n && r.d_out == d_out) return r.seconds;
        }
        return std::nullopt;
    }
};

/// Wall time medians for static init, static generation, dynamic forward
/// and cached reverse across the N sweep (first D), plus a dynamic
/// forward D sweep at the first N.
inline BenchResult bench(const BenchConfig& cfg, PrimeTable& primes) {
    if (cfg.n_values.empty() || cfg.d_values.empty() || cfg.trials < 1) {
        throw empty_input_error("bench needs sizes and at least one trial");
    }
    const int d0 = cfg.d_values.front();
    int max_d = d0;
    for (int d : cfg.d_values) max_d = std::max(max_d, d);
    primes.ensure_count(static_cast<std::size_t>(max_d) / 2 * cfg.d_in + 1);

    using clock = std::chrono::steady_clock;
    auto elapsed = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    struct Key {
        std::string op;
        long long n;
        int d;
        bool operator<(const Key& o) const {
            return std::tie(op, n, d) < std::tie(o.op, o.n, o.d);
        }
    };
    std::map<Key, std::vector<double>> raw;

    double sink = 0.0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        for (long long n : cfg.n_values) {
            // init is microseconds; measure a repeat loop and divide
            constexpr int kInitReps = 1024;
            auto t0 = clock::now();
            for (int rep = 0; rep < kInitReps; ++rep) {
                StaticBasis b = build_static(d0, primes);
                sink += b.omega(b.omega.size() - 1);
            }
            raw[{"static_init", n, d0}].push_back(elapsed(t0) / kInitReps);

            StaticBasis sbasis = build_static(d0, primes);
            t0 = clock::now();
            Codebook cb = generate_static(sbasis, n);
            raw[{"static_generate", n, d0}].push_back(elapsed(t0));
            sink += cb.rows(n - 1, 0);

            PrimeBasis dbasis = build_dynamic(cfg.d_in, d0, 0.25, primes);
            Eigen::MatrixXd xs = Eigen::MatrixXd::Random(n, cfg.d_in);
            t0 = clock::now();
            Eigen::MatrixXd zs = forward(dbasis, xs);
            raw[{"dynamic_forward", n, d0}].push_back(elapsed(t0));
            sink += zs(n - 1, 0);

            dbasis.decoder(); // cache outside the timed region
            t0 = clock::now();
            Eigen::MatrixXd back = reverse(dbasis, zs);
            raw[{"cached_reverse", n, d0}].push_back(elapsed(t0));
            sink += back(n - 1, 0);
        }
        for (int d : cfg.d_values) {
            const long long n = cfg.n_values.front();
            PrimeBasis dbasis = build_dynamic(cfg.d_in, d, 0.25, primes);
            Eigen::MatrixXd xs = Eigen::MatrixXd::Random(n, cfg.d_in);
            auto t0 = clock::now();
            Eigen::MatrixXd zs = forward(dbasis, xs);
            raw[{"dynamic_forward_dsweep", n, d}].push_back(elapsed(t0));
            sink += zs(n - 1, 0);
        }
    }
    if (!std::isfinite(sink)) throw numerical_error("benchmark produced non-finite values");

    BenchResult result;
    result.config = cfg;
    for (auto& [key, samples] : raw) {
        result.rows.push_back({key.op, key.n, key.d, detail::median(samples)});
    }
    return result;
}

// ----------------------------------------------------------------------
// Report bundles: config.json + reports.csv + population CSVs + plots/
// ----------------------------------------------------------------------

struct Bundle {
    std::filesystem::path dir;
    nlohmann::json config;
    std::uint64_t config_hash = 0;
};

/// Create the bundle directory and write config.json. The hash covers the
/// configuration itself and is embedded in every emitted record.
inline Bundle open_bundle(const std::filesystem::path& dir, nlohmann::json config) {
    std::filesystem::create_directories(dir / "plots");
    Bundle bundle;
    bundle.dir = dir;
    bundle.config_hash = fnv1a64(config.dump());
    config["config_hash"] = bundle.config_hash;
    bundle.config = std::move(config);
    std::ofstream out(dir / "config.json", std::ios::trunc);
    if (!out) throw io_error("cannot write " + (dir / "config.json").string());
    out << bundle.config.dump(2) << '\n';
    return bundle;
}

inline void write_reports_csv(const Bundle& bundle, const std::vector<GramReport>& reports) {
    std::ofstream out(bundle.dir / "reports.csv", std::ios::trunc);
    if (!out) throw io_error("cannot write reports.csv");
    out << report_csv_header() << '\n';
    for (const GramReport& rep : reports) {
        out << report_csv_row(rep, bundle.config_hash) << '\n';
    }
}

inline void write_population_csvs(const Bundle& bundle, const WelchPopulation& pop) {
    for (const auto& [source, samples] : pop.samples) {
        const std::string name = std::string("population_") + to_string(source) + ".csv";
        std::ofstream out(bundle.dir / name, std::ios::trunc);
        if (!out) throw io_error("cannot write " + name);
        out << "n,dim,seed,optimality_ratio,excess_coherence,config_hash\n";
        for (const PopulationSample& s : samples) {
            out << s.n << ',' << s.d << ','
                << (s.seed ? std::to_string(*s.seed) : std::string()) << ','
                << format_double(s.optimality_ratio) << ','
                << format_double(s.excess_coherence) << ',' << bundle.config_hash << '\n';
        }
    }
}

inline void write_orthogonality_plots(const Bundle& bundle, const GridSpec& spec,
                                      const OrthogonalityResult& result) {
    std::vector<std::string> row_labels, col_labels;
    for (long long n : spec.n_values) row_labels.push_back("N=" + std::to_string(n));
    for (int d : spec.d_values) col_labels.push_back("D=" + std::to_string(d));

    for (Source source : spec.sources) {
        Eigen::MatrixXd grid(spec.n_values.size(), spec.d_values.size());
        for (std::size_t r = 0; r < spec.n_values.size(); ++r) {
            for (std::size_t c = 0; c < spec.d_values.size(); ++c) {
                double sum = 0.0;
                int count = 0;
                for (const GramReport& rep : result.reports) {
                    if (rep.meta.source == source && rep.n == spec.n_values[r] &&
                        rep.dim == spec.d_values[c]) {
                        sum += rep.e_rms;
                        ++count;
                    }
                }
                grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    count ? sum / count : std::nan("");
            }
        }
        svg::write_heatmap(
            (bundle.dir / "plots" / (std::string("e_rms_") + to_string(source) + ".svg"))
                .string(),
            std::string("E_RMS, ") + to_string(source), grid, row_labels, col_labels);
    }

    // Per-cell similarity log-density overlays (first seed for gaussian).
    for (long long n : spec.n_values) {
        for (int d : spec.d_values) {
            std::vector<svg::Series> series;
            for (const GramReport& rep : result.reports) {
                if (rep.n != n || rep.dim != d) continue;
                if (rep.meta.source == Source::gaussian_baseline &&
                    rep.meta.seed != std::optional<std::uint64_t>(spec.seeds.front())) {
                    continue;
                }
                series.push_back({to_string(rep.meta.source),
                                  rep.meta.source == Source::static_prime ? "#00a0b0"
                                                                          : "#cc333f",
                                  log_density(rep.histogram)});
            }
            svg::write_step_histogram(
                (bundle.dir / "plots" /
                 ("density_n" + std::to_string(n) + "_d" + std::to_string(d) + ".svg"))
                    .string(),
                "similarity log-density, N=" + std::to_string(n) + " D=" + std::to_string(d),
                -1.0, 1.0, series, "log10 density");
        }
    }
}

inline void write_welch_plots(const Bundle& bundle, const WelchPopulation& pop) {
    auto histogram_series = [&](bool ratio) {
        double hi = 0.0;
        for (const auto& [source, samples] : pop.samples) {
            for (const PopulationSample& s : samples) {
                hi = std::max(hi, ratio ? s.optimality_ratio : s.excess_coherence);
            }
        }
        hi = hi > 0.0 ? hi * 1.05 : 1.0;
        constexpr int kBins = 60;
        std::vector<svg::Series> series;
        for (const auto& [source, samples] : pop.samples) {
            std::vector<double> bins(kBins, 0.0);
            for (const PopulationSample& s : samples) {
                const double v = ratio ? s.optimality_ratio : s.excess_coherence;
                int b = static_cast<int>(v / hi * kBins);
                b = std::clamp(b, 0, kBins - 1);
                bins[static_cast<std::size_t>(b)] += 1.0;
            }
            series.push_back({to_string(source),
                              source == Source::static_prime ? "#00a0b0" : "#cc333f",
                              std::move(bins)});
        }
        return std::make_pair(hi, series);
    };

    const auto [ratio_hi, ratio_series] = histogram_series(true);
    svg::write_step_histogram((bundle.dir / "plots" / "optimality_ratio.svg").string(),
                              "optimality ratio population", 0.0, ratio_hi, ratio_series,
                              "count");
    const auto [excess_hi, excess_series] = histogram_series(false);
    svg::write_step_histogram((bundle.dir / "plots" / "excess_coherence.svg").string(),
                              "excess coherence population", 0.0, excess_hi, excess_series,
                              "count");
}

inline void write_regime_bundle(const Bundle& bundle, const std::vector<Dataset2D>& datasets,
                                const std::vector<RegimeResult>& results) {
    {
        std::ofstream out(bundle.dir / "reports.csv", std::ios::trunc);
        if (!out) throw io_error("cannot write reports.csv");
        out << "kind,noise,seed,sigma,d_out,regime,injectivity_radius,data_max_abs,"
               "recon_mse,latent_norm_min,latent_norm_max,pca_var_fraction,"
               "intra_class_sim,inter_class_sim,config_hash\n";
        for (const RegimeResult& r : results) {
            out << to_string(r.kind) << ',' << format_double(r.noise) << ',' << r.seed << ','
                << format_double(r.sigma) << ',' << r.d_out << ',' << to_string(r.regime)
                << ',' << format_double(r.injectivity_radius) << ','
                << format_double(r.data_max_abs) << ',' << format_double(r.recon_mse) << ','
                << format_double(r.latent_norm_min) << ','
                << format_double(r.latent_norm_max) << ','
                << format_double(r.pca_var_fraction) << ','
                << format_double(r.intra_class_sim) << ','
                << format_double(r.inter_class_sim) << ',' << bundle.config_hash << '\n';
        }
    }
    for (const Dataset2D& ds : datasets) {
        std::string name = std::string(to_string(ds.kind)) + "_noise" +
                           format_double(ds.noise) + ".csv";
        std::ofstream out(bundle.dir / name, std::ios::trunc);
        write_csv(ds, out);
    }
    for (const RegimeResult& r : results) {
        const Dataset2D* source = nullptr;
        for (const Dataset2D& ds : datasets) {
            if (ds.kind == r.kind && ds.noise == r.noise) source = &ds;
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "latent_%s_noise%g_sigma%g_d%d.svg",
                      to_string(r.kind), r.noise, r.sigma, r.d_out);
        svg::write_scatter((bundle.dir / "plots" / buf).string(),
                           std::string(to_string(r.kind)) + " latent PCA, sigma=" +
                               format_double(r.sigma) + " D=" + std::to_string(r.d_out),
                           r.pca_scores, source ? source->labels : std::vector<int>{});
    }
}

inline void write_classification_bundle(const Bundle& bundle,
                                        const ClassificationStudy& study) {
    {
        std::ofstream out(bundle.dir / "reports.csv", std::ios::trunc);
        if (!out) throw io_error("cannot write reports.csv");
        out << "sigma,d_out,dataset_a,dataset_b,centered_sim,uncentered_sim,config_hash\n";
        for (const ClassificationCell& cell : study.cells) {
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    out << format_double(cell.sigma) << ',' << cell.d_out << ','
                        << kClassificationDatasets[static_cast<std::size_t>(a)] << ','
                        << kClassificationDatasets[static_cast<std::size_t>(b)] << ','
                        << format_double(cell.centered(a, b)) << ','
                        << format_double(cell.uncentered(a, b)) << ',' << bundle.config_hash
                        << '\n';
                }
            }
        }
    }
    for (const ClassificationCell& cell : study.cells) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "similarity_sigma%g_d%d.svg", cell.sigma,
                      cell.d_out);
        std::vector<std::string> labels(kClassificationDatasets.begin(),
                                        kClassificationDatasets.end());
        svg::write_heatmap((bundle.dir / "plots" / buf).string(),
                           "centered cosine similarity, sigma=" + format_double(cell.sigma) +
                               " D=" + std::to_string(cell.d_out),
                           cell.centered, labels, labels);
    }
}

inline void write_bench_csv(const Bundle& bundle, const BenchResult& result) {
    std::ofstream out(bundle.dir / "reports.csv", std::ios::trunc);
    if (!out) throw io_error("cannot write reports.csv");
    out << "op,n,d_out,seconds_median,config_hash\n";
    for (const BenchRow& row : result.rows) {
        out << row.op << ',' << row.n << ',' << row.d_out << ','
            << format_double(row.seconds) << ',' << bundle.config_hash << '\n';
    }
}

// ----------------------------------------------------------------------
// Acceptance assertions, shared by `eval ... --check` and the acceptance
// suite. Each returns human-readable failure lines; empty means pass.
// ----------------------------------------------------------------------

/// Welch bound must lower-bound measured coherence in every valid report.
inline std::vector<std::string> check_welch_sanity(const std::vector<GramReport>& reports) {
    std::vector<std::string> failures;
    for (const GramReport& rep : reports) {
        if (!rep.welch) continue;
        if (!(rep.mu_max >= *rep.welch - 1e-12)) {
            failures.push_back(std::string("mu_max ") + format_double(rep.mu_max) +
                               " below welch " + format_double(*rep.welch) + " for " +
                               to_string(rep.meta.source) + " N=" + std::to_string(rep.n) +
                               " D=" + std::to_string(rep.dim));
        }
    }
    return failures;
}

/// Prime must beat the gaussian baseline on grid-mean e_rms and in at
/// least 7 of 9 cells (scaled to the actual cell count) against the
/// per-cell gaussian seed-mean.
inline std::vector<std::string> check_orthogonality(const OrthogonalityResult& result) {
    std::vector<std::string> failures;
    if (result.cell_pairs.empty()) {
        failures.push_back("orthogonality check needs both prime and gaussian sources");
        return failures;
    }
    const auto prime_it = result.summary.find(Source::static_prime);
    const auto gauss_it = result.summary.find(Source::gaussian_baseline);
    if (prime_it == result.summary.end() || gauss_it == result.summary.end()) {
        failures.push_back("missing per-source summary");
        return failures;
    }
    if (!(prime_it->second.mean_e_rms < gauss_it->second.mean_e_rms)) {
        failures.push_back("grid-mean e_rms: prime " +
                           format_double(prime_it->second.mean_e_rms) +
                           " not below gaussian " +
                           format_double(gauss_it->second.mean_e_rms));
    }
    std::size_t wins = 0;
    for (const auto& pair : result.cell_pairs) {
        if (pair.prime_e_rms < pair.gaussian_mean_e_rms) ++wins;
    }
    const std::size_t needed = (result.cell_pairs.size() * 7 + 8) / 9;
    if (wins < needed) {
        failures.push_back("prime wins " + std::to_string(wins) + "/" +
                           std::to_string(result.cell_pairs.size()) + " cells, needs " +
                           std::to_string(needed));
    }
    auto sanity = check_welch_sanity(result.reports);
    failures.insert(failures.end(), sanity.begin(), sanity.end());
    return failures;
}

/// Population ordering of optimality ratio and excess coherence, with the
/// gaussian-vs-prime median factor of 2.
inline std::vector<std::string> check_welch_population(const WelchPopulation& pop) {
    std::vector<std::string> failures;
    const auto pr = pop.ratio_quantiles.find(Source::static_prime);
    const auto gr = pop.ratio_quantiles.find(Source::gaussian_baseline);
    const auto pe = pop.excess_quantiles.find(Source::static_prime);
    const auto ge = pop.excess_quantiles.find(Source::gaussian_baseline);
    if (pr == pop.ratio_quantiles.end() || gr == pop.ratio_quantiles.end() ||
        pe == pop.excess_quantiles.end() || ge == pop.excess_quantiles.end()) {
        failures.push_back("welch check needs both prime and gaussian populations");
        return failures;
    }
    if (!(pr->second.p50 < gr->second.p50)) {
        failures.push_back("median optimality_ratio: prime " + format_double(pr->second.p50) +
                           " not below gaussian " + format_double(gr->second.p50));
    }
    if (!(gr->second.p50 > 2.0 * pr->second.p50)) {
        failures.push_back("gaussian median ratio " + format_double(gr->second.p50) +
                           " not above 2x prime median " + format_double(pr->second.p50));
    }
    if (!(pe->second.p50 < ge->second.p50)) {
        failures.push_back("median excess_coherence: prime " + format_double(pe->second.p50) +
                           " not below gaussian " + format_double(ge->second.p50));
    }
    auto sanity = check_welch_sanity(pop.reports);
    failures.insert(failures.end(), sanity.begin(), sanity.end());
    return failures;
}

/// Manifold cell reconstructs, hashing cell fails by at least 1e3x, and
/// every latent cloud sits on the sqrt(D/2) sphere.
inline std::vector<std::string> check_regimes(const std::vector<RegimeResult>& results) {
    std::vector<std::string> failures;
    const RegimeResult* low = nullptr;
    const RegimeResult* high = nullptr;
    for (const RegimeResult& r : results) {
        if (r.kind == DatasetKind::spiral && r.noise == 0.0) {
            if (r.sigma == 0.007 && r.d_out == 128) low = &r;
            if (r.sigma == 1.0 && r.d_out == 4) high = &r;
        }
    }
    if (!low || !high) {
        failures.push_back("regime check needs the noiseless spiral cells "
                           "(sigma=0.007, D=128) and (sigma=1.0, D=4)");
        return failures;
    }
    if (!(high->recon_mse >= 1e3 * low->recon_mse)) {
        failures.push_back("hashing-regime mse " + format_double(high->recon_mse) +
                           " not >= 1e3 x manifold mse " + format_double(low->recon_mse));
    }
    if (low->regime != Regime::manifold) failures.push_back("low cell not flagged manifold");
    if (high->regime != Regime::hashing) failures.push_back("high cell not flagged hashing");
    for (const RegimeResult& r : results) {
        const double expected = std::sqrt(static_cast<double>(r.d_out) / 2.0);
        if (std::abs(r.latent_norm_min - expected) > 1e-9 ||
            std::abs(r.latent_norm_max - expected) > 1e-9) {
            failures.push_back(std::string("latent norms off the torus for ") +
                               to_string(r.kind) + " sigma=" + format_double(r.sigma) +
                               " D=" + std::to_string(r.d_out));
        }
    }
    // On noiseless data the regime flag must agree with the observed
    // reconstruction error ordering.
    for (const RegimeResult& a : results) {
        if (a.noise != 0.0 || a.regime != Regime::manifold) continue;
        for (const RegimeResult& b : results) {
            if (b.noise != 0.0 || b.kind != a.kind || b.regime != Regime::hashing) continue;
            if (!(a.recon_mse < b.recon_mse)) {
                failures.push_back(std::string("manifold cell mse not below hashing cell "
                                               "mse on noiseless ") +
                                   to_string(a.kind));
            }
        }
    }
    return failures;
}

/// Centered intra-class similarity dominates inter-class at D=128 for the
/// linearized scales, and the low scale is at least as intra-similar as
/// the full-reconstruction scale.
inline std::vector<std::string> check_classification(const ClassificationStudy& study) {
    std::vector<std::string> failures;
    auto cell = [&](double sigma, int d) -> const ClassificationCell* {
        for (const ClassificationCell& c : study.cells) {
            if (c.sigma == sigma && c.d_out == d) return &c;
        }
        return nullptr;
    };
    const ClassificationCell* low = cell(0.007, 128);
    const ClassificationCell* mid = cell(0.02, 128);
    const ClassificationCell* full = cell(1.0, 128);
    if (!low || !mid || !full) {
        failures.push_back("classification check needs D=128 cells at s=0.007, 0.02, 1.0");
        return failures;
    }
    for (const ClassificationCell* c : {low, mid}) {
        const double intra_spiral = c->centered(0, 1);
        const double intra_circles = c->centered(2, 3);
        double max_inter = 0.0;
        for (int a : {0, 1}) {
            for (int b : {2, 3}) max_inter = std::max(max_inter, std::abs(c->centered(a, b)));
        }
        if (!(intra_spiral > max_inter) || !(intra_circles > max_inter)) {
            failures.push_back("intra-class similarity does not dominate inter-class at s=" +
                               format_double(c->sigma) +
                               " (intra spiral " + format_double(intra_spiral) +
                               ", intra circles " + format_double(intra_circles) +
                               ", max |inter| " + format_double(max_inter) + ")");
        }
    }
    if (!(low->centered(0, 1) >= full->centered(0, 1)) ||
        !(low->centered(2, 3) >= full->centered(2, 3))) {
        failures.push_back("intra-class similarity at s=0.007 below s=1.0");
    }
    return failures;
}

/// Linear scaling bands from the complexity table: doubling N doubles
/// static generation within [1.5, 3.0]; static init does not grow with N;
/// doubling D doubles the dynamic forward pass within the same band.
inline std::vector<std::string> check_bench(const BenchResult& result) {
    std::vector<std::string> failures;
    const int d0 = result.config.d_values.front();
    const auto& ns = result.config.n_values;
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
        if (ns[i + 1] != 2 * ns[i]) continue;
        const auto a = result.seconds("static_generate", ns[i], d0);
        const auto b = result.seconds("static_generate", ns[i + 1], d0);
        if (!a || !b) continue;
        const double ratio = *b / *a;
        if (ratio < 1.5 || ratio > 3.0) {
            failures.push_back("static_generate N-doubling ratio " + format_double(ratio) +
                               " outside [1.5, 3.0] at N=" + std::to_string(ns[i]));
        }
    }
    double init_min = std::numeric_limits<double>::infinity(), init_max = 0.0;
    for (long long n : ns) {
        if (const auto s = result.seconds("static_init", n, d0)) {
            init_min = std::min(init_min, *s);
            init_max = std::max(init_max, *s);
        }
    }
    if (init_max > 1.5 * init_min) {
        failures.push_back("static_init time varies by " + format_double(init_max / init_min) +
                           "x across the N sweep (must stay within 1.5x)");
    }
    const auto& ds = result.config.d_values;
    for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
        if (ds[i + 1] != 2 * ds[i]) continue;
        const auto a = result.seconds("dynamic_forward_dsweep", ns.front(), ds[i]);
        const auto b = result.seconds("dynamic_forward_dsweep", ns.front(), ds[i + 1]);
        if (!a || !b) continue;
        const double ratio = *b / *a;
        if (ratio < 1.5 || ratio > 3.0) {
            failures.push_back("dynamic_forward D-doubling ratio " + format_double(ratio) +
                               " outside [1.5, 3.0] at D=" + std::to_string(ds[i]));
        }
    }
    return failures;
}

} // namespace primefreq
