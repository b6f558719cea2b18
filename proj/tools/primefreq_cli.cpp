// Command line front end: codebook generation, encode/decode, the
// evaluation families and the complexity benchmark.
//
// Exit codes are a stable contract: 0 success, 2 usage or misconfigured
// flags, 3 data shape, 4 numerical failure, 5 acceptance check failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "primefreq/primefreq.hpp"

namespace pf = primefreq;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDataShape = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitCheckFailed = 5;

struct GlobalOptions {
    std::string prime_cache;
    unsigned threads = 0;
    bool json = false;
};

pf::PrimeTable load_table(const GlobalOptions& opts) {
    if (!opts.prime_cache.empty() && std::filesystem::exists(opts.prime_cache)) {
        return pf::PrimeTable::load_cache(opts.prime_cache);
    }
    return pf::PrimeTable{};
}

void store_table(const GlobalOptions& opts, const pf::PrimeTable& table) {
    if (!opts.prime_cache.empty()) table.save_cache(opts.prime_cache);
}

// "-" means standard output.
void write_matrix_out(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>* header) {
    if (path == "-") {
        pf::write_matrix_csv(std::cout, m, header);
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw pf::io_error("cannot open output file: " + path);
    pf::write_matrix_csv(out, m, header);
}

Eigen::MatrixXd read_matrix_in(const std::string& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw pf::io_error("cannot open input file: " + path);
    return pf::read_matrix_csv(in, skip_header);
}

std::vector<std::string> column_names(const std::string& prefix, int count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

int finish_check(const std::vector<std::string>& failures) {
    if (failures.empty()) {
        std::cerr << "check: all assertions passed\n";
        return 0;
    }
    for (const std::string& f : failures) std::cerr << "check failed: " << f << '\n';
    return kExitCheckFailed;
}

// ---------------------------------------------------------------- static

struct StaticArgs {
    long long n = 0;
    int dim = 0;
    std::string out = "-";
    bool header = false;
};

int cmd_static(const StaticArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::Codebook cb = pf::generate_static(pf::build_static(args.dim, table), args.n);
    std::vector<std::string> names;
    if (args.header) {
        names = column_names("c", args.dim / 2);
        const auto sins = column_names("s", args.dim / 2);
        names.insert(names.end(), sins.begin(), sins.end());
    }
    write_matrix_out(args.out, cb.rows, args.header ? &names : nullptr);
    store_table(opts, table);
    return 0;
}

// ---------------------------------------------------------- encode/decode

struct CodecArgs {
    int d_in = 0;
    int d_out = 0;
    double sigma = 1.0;
    std::string in;
    std::string out = "-";
    bool in_header = false;
    bool out_header = false;
};

int cmd_encode(const CodecArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::PrimeBasis basis = pf::build_dynamic(args.d_in, args.d_out, args.sigma, table);
    const Eigen::MatrixXd xs = read_matrix_in(args.in, args.in_header);
    if (xs.cols() != args.d_in) {
        throw pf::dimension_mismatch_error("input CSV has " + std::to_string(xs.cols()) +
                                           " columns, --din is " + std::to_string(args.d_in));
    }
    const Eigen::MatrixXd zs = pf::forward(basis, xs);
    std::vector<std::string> names;
    if (args.out_header) {
        names = column_names("c", basis.k());
        const auto sins = column_names("s", basis.k());
        names.insert(names.end(), sins.begin(), sins.end());
    }
    write_matrix_out(args.out, zs, args.out_header ? &names : nullptr);
    store_table(opts, table);
    return 0;
}

int cmd_decode(const CodecArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::PrimeBasis basis = pf::build_dynamic(args.d_in, args.d_out, args.sigma, table);
    const Eigen::MatrixXd zs = read_matrix_in(args.in, args.in_header);
    if (zs.cols() != args.d_out) {
        throw pf::dimension_mismatch_error("input CSV has " + std::to_string(zs.cols()) +
                                           " columns, --dout is " + std::to_string(args.d_out));
    }
    std::cerr << "injectivity radius: " << pf::format_double(basis.injectivity_radius())
              << '\n';
    if (args.d_out < 2 * args.d_in) {
        std::cerr << "warning: D < 2d, hashing regime; emitting the least-squares "
                     "solution\n";
    }
    // wrap warning from recovered phases
    const Eigen::Index k = basis.k();
    double max_abs_phase = 0.0;
    for (Eigen::Index i = 0; i < zs.rows(); ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            max_abs_phase =
                std::max(max_abs_phase, std::abs(std::atan2(zs(i, k + j), zs(i, j))));
        }
    }
    if (max_abs_phase > std::numbers::pi - 1e-6) {
        std::cerr << "warning: recovered phases reach the +-pi boundary; "
                     "wrapping likely, reconstruction untrusted\n";
    }
    const Eigen::MatrixXd xs = pf::reverse(basis, zs);
    std::vector<std::string> names;
    if (args.out_header) names = column_names("x", args.d_in);
    write_matrix_out(args.out, xs, args.out_header ? &names : nullptr);
    store_table(opts, table);
    return 0;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
    std::string kind = "spiral";
    long long n = 600;
    double noise = 0.0;
    std::uint64_t seed = 42;
    std::string out = "-";
};

int cmd_synth(const SynthArgs& args) {
    const pf::Dataset2D ds = args.kind == "spiral"
                                 ? pf::make_spiral(args.n, args.noise, args.seed)
                                 : pf::make_circles(args.n, args.noise, args.seed);
    if (args.out == "-") {
        pf::write_csv(ds, std::cout);
    } else {
        std::ofstream out(args.out, std::ios::trunc);
        if (!out) throw pf::io_error("cannot open output file: " + args.out);
        pf::write_csv(ds, out);
    }
    return 0;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
    std::vector<long long> n_values{500, 1000, 2000};
    std::vector<int> d_values{16, 64, 256};
    std::vector<std::uint64_t> seeds{42, 43, 44, 45, 46};
    std::vector<double> sigmas;
    std::vector<int> d_outs{4, 128};
    std::vector<double> noises{0.0, 0.5, 1.5};
    long long points = 600;
    std::uint64_t seed = 42;
    std::string out;
    bool check = false;
    bool custom_regime_grid = false;
};

nlohmann::json grid_config_json(const std::string& family, const EvalArgs& args) {
    nlohmann::json j;
    j["family"] = family;
    j["n_values"] = args.n_values;
    j["d_values"] = args.d_values;
    j["seeds"] = args.seeds;
    j["sources"] = {"static_prime", "gaussian_baseline"};
    j["generator"] = pf::kGeneratorName;
    return j;
}

int cmd_eval_orthogonality(const EvalArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::GridSpec spec;
    spec.n_values = args.n_values;
    spec.d_values = args.d_values;
    spec.seeds = args.seeds;
    const pf::OrthogonalityResult result =
        pf::run_orthogonality_grid(spec, table, opts.threads);

    const pf::Bundle bundle =
        pf::open_bundle(args.out.empty() ? "eval_orthogonality" : args.out,
                        grid_config_json("orthogonality", args));
    pf::write_reports_csv(bundle, result.reports);
    pf::write_orthogonality_plots(bundle, spec, result);

    nlohmann::json summary;
    for (const auto& [source, s] : result.summary) {
        nlohmann::json js;
        js["mean_e_rms"] = s.mean_e_rms;
        js["median_e_rms"] = s.median_e_rms;
        if (s.median_ratio) js["median_optimality_ratio"] = *s.median_ratio;
        summary[pf::to_string(source)] = js;
    }
    summary["config_hash"] = bundle.config_hash;
    if (opts.json) {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::cout << "orthogonality grid written to " << bundle.dir.string() << '\n';
        for (const auto& [source, s] : result.summary) {
            std::cout << "  " << pf::to_string(source)
                      << ": mean e_rms = " << pf::format_double(s.mean_e_rms)
                      << ", median e_rms = " << pf::format_double(s.median_e_rms) << '\n';
        }
    }
    store_table(opts, table);
    return args.check ? finish_check(pf::check_orthogonality(result)) : 0;
}

int cmd_eval_welch(const EvalArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::GridSpec spec;
    spec.n_values = args.n_values;
    spec.d_values = args.d_values;
    spec.seeds = args.seeds;
    const pf::WelchPopulation pop = pf::run_welch_population(spec, table, opts.threads);

    const pf::Bundle bundle = pf::open_bundle(args.out.empty() ? "eval_welch" : args.out,
                                              grid_config_json("welch", args));
    pf::write_reports_csv(bundle, pop.reports);
    pf::write_population_csvs(bundle, pop);
    pf::write_welch_plots(bundle, pop);

    nlohmann::json summary;
    for (const auto& [source, q] : pop.ratio_quantiles) {
        summary[pf::to_string(source)]["optimality_ratio"] = {
            {"p25", q.p25}, {"p50", q.p50}, {"p75", q.p75}};
    }
    for (const auto& [source, q] : pop.excess_quantiles) {
        summary[pf::to_string(source)]["excess_coherence"] = {
            {"p25", q.p25}, {"p50", q.p50}, {"p75", q.p75}};
    }
    summary["config_hash"] = bundle.config_hash;
    if (opts.json) {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::cout << "welch population written to " << bundle.dir.string() << '\n';
        for (const auto& [source, q] : pop.ratio_quantiles) {
            std::cout << "  " << pf::to_string(source)
                      << ": median ratio = " << pf::format_double(q.p50)
                      << ", median excess = "
                      << pf::format_double(pop.excess_quantiles.at(source).p50) << '\n';
        }
    }
    store_table(opts, table);
    return args.check ? finish_check(pf::check_welch_population(pop)) : 0;
}

int cmd_eval_regimes(const EvalArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    std::vector<double> sigmas = args.sigmas.empty() ? std::vector<double>{0.007, 1.0}
                                                     : args.sigmas;
    std::vector<pf::Dataset2D> datasets;
    for (double noise : args.noises) {
        datasets.push_back(pf::make_spiral(args.points, noise, args.seed));
        datasets.push_back(pf::make_circles(args.points, noise, args.seed + 1));
    }

    std::vector<pf::RegimeCell> cells;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        for (double sigma : sigmas) {
            for (int d : args.d_outs) {
                const bool claims_manifold =
                    std::find(pf::kManifoldSigmas.begin(), pf::kManifoldSigmas.end(),
                              sigma) != pf::kManifoldSigmas.end();
                // The default grid pairs the manifold sigma with large D
                // only for noiseless data; noisy data would exceed the
                // injectivity radius there, which is a hard error.
                if (!args.custom_regime_grid && claims_manifold &&
                    datasets[i].noise > 0.0 && d != *std::min_element(args.d_outs.begin(),
                                                                      args.d_outs.end())) {
                    continue;
                }
                cells.push_back({i, sigma, d});
            }
        }
    }
    const std::vector<pf::RegimeResult> results =
        pf::run_regime_cells(datasets, cells, table, opts.threads);

    nlohmann::json config;
    config["family"] = "regimes";
    config["sigmas"] = sigmas;
    config["d_outs"] = args.d_outs;
    config["noises"] = args.noises;
    config["points"] = args.points;
    config["seed"] = args.seed;
    const pf::Bundle bundle =
        pf::open_bundle(args.out.empty() ? "eval_regimes" : args.out, config);
    pf::write_regime_bundle(bundle, datasets, results);

    if (opts.json) {
        nlohmann::json rows = nlohmann::json::array();
        for (const pf::RegimeResult& r : results) {
            rows.push_back({{"kind", pf::to_string(r.kind)},
                            {"noise", r.noise},
                            {"sigma", r.sigma},
                            {"d_out", r.d_out},
                            {"regime", pf::to_string(r.regime)},
                            {"recon_mse", r.recon_mse},
                            {"intra_class_sim", r.intra_class_sim},
                            {"inter_class_sim", r.inter_class_sim}});
        }
        std::cout << rows.dump(2) << '\n';
    } else {
        std::cout << "regime study written to " << bundle.dir.string() << '\n';
        for (const pf::RegimeResult& r : results) {
            std::cout << "  " << pf::to_string(r.kind) << " noise=" << r.noise
                      << " sigma=" << r.sigma << " D=" << r.d_out << ": "
                      << pf::to_string(r.regime)
                      << ", mse=" << pf::format_double(r.recon_mse) << '\n';
        }
    }
    store_table(opts, table);
    return args.check ? finish_check(pf::check_regimes(results)) : 0;
}

int cmd_eval_classify(const EvalArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::ClassificationConfig cfg;
    if (!args.sigmas.empty()) cfg.sigmas = args.sigmas;
    cfg.d_outs = args.d_outs;
    cfg.points = args.points;
    cfg.seed = args.seed;
    const pf::ClassificationStudy study = pf::run_classification_study(cfg, table, opts.threads);

    nlohmann::json config;
    config["family"] = "classify";
    config["sigmas"] = cfg.sigmas;
    config["d_outs"] = cfg.d_outs;
    config["points"] = cfg.points;
    config["seed"] = cfg.seed;
    config["spiral_noise"] = cfg.spiral_noise;
    config["circles_noise"] = cfg.circles_noise;
    const pf::Bundle bundle =
        pf::open_bundle(args.out.empty() ? "eval_classify" : args.out, config);
    pf::write_classification_bundle(bundle, study);

    if (opts.json) {
        nlohmann::json cells = nlohmann::json::array();
        for (const pf::ClassificationCell& cell : study.cells) {
            nlohmann::json centered = nlohmann::json::array();
            nlohmann::json uncentered = nlohmann::json::array();
            for (int a = 0; a < 4; ++a) {
                nlohmann::json rc = nlohmann::json::array();
                nlohmann::json ru = nlohmann::json::array();
                for (int b = 0; b < 4; ++b) {
                    rc.push_back(cell.centered(a, b));
                    ru.push_back(cell.uncentered(a, b));
                }
                centered.push_back(rc);
                uncentered.push_back(ru);
            }
            cells.push_back({{"sigma", cell.sigma},
                             {"d_out", cell.d_out},
                             {"centered", centered},
                             {"uncentered", uncentered}});
        }
        std::cout << cells.dump(2) << '\n';
    } else {
        std::cout << "classification study written to " << bundle.dir.string() << '\n';
        for (const pf::ClassificationCell& cell : study.cells) {
            std::cout << "  sigma=" << cell.sigma << " D=" << cell.d_out
                      << ": intra spiral=" << pf::format_double(cell.centered(0, 1))
                      << " intra circles=" << pf::format_double(cell.centered(2, 3)) << '\n';
        }
    }
    store_table(opts, table);
    return args.check ? finish_check(pf::check_classification(study)) : 0;
}

// ----------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<long long> sizes{65536, 131072, 262144};
    std::vector<int> d_values{128, 256};
    int trials = 5;
    std::string out;
    bool check = false;
};

int cmd_bench(const BenchArgs& args, const GlobalOptions& opts) {
    pf::PrimeTable table = load_table(opts);
    pf::BenchConfig cfg;
    cfg.n_values = args.sizes;
    cfg.d_values = args.d_values;
    cfg.trials = args.trials;
    const pf::BenchResult result = pf::bench(cfg, table);

    nlohmann::json config;
    config["family"] = "bench";
    config["sizes"] = cfg.n_values;
    config["d_values"] = cfg.d_values;
    config["trials"] = cfg.trials;
    const pf::Bundle bundle = pf::open_bundle(args.out.empty() ? "eval_bench" : args.out,
                                              config);
    pf::write_bench_csv(bundle, result);

    if (opts.json) {
        nlohmann::json rows = nlohmann::json::array();
        for (const pf::BenchRow& row : result.rows) {
            rows.push_back({{"op", row.op},
                            {"n", row.n},
                            {"d_out", row.d_out},
                            {"seconds_median", row.seconds}});
        }
        std::cout << rows.dump(2) << '\n';
    } else {
        std::cout << "bench written to " << bundle.dir.string() << '\n';
        for (const pf::BenchRow& row : result.rows) {
            std::cout << "  " << row.op << " N=" << row.n << " D=" << row.d_out << ": "
                      << pf::format_double(row.seconds) << " s\n";
        }
    }
    store_table(opts, table);
    return args.check ? finish_check(pf::check_bench(result)) : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"primefreq: deterministic prime-frequency feature maps"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--prime-cache", global.prime_cache,
                   "binary prime cache file, loaded if present and updated on exit");
    app.add_option("--threads", global.threads, "worker threads for grid runs (0 = auto)");
    app.add_flag("--json", global.json, "machine-readable summaries on stdout");

    auto even_dim = CLI::Validator(
        [](std::string& value) -> std::string {
            const int v = std::stoi(value);
            if (v < 2 || v % 2 != 0) return "dimension must be even and >= 2";
            return {};
        },
        "EVEN");

    StaticArgs static_args;
    CLI::App* cmd_static_app = app.add_subcommand("static", "generate a sequence codebook");
    cmd_static_app->add_option("--n", static_args.n, "sequence length")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_static_app->add_option("--dim", static_args.dim, "embedding dimension (even)")
        ->required()
        ->check(even_dim);
    cmd_static_app->add_option("--out", static_args.out, "output CSV path or -");
    cmd_static_app->add_flag("--header", static_args.header, "write a header row");

    CodecArgs encode_args;
    CLI::App* cmd_encode_app = app.add_subcommand("encode", "forward map a CSV of vectors");
    cmd_encode_app->add_option("--din", encode_args.d_in, "input dimension")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_encode_app->add_option("--dout", encode_args.d_out, "embedding dimension (even)")
        ->required()
        ->check(even_dim);
    cmd_encode_app->add_option("--sigma", encode_args.sigma, "scaling factor")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_encode_app->add_option("--in", encode_args.in, "input CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_encode_app->add_option("--out", encode_args.out, "output CSV path or -");
    cmd_encode_app->add_flag("--in-header", encode_args.in_header, "input has a header row");
    cmd_encode_app->add_flag("--header", encode_args.out_header, "write a header row");

    CodecArgs decode_args;
    CLI::App* cmd_decode_app =
        app.add_subcommand("decode", "invert a CSV of embeddings via the cached decoder");
    cmd_decode_app->add_option("--din", decode_args.d_in, "input dimension")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_decode_app->add_option("--dout", decode_args.d_out, "embedding dimension (even)")
        ->required()
        ->check(even_dim);
    cmd_decode_app->add_option("--sigma", decode_args.sigma, "scaling factor")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_decode_app->add_option("--in", decode_args.in, "input CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_decode_app->add_option("--out", decode_args.out, "output CSV path or -");
    cmd_decode_app->add_flag("--in-header", decode_args.in_header, "input has a header row");
    cmd_decode_app->add_flag("--header", decode_args.out_header, "write a header row");

    SynthArgs synth_args;
    CLI::App* cmd_synth_app = app.add_subcommand("synth", "generate a synthetic 2D dataset");
    cmd_synth_app->add_option("--kind", synth_args.kind, "spiral or circles")
        ->check(CLI::IsMember({"spiral", "circles"}));
    cmd_synth_app->add_option("--n", synth_args.n, "points")->check(CLI::PositiveNumber);
    cmd_synth_app->add_option("--noise", synth_args.noise, "noise std")
        ->check(CLI::NonNegativeNumber);
    cmd_synth_app->add_option("--seed", synth_args.seed, "seed");
    cmd_synth_app->add_option("--out", synth_args.out, "output CSV path or -");

    EvalArgs eval_args;
    CLI::App* cmd_eval_app = app.add_subcommand("eval", "run an experiment family");
    cmd_eval_app->require_subcommand(1);

    CLI::App* eval_orth = cmd_eval_app->add_subcommand(
        "orthogonality", "RMS-error grid, prime vs gaussian");
    CLI::App* eval_welch = cmd_eval_app->add_subcommand(
        "welch", "optimality ratio and excess coherence populations");
    CLI::App* eval_regimes = cmd_eval_app->add_subcommand(
        "regimes", "dual-regime reconstruction study");
    CLI::App* eval_classify = cmd_eval_app->add_subcommand(
        "classify", "cosine-similarity classification study");

    for (CLI::App* sub : {eval_orth, eval_welch}) {
        sub->add_option("--n-list", eval_args.n_values, "codebook sizes")
            ->delimiter(',');
        sub->add_option("--d-list", eval_args.d_values, "dimensions")->delimiter(',');
        sub->add_option("--seeds", eval_args.seeds, "gaussian seeds")->delimiter(',');
    }
    CLI::Option* regime_sigmas =
        eval_regimes->add_option("--sigmas", eval_args.sigmas, "scaling factors")
            ->delimiter(',');
    CLI::Option* regime_douts =
        eval_regimes->add_option("--douts", eval_args.d_outs, "output dimensions")
            ->delimiter(',');
    CLI::Option* regime_noises =
        eval_regimes->add_option("--noises", eval_args.noises, "noise levels")
            ->delimiter(',');
    eval_regimes->add_option("--n", eval_args.points, "points per dataset")
        ->check(CLI::PositiveNumber);
    eval_regimes->add_option("--seed", eval_args.seed, "dataset seed");
    eval_classify->add_option("--sigmas", eval_args.sigmas, "scaling factors")
        ->delimiter(',');
    eval_classify->add_option("--douts", eval_args.d_outs, "output dimensions")
        ->delimiter(',');
    eval_classify->add_option("--n", eval_args.points, "points per dataset")
        ->check(CLI::PositiveNumber);
    eval_classify->add_option("--seed", eval_args.seed, "dataset seed");
    for (CLI::App* sub : {eval_orth, eval_welch, eval_regimes, eval_classify}) {
        sub->add_option("--out", eval_args.out, "bundle directory");
        sub->add_flag("--check", eval_args.check, "run the acceptance assertions");
    }

    BenchArgs bench_args;
    CLI::App* cmd_bench_app = app.add_subcommand("bench", "complexity smoke benchmark");
    cmd_bench_app->add_option("--sizes", bench_args.sizes, "batch sizes")->delimiter(',');
    cmd_bench_app->add_option("--d-list", bench_args.d_values, "output dimensions")
        ->delimiter(',');
    cmd_bench_app->add_option("--trials", bench_args.trials, "trials per measurement")
        ->check(CLI::PositiveNumber);
    cmd_bench_app->add_option("--out", bench_args.out, "bundle directory");
    cmd_bench_app->add_flag("--check", bench_args.check, "run the acceptance assertions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help() << '\n';
        return kExitUsage;
    }

    eval_args.custom_regime_grid = regime_sigmas->count() > 0 || regime_douts->count() > 0 ||
                                   regime_noises->count() > 0;

    try {
        if (cmd_static_app->parsed()) return cmd_static(static_args, global);
        if (cmd_encode_app->parsed()) return cmd_encode(encode_args, global);
        if (cmd_decode_app->parsed()) return cmd_decode(decode_args, global);
        if (cmd_synth_app->parsed()) return cmd_synth(synth_args);
        if (cmd_eval_app->parsed()) {
            if (eval_orth->parsed()) return cmd_eval_orthogonality(eval_args, global);
            if (eval_welch->parsed()) return cmd_eval_welch(eval_args, global);
            if (eval_regimes->parsed()) return cmd_eval_regimes(eval_args, global);
            if (eval_classify->parsed()) return cmd_eval_classify(eval_args, global);
        }
        if (cmd_bench_app->parsed()) return cmd_bench(bench_args, global);
        std::cerr << app.help() << '\n';
        return kExitUsage;
    } catch (const pf::dimension_mismatch_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataShape;
    } catch (const pf::invalid_dimension_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const pf::injectivity_violation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const pf::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const pf::empty_input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataShape;
    } catch (const pf::empty_population_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataShape;
    } catch (const pf::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataShape;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
