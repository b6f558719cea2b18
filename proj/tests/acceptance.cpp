// Acceptance suite. Runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion; exits nonzero if any failed.
//
// argv[1]: path to the CLI binary (used by the determinism criterion).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "primefreq/primefreq.hpp"
#include "oracles.hpp"

namespace pf = primefreq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int number, const std::string& name, double runtime_limit_s,
                   const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.passed = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (outcome.passed && runtime_limit_s > 0.0 && elapsed > runtime_limit_s) {
        outcome.passed = false;
        outcome.detail += (outcome.detail.empty() ? "" : "; ");
        outcome.detail += "runtime " + pf::format_double(elapsed) + " s exceeds " +
                          pf::format_double(runtime_limit_s) + " s";
    }
    if (!outcome.passed) ++g_failures;
    std::printf("[%s] %02d %s: %s (%.2f s)\n", outcome.passed ? "PASS" : "FAIL", number,
                name.c_str(), outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
}

Outcome from_failures(const std::vector<std::string>& failures, std::string pass_detail) {
    if (failures.empty()) return {true, std::move(pass_detail)};
    std::string joined;
    for (const auto& f : failures) {
        if (!joined.empty()) joined += "; ";
        joined += f;
    }
    return {false, joined};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

pf::PrimeTable g_primes;

// 1. per-pair circle identity and total norm across (d, D, sigma) combos
Outcome torus_invariants() {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    double worst_pair = 0.0;
    double worst_norm = 0.0;
    for (int d_in : {1, 2, 8}) {
        for (int d_out : {4, 64, 128}) {
            for (double sigma : {0.007, 1.0}) {
                pf::PrimeBasis basis = pf::build_dynamic(d_in, d_out, sigma, g_primes);
                const int k = basis.k();
                for (int rep = 0; rep < 1000; ++rep) {
                    Eigen::VectorXd x(d_in);
                    for (int j = 0; j < d_in; ++j) x(j) = coord(rng);
                    const Eigen::VectorXd z = pf::forward(basis, x);
                    for (int i = 0; i < k; ++i) {
                        worst_pair = std::max(
                            worst_pair,
                            std::abs(z(i) * z(i) + z(k + i) * z(k + i) - 1.0));
                    }
                    worst_norm = std::max(
                        worst_norm, std::abs(z.squaredNorm() - static_cast<double>(k)));
                }
            }
        }
    }
    const bool ok = worst_pair < 1e-12 && worst_norm < 1e-9;
    return {ok, "max pair deviation " + pf::format_double(worst_pair) +
                    ", max norm deviation " + pf::format_double(worst_norm)};
}

// 2. exact reconstruction inside half the injectivity radius
Outcome manifold_roundtrip() {
    pf::PrimeBasis basis = pf::build_dynamic(2, 128, 0.007, g_primes);
    const double half_radius = basis.injectivity_radius() / 2.0;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> coord(-half_radius, half_radius);
    Eigen::MatrixXd xs(1000, 2);
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs(i) = coord(rng);
    const Eigen::MatrixXd back = pf::reverse(basis, pf::forward(basis, xs));
    const double worst = (back - xs).cwiseAbs().maxCoeff();
    return {worst < 1e-8, "max elementwise error " + pf::format_double(worst)};
}

// 3. hashing-regime failure relative to the manifold cell
Outcome regime_mse_ratio() {
    const std::vector<pf::Dataset2D> datasets = {pf::make_spiral(600, 0.0, 42)};
    const std::vector<pf::RegimeCell> cells = {{0, 0.007, 128}, {0, 1.0, 4}};
    const auto results = pf::run_regime_cells(datasets, cells, g_primes);
    const auto failures = pf::check_regimes(results);
    return from_failures(failures,
                         "manifold mse " + pf::format_double(results[0].recon_mse) +
                             ", hashing mse " + pf::format_double(results[1].recon_mse));
}

std::vector<pf::GramReport> g_all_reports;

// 4. e_rms ordering over the default grid
Outcome orthogonality_ordering() {
    const pf::GridSpec spec;
    const pf::OrthogonalityResult result = pf::run_orthogonality_grid(spec, g_primes);
    g_all_reports.insert(g_all_reports.end(), result.reports.begin(), result.reports.end());
    std::size_t wins = 0;
    for (const auto& pair : result.cell_pairs) {
        if (pair.prime_e_rms < pair.gaussian_mean_e_rms) ++wins;
    }
    const auto failures = pf::check_orthogonality(result);
    return from_failures(
        failures,
        "grid-mean e_rms prime " +
            pf::format_double(result.summary.at(pf::Source::static_prime).mean_e_rms) +
            " < gaussian " +
            pf::format_double(result.summary.at(pf::Source::gaussian_baseline).mean_e_rms) +
            ", prime wins " + std::to_string(wins) + "/" +
            std::to_string(result.cell_pairs.size()) + " cells");
}

// 5. optimality ratio and excess coherence population ordering
Outcome welch_population_ordering() {
    const pf::GridSpec spec;
    const pf::WelchPopulation pop = pf::run_welch_population(spec, g_primes);
    g_all_reports.insert(g_all_reports.end(), pop.reports.begin(), pop.reports.end());
    const auto failures = pf::check_welch_population(pop);
    return from_failures(
        failures,
        "median ratio prime " +
            pf::format_double(pop.ratio_quantiles.at(pf::Source::static_prime).p50) +
            " vs gaussian " +
            pf::format_double(pop.ratio_quantiles.at(pf::Source::gaussian_baseline).p50) +
            ", median excess prime " +
            pf::format_double(pop.excess_quantiles.at(pf::Source::static_prime).p50) +
            " vs gaussian " +
            pf::format_double(pop.excess_quantiles.at(pf::Source::gaussian_baseline).p50));
}

// 6. Welch bound stays below measured coherence in every report seen
Outcome welch_lower_bound_sanity() {
    if (g_all_reports.empty()) return {false, "no reports collected"};
    long long checked = 0;
    for (const auto& rep : g_all_reports) {
        if (rep.welch) ++checked;
    }
    const auto failures = pf::check_welch_sanity(g_all_reports);
    return from_failures(failures, "mu_max >= welch - 1e-12 in " + std::to_string(checked) +
                                       " valid reports");
}

// 7. classification study orderings at D=128
Outcome classification_study() {
    pf::ClassificationConfig cfg;
    const pf::ClassificationStudy study = pf::run_classification_study(cfg, g_primes);
    std::string detail;
    for (const auto& cell : study.cells) {
        if (cell.d_out != 128 || cell.sigma != 0.007) continue;
        detail = "at s=0.007 D=128: intra spiral " + pf::format_double(cell.centered(0, 1)) +
                 ", intra circles " + pf::format_double(cell.centered(2, 3));
    }
    return from_failures(pf::check_classification(study), detail);
}

// 8. closed-form metric values
Outcome metric_golden_values() {
    std::vector<std::string> failures;
    const auto welch = pf::welch_bound(8, 4);
    if (!welch || std::abs(*welch - 0.37796447300922723) > 1e-9) {
        failures.push_back("welch_bound(8,4) != 0.37796447...");
    }
    if (std::abs(pf::rms_error({0.3, -0.4}) - 0.35355339059327373) > 1e-9) {
        failures.push_back("rms_error([0.3,-0.4]) != 0.35355339...");
    }
    pf::Codebook triple;
    triple.rows.resize(3, 2);
    const double s = std::sqrt(3.0) / 2.0;
    triple.rows << 1, 0, -0.5, s, -0.5, -s;
    const pf::GramReport rep = pf::report(triple);
    if (!rep.optimality_ratio || std::abs(*rep.optimality_ratio - 1.0) > 1e-9) {
        failures.push_back("planar 120-degree triple ratio != 1.0");
    }
    return from_failures(failures, "welch(8,4), rms([0.3,-0.4]), ETF ratio all exact");
}

// 9. sieve vs independent trial division
Outcome prime_oracle() {
    const auto expected = oracle::primes_by_trial_division(10000);
    const auto got = g_primes.first(10000);
    if (got != expected) return {false, "sieve disagrees with trial division"};
    if (got[9999] != 104729) return {false, "p_10000 != 104729"};
    return {true, "first 10^4 primes match trial division, p_10000 = 104729"};
}

// 10. complexity scaling bands
Outcome complexity_bands() {
    pf::BenchConfig cfg;
    const pf::BenchResult result = pf::bench(cfg, g_primes);
    std::string detail;
    const auto a = result.seconds("static_generate", cfg.n_values[0], cfg.d_values[0]);
    const auto b = result.seconds("static_generate", cfg.n_values[1], cfg.d_values[0]);
    if (a && b) detail = "static_generate doubling ratio " + pf::format_double(*b / *a);
    return from_failures(pf::check_bench(result), detail);
}

// 11. byte-identical reports.csv across identical CLI invocations
Outcome cli_determinism(const std::string& cli) {
    if (cli.empty()) return {false, "no CLI path supplied"};
    const fs::path dir = fs::temp_directory_path() / "primefreq_acceptance_orth";
    fs::remove_all(dir);
    const std::string cmd = cli + " eval orthogonality --out " + dir.string() +
                            " > /dev/null 2> /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "first eval orthogonality run failed"};
    const std::string first = slurp(dir / "reports.csv");
    if (std::system(cmd.c_str()) != 0) return {false, "second eval orthogonality run failed"};
    const std::string second = slurp(dir / "reports.csv");
    fs::remove_all(dir);
    if (first.empty() || first != second) {
        return {false, "reports.csv differs between identical runs"};
    }
    return {true, "reports.csv byte-identical across runs (" +
                      std::to_string(first.size()) + " bytes)"};
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    run_criterion(1, "torus invariants", 5.0, torus_invariants);
    run_criterion(2, "manifold roundtrip", 5.0, manifold_roundtrip);
    run_criterion(3, "hashing-regime failure", 10.0, regime_mse_ratio);
    run_criterion(4, "orthogonality ordering", 120.0, orthogonality_ordering);
    run_criterion(5, "welch population ordering", 120.0, welch_population_ordering);
    run_criterion(6, "welch lower-bound sanity", 0.0, welch_lower_bound_sanity);
    run_criterion(7, "classification study", 30.0, classification_study);
    run_criterion(8, "metric golden values", 0.0, metric_golden_values);
    run_criterion(9, "prime oracle", 0.0, prime_oracle);
    run_criterion(10, "complexity bands", 60.0, complexity_bands);
    run_criterion(11, "determinism", 0.0, [&] { return cli_determinism(cli); });

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
