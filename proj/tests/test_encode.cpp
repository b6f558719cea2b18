#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "primefreq/encode.hpp"
#include "oracles.hpp"

using namespace primefreq;

namespace {
PrimeTable& shared_table() {
    static PrimeTable table;
    return table;
}

void check_torus_invariants(const Eigen::VectorXd& z) {
    const Eigen::Index k = z.size() / 2;
    for (Eigen::Index i = 0; i < k; ++i) {
        REQUIRE(std::abs(z(i) * z(i) + z(k + i) * z(k + i) - 1.0) < 1e-12);
    }
    REQUIRE(std::abs(z.squaredNorm() - static_cast<double>(k)) < 1e-9);
}
} // namespace

TEST_CASE("forward of the zero vector", "[encode]") {
    PrimeBasis basis = build_dynamic(3, 10, 0.5, shared_table());
    const Eigen::VectorXd z = forward(basis, Eigen::VectorXd(Eigen::VectorXd::Zero(3)));
    CHECK(z.head(5).isConstant(1.0));
    CHECK(z.tail(5).isZero());
}

TEST_CASE("forward scalar value against extended-precision oracle", "[encode]") {
    PrimeBasis basis = build_dynamic(1, 2, 1.0, shared_table());
    Eigen::VectorXd x(1);
    x << 1.0;
    const Eigen::VectorXd z = forward(basis, x);
    // cos(2 pi sqrt 2) and sin(2 pi sqrt 2)
    CHECK(z(0) == Catch::Approx(-0.85821618566881769).margin(1e-13));
    CHECK(z(1) == Catch::Approx(0.51328839715706164).margin(1e-13));
    CHECK(z(0) == Catch::Approx(oracle::cos_phase(1.0, 2)).margin(1e-13));
    CHECK(z(1) == Catch::Approx(oracle::sin_phase(1.0, 2)).margin(1e-13));
}

TEST_CASE("batched forward equals row-wise single forward", "[encode]") {
    PrimeBasis basis = build_dynamic(2, 8, 0.31, shared_table());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    Eigen::MatrixXd xs(5, 2);
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs(i) = unit(rng);
    const Eigen::MatrixXd zs = forward(basis, xs);
    REQUIRE(zs.rows() == 5);
    REQUIRE(zs.cols() == 8);
    for (Eigen::Index i = 0; i < 5; ++i) {
        const Eigen::VectorXd single = forward(basis, Eigen::VectorXd(xs.row(i)));
        CHECK((zs.row(i).transpose() - single).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("torus invariants hold for every embedding", "[encode]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(-5.0, 5.0);
    for (auto [d_in, d_out, sigma] :
         {std::tuple{1, 4, 0.007}, {2, 64, 1.0}, {8, 128, 0.007}}) {
        PrimeBasis basis = build_dynamic(d_in, d_out, sigma, shared_table());
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::VectorXd x(d_in);
            for (int j = 0; j < d_in; ++j) x(j) = unit(rng);
            check_torus_invariants(forward(basis, x));
        }
    }
}

TEST_CASE("phase recovery is exact below pi", "[encode]") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> phase(-std::numbers::pi * 0.999,
                                                 std::numbers::pi * 0.999);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd v(16);
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = phase(rng);
        Eigen::VectorXd z(32);
        z.head(16) = v.array().cos().matrix();
        z.tail(16) = v.array().sin().matrix();
        const Eigen::VectorXd recovered = recover_phases(z);
        REQUIRE((recovered - v).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("roundtrip inside the injectivity radius", "[encode]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    for (auto [d_in, d_out, sigma] :
         {std::tuple{1, 2, 1.0}, {2, 8, 0.1}, {2, 128, 0.007}, {4, 64, 0.05}}) {
        PrimeBasis basis = build_dynamic(d_in, d_out, sigma, shared_table());
        const double radius = basis.injectivity_radius();
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::VectorXd x(d_in);
            for (int j = 0; j < d_in; ++j) x(j) = unit(rng) * radius;
            const Eigen::VectorXd back = reverse(basis, forward(basis, x));
            REQUIRE((back - x).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("zero vector roundtrips exactly", "[encode]") {
    PrimeBasis basis = build_dynamic(3, 12, 0.2, shared_table());
    const Eigen::VectorXd back = reverse(basis, forward(basis, Eigen::VectorXd(Eigen::VectorXd::Zero(3))));
    CHECK(back.isZero());
}

TEST_CASE("high sigma at low dimension destroys reconstruction", "[encode]") {
    // unit-box inputs, sigma far beyond the radius
    PrimeBasis wrapped = build_dynamic(2, 4, 1.0, shared_table());
    PrimeBasis clean = build_dynamic(2, 128, 0.007, shared_table());
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::MatrixXd xs(200, 2);
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs(i) = unit(rng);
    const double mse_wrapped =
        (reverse(wrapped, forward(wrapped, xs)) - xs).squaredNorm() / xs.size();
    const double mse_clean =
        (reverse(clean, forward(clean, xs)) - xs).squaredNorm() / xs.size();
    CHECK(mse_wrapped >= 1e3 * mse_clean);
}

TEST_CASE("dimension mismatches are rejected", "[encode]") {
    PrimeBasis basis = build_dynamic(2, 8, 1.0, shared_table());
    CHECK_THROWS_AS(forward(basis, Eigen::VectorXd(Eigen::VectorXd::Zero(3))), dimension_mismatch_error);
    CHECK_THROWS_AS(reverse(basis, Eigen::VectorXd(Eigen::VectorXd::Zero(6))), dimension_mismatch_error);
}

TEST_CASE("static generation: first row and oracle row", "[encode]") {
    StaticBasis basis = build_static(6, shared_table());
    Codebook cb = generate_static(basis, 4);
    REQUIRE(cb.rows.rows() == 4);
    REQUIRE(cb.rows.cols() == 6);
    CHECK(cb.rows.row(0).head(3).isConstant(1.0));
    CHECK(cb.rows.row(0).tail(3).isZero());
    CHECK(cb.meta.source == Source::static_prime);

    StaticBasis b2 = build_static(2, shared_table());
    Codebook c2 = generate_static(b2, 2);
    CHECK(c2.rows(1, 0) == Catch::Approx(oracle::cos_phase(1.0, 2)).margin(1e-13));
    CHECK(c2.rows(1, 1) == Catch::Approx(oracle::sin_phase(1.0, 2)).margin(1e-13));
}

TEST_CASE("static rows are pairwise distinct up to 1e4", "[encode]") {
    StaticBasis basis = build_static(2, shared_table());
    Codebook cb = generate_static(basis, 10000);
    std::vector<std::pair<double, double>> rows(10000);
    for (Eigen::Index t = 0; t < cb.rows.rows(); ++t) {
        rows[static_cast<std::size_t>(t)] = {cb.rows(t, 0), cb.rows(t, 1)};
    }
    std::sort(rows.begin(), rows.end());
    CHECK(std::adjacent_find(rows.begin(), rows.end()) == rows.end());
}

TEST_CASE("static rows match a d_in=1 dynamic basis at sigma 1", "[encode]") {
    StaticBasis sbasis = build_static(16, shared_table());
    PrimeBasis dbasis = build_dynamic(1, 16, 1.0, shared_table());
    Codebook cb = generate_static(sbasis, 64);
    for (Eigen::Index t = 0; t < 64; ++t) {
        Eigen::VectorXd x(1);
        x << static_cast<double>(t);
        const Eigen::VectorXd z = forward(dbasis, x);
        REQUIRE((cb.rows.row(t).transpose() - z).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("normalize_rows", "[encode]") {
    StaticBasis basis = build_static(4, shared_table());
    Codebook cb = generate_static(basis, 8);
    const double before = cb.rows.row(3).norm();
    CHECK(before == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
    Codebook unit = normalize_rows(cb);
    for (Eigen::Index i = 0; i < unit.rows.rows(); ++i) {
        CHECK(std::abs(unit.rows.row(i).norm() - 1.0) < 1e-12);
    }
    // idempotent
    Codebook again = normalize_rows(unit);
    CHECK((again.rows - unit.rows).cwiseAbs().maxCoeff() < 1e-15);

    Codebook degenerate;
    degenerate.rows = Eigen::MatrixXd::Zero(2, 4);
    degenerate.rows.row(0) << 1, 2, 3, 4;
    CHECK_THROWS_AS(normalize_rows(degenerate), degenerate_row_error);
}

TEST_CASE("embeddings are deterministic across repeated calls", "[encode]") {
    PrimeBasis basis = build_dynamic(2, 32, 0.4, shared_table());
    Eigen::VectorXd x(2);
    x << 0.37, -1.82;
    const Eigen::VectorXd a = forward(basis, x);
    const Eigen::VectorXd b = forward(basis, x);
    CHECK(a == b);
}
