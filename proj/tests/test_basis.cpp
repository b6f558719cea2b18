#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "primefreq/basis.hpp"
#include "primefreq/encode.hpp"

using namespace primefreq;

namespace {
PrimeTable& shared_table() {
    static PrimeTable table;
    return table;
}
} // namespace

TEST_CASE("build_dynamic lays primes out row-major", "[basis]") {
    PrimeBasis basis = build_dynamic(2, 4, 1.0, shared_table());
    CHECK(basis.w()(0, 0) == std::sqrt(2.0));
    CHECK(basis.w()(0, 1) == std::sqrt(3.0));
    CHECK(basis.w()(1, 0) == std::sqrt(5.0));
    CHECK(basis.w()(1, 1) == std::sqrt(7.0));
    CHECK(basis.w_max() == std::sqrt(7.0));
    CHECK(basis.k() == 2);
}

TEST_CASE("build_dynamic scalar case", "[basis]") {
    PrimeBasis basis = build_dynamic(1, 2, 0.007, shared_table());
    CHECK(basis.w().rows() == 1);
    CHECK(basis.w()(0, 0) == std::sqrt(2.0));
    CHECK(basis.w_max() == std::sqrt(2.0));
}

TEST_CASE("odd or zero output dimension rejected", "[basis]") {
    CHECK_THROWS_AS(build_dynamic(3, 7, 1.0, shared_table()), invalid_dimension_error);
    CHECK_THROWS_AS(build_dynamic(1, 0, 1.0, shared_table()), invalid_dimension_error);
    CHECK_THROWS_AS(build_static(9, shared_table()), invalid_dimension_error);
    CHECK_THROWS_AS(build_dynamic(2, 4, -1.0, shared_table()), error);
}

TEST_CASE("build_static frequency vectors", "[basis]") {
    StaticBasis b4 = build_static(4, shared_table());
    REQUIRE(b4.omega.size() == 2);
    CHECK(b4.omega(0) == std::sqrt(2.0));
    CHECK(b4.omega(1) == std::sqrt(3.0));

    StaticBasis b2 = build_static(2, shared_table());
    REQUIRE(b2.omega.size() == 1);
    CHECK(b2.omega(0) == std::sqrt(2.0));

    // 8th prime is 19 by the sieve
    StaticBasis b16 = build_static(16, shared_table());
    REQUIRE(b16.omega.size() == 8);
    CHECK(b16.omega(7) == std::sqrt(19.0));
}

TEST_CASE("row-major monotonicity of W entries", "[basis]") {
    PrimeBasis basis = build_dynamic(5, 24, 0.4, shared_table());
    double prev = 0.0;
    for (int i = 0; i < basis.k(); ++i) {
        for (int j = 0; j < basis.d_in(); ++j) {
            REQUIRE(basis.w()(i, j) > prev);
            prev = basis.w()(i, j);
        }
    }
}

TEST_CASE("two builds are bit-identical", "[basis]") {
    PrimeBasis a = build_dynamic(3, 16, 0.25, shared_table());
    PrimeTable fresh;
    PrimeBasis b = build_dynamic(3, 16, 0.25, fresh);
    CHECK(a.w() == b.w());
}

TEST_CASE("decoder is a left inverse when k >= d_in", "[basis]") {
    for (auto [d_in, d_out] : {std::pair{1, 2}, {2, 8}, {3, 64}, {8, 16}}) {
        PrimeBasis basis = build_dynamic(d_in, d_out, 0.5, shared_table());
        const Eigen::MatrixXd product = basis.decoder() * (kTwoPi * 0.5 * basis.w());
        const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d_in, d_in);
        CHECK((product - identity).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("decoder scalar value", "[basis]") {
    PrimeBasis basis = build_dynamic(1, 2, 1.0, shared_table());
    REQUIRE(basis.decoder().size() == 1);
    // 1 / (2 pi sqrt 2), high-precision reference
    CHECK(basis.decoder()(0, 0) == Catch::Approx(0.1125395395196382587).epsilon(1e-14));
}

TEST_CASE("decoder is idempotent", "[basis]") {
    PrimeBasis basis = build_dynamic(2, 12, 0.1, shared_table());
    const Eigen::MatrixXd first = basis.decoder();
    CHECK(&basis.decoder() == &basis.decoder());
    CHECK(basis.decoder() == first);
}

TEST_CASE("injectivity radius values", "[basis]") {
    PrimeBasis scalar = build_dynamic(1, 2, 1.0, shared_table());
    CHECK(scalar.injectivity_radius() == Catch::Approx(0.35355339059327373).epsilon(1e-14));
    // at the boundary the scalar phase is exactly pi
    CHECK(kTwoPi * scalar.w_max() * scalar.injectivity_radius() ==
          Catch::Approx(std::numbers::pi).epsilon(1e-14));

    PrimeBasis low = build_dynamic(2, 4, 0.007, shared_table());
    CHECK(low.injectivity_radius() == Catch::Approx(13.498731178900972).epsilon(1e-12));

    // doubling sigma halves the radius
    PrimeBasis twice = build_dynamic(2, 4, 0.014, shared_table());
    CHECK(twice.injectivity_radius() ==
          Catch::Approx(low.injectivity_radius() / 2.0).epsilon(1e-14));
}

TEST_CASE("lazy decoder is compute-once under concurrent first use", "[basis]") {
    PrimeBasis basis = build_dynamic(3, 32, 0.2, shared_table());
    std::vector<const Eigen::MatrixXd*> seen(8, nullptr);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < seen.size(); ++t) {
        threads.emplace_back([&, t] { seen[t] = &basis.decoder(); });
    }
    for (auto& th : threads) th.join();
    for (const auto* p : seen) CHECK(p == seen[0]);
}

TEST_CASE("no phase wraps inside the radius", "[basis]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto [d_in, d_out, sigma] :
         {std::tuple{1, 4, 1.0}, {2, 16, 0.007}, {4, 32, 0.3}, {8, 128, 1.0}}) {
        PrimeBasis basis = build_dynamic(d_in, d_out, sigma, shared_table());
        const double radius = basis.injectivity_radius();
        for (int rep = 0; rep < 200; ++rep) {
            Eigen::VectorXd x(d_in);
            for (int j = 0; j < d_in; ++j) x(j) = unit(rng) * radius * 0.999;
            const Eigen::VectorXd v = phase_vector(basis, x);
            REQUIRE(v.cwiseAbs().maxCoeff() < std::numbers::pi);
        }
    }
}
