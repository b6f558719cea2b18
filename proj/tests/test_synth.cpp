#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "primefreq/synth.hpp"

using namespace primefreq;

TEST_CASE("spiral points satisfy the parametric equation when noiseless", "[synth]") {
    constexpr double kThreePi = 3.0 * std::numbers::pi;
    const Dataset2D ds = make_spiral(400, 0.0, 42);
    REQUIRE(ds.points.rows() == 400);
    for (Eigen::Index i = 0; i < ds.points.rows(); ++i) {
        const double x = ds.points(i, 0);
        const double y = ds.points(i, 1);
        const double theta = std::hypot(x, y) * kThreePi; // rho = theta
        const int cls = ds.labels[static_cast<std::size_t>(i)];
        const double phase = theta + static_cast<double>(cls) * std::numbers::pi;
        CHECK(std::abs(x - theta * std::cos(phase) / kThreePi) < 1e-12);
        CHECK(std::abs(y - theta * std::sin(phase) / kThreePi) < 1e-12);
    }
}

TEST_CASE("noiseless spiral stays in the unit disk", "[synth]") {
    const Dataset2D ds = make_spiral(2000, 0.0, 7);
    for (Eigen::Index i = 0; i < ds.points.rows(); ++i) {
        CHECK(ds.points.row(i).norm() <= 1.0 + 1e-12);
    }
}

TEST_CASE("circles radii are exact when noiseless", "[synth]") {
    const Dataset2D ds = make_circles(500, 0.0, 42);
    for (Eigen::Index i = 0; i < ds.points.rows(); ++i) {
        const double expected = ds.labels[static_cast<std::size_t>(i)] == 0 ? 0.5 : 1.0;
        CHECK(std::abs(ds.points.row(i).norm() - expected) < 1e-12);
    }
}

TEST_CASE("min inter-class distance of noiseless circles approaches 0.5", "[synth]") {
    const Dataset2D ds = make_circles(4000, 0.0, 42);
    double min_dist = 10.0;
    for (Eigen::Index a = 0; a < ds.points.rows(); ++a) {
        if (ds.labels[static_cast<std::size_t>(a)] != 0) continue;
        for (Eigen::Index b = 0; b < ds.points.rows(); ++b) {
            if (ds.labels[static_cast<std::size_t>(b)] != 1) continue;
            min_dist = std::min(min_dist, (ds.points.row(a) - ds.points.row(b)).norm());
        }
    }
    CHECK(min_dist >= 0.5);
    CHECK(min_dist == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("same seed reproduces datasets exactly", "[synth]") {
    const Dataset2D a = make_spiral(100, 0.5, 9);
    const Dataset2D b = make_spiral(100, 0.5, 9);
    CHECK(a.points == b.points);
    const Dataset2D c = make_circles(100, 0.3, 9);
    const Dataset2D d = make_circles(100, 0.3, 9);
    CHECK(c.points == d.points);
}

TEST_CASE("clean and noisy variants share point parameters", "[synth]") {
    // same seed, different noise: the noiseless parts coincide, so the
    // difference is exactly the scaled noise draw
    const Dataset2D clean = make_spiral(50, 0.0, 21);
    const Dataset2D noisy = make_spiral(50, 0.8, 21);
    const Dataset2D noisier = make_spiral(50, 1.6, 21);
    const Eigen::MatrixXd delta1 = noisy.points - clean.points;
    const Eigen::MatrixXd delta2 = noisier.points - clean.points;
    CHECK((delta2 - 2.0 * delta1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(delta1.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("labels are balanced", "[synth]") {
    for (Eigen::Index n : {100, 101}) {
        const Dataset2D ds = make_circles(n, 0.1, 3);
        long long count0 = 0;
        for (int label : ds.labels) count0 += label == 0 ? 1 : 0;
        const long long count1 = static_cast<long long>(ds.labels.size()) - count0;
        CHECK(std::abs(count0 - count1) <= 1);
    }
}

TEST_CASE("csv export shape", "[synth]") {
    const Dataset2D ds = make_circles(4, 0.0, 1);
    std::ostringstream out;
    write_csv(ds, out);
    const std::string text = out.str();
    CHECK(text.rfind("x,y,label\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
