#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <vector>

#include "primefreq/csv.hpp"
#include "primefreq/errors.hpp"
#include "primefreq/rng.hpp"

namespace primefreq {

enum class DatasetKind { spiral, circles };

inline const char* to_string(DatasetKind k) {
    return k == DatasetKind::spiral ? "spiral" : "circles";
}

/// Two-class planar dataset with additive Gaussian noise. Point order and
/// the underlying noiseless parameters depend only on the seed, so clean
/// and noisy variants built from the same seed perturb the same points.
struct Dataset2D {
    Eigen::MatrixXd points;  // N x 2
    std::vector<int> labels; // class id per row, balanced within +-1
    DatasetKind kind = DatasetKind::spiral;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

/// Two interleaved Archimedean spirals. Class c draws theta uniform on
/// [0, 3*pi], places rho = theta at angle theta + c*pi, adds noise*eps,
/// and scales everything by 1/(3*pi) so the noiseless shape sits in the
/// unit disk.
inline Dataset2D make_spiral(Eigen::Index n, double noise, std::uint64_t seed) {
    if (n < 2) throw empty_input_error("spiral dataset needs n >= 2");
    constexpr double kThreePi = 3.0 * std::numbers::pi;
    RandomStream rng(seed);
    Dataset2D ds;
    ds.points.resize(n, 2);
    ds.labels.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);
        const double theta = rng.uniform(0.0, kThreePi);
        // Noise is always drawn so clean/noisy variants share parameters.
        const double ex = rng.gaussian();
        const double ey = rng.gaussian();
        const double phase = theta + static_cast<double>(cls) * std::numbers::pi;
        ds.points(i, 0) = (theta * std::cos(phase) + noise * ex) / kThreePi;
        ds.points(i, 1) = (theta * std::sin(phase) + noise * ey) / kThreePi;
        ds.labels[static_cast<std::size_t>(i)] = cls;
    }
    ds.kind = DatasetKind::spiral;
    ds.noise = noise;
    ds.seed = seed;
    return ds;
}

/// Concentric circles: class 0 on radius 0.5, class 1 on radius 1.0,
/// angles uniform, plus noise*eps in final coordinates.
inline Dataset2D make_circles(Eigen::Index n, double noise, std::uint64_t seed) {
    if (n < 2) throw empty_input_error("circles dataset needs n >= 2");
    RandomStream rng(seed);
    Dataset2D ds;
    ds.points.resize(n, 2);
    ds.labels.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);
        const double radius = cls == 0 ? 0.5 : 1.0;
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double ex = rng.gaussian();
        const double ey = rng.gaussian();
        ds.points(i, 0) = radius * std::cos(angle) + noise * ex;
        ds.points(i, 1) = radius * std::sin(angle) + noise * ey;
        ds.labels[static_cast<std::size_t>(i)] = cls;
    }
    ds.kind = DatasetKind::circles;
    ds.noise = noise;
    ds.seed = seed;
    return ds;
}

inline void write_csv(const Dataset2D& ds, std::ostream& out) {
    out << "x,y,label\n";
    for (Eigen::Index i = 0; i < ds.points.rows(); ++i) {
        out << format_double(ds.points(i, 0)) << ',' << format_double(ds.points(i, 1))
            << ',' << ds.labels[static_cast<std::size_t>(i)] << '\n';
    }
}

} // namespace primefreq
