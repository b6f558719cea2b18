#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "primefreq/encode.hpp"
#include "primefreq/errors.hpp"
#include "primefreq/rng.hpp"

namespace primefreq {

/// Configuration of the seeded baseline generator.
struct BaselineConfig {
    std::uint64_t seed = 42;
    Eigen::Index n = 0;
    int dim = 0;
};

/// Codebook of i.i.d. standard normal rows, each scaled to unit length.
/// Generation is a single sequential stream per codebook, so a seed fixes
/// the result exactly. A row that samples to exactly zero is redrawn.
inline Codebook generate_gaussian(const BaselineConfig& cfg) {
    if (cfg.n < 1 || cfg.dim < 1) {
        throw invalid_dimension_error("baseline codebook needs n >= 1 and dim >= 1");
    }
    RandomStream rng(cfg.seed);
    Codebook cb;
    cb.rows.resize(cfg.n, cfg.dim);
    for (Eigen::Index i = 0; i < cfg.n; ++i) {
        double norm = 0.0;
        do {
            for (int j = 0; j < cfg.dim; ++j) cb.rows(i, j) = rng.gaussian();
            norm = cb.rows.row(i).norm();
        } while (norm == 0.0);
        cb.rows.row(i) /= norm;
    }
    cb.meta.source = Source::gaussian_baseline;
    cb.meta.n = cfg.n;
    cb.meta.dim = cfg.dim;
    cb.meta.seed = cfg.seed;
    cb.meta.generator = kGeneratorName;
    return cb;
}

} // namespace primefreq
