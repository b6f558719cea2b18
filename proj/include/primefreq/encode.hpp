#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "primefreq/basis.hpp"
#include "primefreq/errors.hpp"

namespace primefreq {

enum class Source { static_prime, dynamic_prime, gaussian_baseline };

inline const char* to_string(Source s) {
    switch (s) {
        case Source::static_prime: return "static_prime";
        case Source::dynamic_prime: return "dynamic_prime";
        case Source::gaussian_baseline: return "gaussian_baseline";
    }
    return "unknown";
}

/// How a codebook came to be. sigma/seed are present only when the
/// generator used them; generator names the variate recipe for random
/// sources.
struct CodebookMeta {
    Source source = Source::static_prime;
    Eigen::Index n = 0;
    int dim = 0;
    std::optional<double> sigma;
    std::optional<std::uint64_t> seed;
    std::string generator;
};

/// N x D matrix of embedding rows plus generation metadata. Rows from
/// prime sources live on the product-of-circles surface: each (cos, sin)
/// pair has unit norm, so every row has norm sqrt(D/2) before
/// normalization.
struct Codebook {
    Eigen::MatrixXd rows;
    CodebookMeta meta;
};

namespace detail {

inline void check_input_width(const PrimeBasis& basis, Eigen::Index width) {
    if (width != basis.d_in()) {
        throw dimension_mismatch_error("input width " + std::to_string(width) +
                                       " does not match basis d_in " +
                                       std::to_string(basis.d_in()));
    }
}

inline void check_embedding_width(const PrimeBasis& basis, Eigen::Index width) {
    if (width != basis.d_out()) {
        throw dimension_mismatch_error("embedding width " + std::to_string(width) +
                                       " does not match basis d_out " +
                                       std::to_string(basis.d_out()));
    }
}

} // namespace detail

/// Phase projection v = 2*pi*sigma*(W x).
inline Eigen::VectorXd phase_vector(const PrimeBasis& basis, const Eigen::VectorXd& x) {
    detail::check_input_width(basis, x.size());
    return kTwoPi * basis.sigma() * (basis.w() * x);
}

/// Forward map: z = [cos(v) | sin(v)] with v = 2*pi*sigma*(W x).
inline Eigen::VectorXd forward(const PrimeBasis& basis, const Eigen::VectorXd& x) {
    const Eigen::VectorXd v = phase_vector(basis, x);
    const int k = basis.k();
    Eigen::VectorXd z(basis.d_out());
    z.head(k) = v.array().cos().matrix();
    z.tail(k) = v.array().sin().matrix();
    return z;
}

/// Row-wise batched forward map over an N x d_in matrix.
inline Eigen::MatrixXd forward(const PrimeBasis& basis, const Eigen::MatrixXd& xs) {
    detail::check_input_width(basis, xs.cols());
    const int k = basis.k();
    const Eigen::MatrixXd phases = kTwoPi * basis.sigma() * (xs * basis.w().transpose());
    Eigen::MatrixXd zs(xs.rows(), basis.d_out());
    zs.leftCols(k) = phases.array().cos().matrix();
    zs.rightCols(k) = phases.array().sin().matrix();
    return zs;
}

/// Phase recovery: v_i = atan2(z[k+i], z[i]), each in (-pi, pi].
inline Eigen::VectorXd recover_phases(const Eigen::VectorXd& z) {
    if (z.size() < 2 || z.size() % 2 != 0) {
        throw dimension_mismatch_error("embedding length must be even and >= 2");
    }
    const Eigen::Index k = z.size() / 2;
    Eigen::VectorXd v(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        v(i) = std::atan2(z(k + i), z(i));
    }
    return v;
}

/// Inverse map through the cached decoder: x_hat = pinv(2*pi*sigma*W) * v_hat.
///
/// Exact (to rounding) when D >= 2*d_in and the original input stayed
/// inside the injectivity radius; otherwise this is the least-squares
/// solution and the caller judges the result by its reconstruction error.
inline Eigen::VectorXd reverse(const PrimeBasis& basis, const Eigen::VectorXd& z) {
    detail::check_embedding_width(basis, z.size());
    return basis.decoder() * recover_phases(z);
}

/// Row-wise batched inverse over an N x d_out matrix.
inline Eigen::MatrixXd reverse(const PrimeBasis& basis, const Eigen::MatrixXd& zs) {
    detail::check_embedding_width(basis, zs.cols());
    const Eigen::Index k = basis.k();
    Eigen::MatrixXd phases =
        zs.rightCols(k).binaryExpr(zs.leftCols(k), [](double s, double c) {
            return std::atan2(s, c);
        });
    return phases * basis.decoder().transpose();
}

/// Sequence generation: row t is [cos(2*pi*t*omega) | sin(2*pi*t*omega)]
/// for t = 0 .. n-1.
inline Codebook generate_static(const StaticBasis& basis, Eigen::Index n) {
    if (n < 1) throw empty_input_error("sequence length must be >= 1");
    const Eigen::Index k = basis.omega.size();
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    const Eigen::MatrixXd theta = kTwoPi * (t * basis.omega.transpose());
    Codebook cb;
    cb.rows.resize(n, basis.d_out);
    cb.rows.leftCols(k) = theta.array().cos().matrix();
    cb.rows.rightCols(k) = theta.array().sin().matrix();
    cb.meta.source = Source::static_prime;
    cb.meta.n = n;
    cb.meta.dim = basis.d_out;
    return cb;
}

/// Scale every row to unit L2 norm. Prime-source rows have norm
/// sqrt(D/2) exactly (up to rounding), so this divides by that constant.
inline Codebook normalize_rows(Codebook cb) {
    for (Eigen::Index i = 0; i < cb.rows.rows(); ++i) {
        const double norm = cb.rows.row(i).norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw degenerate_row_error("row " + std::to_string(i) +
                                       " has zero or non-finite norm");
        }
        cb.rows.row(i) /= norm;
    }
    return cb;
}

} // namespace primefreq
