#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "primefreq/errors.hpp"
#include "primefreq/primes.hpp"

namespace primefreq {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// max(rows, cols) * eps * s_max are treated as zero.
inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw numerical_error("SVD did not converge");
    }
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) *
                          std::numeric_limits<double>::epsilon() *
                          (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

// Deterministic frequency basis for the dynamic map.
//
// W is k x d with W(i, j) = sqrt(p_{i*d + j + 1}): the first k*d prime
// roots laid out row-major, hence strictly increasing when read row by
// row. The decoder is the pseudoinverse of 2*pi*sigma*W, computed lazily
// on first use and cached; the cache is compute-once and safe to hit from
// several threads.
class PrimeBasis {
public:
    PrimeBasis(Eigen::MatrixXd w, double sigma, int d_in, int d_out)
        : w_(std::move(w)),
          sigma_(sigma),
          d_in_(d_in),
          d_out_(d_out),
          w_max_(w_(w_.rows() - 1, w_.cols() - 1)),
          decoder_cache_(std::make_shared<DecoderCache>()) {}

    const Eigen::MatrixXd& w() const { return w_; }
    double sigma() const { return sigma_; }
    int d_in() const { return d_in_; }
    int d_out() const { return d_out_; }
    int k() const { return d_out_ / 2; }
    double w_max() const { return w_max_; }

    /// Cached pseudoinverse of 2*pi*sigma*W (shape d_in x k). For k >= d_in
    /// it is a left inverse of the phase projection.
    const Eigen::MatrixXd& decoder() const {
        std::call_once(decoder_cache_->once, [this] {
            decoder_cache_->pinv = pseudoinverse(kTwoPi * sigma_ * w_);
        });
        return decoder_cache_->pinv;
    }

    /// Largest r such that any ||x||_inf < r keeps every phase component
    /// of 2*pi*sigma*W*x strictly inside (-pi, pi), so no wrapping occurs.
    double injectivity_radius() const {
        return 1.0 / (2.0 * sigma_ * static_cast<double>(d_in_) * w_max_);
    }

private:
    struct DecoderCache {
        std::once_flag once;
        Eigen::MatrixXd pinv;
    };

    Eigen::MatrixXd w_;
    double sigma_;
    int d_in_;
    int d_out_;
    double w_max_;
    std::shared_ptr<DecoderCache> decoder_cache_;
};

/// Frequency vector for the static sequence generator: omega holds the
/// square roots of the first D/2 primes.
struct StaticBasis {
    Eigen::VectorXd omega;
    int d_out = 0;
};

namespace detail {

inline void check_even_dim(int d_out) {
    if (d_out < 2 || d_out % 2 != 0) {
        throw invalid_dimension_error("output dimension must be even and >= 2, got " +
                                      std::to_string(d_out));
    }
}

} // namespace detail

inline PrimeBasis build_dynamic(int d_in, int d_out, double sigma, PrimeTable& primes) {
    detail::check_even_dim(d_out);
    if (d_in < 1) {
        throw invalid_dimension_error("input dimension must be >= 1, got " +
                                      std::to_string(d_in));
    }
    if (!(sigma > 0.0)) {
        throw error("sigma must be positive, got " + std::to_string(sigma));
    }
    const int k = d_out / 2;
    const std::vector<double> roots =
        primes.slice_roots(static_cast<std::size_t>(k) * static_cast<std::size_t>(d_in));
    Eigen::MatrixXd w(k, d_in);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < d_in; ++j) {
            w(i, j) = roots[static_cast<std::size_t>(i) * d_in + j];
        }
    }
    return PrimeBasis(std::move(w), sigma, d_in, d_out);
}

inline StaticBasis build_static(int d_out, PrimeTable& primes) {
    detail::check_even_dim(d_out);
    const int k = d_out / 2;
    const std::vector<double> roots = primes.slice_roots(static_cast<std::size_t>(k));
    StaticBasis basis;
    basis.omega = Eigen::Map<const Eigen::VectorXd>(roots.data(), k);
    basis.d_out = d_out;
    return basis;
}

} // namespace primefreq
