// Encode a small batch of 2D points at both scaling regimes and show how
// reconstruction behaves on each side of the injectivity radius.

#include <iostream>

#include "primefreq/primefreq.hpp"

int main() {
    namespace pf = primefreq;
    pf::PrimeTable primes;

    Eigen::MatrixXd points(4, 2);
    points << 0.3, -0.2, 0.05, 0.6, -0.4, -0.4, 0.0, 0.0;

    for (double sigma : {0.007, 1.0}) {
        pf::PrimeBasis basis = pf::build_dynamic(2, 64, sigma, primes);
        const Eigen::MatrixXd z = pf::forward(basis, points);
        const Eigen::MatrixXd back = pf::reverse(basis, z);
        const double mse = (back - points).squaredNorm() / points.size();
        std::cout << "sigma = " << sigma
                  << "  injectivity radius = " << basis.injectivity_radius()
                  << "  reconstruction mse = " << mse << '\n';
    }
    return 0;
}
