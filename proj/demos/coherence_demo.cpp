// Compare the coherence of a prime sequence codebook against the seeded
// gaussian baseline at one desk-scale cell.

#include <iostream>

#include "primefreq/primefreq.hpp"

int main() {
    namespace pf = primefreq;
    pf::PrimeTable primes;

    const long long n = 1000;
    const int dim = 64;
    const pf::GramReport prime =
        pf::report(pf::generate_static(pf::build_static(dim, primes), n));
    const pf::GramReport gauss = pf::report(pf::generate_gaussian({42, n, dim}));

    for (const pf::GramReport* rep : {&prime, &gauss}) {
        std::cout << pf::to_string(rep->meta.source) << ": e_rms = " << rep->e_rms
                  << ", mu_max = " << rep->mu_max;
        if (rep->optimality_ratio) std::cout << ", ratio = " << *rep->optimality_ratio;
        std::cout << '\n';
    }
    return 0;
}
