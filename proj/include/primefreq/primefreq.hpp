#pragma once

// Umbrella header.

#include "primefreq/errors.hpp"
#include "primefreq/rng.hpp"
#include "primefreq/primes.hpp"
#include "primefreq/basis.hpp"
#include "primefreq/encode.hpp"
#include "primefreq/baseline.hpp"
#include "primefreq/metrics.hpp"
#include "primefreq/synth.hpp"
#include "primefreq/csv.hpp"
#include "primefreq/svg.hpp"
#include "primefreq/harness.hpp"
