#pragma once

#include <stdexcept>

namespace primefreq {

/// Base class of every error thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Embedding dimension odd, zero, or otherwise unusable.
struct invalid_dimension_error : error { using error::error; };

/// Vector or matrix width does not match the basis it is used with.
struct dimension_mismatch_error : error { using error::error; };

/// A sieve extension would exceed the configured limit cap.
struct resource_exhausted_error : error { using error::error; };

/// A matrix decomposition did not converge.
struct numerical_error : error { using error::error; };

/// A zero row where a normalizable row was required.
struct degenerate_row_error : error { using error::error; };

/// Rows were expected to be unit-norm and are not.
struct not_normalized_error : error { using error::error; };

struct empty_input_error : error { using error::error; };

struct empty_population_error : error { using error::error; };

/// A cell claimed the manifold regime but its data exceeds the
/// injectivity radius of the requested basis.
struct injectivity_violation_error : error { using error::error; };

/// File could not be read, written, or parsed.
struct io_error : error { using error::error; };

} // namespace primefreq
