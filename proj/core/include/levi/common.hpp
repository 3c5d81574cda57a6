#pragma once

// Shared numeric types, error hierarchy, seeded random streams and the
// small worker pool used by the sampling loops.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace levi {

using Complex = std::complex<double>;

/// A point of C^n or a tangent vector zeta = xi + i*eta.
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree with each other or with the ambient dimension.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Singular differential, vanishing gradient, Newton failure and similar.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A black-box evaluator produced a non-finite sample.
class EvaluationError : public Error {
public:
  using Error::Error;
};

/// An expression declared real-valued is not.
class RealnessError : public Error {
public:
  using Error::Error;
};

/// Two independent routes to the same quantity disagree; indicates a bug.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

/// Invalid configuration value (step sizes, tolerances, thread counts).
class ConfigError : public Error {
public:
  using Error::Error;
};

void require_dim(const CVec& v, Index n, const char* what);

// ---------------------------------------------------------------------------
// Small vector helpers
// ---------------------------------------------------------------------------

/// Hermitian product (a, b) = sum_j a_j * conj(b_j).
Complex hermitian_product(const CVec& a, const CVec& b);

/// Euclidean product <a, b> = Re (a, b) on C^n = R^2n.
double euclidean_product(const CVec& a, const CVec& b);

/// (Re z_1..Re z_n, Im z_1..Im z_n).
RVec realify(const CVec& z);
CVec complexify(const RVec& x);

double max_abs(const CMat& m);
double max_abs(const std::vector<CMat>& tensor);

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream for sample `index` of a run seeded with `seed`.
/// Streams depend only on (seed, index), never on worker scheduling.
Rng substream(std::uint64_t seed, std::uint64_t index);

CVec random_gaussian(Rng& rng, Index n);
CVec random_unit(Rng& rng, Index n);
/// Uniform in the closed ball of C^n = R^2n.
CVec random_in_ball(Rng& rng, const CVec& center, double radius);
double random_uniform(Rng& rng, double lo, double hi);

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

/// Worker count: hardware concurrency capped by LEVI_LAB_THREADS when set.
std::size_t worker_count();

/// Parses LEVI_LAB_THREADS; returns 0 when unset, throws ConfigError when
/// set to anything other than a positive integer.
std::size_t thread_cap_from_env();

namespace detail {
void run_parallel(std::size_t count, const std::function<void(std::size_t)>& body);
}

/// Runs body(i) for i in [0, count). Results must be written to per-index
/// slots; the first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn&& body) {
  detail::run_parallel(count, std::function<void(std::size_t)>(std::forward<Fn>(body)));
}

} // namespace levi
