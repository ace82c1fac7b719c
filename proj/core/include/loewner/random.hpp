#pragma once

#include <cstdint>
#include <random>

#include "loewner/matrix.hpp"

namespace loewner {

using Rng = std::mt19937_64;

/// Independent stream for trial `trial` of a run seeded with `seed`. The
/// stream depends only on (seed, trial, salt), never on scheduling.
Rng trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt = 0);

/// Entries with independent N(0, 1/2) real and imaginary parts (E|z|^2 = 1).
Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary via QR of a complex Gaussian with phase fix.
Matrix haar_unitary(Eigen::Index n, Rng& rng);

/// (G + G*) / 2 for a complex Gaussian G.
HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng);

/// G G* + shift * I.
HermitianMatrix random_pd(Eigen::Index n, Rng& rng, double shift = 0.05);

double log_uniform(double lo, double hi, Rng& rng);

/// U diag(values) U* with U Haar-random.
HermitianMatrix random_with_spectrum(std::span<const double> values, Rng& rng);

}  // namespace loewner
