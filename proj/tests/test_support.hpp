#pragma once

// Shared helpers for the test suite: deterministic RNG and approximate
// comparisons for big-float values.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "noether/bigfloat.hpp"
#include "noether/polynomial.hpp"
#include "noether/rational.hpp"

namespace testutil {

using noether::BigComplex;
using noether::BigFloat;
using noether::GaussianRational;
using noether::Polynomial;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

// Uniform double in [0,1); implementation-independent bit slicing.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline long rand_int(std::mt19937_64& rng, long lo, long hi) { // inclusive
    return lo + static_cast<long>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

inline mpq_class rand_rational(std::mt19937_64& rng, long num_range = 9, long den_range = 5) {
    mpq_class q(rand_int(rng, -num_range, num_range), rand_int(rng, 1, den_range));
    q.canonicalize();
    return q;
}

inline GaussianRational rand_gaussian(std::mt19937_64& rng) {
    return GaussianRational(rand_rational(rng), rand_rational(rng));
}

inline Polynomial rand_poly(std::mt19937_64& rng, const std::vector<std::string>& vars,
                            unsigned max_deg, int terms) {
    Polynomial p{std::vector<std::string>(vars)};
    for (int t = 0; t < terms; ++t) {
        std::vector<unsigned> e(vars.size());
        unsigned budget = max_deg;
        for (size_t k = 0; k < vars.size(); ++k) {
            e[k] = static_cast<unsigned>(rand_int(rng, 0, budget));
            budget -= e[k];
        }
        p.add_term(e, rand_gaussian(rng));
    }
    return p;
}

inline bool close(const BigFloat& a, const BigFloat& b, double tol) {
    return noether::abs(a - b) <= BigFloat(tol);
}

inline bool close(const BigComplex& a, const BigComplex& b, double tol) {
    return (a - b).abs() <= BigFloat(tol);
}

inline bool close(const BigComplex& a, double re, double im, double tol) {
    return close(a, BigComplex(re, im), tol);
}

} // namespace testutil
