#pragma once

#include <utility>
#include <vector>

#include "noether/bigfloat.hpp"
#include "noether/config.hpp"
#include "noether/polynomial.hpp"

namespace noether {

// All complex roots of sum_k coeffs[k] t^k, by simultaneous (Durand-Kerner)
// iteration from deterministic asymmetric starting points. Multiple roots
// come back as tight clusters of simple ones; callers that need
// multiplicities run cluster_points on the result. Trailing near-zero
// leading coefficients are trimmed relative to the largest coefficient.
// `prec` 0 means the ambient default precision.
std::vector<BigComplex> all_roots(const std::vector<BigComplex>& coeffs, const RunConfig& cfg,
                                  mpfr_prec_t prec = 0);

// Greedy clustering: a point joins the first representative within
// `radius`, otherwise starts its own cluster. Returns (centroid, size) in
// first-seen order.
std::vector<std::pair<BigComplex, int>> cluster_points(const std::vector<BigComplex>& pts,
                                                       const BigFloat& radius);

// Coefficients of t -> p(a + t b) as a univariate polynomial in t, recovered
// by evaluation on a root-of-unity grid of size total_degree(p) + 1. Point
// vectors are aligned to p.vars().
std::vector<BigComplex> restrict_to_line(const Polynomial& p, const std::vector<BigComplex>& a,
                                         const std::vector<BigComplex>& b, mpfr_prec_t prec = 0);

} // namespace noether
