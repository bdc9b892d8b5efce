#pragma once

// Exact Groebner bases over the Gaussian rationals with representation
// tracking: every basis element remembers how it is written in terms of the
// input generators, so ideal membership comes back with explicit cofactors
// instead of a bare yes/no. Budgets from RunConfig cap basis size and term
// degree; a blown budget yields a partial basis flagged incomplete.

#include <string>
#include <vector>

#include "noether/config.hpp"
#include "noether/polynomial.hpp"

namespace noether {

// Graded reverse lexicographic order on a fixed roster. Variables listed in
// `last` are moved to the least significant positions (in the order given),
// which keeps their degrees low in the cofactors.
struct TermOrder {
    std::vector<std::string> vars; // sorted roster, as Polynomial keeps it
    std::vector<size_t> sig;       // sig[i] = significance of vars[i], 0 = most

    static TermOrder degrevlex(std::vector<std::string> vars,
                               const std::vector<std::string>& last = {});

    // Exponent vectors aligned to vars. Strict order, zero vector smallest.
    bool less(const Polynomial::Exponents& a, const Polynomial::Exponents& b) const;
};

struct TrackedPoly {
    Polynomial p;                // aligned to the order roster
    std::vector<Polynomial> rep; // p == sum rep[i] * gens[i], exactly
};

struct Membership {
    bool member = false;
    std::vector<Polynomial> cofactors; // over the original generators
    Polynomial remainder;
};

struct GroebnerBasis {
    TermOrder order;
    std::vector<Polynomial> gens;   // originals, aligned to the roster
    std::vector<TrackedPoly> basis; // reduced basis when complete
    bool complete = true;

    // Multivariate division by the basis; member iff remainder is zero.
    // Cofactors are rewritten through the tracked representations so the
    // certificate f == sum cofactors[i]*gens[i] + remainder is exact.
    Membership reduce(const Polynomial& f) const;
};

GroebnerBasis buchberger(const std::vector<Polynomial>& gens, TermOrder order,
                         const RunConfig& cfg);

} // namespace noether
