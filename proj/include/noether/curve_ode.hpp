#pragma once

// Scalar ODE annihilators for algebraic functions y(t) defined by a plane
// polynomial P(y,t): derivatives of y live in the quotient ring mod P, so the
// first linear dependence over rational functions gives an exact operator
// L = a0 d^k + ... + ak with polynomial coefficients. On top of that sit the
// restriction of a Noetherian chain to an algebraic curve (a polynomial
// first-order system in the branch derivatives, the inverted leading
// coefficients and the chain members), good annuli that dodge ramification,
// and argument-principle zero counts along curves paired with an index bound.

#include <string>
#include <vector>

#include "noether/bernstein.hpp"
#include "noether/chain.hpp"
#include "noether/ideal_chain.hpp"

namespace noether {

struct ScalarODE {
    std::vector<Polynomial> a; // a[0..k] in tvar; a0 != 0 with sup-norm 1
    std::string tvar;

    long order() const { return long(a.size()) - 1; }
    // max_i ||a_i|| / ||a_0||, exact.
    mpq_class slope() const;
};

// Minimal operator annihilating the algebraic function y(t) cut out by P.
// P must be squarefree in yvar (the derivative inverse mod P exists); the
// certificate L(y) = 0 is re-verified symbolically before returning.
ScalarODE annihilator(const Polynomial& P, const std::string& yvar, const std::string& tvar);

struct AlgebraicCurve {
    std::vector<std::string> vars; // sorted ambient roster
    std::vector<Polynomial> generators;
    std::string projection; // the coordinate playing t

    unsigned degree() const;
    void validate() const;
};

// The curve restriction as a polynomial field: per coordinate v the branch
// derivatives v_d0..v_d{k-1}, the inverted leading coefficient v_q, then the
// chain members; d/dt of the roster is polynomial in the roster.
struct RestrictionSystem {
    DerivationField field;
    long n_state = 0; // roster size
    mpq_class xi_norm;
    double shape_log2 = 0;    // documented size-bound shape, log2
    bool within_shape = true; // log2 ||xi|| against the shape
    std::vector<ScalarODE> annihilators;  // per non-projection coordinate
    std::vector<std::string> coordinates; // parallel to annihilators
};

RestrictionSystem restriction_system(const ChainPtr& chain, const AlgebraicCurve& C,
                                     const RunConfig& cfg);

struct AnnulusReport {
    BigFloat r, rho;  // annulus { r - rho < |t| < r + rho }
    BigFloat margin;  // min over exclusions of ||sigma| - r| - rho
    std::vector<BigComplex> exclusions; // ramification points and a0 roots
    bool ok = false;
};

// Annulus with 1/2 < r < 3/4 whose closure avoids the moduli of every
// exclusion point (discriminant roots and leading-coefficient roots).
AnnulusReport good_annulus(const AlgebraicCurve& C, const RunConfig& cfg);

struct CurveZeroReport {
    long zeros = 0;    // argument-principle count over the lifted branches
    long branches = 0; // branch tuples over the contour
    long cycles = 0;   // monodromy orbits after one loop
    long n_state = 0;  // restriction-system roster size
    mpq_class xi_norm;
    std::vector<BigFloat> branch_indices; // per-branch gap-2 indices when the
                                          // monodromy is trivial, else the
                                          // single resultant entry
    BigFloat resultant_index;             // gap-2 index of prod_b F(branch_b)
    BigFloat subadd_bound;                // c_cal ln(nu+1) sum branch_indices
    BigFloat gamma;                       // 2/eps^2 + gamma_cal eps at eps = 1
    BigFloat bound;                       // gamma * worst index estimate
    bool holds = false;
};

// Truth by lifting the boundary circle through the branch structure of C and
// accumulating arg F per branch; bound through the index of the branch
// product on the doubled disc. Throws when F vanishes identically on a
// component over the contour.
CurveZeroReport count_zeros_on_curve(const NoetherianFunction& F, const AlgebraicCurve& C,
                                     const Disc& B, const RunConfig& cfg);

} // namespace noether
