#pragma once

// Lie-derivation ideal chains. Differentiating a polynomial along a
// polynomial vector field generates an ascending chain of ideals; the chain
// stabilizes, the stabilization certificate is a cofactor identity, and
// restricting that identity to a solution arc turns it into a linear ODE
// whose coefficient bounds dominate the Bernstein index of the restriction.

#include <functional>
#include <vector>

#include "noether/bernstein.hpp"
#include "noether/groebner.hpp"

namespace noether {

// dx_i/dt = xi[i](t, x); the d/dt component is implicit.
struct DerivationField {
    std::string tvar;
    std::vector<std::string> xvars; // parallel to xi, any order
    std::vector<Polynomial> xi;

    unsigned degree() const;
    mpq_class sup_norm() const;
    std::vector<std::string> roster() const; // sorted var union including tvar
};

// dP/dt along the field: dP/dt + sum xi_i * dP/dx_i.
Polynomial lie_derive(const DerivationField& field, const Polynomial& P);

struct StabilizationResult {
    long k = -1;    // first index with xi^{k+1} P in I_k = <P, ..., xi^k P>
    bool complete = false;
    bool spot_check = false;            // xi^{k+2} P also lands in I_k
    std::vector<Polynomial> lie_chain;  // xi^0 P .. xi^{k+1} P (last computed)
    std::vector<Polynomial> cofactors;  // xi^{k+1} P == sum_j cofactors[j] * xi^{k-j} P
    std::vector<GroebnerBasis> bases;   // bases of I_0 .. I_k (partial when incomplete)
};

// Degrevlex with t last; stops at the first stabilization index, or after
// cfg.stabilize_max_k derivatives / a blown Groebner budget with a partial
// result.
StabilizationResult stabilize(const DerivationField& field, const Polynomial& P,
                              const RunConfig& cfg);

// t -> x(t), components ordered like field.xvars.
using PathEvaluator = std::function<std::vector<BigComplex>(const BigComplex&)>;

// Taylor coefficients scaled back to derivatives: [g(c), g'(c), ..., g^(m)(c)]
// by Cauchy integrals over a circle of radius r around c.
std::vector<BigComplex> disc_derivatives(const LineMap& g, const BigComplex& c,
                                         const BigFloat& r, long m, const RunConfig& cfg);

struct DerivedODE {
    long k = 0;
    std::vector<LineMap> coeffs; // c_j(t, x(t)) for j = 0..k
    LineMap restricted;          // g(t) = P(t, x(t))
    BigFloat residual;           // worst sampled relative defect of the ODE
};

// The (k+1)-st derivative identity along the arc, with the cofactors
// evaluated on the solution; residual checked on a sample circle inside
// `domain`.
DerivedODE derived_linear_ode(const StabilizationResult& res, const DerivationField& field,
                              const PathEvaluator& path, const Disc& domain,
                              const RunConfig& cfg);

// c_cal * (M + k ln(k+1)) where M bounds the rescaled coefficients on the
// boundary of D: the operator bound for any solution's index on (K, D).
struct OdeBound {
    BigFloat m;     // sampled coefficient bound after rescaling D to the unit disc
    BigFloat bound;
    long k = 0;
};
OdeBound bernstein_from_ode(const std::vector<LineMap>& coeffs, const Disc& D, const Disc& K,
                            const RunConfig& cfg);

} // namespace noether
