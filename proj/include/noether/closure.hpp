#pragma once

// Closure operations on Noetherian chains: union, differentiation, ring
// arithmetic, reciprocals, composition, local inverses, implicit functions,
// clearing of rational right-hand sides, and domain extension. Every
// operation returns the lemma-level size certificate (n, l, alpha, beta)
// composed by the corresponding formula and appends a replayable entry to
// the operation log; the constructed polynomials can have smaller actual
// degree than the certificate.

#include <optional>
#include <string>
#include <vector>

#include "noether/chain.hpp"
#include "noether/config.hpp"
#include "noether/evaluate.hpp"

namespace noether {

struct CertifiedChain {
    ChainPtr chain;
    ChainParams params; // beta field unused (0)
};

struct CertifiedFn {
    NoetherianFunction fn;
    ChainParams params; // beta = certificate degree of fn
};

struct InvertResult {
    CertifiedChain chain;
    CertifiedFn reciprocal;
};

struct CompInverseResult {
    CertifiedChain chain;
    std::vector<CertifiedFn> inverse; // coordinate functions of F^-1
};

struct ImplicitResult {
    CertifiedChain chain;
    std::vector<CertifiedFn> graph; // the solved-for coordinates as functions of the rest
};

struct ExtendResult {
    CertifiedChain chain;
    BigFloat achieved_margin; // the inflation that passed the NS <= 2*NS check
};

// System with rational right-hand sides num/den; depolarize clears the
// denominators by adjoining their reciprocals as members.
struct RationalSystem {
    struct Entry {
        Polynomial num;
        Polynomial den; // constant 1 when polynomial already
    };
    std::vector<std::string> coords, members;
    std::vector<std::vector<Entry>> rhs; // [member][coord]
    ComplexBox domain;
    std::vector<BigComplex> basepoint;
    std::vector<BigComplex> initial_values;
};

CertifiedChain make_chain(NoetherianChain c, const RunConfig& cfg, OpLog* log = nullptr);

// Wraps a polynomial over an existing chain; the certificate degree is the
// actual degree (entry point of the calculus).
CertifiedFn as_function(const CertifiedChain& c, Polynomial p, OpLog* log = nullptr);

// (n, l1+l2, max(a1,a2)); NS = max. Chains must share coords/domain/basepoint.
// Members colliding by name must be identical entries (deduplicated).
CertifiedChain chain_union(const CertifiedChain& a, const CertifiedChain& b, const RunConfig& cfg,
                           OpLog* log = nullptr);

// Moves a function to a union chain that contains its own chain's members.
CertifiedFn transfer(const CertifiedFn& f, const CertifiedChain& target, OpLog* log = nullptr);

// d/dx_j under the system; certificate degree max(0, beta+alpha-1).
CertifiedFn derivative(const CertifiedFn& f, size_t coord, OpLog* log = nullptr);

enum class CombineOp { add, mul };
// add: max(b1,b2); mul: b1+b2. Same chain required.
CertifiedFn combine(const CertifiedFn& a, const CertifiedFn& b, CombineOp op,
                    OpLog* log = nullptr);

// Adjoins rho = 1/F after certifying |F| >= eps on sampled domain;
// certificate (n, l+1, alpha+beta+1), reciprocal degree 1.
InvertResult invert(const CertifiedFn& f, const mpq_class& eps, const RunConfig& cfg,
                    OpLog* log = nullptr);

// g composed with the tuple F (length = dim of g's chain); the result lives
// on a chain carrying F's chain plus pullbacks of g's members.
// Certificate (n1, l1+l2, max(a1+b1, a2)), result degree b2.
CertifiedFn compose(const std::vector<CertifiedFn>& F, const CertifiedFn& g, const RunConfig& cfg,
                    OpLog* log = nullptr);

// Local inverse of the self-map F near the basepoint; needs |det dF| >= eps
// on the sampled domain. Result chain lives over fresh image coordinates,
// with members x o F^-1, phi o F^-1, and 1/det o F^-1.
CompInverseResult compositional_inverse(const std::vector<CertifiedFn>& F, const mpq_class& eps,
                                        const RunConfig& cfg, OpLog* log = nullptr);

// Solves F = 0 for the coordinates named in solve_for near the basepoint;
// needs |det dF/dy| >= eps along the sampled graph.
ImplicitResult implicit_solve(const std::vector<CertifiedFn>& F,
                              const std::vector<std::string>& solve_for, const mpq_class& eps,
                              const RunConfig& cfg, OpLog* log = nullptr);

// Polynomial chain from a rational system; one fresh member per distinct
// denominator, rule d(rho)/dx_k = -rho^2 * D_k(den).
CertifiedChain depolarize(const RationalSystem& sys, const mpq_class& eps, const RunConfig& cfg,
                          OpLog* log = nullptr);

// Inflates the domain by NS^(-kappa), halving until the sampled NS of the
// result stays within twice the input NS.
ExtendResult extend_domain(const CertifiedChain& c, const RunConfig& cfg, OpLog* log = nullptr);

// Recomputes the output certificate of a logged operation from its input
// certificates; used to audit logs independently of the construction.
ChainParams replay_op(const std::string& op, const std::vector<ChainParams>& inputs);

// exact determinant/adjugate of small polynomial matrices
Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m);
// adj[i][j] such that m * adj = det * I
std::vector<std::vector<Polynomial>> poly_adjugate(const std::vector<std::vector<Polynomial>>& m);

} // namespace noether
