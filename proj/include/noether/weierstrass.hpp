#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "noether/bernstein.hpp"
#include "noether/chain.hpp"
#include "noether/complexbox.hpp"
#include "noether/config.hpp"
#include "noether/evaluate.hpp"
#include "noether/polynomial.hpp"

namespace noether {

// Affine unitary coordinates: local u corresponds to the ambient point
// origin + sum_j u_j * columns[j]. Columns are orthonormal, so the inverse
// is the conjugate-transpose action on x - origin.
struct UnitaryFrame {
    std::vector<BigComplex> origin;
    std::vector<std::vector<BigComplex>> columns; // columns[j][i] = ambient component i

    size_t dim() const { return origin.size(); }
    std::vector<BigComplex> to_ambient(const std::vector<BigComplex>& u) const;
    std::vector<BigComplex> to_local(const std::vector<BigComplex>& x) const;

    static UnitaryFrame identity(std::vector<BigComplex> origin);
    // Gram-Schmidt on raw columns; throws when they are numerically dependent.
    static UnitaryFrame orthonormalized(std::vector<BigComplex> origin,
                                        std::vector<std::vector<BigComplex>> raw);
    // Frame whose last column is dir (normalized); the rest is a deterministic
    // orthonormal completion from the standard basis.
    static UnitaryFrame fiber_last(std::vector<BigComplex> origin, std::vector<BigComplex> dir);

    nlohmann::json to_json() const;
    static UnitaryFrame from_json(const nlohmann::json& j);
};

// Product polydisc in frame coordinates: the first base.dim() local
// coordinates range over `base`, the remaining fiber.dim() over `fiber`.
// `degree` is the verified fiber count over the base (empty = unverified);
// `margin` is the smallest boundary modulus seen during verification.
struct WeierstrassPolydisc {
    UnitaryFrame frame;
    ComplexBox base;
    ComplexBox fiber;
    std::optional<long> degree;
    BigFloat margin;

    size_t base_dim() const { return base.dim(); }
    size_t fiber_dim() const { return fiber.dim(); }
    std::vector<BigComplex> ambient_point(const std::vector<BigComplex>& z,
                                          const std::vector<BigComplex>& w) const;

    nlohmann::json to_json() const;
    static WeierstrassPolydisc from_json(const nlohmann::json& j);
};

struct AlgebraicVariety {
    std::vector<std::string> vars; // ambient coordinate names, sorted
    std::vector<Polynomial> generators;
    int dimension = 0; // pure dimension, asserted by the caller

    void validate() const;
};

struct NoetherianZeroLocus {
    ChainPtr chain;                    // ambient coordinates = chain coords
    std::vector<Polynomial> functions; // over chain coords and members
    int dimension = 0;
};

using AnalyticSet = std::variant<AlgebraicVariety, NoetherianZeroLocus>;

size_t ambient_dim(const AnalyticSet& X);
int set_dimension(const AnalyticSet& X);

// Defining equations as ambient-point evaluators (point order: the variety's
// variable order, resp. the chain's coordinate order).
std::vector<MultiMap> defining_maps(const AnalyticSet& X, const RunConfig& cfg);

struct VerifyReport {
    bool ok = false;
    BigFloat margin; // min over boundary samples of max_i |f_i|
    BigFloat scale;  // largest modulus seen; fixes the relative threshold
};

// Samples closure(base) x boundary(fiber) -- every fiber face, not just the
// distinguished torus -- and reports the smallest max-modulus of the
// defining equations there. Passes when the margin clears the relative
// tolerance, i.e. the boundary stays away from the zero set.
VerifyReport verify_polydisc(const std::vector<MultiMap>& eqs, const WeierstrassPolydisc& disc,
                             const RunConfig& cfg);
VerifyReport verify_polydisc(const AnalyticSet& X, const WeierstrassPolydisc& disc,
                             const RunConfig& cfg);

// Fiber count over sampled base points (at least cfg.base_samples of them).
// Algebraic sets are counted by restricting the generators to the fiber line
// and solving; Noetherian ones by the argument principle, which needs fiber
// dimension 1. Throws when counts vary across the base.
long degree(const AnalyticSet& X, const WeierstrassPolydisc& disc, const RunConfig& cfg);

// Construction for a hypersurface {R = 0} meeting the ball
// |x - center| <= radius: take the sphere direction maximizing |R|, run the
// low-value disc on that line to get the fiber, size the base by the Cauchy
// gradient bound m/(c_cal * M_B), then halve the base radius until
// verification passes. The degree comes from the winding number on the
// central fiber. R is any scalar evaluator defined on the closed ball.
WeierstrassPolydisc hypersurface_polydisc(const MultiMap& R, const std::vector<BigComplex>& center,
                                          const BigFloat& radius, const RunConfig& cfg);

// Product of F over the fiber of W above the base point (with multiplicity).
// W algebraic with fiber dimension 1; z_local in the frame's base block.
BigComplex analytic_resultant(const AlgebraicVariety& W, const WeierstrassPolydisc& disc,
                              const NoetherianFunction& F, const std::vector<BigComplex>& z_local,
                              const RunConfig& cfg);

// Intersection step: Weierstrass polydisc for {x in W : F(x) = 0} over the
// ball |z - bz_center| <= bz_radius inside the base of `disc`, built by the
// hypersurface construction on the analytic resultant and crossed with the
// fiber box. The reported degree is the zero count of the resultant on the
// central base fiber. Refuses when the resultant vanishes identically
// (sampled test): F would be zero on a whole component.
WeierstrassPolydisc intersect_polydisc(const AlgebraicVariety& W, const WeierstrassPolydisc& disc,
                                       const NoetherianFunction& F,
                                       const std::vector<BigComplex>& bz_center,
                                       const BigFloat& bz_radius, const RunConfig& cfg);

struct FrameSearchReport {
    WeierstrassPolydisc disc;
    BigFloat eta; // ball radius / polydisc coordinate radius when ok
    int attempts = 0;
    bool ok = false;
    BigFloat best_margin; // best failing margin otherwise
};

// Search over deterministic pseudo-random unitary frames and dyadic shrink
// factors; the first combination passing verification with a constant fiber
// count wins (lowest index, so the result is reproducible).
FrameSearchReport algebraic_polydisc(const AlgebraicVariety& V, const std::vector<BigComplex>& center,
                                     const BigFloat& radius, const RunConfig& cfg);

} // namespace noether
