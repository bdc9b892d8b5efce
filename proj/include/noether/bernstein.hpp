#pragma once

// Bernstein indices on discs: ln of the ratio between the maximum modulus on
// a disc boundary and on a concentric shrink. The index controls zero counts,
// low-value discs and gap conversions; every bound here carries a calibration
// constant from RunConfig and reports its slack instead of hiding it. The
// argument-principle zero counter doubles as the independent oracle for all
// zero-count assertions.

#include "noether/bigfloat.hpp"
#include "noether/config.hpp"
#include "noether/evaluate.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace noether {

// Disc in one complex parameter. When the parameter runs along a line inside
// C^n the ambient field records base + direction; the maps passed to the
// operations below are always functions of the parameter alone.
struct Disc {
    BigComplex center;
    BigFloat radius;

    struct Line {
        std::vector<BigComplex> base;
        std::vector<BigComplex> dir;
    };
    std::optional<Line> ambient;

    Disc(BigComplex c, BigFloat r);

    // U^eta: same center, radius divided by eta (eta > 1 shrinks).
    Disc shrink(const BigFloat& eta) const;
};

struct CircleExtremum {
    BigFloat value;
    BigComplex where;
    // spread of the final refinement bracket; a local error estimate,
    // not a certified global bound
    BigFloat uncertainty;
};

CircleExtremum max_on_circle(const LineMap& f, const Disc& d, const RunConfig& cfg);
CircleExtremum min_on_circle(const LineMap& f, const Disc& d, const RunConfig& cfg);

struct BernsteinReport {
    BigFloat index;
    BigFloat m_u, m_k;
    BigComplex witness_u, witness_k;
    BigFloat eta;         // gap when K is a concentric shrink of U, else 0
    BigFloat uncertainty; // first-order propagation of the two maxima
    int lines_used = 0;   // directional form only
};

// ln(M_U / M_K); requires K inside U and f not numerically zero on U.
BernsteinReport bernstein_index(const LineMap& f, const Disc& U, const Disc& K, const RunConfig& cfg);
BernsteinReport bernstein_gap_index(const LineMap& f, const Disc& U, const BigFloat& eta, const RunConfig& cfg);

// Winding number of f along the boundary circle, refined until every angular
// increment is below pi/2. Refuses when the boundary modulus falls under the
// noise floor (zero on or numerically near the contour).
long count_zeros_disc(const LineMap& f, const Disc& d, const RunConfig& cfg);

struct ZeroBoundReport {
    long zeros;
    BigFloat index;
    BigFloat bound;
    BigFloat slack;
    bool holds;
};
// #zeros(U^{1+eps}) <= (2/eps^2 + gamma_cal*eps) * gap index at 1+eps
ZeroBoundReport check_zero_bound(const LineMap& f, const Disc& U, const BigFloat& eps,
                                 double gamma_cal, const RunConfig& cfg);

struct LowValueDisc {
    Disc disc;
    BigFloat m;     // minimum boundary modulus on the returned circle
    BigFloat floor; // exp(-c_cal * gap-2 index) * M_U
    BigFloat slack;
    bool holds;
};
// Largest radius in [r/4, r/2] whose minimum boundary modulus clears the
// calibrated floor; falls back to the best minimum found (holds=false).
LowValueDisc low_value_disc(const LineMap& f, const Disc& U, const RunConfig& cfg);

struct GapConversionReport {
    BigFloat lhs; // gap-2 index
    BigFloat rhs; // (chi_eps + tau_eps ln 2) * gap-(1+eps) index
    BigFloat slack;
    bool holds;
};
GapConversionReport gap_conversion_check(const LineMap& f, const Disc& U, const BigFloat& eps,
                                         const RunConfig& cfg);

struct SubadditivityReport {
    BigFloat product_index;
    BigFloat index_sum;
    BigFloat bound; // c_cal * ln(n+1) * index_sum
    BigFloat slack;
    int factors = 0;
    bool holds = false;
};
SubadditivityReport subadditivity_check(const std::vector<LineMap>& fs, const Disc& U,
                                        const RunConfig& cfg);

using MultiMap = std::function<BigComplex(const std::vector<BigComplex>&)>;

// Max of line-restricted gap indices over quasi-random complex lines through
// the ball center. A sampled lower bound for the directional index: monotone
// in line_samples, never claimed as the supremum. Restrictions whose maximum
// is below the noise floor are skipped; throws when every line is skipped.
BernsteinReport directional_bernstein(const MultiMap& F, const std::vector<BigComplex>& center,
                                      const BigFloat& radius, const BigFloat& eta,
                                      int line_samples, const RunConfig& cfg);

} // namespace noether
