#include "doctest.h"

#include "noether/curve_ode.hpp"
#include "noether/roots.hpp"
#include "test_support.hpp"

#include <map>

using namespace noether;

namespace {

Polynomial pp(const std::string& s) { return parse_polynomial(s); }

bool poly_eq(const Polynomial& a, const Polynomial& b) { return (a - b).is_zero(); }

bool ode_eq(const ScalarODE& L, const std::vector<std::string>& coeffs) {
    if (L.a.size() != coeffs.size()) return false;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!poly_eq(L.a[i], pp(coeffs[i]))) return false;
    return true;
}

// exp-of-a-coordinate chain over ambient (t, y): e1 = e^y.
ChainPtr exp_on_plane(double radius) {
    NoetherianChain c;
    c.coords = {"t", "y"};
    c.members = {"e1"};
    c.rhs = {{pp("0"), pp("e1")}};
    c.domain = ComplexBox({BigComplex(0.0), BigComplex(0.0)}, {BigFloat(radius), BigFloat(radius)});
    c.basepoint = {BigComplex(0.0), BigComplex(0.0)};
    c.initial_values = {BigComplex(1.0)};
    return std::make_shared<const NoetherianChain>(std::move(c));
}

// Branch of P(t, y) = 0 through (t0, y0), tracked by nearest root.
LineMap branch_map(const Polynomial& P, const BigComplex& y0, const RunConfig& cfg) {
    auto coeffs_by_deg = P.as_univariate("y");
    return [coeffs_by_deg, y0, cfg](const BigComplex& t) {
        unsigned top = coeffs_by_deg.rbegin()->first;
        std::vector<BigComplex> coeffs(top + 1, BigComplex(BigFloat(0)));
        for (const auto& [e, poly] : coeffs_by_deg)
            coeffs[e] = poly.nvars() == 0 ? poly.eval({}) : poly.eval({t});
        auto roots = all_roots(coeffs, cfg);
        size_t best = 0;
        for (size_t i = 1; i < roots.size(); ++i)
            if (abs(roots[i] - y0) < abs(roots[best] - y0)) best = i;
        return roots[best];
    };
}

} // namespace

TEST_CASE("annihilators match hand-computed operators") {
    CHECK(ode_eq(annihilator(pp("y^2 - t"), "y", "t"), {"t", "-1/2"}));
    CHECK(ode_eq(annihilator(pp("y - t^2"), "y", "t"), {"t", "-2"}));
    CHECK(ode_eq(annihilator(pp("y^3 - t"), "y", "t"), {"t", "-1/3"}));
    CHECK(ode_eq(annihilator(pp("y^2 - t^3"), "y", "t"), {"t", "-3/2"}));

    // constant graph: d/dt annihilates it
    ScalarODE c = annihilator(pp("y - 5/7"), "y", "t");
    CHECK(ode_eq(c, {"1", "0"}));
    CHECK(c.slope() == 0);

    // the coordinate axis y = 0 needs no derivative at all
    ScalarODE axis = annihilator(pp("y"), "y", "t");
    CHECK(axis.order() == 0);
    CHECK(poly_eq(axis.a[0], pp("1")));

    CHECK(annihilator(pp("y^2 - t"), "y", "t").slope() == mpq_class(1, 2));
    CHECK(annihilator(pp("y - t^2"), "y", "t").slope() == 2);
    CHECK(annihilator(pp("y^3 - t"), "y", "t").slope() == mpq_class(1, 3));

    CHECK_THROWS_AS(annihilator(pp("t^2 + 1"), "y", "t"), std::invalid_argument);
    // repeated factor: y' inverse does not exist mod P
    CHECK_THROWS_AS(annihilator(pp("y^2 - 2*t*y + t^2"), "y", "t"), std::domain_error);
}

TEST_CASE("perturbing the curve leaves the operator of its shape alone") {
    // graphs y^2 = -eps x all satisfy x y' - y/2 relations with the same
    // normalized operator, independent of eps
    ScalarODE ref = annihilator(pp("y^2 + x"), "y", "x");
    CHECK(ode_eq(ref, {"x", "-1/2"}));
    for (const char* eps : {"2", "-3", "1/4", "7/5", "-9"}) {
        ScalarODE L = annihilator(pp("y^2") + pp(eps) * pp("x"), "y", "x");
        CHECK(L.a.size() == ref.a.size());
        for (size_t i = 0; i < ref.a.size(); ++i) CHECK(poly_eq(L.a[i], ref.a[i]));
    }
}

TEST_CASE("annihilator certificates hold along a numeric branch") {
    RunConfig cfg;
    // golden-ratio style branch y^2 - t y - 1 = 0
    Polynomial P = pp("y^2 - t*y - 1");
    ScalarODE L = annihilator(P, "y", "t");
    CHECK(L.a[0].max_norm() == 1);

    BigComplex t0(0.625);
    // branch through the positive root at t0
    BigComplex y0 = branch_map(P, BigComplex(2.0), cfg)(t0);
    auto ys = disc_derivatives(branch_map(P, y0, cfg), t0, BigFloat(0.0625), L.order(), cfg);
    BigComplex acc(0.0);
    BigFloat scale(1.0);
    for (long j = 0; j <= L.order(); ++j) {
        BigComplex term = L.a[size_t(j)].eval({t0}) * ys[size_t(L.order() - j)];
        acc = acc + term;
        scale = max(scale, abs(term));
    }
    CHECK(abs(acc) < BigFloat(1e-25) * scale);
}

TEST_CASE("random planar polynomials admit exact annihilators") {
    RunConfig cfg;
    auto rng = testutil::rng(4021);
    int produced = 0, skipped = 0, checked_numeric = 0;
    for (int trial = 0; trial < 25; ++trial) {
        long dy = testutil::rand_int(rng, 1, 3);
        Polynomial P = Polynomial::variable("y").pow(unsigned(dy));
        for (long j = 0; j < dy; ++j) {
            Polynomial cj = testutil::rand_poly(rng, {"t"}, 2, 2);
            P = P + cj * Polynomial::variable("y").pow(unsigned(j));
        }
        ScalarODE L;
        try {
            L = annihilator(P, "y", "t"); // certificate re-verified inside
        } catch (const std::domain_error&) {
            ++skipped; // drew a non-squarefree polynomial
            continue;
        }
        ++produced;
        CHECK(L.order() >= 0);
        CHECK(L.order() <= dy);
        CHECK(L.a[0].max_norm() == 1);
        CHECK(L.slope() >= 0);

        if (dy > 2) continue;
        // numeric spot check where the branches stay separated
        BigComplex t0(0.3125);
        Polynomial disc = resultant(P, P.derivative("y"), "y");
        if (abs(disc.eval({t0})) < BigFloat(0.01)) continue;
        ++checked_numeric;
        BigComplex y0 = branch_map(P, BigComplex(0.5, 0.25), cfg)(t0);
        auto ys = disc_derivatives(branch_map(P, y0, cfg), t0, BigFloat(0.03125), L.order(), cfg);
        BigComplex acc(0.0);
        BigFloat scale(1.0);
        for (long j = 0; j <= L.order(); ++j) {
            BigComplex term = L.a[size_t(j)].eval({t0}) * ys[size_t(L.order() - j)];
            acc = acc + term;
            scale = max(scale, abs(term));
        }
        CHECK(abs(acc) < BigFloat(1e-18) * scale);
    }
    CHECK(produced >= 20);
    CHECK(checked_numeric >= 5);
}

TEST_CASE("slopes measure coefficient growth") {
    ScalarODE L;
    L.tvar = "t";
    L.a = {pp("1"), pp("3*t^2"), pp("-5/2*t")};
    CHECK(L.slope() == 3);

    ScalarODE M;
    M.tvar = "t";
    M.a = {pp("1/2 + t"), pp("4*t")};
    CHECK(M.slope() == 4); // norms are coefficient sup norms, exact
}

TEST_CASE("restriction to a square-root curve assembles the documented field") {
    RunConfig cfg;
    auto chain = exp_on_plane(2.0);
    AlgebraicCurve C{{"t", "y"}, {pp("y^2 - t")}, "t"};
    RestrictionSystem sys = restriction_system(chain, C, cfg);

    CHECK(sys.n_state == 3);
    REQUIRE(sys.field.xvars.size() == 3);
    CHECK(sys.field.tvar == "t");
    CHECK(sys.field.xvars[0] == "y_d0");
    CHECK(sys.field.xvars[1] == "y_q");
    CHECK(sys.field.xvars[2] == "e1");
    CHECK(poly_eq(sys.field.xi[0], pp("1/2*y_d0*y_q")));
    CHECK(poly_eq(sys.field.xi[1], pp("-y_q^2")));
    CHECK(poly_eq(sys.field.xi[2], pp("1/2*e1*y_d0*y_q")));

    CHECK(sys.xi_norm == 1);
    REQUIRE(sys.annihilators.size() == 1);
    CHECK(sys.coordinates[0] == "y");
    CHECK(ode_eq(sys.annihilators[0], {"t", "-1/2"}));
    CHECK(sys.shape_log2 == 16.0); // curve degree 2
    CHECK(sys.within_shape);

    // mismatched rosters are rejected
    AlgebraicCurve wrong{{"u", "y"}, {pp("y^2 - u")}, "u"};
    CHECK_THROWS_AS(restriction_system(chain, wrong, cfg), std::invalid_argument);
}

TEST_CASE("restricted flow matches closed-form solutions") {
    RunConfig cfg;
    auto chain = exp_on_plane(2.0);
    AlgebraicCurve C{{"t", "y"}, {pp("y^2 - t")}, "t"};
    RestrictionSystem sys = restriction_system(chain, C, cfg);

    // On the branch y = sqrt(t): roster solution (sqrt t, 1/t, e^{sqrt t}).
    auto roster_at = [](const BigFloat& t) {
        BigFloat s = sqrt(t);
        return std::vector<BigComplex>{BigComplex(s), BigComplex(BigFloat(1) / t),
                                       BigComplex(exp(s))};
    };

    BigFloat h(1e-10);
    for (double td : {0.5625, 0.625, 0.75}) {
        BigFloat t(td);
        auto up = roster_at(t + h), dn = roster_at(t - h), mid = roster_at(t);
        std::vector<BigComplex> point{BigComplex(t), mid[0], mid[1], mid[2]};
        // evaluation order: tvar then roster, matching sorted polynomial vars
        for (size_t i = 0; i < sys.field.xvars.size(); ++i) {
            BigComplex numeric = (up[i] - dn[i]) / BigComplex(BigFloat(2) * h);
            std::map<std::string, BigComplex> byname{
                {"t", point[0]}, {"y_d0", point[1]}, {"y_q", point[2]}, {"e1", point[3]}};
            Polynomial rule = sys.field.xi[i];
            std::vector<BigComplex> args;
            for (const auto& v : rule.vars()) args.push_back(byname.at(v));
            CHECK(testutil::close(rule.eval(args), numeric, 1e-8));
        }
    }
}

TEST_CASE("space curves restrict through iterated elimination") {
    RunConfig cfg;
    NoetherianChain c;
    c.coords = {"x", "y", "z"};
    c.members = {"w1"};
    c.rhs = {{pp("w1"), pp("0"), pp("0")}}; // w1 = e^x
    c.domain = ComplexBox({BigComplex(0.0), BigComplex(0.0), BigComplex(0.0)},
                          {BigFloat(2), BigFloat(2), BigFloat(2)});
    c.basepoint = {BigComplex(0.0), BigComplex(0.0), BigComplex(0.0)};
    c.initial_values = {BigComplex(1.0)};
    auto chain = std::make_shared<const NoetherianChain>(std::move(c));

    // twisted cubic (x, x^2, x^3) projected to x
    AlgebraicCurve C{{"x", "y", "z"}, {pp("y - x^2"), pp("z - x^3")}, "x"};
    RestrictionSystem sys = restriction_system(chain, C, cfg);

    CHECK(sys.n_state == 5); // y_d0, y_q, z_d0, z_q, w1
    REQUIRE(sys.annihilators.size() == 2);
    CHECK(ode_eq(sys.annihilators[0], {"x", "-2"}));
    CHECK(ode_eq(sys.annihilators[1], {"x", "-3"}));
    REQUIRE(sys.field.xvars.size() == 5);
    CHECK(poly_eq(sys.field.xi[0], pp("2*y_d0*y_q")));
    CHECK(poly_eq(sys.field.xi[1], pp("-y_q^2")));
    CHECK(poly_eq(sys.field.xi[2], pp("3*z_d0*z_q")));
    CHECK(poly_eq(sys.field.xi[3], pp("-z_q^2")));
    CHECK(poly_eq(sys.field.xi[4], pp("w1"))); // e^x only sees the projection
    CHECK(sys.xi_norm == 3);
}

TEST_CASE("coordinates that vanish on the curve collapse to constants") {
    RunConfig cfg;
    auto chain = exp_on_plane(2.0);
    AlgebraicCurve C{{"t", "y"}, {pp("y")}, "t"}; // the t-axis
    RestrictionSystem sys = restriction_system(chain, C, cfg);
    CHECK(sys.n_state == 1); // only the member survives
    CHECK(sys.field.xvars[0] == "e1");
    CHECK(sys.field.xi[0].is_zero()); // e^0 frozen along the axis
    CHECK(sys.annihilators[0].order() == 0);
}

TEST_CASE("good annuli dodge every exclusion modulus") {
    RunConfig cfg;

    // no exclusions at all: the dyadic default annulus
    AlgebraicCurve flat{{"t", "y"}, {pp("y - 2")}, "t"};
    AnnulusReport a0 = good_annulus(flat, cfg);
    CHECK(a0.ok);
    CHECK(a0.exclusions.empty());
    CHECK(a0.r == BigFloat(0.625));
    CHECK(a0.rho == BigFloat(0.0625));
    CHECK(a0.margin == BigFloat(0.0625));

    // diagonal: the operator t d/dt - 1 excludes the origin only
    AlgebraicCurve diag{{"t", "y"}, {pp("y - t")}, "t"};
    AnnulusReport a1 = good_annulus(diag, cfg);
    CHECK(a1.ok);
    REQUIRE(a1.exclusions.size() == 1);
    CHECK(testutil::close(a1.exclusions[0], BigComplex(0.0), 1e-30));
    CHECK(a1.r == BigFloat(0.625));
    CHECK(testutil::close(a1.margin, BigFloat(0.5625), 1e-25));

    // ramification modulus inside the band splits it
    AlgebraicCurve shifted{{"t", "y"}, {pp("y^2 - t - 3/5")}, "t"};
    AnnulusReport a2 = good_annulus(shifted, cfg);
    CHECK(a2.ok);
    CHECK(a2.exclusions.size() == 2); // branch point and leading-coefficient root
    // 0.675 and 0.0375 are not dyadic; compare at double fidelity
    CHECK(testutil::close(a2.r, BigFloat(0.675), 1e-12));
    CHECK(testutil::close(a2.rho, BigFloat(0.0375), 1e-12));
    CHECK(testutil::close(a2.margin, BigFloat(0.0375), 1e-12));

    // the produced annulus always sits inside the band, clear of exclusions
    for (const AnnulusReport& rep : {a0, a1, a2}) {
        CHECK(rep.r - rep.rho > BigFloat(0.5) - BigFloat(1e-20));
        CHECK(rep.r + rep.rho < BigFloat(0.75) + BigFloat(1e-20));
        for (const auto& z : rep.exclusions)
            CHECK(abs(abs(z) - rep.r) >= rep.rho - BigFloat(1e-20));
    }
}

TEST_CASE("zero counts along curves respect the index bound") {
    RunConfig cfg;
    AlgebraicCurve diag{{"t", "y"}, {pp("y - t")}, "t"};

    SUBCASE("single zero of e^t - 2 in a small disc") {
        NoetherianFunction F{exp_on_plane(8.0), pp("e1 - 2")};
        CurveZeroReport rep = count_zeros_on_curve(F, diag, Disc(BigComplex(0.0), BigFloat(3)), cfg);
        CHECK(rep.zeros == 1); // ln 2; the complex shifts sit outside
        CHECK(rep.branches == 1);
        CHECK(rep.cycles == 1);
        CHECK(rep.n_state == 3);
        CHECK(rep.xi_norm == 1);
        CHECK(rep.branch_indices.size() == 1);
        CHECK(rep.resultant_index > BigFloat(1));
        CHECK(rep.gamma == BigFloat(3));
        CHECK(rep.holds);
    }

    SUBCASE("the two complex shifts enter at radius eight") {
        NoetherianFunction F{exp_on_plane(24.0), pp("e1 - 2")};
        CurveZeroReport rep = count_zeros_on_curve(F, diag, Disc(BigComplex(0.0), BigFloat(8)), cfg);
        CHECK(rep.zeros == 3); // ln 2 and ln 2 +- 2 pi i
        CHECK(rep.holds);
    }

    SUBCASE("branch pair with a square-root twist") {
        NoetherianFunction F{exp_on_plane(2.0), pp("e1 - 2")};
        AlgebraicCurve C{{"t", "y"}, {pp("y^2 - t")}, "t"};
        BigFloat R(0.5625);
        CurveZeroReport rep = count_zeros_on_curve(F, C, Disc(BigComplex(0.0), R), cfg);
        CHECK(rep.branches == 2);
        CHECK(rep.cycles == 1); // the loop swaps the square roots
        CHECK(rep.zeros == 1);  // e^{sqrt t} = 2 at t = (ln 2)^2 ~ 0.4805
        CHECK(rep.branch_indices.size() == 1); // ramified: only the product index
        CHECK(rep.holds);
    }

    SUBCASE("functions vanishing along the curve are refused") {
        NoetherianFunction F{exp_on_plane(8.0), pp("y - t")};
        CHECK_THROWS_AS(
            count_zeros_on_curve(F, diag, Disc(BigComplex(0.0), BigFloat(3)), cfg),
            std::domain_error);
    }
}
