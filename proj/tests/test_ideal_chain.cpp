#include "doctest.h"

#include "noether/groebner.hpp"
#include "noether/ideal_chain.hpp"
#include "test_support.hpp"

#include <map>
#include <vector>

using namespace noether;
using testutil::close;

namespace {

Polynomial pp(const std::string& s) { return parse_polynomial(s); }

void all_monomials(size_t nv, unsigned cap, std::vector<Polynomial::Exponents>& out,
                   Polynomial::Exponents& cur, size_t at, unsigned used) {
    if (at == nv) {
        out.push_back(cur);
        return;
    }
    for (unsigned e = 0; used + e <= cap; ++e) {
        cur[at] = e;
        all_monomials(nv, cap, out, cur, at + 1, used + e);
    }
    cur[at] = 0;
}

// Brute-force membership: look for cofactors of total degree <= cap by exact
// linear algebra over the monomial basis. Independent of the Groebner code.
bool naive_member(const Polynomial& f0, const std::vector<Polynomial>& gens0, unsigned cap) {
    std::vector<std::string> vars = f0.vars();
    for (const auto& g : gens0) vars = Polynomial::var_union(vars, g.vars());
    Polynomial f = f0.aligned_to(vars);

    std::vector<Polynomial::Exponents> monos;
    Polynomial::Exponents cur(vars.size(), 0);
    all_monomials(vars.size(), cap, monos, cur, 0, 0);

    std::vector<Polynomial> cols;
    for (const auto& g0 : gens0) {
        Polynomial g = g0.aligned_to(vars);
        for (const auto& e : monos) {
            Polynomial m(vars);
            m.add_term(e, GaussianRational(1));
            cols.push_back(m * g);
        }
    }

    std::map<Polynomial::Exponents, size_t> row_of;
    auto touch = [&](const Polynomial& p) {
        for (const auto& [e, c] : p.terms()) {
            (void)c;
            if (!row_of.count(e)) row_of.emplace(e, row_of.size());
        }
    };
    for (const auto& c : cols) touch(c);
    touch(f);

    size_t nr = row_of.size(), nc = cols.size();
    std::vector<std::vector<GaussianRational>> a(nr, std::vector<GaussianRational>(nc + 1));
    for (size_t j = 0; j < nc; ++j)
        for (const auto& [e, c] : cols[j].terms()) a[row_of[e]][j] = c;
    for (const auto& [e, c] : f.terms()) a[row_of[e]][nc] = c;

    size_t lead = 0;
    for (size_t col = 0; col < nc && lead < nr; ++col) {
        size_t piv = lead;
        while (piv < nr && a[piv][col].is_zero()) ++piv;
        if (piv == nr) continue;
        std::swap(a[piv], a[lead]);
        GaussianRational inv = GaussianRational(1) / a[lead][col];
        for (size_t j = col; j <= nc; ++j) a[lead][j] = a[lead][j] * inv;
        for (size_t r = 0; r < nr; ++r) {
            if (r == lead || a[r][col].is_zero()) continue;
            GaussianRational factor = a[r][col];
            for (size_t j = col; j <= nc; ++j) a[r][j] = a[r][j] - factor * a[lead][j];
        }
        ++lead;
    }
    for (size_t r = 0; r < nr; ++r) {
        bool zero_row = true;
        for (size_t j = 0; j < nc; ++j)
            if (!a[r][j].is_zero()) {
                zero_row = false;
                break;
            }
        if (zero_row && !a[r][nc].is_zero()) return false;
    }
    return true;
}

void check_representations(const GroebnerBasis& gb) {
    for (const auto& b : gb.basis) {
        Polynomial sum(gb.order.vars);
        for (size_t g = 0; g < gb.gens.size(); ++g) sum = sum + b.rep[g] * gb.gens[g];
        CHECK(sum == b.p);
    }
}

void check_certificate(const Membership& mem, const Polynomial& f,
                       const std::vector<Polynomial>& gens) {
    Polynomial sum = mem.remainder;
    for (size_t g = 0; g < gens.size(); ++g) sum = sum + mem.cofactors[g] * gens[g];
    CHECK(sum == f.aligned_to(sum.vars()));
}

} // namespace

TEST_CASE("degrevlex order ranks monomials with the time variable last") {
    TermOrder ord = TermOrder::degrevlex({"t", "x", "y"}, {"t"});
    auto e = [](unsigned a, unsigned b, unsigned c) { return Polynomial::Exponents{a, b, c}; };
    // Roster sorted (t, x, y); significance x > y > t.
    CHECK(ord.less(e(0, 0, 0), e(1, 0, 0)));            // 1 < t
    CHECK(ord.less(e(1, 0, 0), e(0, 0, 1)));            // t < y
    CHECK(ord.less(e(0, 0, 1), e(0, 1, 0)));            // y < x
    CHECK(ord.less(e(2, 0, 0), e(0, 1, 1)));            // t^2 < xy
    CHECK(ord.less(e(0, 1, 1), e(0, 2, 0)));            // xy < x^2
    CHECK(ord.less(e(0, 0, 2), e(0, 1, 1)));            // y^2 < xy
    CHECK(ord.less(e(0, 2, 0), e(0, 2, 1)));            // degree wins
    CHECK(!ord.less(e(0, 1, 0), e(0, 1, 0)));           // strict
}

TEST_CASE("buchberger reproduces textbook bases") {
    RunConfig cfg;
    SUBCASE("tail reduction collapses the generator") {
        auto gb = buchberger({pp("x^2 + y"), pp("y")}, TermOrder::degrevlex({"x", "y"}), cfg);
        REQUIRE(gb.complete);
        REQUIRE(gb.basis.size() == 2);
        CHECK(gb.basis[0].p == pp("y"));
        CHECK(gb.basis[1].p == pp("x^2"));
        check_representations(gb);
    }
    SUBCASE("line and hyperbola") {
        auto gb = buchberger({pp("x + y"), pp("x*y - 1")}, TermOrder::degrevlex({"x", "y"}), cfg);
        REQUIRE(gb.complete);
        REQUIRE(gb.basis.size() == 2);
        CHECK(gb.basis[0].p == pp("x + y"));
        CHECK(gb.basis[1].p == pp("y^2 + 1"));
        check_representations(gb);
    }
    SUBCASE("twisted cubic") {
        auto gb = buchberger({pp("x^2 - y"), pp("x^3 - z")},
                             TermOrder::degrevlex({"x", "y", "z"}), cfg);
        REQUIRE(gb.complete);
        REQUIRE(gb.basis.size() == 3);
        CHECK(gb.basis[0].p == pp("y^2 - x*z"));
        CHECK(gb.basis[1].p == pp("x*y - z"));
        CHECK(gb.basis[2].p == pp("x^2 - y"));
        check_representations(gb);
    }
    SUBCASE("degree budget yields a partial basis") {
        RunConfig tight = cfg;
        tight.groebner_max_degree = 1;
        auto gb = buchberger({pp("x^2 - y"), pp("x^3 - z")},
                             TermOrder::degrevlex({"x", "y", "z"}), tight);
        CHECK(!gb.complete);
    }
}

TEST_CASE("membership certificates are exact") {
    RunConfig cfg;
    SUBCASE("fixed decisions") {
        std::vector<Polynomial> gens{pp("x^2 + y"), pp("y")};
        auto gb = buchberger(gens, TermOrder::degrevlex({"x", "y"}), cfg);
        auto mem = gb.reduce(pp("x^2"));
        CHECK(mem.member);
        check_certificate(mem, pp("x^2"), gb.gens);

        std::vector<Polynomial> axes{pp("x"), pp("y")};
        auto gb2 = buchberger(axes, TermOrder::degrevlex({"x", "y"}), cfg);
        CHECK(!gb2.reduce(pp("1")).member);
        CHECK(gb2.reduce(pp("x*y")).member);

        auto gb3 = buchberger({pp("x^2")}, TermOrder::degrevlex({"x"}), cfg);
        CHECK(!gb3.reduce(pp("x")).member);
    }
    SUBCASE("decisions match brute-force linear algebra") {
        auto rng = testutil::rng(701);
        std::vector<std::string> vars{"x", "y", "z"};
        for (int trial = 0; trial < 14; ++trial) {
            std::vector<Polynomial> gens{testutil::rand_poly(rng, vars, 2, 3),
                                         testutil::rand_poly(rng, vars, 2, 3)};
            Polynomial f;
            if (trial % 2 == 0)
                f = testutil::rand_poly(rng, vars, 1, 2) * gens[0] +
                    testutil::rand_poly(rng, vars, 1, 2) * gens[1];
            else
                f = testutil::rand_poly(rng, vars, 3, 4);
            auto gb = buchberger(gens, TermOrder::degrevlex(vars), cfg);
            REQUIRE(gb.complete);
            auto mem = gb.reduce(f);
            check_certificate(mem, f, gb.gens);
            unsigned cap = 3;
            if (mem.member)
                for (const auto& c : mem.cofactors) cap = std::max(cap, c.total_degree());
            CHECK(naive_member(f, gens, cap) == mem.member);
        }
    }
}

TEST_CASE("lie derivatives follow the chain rule") {
    DerivationField fx{"t", {"x"}, {pp("x")}};
    CHECK(lie_derive(fx, pp("x")) == pp("x"));

    DerivationField f1{"t", {"x"}, {pp("1")}};
    CHECK(lie_derive(f1, pp("x^2")) == pp("2*x"));

    DerivationField rot{"t", {"x", "y"}, {pp("y"), pp("-x")}};
    CHECK(lie_derive(rot, pp("x^2 + y^2")).is_zero());

    DerivationField mixed{"t", {"x"}, {pp("t*x")}};
    CHECK(lie_derive(mixed, pp("t^2*x")) == pp("2*t*x + t^3*x"));
}

TEST_CASE("ideal chains stabilize at the hand-computed index") {
    RunConfig cfg;

    auto certified = [](const StabilizationResult& r) {
        Polynomial rhs(r.lie_chain.front().vars());
        for (long j = 0; j <= r.k; ++j)
            rhs = rhs + r.cofactors[size_t(j)] * r.lie_chain[size_t(r.k - j)];
        CHECK(r.lie_chain[size_t(r.k) + 1] == rhs.aligned_to(r.lie_chain.back().vars()));
    };

    SUBCASE("eigenfunction stabilizes immediately") {
        DerivationField f{"t", {"x"}, {pp("x")}};
        auto r = stabilize(f, pp("x"), cfg);
        REQUIRE(r.complete);
        CHECK(r.k == 0);
        CHECK(r.cofactors[0] == pp("1"));
        CHECK(r.spot_check);
        certified(r);
    }
    SUBCASE("translation flow walks down the powers") {
        DerivationField f{"t", {"x"}, {pp("1")}};
        auto r = stabilize(f, pp("x^2"), cfg);
        REQUIRE(r.complete);
        CHECK(r.k == 2);
        CHECK(r.spot_check);
        REQUIRE(r.bases.size() == 3);
        CHECK(r.bases[0].basis.size() == 1);
        CHECK(r.bases[0].basis[0].p == pp("x^2"));
        CHECK(r.bases[1].basis.size() == 1);
        CHECK(r.bases[1].basis[0].p == pp("x"));
        CHECK(r.bases[2].basis.size() == 1);
        CHECK(r.bases[2].basis[0].p == pp("1"));
        certified(r);
    }
    SUBCASE("constants are their own certificate") {
        DerivationField f{"t", {"x"}, {pp("x^2 + 1")}};
        auto r = stabilize(f, pp("5"), cfg);
        REQUIRE(r.complete);
        CHECK(r.k == 0);
        CHECK(r.cofactors[0].is_zero());
        certified(r);
    }
    SUBCASE("conserved quantity of the rotation field") {
        DerivationField rot{"t", {"x", "y"}, {pp("y"), pp("-x")}};
        auto r = stabilize(rot, pp("x^2 + y^2"), cfg);
        REQUIRE(r.complete);
        CHECK(r.k == 0);
        CHECK(r.cofactors[0].is_zero());
        certified(r);
    }
    SUBCASE("scaling flow doubles the square") {
        DerivationField f{"t", {"x"}, {pp("x")}};
        auto r = stabilize(f, pp("x^2"), cfg);
        REQUIRE(r.complete);
        CHECK(r.k == 0);
        CHECK(r.cofactors[0] == pp("2"));
        certified(r);
    }
    SUBCASE("derivative budget returns a partial chain") {
        RunConfig tight = cfg;
        tight.stabilize_max_k = 1;
        DerivationField f{"t", {"x"}, {pp("1")}};
        auto r = stabilize(f, pp("x^2"), tight);
        CHECK(!r.complete);
        CHECK(r.k == -1);
        CHECK(r.bases.size() == 2);
        CHECK(r.lie_chain.size() == 3);
    }
}

TEST_CASE("derived linear equations track the flow") {
    RunConfig cfg;
    Disc dom(BigComplex(BigFloat(0)), BigFloat(1.0));

    SUBCASE("cauchy derivatives match the exponential") {
        LineMap g = [](const BigComplex& t) { return cexp(t); };
        auto der = disc_derivatives(g, BigComplex(0.3125), BigFloat(0.25), 3, cfg);
        BigComplex e = cexp(BigComplex(0.3125));
        for (int m = 0; m <= 3; ++m) CHECK(close(der[size_t(m)], e, 1e-30));
    }
    SUBCASE("exponential arc satisfies its first-order equation") {
        DerivationField f{"t", {"x"}, {pp("x")}};
        auto r = stabilize(f, pp("x"), cfg);
        REQUIRE(r.complete);
        PathEvaluator path = [](const BigComplex& t) { return std::vector<BigComplex>{cexp(t)}; };
        auto ode = derived_linear_ode(r, f, path, dom, cfg);
        CHECK(ode.k == 0);
        CHECK(close(ode.coeffs[0](BigComplex(0.25)), BigComplex(1.0), 1e-40));
        CHECK(close(ode.restricted(BigComplex(0.25)), cexp(BigComplex(0.25)), 1e-40));
        CHECK(ode.residual < BigFloat(1e-25));
    }
    SUBCASE("polynomial arc annihilated by the third derivative") {
        DerivationField f{"t", {"x"}, {pp("1")}};
        auto r = stabilize(f, pp("x^2"), cfg);
        REQUIRE(r.complete);
        PathEvaluator path = [](const BigComplex& t) { return std::vector<BigComplex>{t}; };
        auto ode = derived_linear_ode(r, f, path, dom, cfg);
        CHECK(ode.k == 2);
        for (long j = 0; j <= 2; ++j)
            CHECK(close(ode.coeffs[size_t(j)](BigComplex(0.5, 0.25)), BigComplex(0.0), 1e-60));
        CHECK(ode.residual < BigFloat(1e-30));
    }
    SUBCASE("conserved quantity rides along unchanged") {
        DerivationField rot{"t", {"x", "y"}, {pp("y"), pp("-x")}};
        auto r = stabilize(rot, pp("x^2 + y^2"), cfg);
        REQUIRE(r.complete);
        PathEvaluator path = [](const BigComplex& t) {
            return std::vector<BigComplex>{ccos(t), csin(t)};
        };
        auto ode = derived_linear_ode(r, rot, path, dom, cfg);
        CHECK(close(ode.restricted(BigComplex(0.375, 0.125)), BigComplex(1.0), 1e-40));
        CHECK(ode.residual < BigFloat(1e-25));
    }
    SUBCASE("partial chains are refused") {
        RunConfig tight = cfg;
        tight.stabilize_max_k = 1;
        DerivationField f{"t", {"x"}, {pp("1")}};
        auto r = stabilize(f, pp("x^2"), tight);
        PathEvaluator path = [](const BigComplex& t) { return std::vector<BigComplex>{t}; };
        CHECK_THROWS_AS(derived_linear_ode(r, f, path, dom, cfg), std::invalid_argument);
    }
}

TEST_CASE("ode coefficient bounds dominate measured indices") {
    RunConfig cfg;
    Disc U(BigComplex(BigFloat(0)), BigFloat(1.0));
    Disc K(BigComplex(BigFloat(0)), BigFloat(0.5));

    SUBCASE("exponential: unit coefficient, index one half") {
        DerivationField f{"t", {"x"}, {pp("x")}};
        auto r = stabilize(f, pp("x"), cfg);
        PathEvaluator path = [](const BigComplex& t) { return std::vector<BigComplex>{cexp(t)}; };
        auto ode = derived_linear_ode(r, f, path, U, cfg);
        auto b = bernstein_from_ode(ode.coeffs, U, K, cfg);
        CHECK(b.k == 0);
        CHECK(close(b.m, BigFloat(1.0), 1e-30));
        CHECK(close(b.bound, BigFloat(6.0), 1e-25));
        auto idx = bernstein_index(ode.restricted, U, K, cfg);
        CHECK(close(idx.index, BigFloat(0.5), 1e-10));
        CHECK(idx.index <= b.bound);
    }
    SUBCASE("vanishing coefficients leave the order term") {
        DerivationField f{"t", {"x"}, {pp("1")}};
        auto r = stabilize(f, pp("x^2"), cfg);
        PathEvaluator path = [](const BigComplex& t) { return std::vector<BigComplex>{t}; };
        auto ode = derived_linear_ode(r, f, path, U, cfg);
        auto b = bernstein_from_ode(ode.coeffs, U, K, cfg);
        CHECK(b.k == 2);
        CHECK(b.m.is_zero());
        BigFloat expect = BigFloat(6.0) * BigFloat(2.0) * log(BigFloat(3.0));
        CHECK(close(b.bound, expect, 1e-25));
        auto idx = bernstein_index(ode.restricted, U, K, cfg);
        CHECK(close(idx.index, BigFloat(2.0) * log(BigFloat(2.0)), 1e-9));
        CHECK(idx.index <= b.bound);
    }
    SUBCASE("ill-nested discs are refused") {
        std::vector<LineMap> cs{[](const BigComplex&) { return BigComplex(1.0); }};
        CHECK_THROWS_AS(bernstein_from_ode(cs, K, U, cfg), std::invalid_argument);
    }
}
