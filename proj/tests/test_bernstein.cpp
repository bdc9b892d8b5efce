#include "doctest.h"

#include "noether/bernstein.hpp"
#include "test_support.hpp"

#include <complex>

using namespace noether;

namespace {

LineMap id_map() {
    return [](const BigComplex& z) { return z; };
}
LineMap exp_map() {
    return [](const BigComplex& z) { return cexp(z); };
}
LineMap const_map(double c) {
    return [c](const BigComplex& z) {
        (void)z;
        return BigComplex(c);
    };
}
LineMap monomial(unsigned k) {
    return [k](const BigComplex& z) { return cpow_ui(z, k); };
}
// product of (z - roots[j])
LineMap poly_from_roots(std::vector<BigComplex> roots) {
    return [roots](const BigComplex& z) {
        BigComplex acc(1.0);
        for (const auto& r : roots) acc *= (z - r);
        return acc;
    };
}

Disc unit_disc() { return Disc(BigComplex(0.0), BigFloat(1)); }

} // namespace

TEST_CASE("bernstein index on discs") {
    RunConfig cfg;

    SUBCASE("constant functions have index zero") {
        auto r = bernstein_gap_index(const_map(5.0), unit_disc(), BigFloat(2), cfg);
        CHECK(r.index == BigFloat(0));
        CHECK(r.m_u == BigFloat(5));
    }
    SUBCASE("coordinate at gap two gives ln 2") {
        auto r = bernstein_gap_index(id_map(), unit_disc(), BigFloat(2), cfg);
        CHECK(testutil::close(r.index, log(BigFloat(2)), 1e-25));
        CHECK(r.eta == BigFloat(2));
    }
    SUBCASE("exponential at gap two gives one half") {
        auto r = bernstein_gap_index(exp_map(), unit_disc(), BigFloat(2), cfg);
        CHECK(testutil::close(r.index, BigFloat(0.5), 1e-10));
        // both witnesses sit on the positive real axis
        CHECK(r.witness_u.im.to_double() == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(r.witness_u.re.to_double() == doctest::Approx(1.0));
    }
    SUBCASE("explicit non-concentric inner disc") {
        Disc K(BigComplex(0.25), BigFloat(0.25));
        auto r = bernstein_index(id_map(), unit_disc(), K, cfg);
        CHECK(testutil::close(r.index, log(BigFloat(2)), 1e-20)); // M_K = 1/2 at z = 1/2
        CHECK(r.eta == BigFloat(0));
    }
    SUBCASE("inner disc escaping the outer one is refused") {
        Disc K(BigComplex(0.8), BigFloat(0.5));
        CHECK_THROWS_AS(bernstein_index(id_map(), unit_disc(), K, cfg), std::invalid_argument);
    }
    SUBCASE("numerically zero functions are refused") {
        CHECK_THROWS_AS(bernstein_gap_index(const_map(0.0), unit_disc(), BigFloat(2), cfg),
                        std::domain_error);
    }
}

TEST_CASE("index is scaling invariant") {
    RunConfig cfg;
    auto base = bernstein_gap_index(exp_map(), unit_disc(), BigFloat(2), cfg);

    // powers of two scale both maxima exactly, so the ratio is bit-identical
    LineMap scaled = [](const BigComplex& z) {
        BigComplex v = cexp(z);
        return BigComplex(v.re.mul_2si(10), v.im.mul_2si(10));
    };
    auto r2 = bernstein_gap_index(scaled, unit_disc(), BigFloat(2), cfg);
    CHECK(r2.index == base.index);

    LineMap tripled = [](const BigComplex& z) { return BigFloat(3) * cexp(z); };
    auto r3 = bernstein_gap_index(tripled, unit_disc(), BigFloat(2), cfg);
    CHECK(testutil::close(r3.index, base.index, 1e-40));
}

TEST_CASE("index shrinks as the inner disc grows") {
    RunConfig cfg;
    // closed form for e^z on the unit disc: index(eta) = 1 - 1/eta
    BigFloat last(1000);
    for (double eta : {4.0, 3.0, 2.0, 1.5, 1.25}) {
        auto r = bernstein_gap_index(exp_map(), unit_disc(), BigFloat(eta), cfg);
        BigFloat expect = BigFloat(1) - BigFloat(1) / BigFloat(eta);
        CHECK(testutil::close(r.index, expect, 1e-10));
        CHECK(r.index < last + r.uncertainty);
        last = r.index;
    }
}

TEST_CASE("argument-principle zero counts") {
    RunConfig cfg;

    SUBCASE("monomials count with multiplicity") {
        CHECK(count_zeros_disc(monomial(3), unit_disc(), cfg) == 3);
        CHECK(count_zeros_disc(monomial(5), Disc(BigComplex(0.0), BigFloat(2.3)), cfg) == 5);
        CHECK(count_zeros_disc(monomial(1), Disc(BigComplex(5.0), BigFloat(1)), cfg) == 0);
    }
    SUBCASE("entire function with known zeros") {
        LineMap s = [](const BigComplex& z) { return csin(z); };
        CHECK(count_zeros_disc(s, Disc(BigComplex(0.0), BigFloat(10)), cfg) == 7);
    }
    SUBCASE("nonvanishing function counts zero") {
        CHECK(count_zeros_disc(exp_map(), unit_disc(), cfg) == 0);
    }
    SUBCASE("zero on the contour is refused") {
        LineMap f = [](const BigComplex& z) { return z - BigComplex(1.0); };
        CHECK_THROWS_AS(count_zeros_disc(f, unit_disc(), cfg), std::domain_error);
    }
    SUBCASE("randomized polynomials against exact root counts") {
        auto rng = testutil::rng(2024);
        int cases = 0;
        while (cases < 500) {
            int deg = testutil::rand_int(rng, 1, 6);
            std::vector<BigComplex> roots;
            long expect = 0;
            bool near_boundary = false;
            for (int d = 0; d < deg; ++d) {
                double x = testutil::uniform(rng, -1.2, 1.2);
                double y = testutil::uniform(rng, -1.2, 1.2);
                double mod = std::abs(std::complex<double>(x, y));
                if (std::abs(mod - 1.0) < 5e-3) { near_boundary = true; break; }
                if (mod < 1.0) ++expect;
                roots.emplace_back(x, y);
            }
            if (near_boundary) continue;
            CHECK(count_zeros_disc(poly_from_roots(roots), unit_disc(), cfg) == expect);
            ++cases;
        }
    }
}

TEST_CASE("zero count bound from the index") {
    RunConfig cfg;

    SUBCASE("monomial at unit gap") {
        for (unsigned k : {1u, 4u, 9u}) {
            auto r = check_zero_bound(monomial(k), unit_disc(), BigFloat(1), cfg.gamma_cal, cfg);
            CHECK(r.zeros == (long)k);
            CHECK(testutil::close(r.bound, BigFloat(3) * BigFloat((long)k) * log(BigFloat(2)), 1e-10));
            CHECK(r.holds);
        }
    }
    SUBCASE("constant function") {
        auto r = check_zero_bound(const_map(2.5), unit_disc(), BigFloat(1), cfg.gamma_cal, cfg);
        CHECK(r.zeros == 0);
        CHECK(r.holds);
    }
    SUBCASE("randomized degree-10 polynomials never violate the bound") {
        auto rng = testutil::rng(77);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<BigComplex> roots;
            for (int d = 0; d < 10; ++d)
                roots.emplace_back(testutil::uniform(rng, -0.45, 0.45),
                                   testutil::uniform(rng, -0.45, 0.45));
            auto r = check_zero_bound(poly_from_roots(roots), unit_disc(), BigFloat(0.5),
                                      cfg.gamma_cal, cfg);
            CHECK(r.holds);
            CHECK(r.zeros == 10); // all roots inside radius 2/3
        }
    }
}

TEST_CASE("low value discs") {
    RunConfig cfg;

    SUBCASE("exponential keeps the largest scanned radius") {
        auto r = low_value_disc(exp_map(), unit_disc(), cfg);
        CHECK(r.holds);
        CHECK(testutil::close(r.disc.radius, BigFloat(0.5), 1e-25));
        CHECK(testutil::close(r.m, exp(BigFloat(-0.5)), 1e-10));
    }
    SUBCASE("coordinate function") {
        auto r = low_value_disc(id_map(), unit_disc(), cfg);
        CHECK(r.holds);
        CHECK(testutil::close(r.disc.radius, BigFloat(0.5), 1e-25));
        CHECK(testutil::close(r.m, BigFloat(0.5), 1e-25));
    }
    SUBCASE("zero inside the scan band is avoided") {
        LineMap f = [](const BigComplex& z) { return z - BigComplex(0.3); };
        auto r = low_value_disc(f, unit_disc(), cfg);
        CHECK(r.holds);
        CHECK(r.m > BigFloat(0));
        CHECK(r.slack >= BigFloat(0));
    }
}

TEST_CASE("gap conversion inequality") {
    RunConfig cfg;
    BigFloat eps(0.5);

    SUBCASE("monomials give a degree-independent ratio") {
        auto r1 = gap_conversion_check(monomial(1), unit_disc(), eps, cfg);
        auto r4 = gap_conversion_check(monomial(4), unit_disc(), eps, cfg);
        CHECK(r1.holds);
        CHECK(r4.holds);
        BigFloat ratio1 = r1.rhs / r1.lhs;
        BigFloat ratio4 = r4.rhs / r4.lhs;
        CHECK(testutil::close(ratio1, ratio4, 1e-9));
    }
    SUBCASE("exponential holds with positive slack") {
        auto r = gap_conversion_check(exp_map(), unit_disc(), eps, cfg);
        CHECK(r.holds);
        CHECK(r.slack > BigFloat(0));
    }
    SUBCASE("constants hold at zero") {
        auto r = gap_conversion_check(const_map(3.0), unit_disc(), eps, cfg);
        CHECK(r.holds);
        CHECK(r.lhs == BigFloat(0));
        CHECK(r.rhs == BigFloat(0));
    }
}

TEST_CASE("subadditivity of indices over products") {
    RunConfig cfg;

    SUBCASE("powers of the coordinate are exactly additive") {
        std::vector<LineMap> fs = {monomial(2), monomial(3)};
        auto r = subadditivity_check(fs, unit_disc(), cfg);
        CHECK(r.holds);
        CHECK(testutil::close(r.product_index, BigFloat(5) * log(BigFloat(2)), 1e-20));
        CHECK(testutil::close(r.product_index, r.index_sum, 1e-20));
    }
    SUBCASE("two shifted linear factors") {
        std::vector<LineMap> fs = {poly_from_roots({BigComplex(0.5)}),
                                   poly_from_roots({BigComplex(-0.5)})};
        auto r = subadditivity_check(fs, unit_disc(), cfg);
        CHECK(r.holds);
        CHECK(r.factors == 2);
    }
    SUBCASE("ten random linear factors") {
        auto rng = testutil::rng(31);
        std::vector<LineMap> fs;
        for (int k = 0; k < 10; ++k)
            fs.push_back(poly_from_roots({BigComplex(testutil::uniform(rng, -0.9, 0.9),
                                                     testutil::uniform(rng, -0.9, 0.9))}));
        auto r = subadditivity_check(fs, unit_disc(), cfg);
        CHECK(r.holds);
        CHECK(r.factors == 10);
    }
}

TEST_CASE("directional index over sampled lines") {
    RunConfig cfg;
    std::vector<BigComplex> origin2 = {BigComplex(0.0), BigComplex(0.0)};

    SUBCASE("product of both coordinates") {
        MultiMap F = [](const std::vector<BigComplex>& p) { return p[0] * p[1]; };
        auto r = directional_bernstein(F, origin2, BigFloat(1), BigFloat(2), cfg.line_samples, cfg);
        CHECK(testutil::close(r.index, BigFloat(2) * log(BigFloat(2)), 1e-20));
        CHECK(r.lines_used == cfg.line_samples);
    }
    SUBCASE("first coordinate alone") {
        MultiMap F = [](const std::vector<BigComplex>& p) { return p[0]; };
        auto r = directional_bernstein(F, origin2, BigFloat(1), BigFloat(2), cfg.line_samples, cfg);
        CHECK(testutil::close(r.index, log(BigFloat(2)), 1e-20));
    }
    SUBCASE("constants give zero") {
        MultiMap F = [](const std::vector<BigComplex>& p) {
            (void)p;
            return BigComplex(7.0);
        };
        auto r = directional_bernstein(F, origin2, BigFloat(1), BigFloat(2), 4, cfg);
        CHECK(r.index == BigFloat(0));
    }
    SUBCASE("identically zero maps are refused") {
        MultiMap F = [](const std::vector<BigComplex>& p) {
            (void)p;
            return BigComplex(0.0);
        };
        CHECK_THROWS_AS(directional_bernstein(F, origin2, BigFloat(1), BigFloat(2), 4, cfg),
                        std::domain_error);
    }
    SUBCASE("more lines never lower the reported index") {
        MultiMap F = [](const std::vector<BigComplex>& p) {
            return p[0] * p[0] * p[1] + BigFloat(0.25) * p[1];
        };
        BigFloat few = directional_bernstein(F, origin2, BigFloat(1), BigFloat(2), 4, cfg).index;
        BigFloat many = directional_bernstein(F, origin2, BigFloat(1), BigFloat(2), 16, cfg).index;
        CHECK(many >= few - BigFloat(1e-30));
    }
}
