#include "doctest.h"

#include "noether/evaluate.hpp"
#include "test_support.hpp"

using namespace noether;

namespace {

ChainPtr exp_chain(double radius = 1.0) {
    NoetherianChain c;
    c.coords = {"x"};
    c.members = {"y1"};
    c.rhs = {{parse_polynomial("y1")}};
    c.domain = ComplexBox({BigComplex(0.0)}, {BigFloat(radius)});
    c.basepoint = {BigComplex(0.0)};
    c.initial_values = {BigComplex(1.0)};
    return std::make_shared<const NoetherianChain>(std::move(c));
}

ChainPtr sincos_chain(double radius = 1.0) {
    NoetherianChain c;
    c.coords = {"x"};
    c.members = {"s", "c"};
    c.rhs = {{parse_polynomial("c")}, {parse_polynomial("-s")}};
    c.domain = ComplexBox({BigComplex(0.0)}, {BigFloat(radius)});
    c.basepoint = {BigComplex(0.0)};
    c.initial_values = {BigComplex(0.0), BigComplex(1.0)};
    return std::make_shared<const NoetherianChain>(std::move(c));
}

// y = 1/(1-x): y' = y^2, pole at x = 1
ChainPtr geometric_chain(double radius = 0.999) {
    NoetherianChain c;
    c.coords = {"x"};
    c.members = {"y"};
    c.rhs = {{parse_polynomial("y^2")}};
    c.domain = ComplexBox({BigComplex(0.0)}, {BigFloat(radius)});
    c.basepoint = {BigComplex(0.0)};
    c.initial_values = {BigComplex(1.0)};
    return std::make_shared<const NoetherianChain>(std::move(c));
}

} // namespace

TEST_CASE("exponential continuation matches the reference exponential") {
    ChainRuntime rt(exp_chain());
    auto r = evaluate_at(rt, parse_polynomial("y1"), {BigComplex(1.0)});
    CHECK(testutil::close(r.value, BigComplex(exp(BigFloat(1)), BigFloat(0)), 1e-18));
    CHECK(r.err >= BigFloat(0));
    CHECK(r.err < BigFloat(1e-15));

    // complex argument: e^i = cos 1 + i sin 1
    auto ri = evaluate_at(rt, parse_polynomial("y1"), {BigComplex(0.0, 1.0)});
    CHECK(testutil::close(ri.value, BigComplex(cos(BigFloat(1)), sin(BigFloat(1))), 1e-18));
}

TEST_CASE("step count stays within the a-priori budget") {
    // budget: 1/(safety * NS^-kappa) + 1 steps with NS = e, safety = 1/4, kappa = 3
    ChainRuntime rt(exp_chain());
    ChainState s = rt.initial_state();
    rt.continue_to(s, {BigComplex(1.0)});
    BigFloat budget = BigFloat(1) / (BigFloat(0.25) * exp(BigFloat(-3))) + BigFloat(1);
    CHECK(BigFloat((long)s.steps) <= budget);
    CHECK(s.steps >= 1);
}

TEST_CASE("sine/cosine continuation") {
    ChainRuntime rt(sincos_chain(2.0));
    auto r = evaluate_at(rt, parse_polynomial("s"), {BigComplex(1.2)});
    CHECK(testutil::close(r.value, BigComplex(sin(BigFloat(1.2)), BigFloat(0)), 1e-18));

    // pythagorean identity transported to random points
    auto rng = testutil::rng(42);
    for (int k = 0; k < 20; ++k) {
        BigComplex z(testutil::uniform(rng, -1.4, 1.4), testutil::uniform(rng, -1.4, 1.4));
        auto v = evaluate_at(rt, parse_polynomial("s^2 + c^2"), {z});
        CHECK(testutil::close(v.value, BigComplex(1.0), 1e-18));
    }
}

TEST_CASE("polyline continuation is path independent") {
    ChainRuntime rt(exp_chain(1.2));
    auto s = rt.continue_along({{BigComplex(1.0)}, {BigComplex(0.0, 1.0)}, {BigComplex(-1.0)}});
    CHECK(testutil::close(s.values[0], BigComplex(exp(BigFloat(-1)), BigFloat(0)), 1e-17));
}

TEST_CASE("pole keeps steps finite and honest") {
    ChainRuntime rt(geometric_chain());
    ChainState s = rt.initial_state();
    // converge geometrically toward the pole at 1
    rt.continue_to(s, {BigComplex(0.999)});
    CHECK(testutil::close(s.values[0], BigComplex(1000.0), 1e-8));
    CHECK(s.steps < 600);
}

TEST_CASE("target outside the domain is refused") {
    ChainRuntime rt(exp_chain());
    ChainState s = rt.initial_state();
    CHECK_THROWS_AS(rt.continue_to(s, {BigComplex(1.5)}), std::domain_error);
}

TEST_CASE("single validated step") {
    ChainRuntime rt(geometric_chain());
    ChainState s = rt.initial_state();

    ChainState s2 = taylor_step(rt, s, {BigComplex(1.0)}, BigFloat(0.1));
    BigFloat expect = BigFloat(1) / (BigFloat(1) - BigFloat(0.1));
    CHECK(testutil::close(s2.values[0], BigComplex(expect, BigFloat(0)), 1e-20));
    CHECK(s2.steps == 1);

    // a step reaching past the pole's convergence radius is rejected
    CHECK_THROWS(taylor_step(rt, s, {BigComplex(1.0)}, BigFloat(0.97)));

    // once a radius estimate exists, oversized requests are refused up front
    CHECK(s2.radius_hint > BigFloat(0));
    CHECK_THROWS_AS(taylor_step(rt, s2, {BigComplex(1.0)}, s2.radius_hint * BigFloat(0.9)),
                    std::invalid_argument);
}

TEST_CASE("noetherian size estimates") {
    RunConfig cfg;

    SUBCASE("exponential chain on the unit disc") {
        ChainRuntime rt(exp_chain(), cfg);
        auto est = noetherian_size(rt, 400);
        // sup |e^x| = e on the boundary; sampling approaches it from below
        CHECK(est.value <= exp(BigFloat(1)) + BigFloat(1e-20));
        CHECK(est.value > BigFloat(2.69));
        CHECK(est.coord_part == BigFloat(1));
        CHECK(est.coeff_part == BigFloat(1));
    }

    SUBCASE("constant chain clamps to 2") {
        NoetherianChain c;
        c.coords = {"x"};
        c.members = {"k"};
        c.rhs = {{Polynomial()}};
        c.domain = ComplexBox({BigComplex(0.0)}, {BigFloat(1)});
        c.basepoint = {BigComplex(0.0)};
        c.initial_values = {BigComplex(1.0)};
        ChainRuntime rt(std::make_shared<const NoetherianChain>(std::move(c)), cfg);
        CHECK(noetherian_size(rt).value == BigFloat(2));
    }

    SUBCASE("sine/cosine on the unit disc clamps to 2") {
        // max member modulus is cosh(1) < 2
        ChainRuntime rt(sincos_chain(), cfg);
        CHECK(noetherian_size(rt).value == BigFloat(2));
    }

    SUBCASE("monotone under grid refinement") {
        ChainRuntime rt(exp_chain(), cfg);
        CHECK(noetherian_size(rt, 10).value <= noetherian_size(rt, 100).value);
    }
}

TEST_CASE("line cursor walks a circle cheaply") {
    auto rt = std::make_shared<ChainRuntime>(exp_chain(2.0));
    LineCursor cur(rt, parse_polynomial("y1"), {BigComplex(0.5)}, {BigComplex(1.0)});
    // moves around lambda, values match reference exponential
    for (double t : {0.0, 0.1, 0.2, 0.15, -0.3}) {
        BigComplex v = cur.at(BigComplex(t));
        BigFloat expect = exp(BigFloat(0.5) + BigFloat(t));
        CHECK(testutil::close(v, BigComplex(expect, BigFloat(0)), 1e-17));
    }
    long before = rt->steps_taken();
    cur.at(BigComplex(-0.3001));
    CHECK(rt->steps_taken() - before <= 3); // local move, no restart from base
}

TEST_CASE("evaluation reports gradient-scaled error") {
    ChainRuntime rt(exp_chain());
    ChainState s = rt.initial_state();
    rt.continue_to(s, {BigComplex(0.9)});
    auto r = rt.eval(parse_polynomial("y1^2"), s);
    CHECK(r.err > BigFloat(0));
    CHECK(r.err < BigFloat(1e-15));
    CHECK(testutil::close(r.value, BigComplex(exp(BigFloat(0.9) + BigFloat(0.9)), BigFloat(0)), 1e-17));
}
