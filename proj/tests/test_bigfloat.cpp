#include <doctest.h>

#include "test_support.hpp"

using namespace noether;
using testutil::close;

TEST_CASE("default precision and basic arithmetic") {
    CHECK(BigFloat::default_precision() >= 128);
    BigFloat a(0.5), b(2);
    CHECK((a + b).to_double() == doctest::Approx(2.5));
    CHECK((a * b).to_double() == doctest::Approx(1.0));
    CHECK((b / a).to_double() == doctest::Approx(4.0));
    CHECK((a - b).sign() < 0);
    CHECK(BigFloat(mpq_class(1, 3)).to_string(10).substr(0, 6) == "0.3333");
}

TEST_CASE("exact rational conversion at precision") {
    mpq_class q(1, 7);
    BigFloat x(q, 256);
    CHECK(x.precision() == 256);
    BigFloat y = x * BigFloat(7);
    CHECK(close(y, BigFloat(1), 1e-70));
}

TEST_CASE("hex round trip is exact") {
    BigFloat x(mpq_class(355, 113));
    BigFloat y(x.to_hex());
    CHECK(x == y);
    BigFloat z(-0.0367);
    CHECK(BigFloat(z.to_hex()) == z);
}

TEST_CASE("transcendental functions track mpfr") {
    BigFloat x(0.75);
    CHECK(close(exp(log(x)), x, 1e-50));
    CHECK(close(sin(x) * sin(x) + cos(x) * cos(x), BigFloat(1), 1e-50));
    CHECK(close(pi() / BigFloat(4), atan2(BigFloat(1), BigFloat(1)), 1e-50));
}

TEST_CASE("complex arithmetic identities") {
    BigComplex i(0, 1);
    CHECK((i * i).re.to_double() == doctest::Approx(-1.0));
    BigComplex z(3, 4);
    CHECK(z.abs().to_double() == doctest::Approx(5.0));
    CHECK(close(z * z.conj(), BigComplex(25, 0), 1e-40));
    BigComplex w = z / BigComplex(1, 2);
    CHECK(close(w * BigComplex(1, 2), z, 1e-40));
}

TEST_CASE("complex square root and exponential") {
    BigComplex z(-4, 0);
    CHECK(close(csqrt(z), BigComplex(0, 2), 1e-40));
    BigComplex w(0.3, -1.2);
    CHECK(close(csqrt(w) * csqrt(w), w, 1e-40));
    // Euler: e^{i pi} = -1.
    CHECK(close(cexp(BigComplex(BigFloat(0), pi())), BigComplex(-1, 0), 1e-40));
    CHECK(close(csin(BigComplex(0.5, 0.25)) * csin(BigComplex(0.5, 0.25)) +
                    ccos(BigComplex(0.5, 0.25)) * ccos(BigComplex(0.5, 0.25)),
                BigComplex(1, 0), 1e-40));
}

TEST_CASE("unit circle points") {
    BigFloat t = pi() / BigFloat(2);
    CHECK(close(unit_circle(t), BigComplex(0, 1), 1e-40));
    CHECK(close(cpow_ui(unit_circle(pi() / BigFloat(6)), 6), BigComplex(-1, 0), 1e-40));
}
