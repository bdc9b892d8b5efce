#include "noether/bigfloat.hpp"

namespace noether {

std::atomic<mpfr_prec_t> BigFloat::g_default_prec{192};

std::string BigFloat::to_string(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    int d = digits > 0 ? digits : static_cast<int>(mpfr_get_prec(v_) * 0.30103) + 2;
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", d, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string BigFloat::to_hex() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    // Smith's algorithm: avoids overflow for lopsided components.
    if (abs(b.re) >= abs(b.im)) {
        if (b.re.is_zero()) {
            BigFloat nan = b.re / b.re;
            return BigComplex(nan, nan);
        }
        BigFloat r = b.im / b.re;
        BigFloat den = b.re + b.im * r;
        return BigComplex((a.re + a.im * r) / den, (a.im - a.re * r) / den);
    }
    BigFloat r = b.re / b.im;
    BigFloat den = b.im + b.re * r;
    return BigComplex((a.re * r + a.im) / den, (a.im * r - a.re) / den);
}

std::string BigComplex::to_string(int digits) const {
    return re.to_string(digits) + (im.sign() < 0 ? " - " : " + ") + noether::abs(im).to_string(digits) + "i";
}

BigComplex csqrt(const BigComplex& z) {
    if (z.im.is_zero()) {
        if (z.re.sign() >= 0) return BigComplex(sqrt(z.re), BigFloat(Prec{z.re.precision()}));
        return BigComplex(BigFloat(Prec{z.re.precision()}), sqrt(-z.re));
    }
    BigFloat m = z.abs();
    BigFloat u = sqrt((m + abs(z.re)).mul_2si(-1));
    BigFloat t = z.im / u.mul_2si(1);
    if (z.re.sign() >= 0) return BigComplex(u, t);
    if (z.im.sign() >= 0) return BigComplex(t, u);
    return BigComplex(-t, u);
}

BigComplex cexp(const BigComplex& z) {
    BigFloat e = exp(z.re);
    return BigComplex(e * cos(z.im), e * sin(z.im));
}

BigComplex clog(const BigComplex& z) {
    return BigComplex(log(z.abs()), z.arg());
}

BigComplex csin(const BigComplex& z) {
    return BigComplex(sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im));
}

BigComplex ccos(const BigComplex& z) {
    return BigComplex(cos(z.re) * cosh(z.im), -(sin(z.re) * sinh(z.im)));
}

BigComplex unit_circle(const BigFloat& t) {
    BigComplex r = BigComplex::zero(t.precision());
    mpfr_sin_cos(r.im.raw(), r.re.raw(), t.raw(), MPFR_RNDN);
    return r;
}

BigComplex cpow_ui(BigComplex z, unsigned long e) {
    BigComplex acc(BigFloat(Prec{z.re.precision()}) + 1, BigFloat(Prec{z.re.precision()}));
    while (e) {
        if (e & 1) acc *= z;
        e >>= 1;
        if (e) z *= z;
    }
    return acc;
}

} // namespace noether
