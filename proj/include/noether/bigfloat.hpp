#pragma once

// Arbitrary-precision real/complex scalars backed by MPFR.
// Precision is carried per value; binary operations widen to the larger
// operand precision. The default precision is a process-wide setting used
// by constructors that do not specify one.

#include <mpfr.h>
#include <gmpxx.h>

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace noether {

// Wrapper so a precision request cannot be confused with an integer value
// (mpfr_prec_t is a plain long).
struct Prec {
    mpfr_prec_t bits;
};

class BigFloat {
public:
    static mpfr_prec_t default_precision() { return g_default_prec.load(); }
    static void set_default_precision(mpfr_prec_t p) {
        if (p < MPFR_PREC_MIN || p > 1u << 24) throw std::invalid_argument("bad precision");
        g_default_prec.store(p);
    }

    explicit BigFloat(Prec p) { mpfr_init2(v_, p.bits); mpfr_set_zero(v_, 1); }
    BigFloat() : BigFloat(Prec{default_precision()}) {}
    BigFloat(double x) : BigFloat(Prec{default_precision()}) { mpfr_set_d(v_, x, MPFR_RNDN); }
    BigFloat(int x) : BigFloat(Prec{default_precision()}) { mpfr_set_si(v_, x, MPFR_RNDN); }
    BigFloat(long x) : BigFloat(Prec{default_precision()}) { mpfr_set_si(v_, x, MPFR_RNDN); }
    BigFloat(long x, mpfr_prec_t prec) : BigFloat(Prec{prec}) { mpfr_set_si(v_, x, MPFR_RNDN); }
    BigFloat(const mpq_class& q, mpfr_prec_t prec = 0) : BigFloat(Prec{prec ? prec : default_precision()}) {
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const mpz_class& z, mpfr_prec_t prec = 0) : BigFloat(Prec{prec ? prec : default_precision()}) {
        mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
    }
    // Decimal or hex ("0x...p...") literal.
    explicit BigFloat(const std::string& s, mpfr_prec_t prec = 0) : BigFloat(Prec{prec ? prec : default_precision()}) {
        if (mpfr_set_str(v_, s.c_str(), 0, MPFR_RNDN) != 0 && mpfr_nan_p(v_))
            throw std::invalid_argument("unparsable float literal: " + s);
    }

    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    BigFloat with_precision(mpfr_prec_t p) const {
        BigFloat r{Prec{p}}; mpfr_set(r.v_, v_, MPFR_RNDN); return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_nan() const { return mpfr_nan_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    // Shortest decimal at roughly the stored precision.
    std::string to_string(int digits = 0) const;
    // Exact round-trippable hex form.
    std::string to_hex() const;

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r{Prec{join(a, b)}}; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r{Prec{join(a, b)}}; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r{Prec{join(a, b)}}; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r{Prec{join(a, b)}}; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    BigFloat operator-() const { BigFloat r{Prec{precision()}}; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !mpfr_equal_p(a.v_, b.v_); }

    BigFloat mul_2si(long k) const { BigFloat r{Prec{precision()}}; mpfr_mul_2si(r.v_, v_, k, MPFR_RNDN); return r; }

    static mpfr_prec_t join(const BigFloat& a, const BigFloat& b) {
        return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    }

private:
    mpfr_t v_;
    static std::atomic<mpfr_prec_t> g_default_prec;
};

inline BigFloat abs(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat sqrt(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat exp(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat log(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat sin(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_sin(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat cos(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_cos(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat sinh(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_sinh(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat cosh(const BigFloat& a) {
    BigFloat r{Prec{a.precision()}}; mpfr_cosh(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r{Prec{BigFloat::join(y, x)}}; mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN); return r;
}
inline BigFloat hypot(const BigFloat& x, const BigFloat& y) {
    BigFloat r{Prec{BigFloat::join(y, x)}}; mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN); return r;
}
inline BigFloat pow_ui(const BigFloat& a, unsigned long e) {
    BigFloat r{Prec{a.precision()}}; mpfr_pow_ui(r.raw(), a.raw(), e, MPFR_RNDN); return r;
}
inline BigFloat min(const BigFloat& a, const BigFloat& b) { return a <= b ? a : b; }
inline BigFloat max(const BigFloat& a, const BigFloat& b) { return a >= b ? a : b; }
inline BigFloat pi(mpfr_prec_t prec = 0) {
    BigFloat r{Prec{prec ? prec : BigFloat::default_precision()}};
    mpfr_const_pi(r.raw(), MPFR_RNDN); return r;
}

class BigComplex {
public:
    BigFloat re, im;

    BigComplex() = default;
    BigComplex(BigFloat r) : re(std::move(r)), im(Prec{re.precision()}) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    BigComplex(double r, double i = 0.0) : re(r), im(i) {}
    BigComplex(int r) : re(r), im(0) {}

    static BigComplex zero(mpfr_prec_t p = 0) {
        Prec q{p ? p : BigFloat::default_precision()};
        return BigComplex(BigFloat(q), BigFloat(q));
    }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }

    BigComplex conj() const { return BigComplex(re, -im); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re + b.re, a.im + b.im);
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re - b.re, a.im - b.im);
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend BigComplex operator*(const BigFloat& a, const BigComplex& b) {
        return BigComplex(a * b.re, a * b.im);
    }
    friend BigComplex operator*(const BigComplex& a, const BigFloat& b) {
        return BigComplex(a.re * b, a.im * b);
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
    BigComplex operator-() const { return BigComplex(-re, -im); }

    BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }
    BigComplex& operator*=(const BigComplex& o) { *this = *this * o; return *this; }

    friend bool operator==(const BigComplex& a, const BigComplex& b) {
        return a.re == b.re && a.im == b.im;
    }

    BigFloat abs() const { return hypot(re, im); }
    // |re| + |im|; cheap norm for tolerance checks.
    BigFloat abs1() const { return noether::abs(re) + noether::abs(im); }
    BigFloat arg() const { return atan2(im, re); }

    std::string to_string(int digits = 0) const;
};

inline BigFloat abs(const BigComplex& z) { return z.abs(); }

BigComplex csqrt(const BigComplex& z);
BigComplex cexp(const BigComplex& z);
BigComplex clog(const BigComplex& z);
BigComplex csin(const BigComplex& z);
BigComplex ccos(const BigComplex& z);
// e^{i t} for real t.
BigComplex unit_circle(const BigFloat& t);
BigComplex cpow_ui(BigComplex z, unsigned long e);

} // namespace noether
