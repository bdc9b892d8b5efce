#pragma once

// Exact Gaussian rationals: re + im*i with re, im in Q.

#include <gmpxx.h>

#include <string>

#include "noether/bigfloat.hpp"

namespace noether {

struct GaussianRational {
    mpq_class re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long n) : re(n), im(0) {}
    GaussianRational(mpq_class r) : re(std::move(r)), im(0) {}
    GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return GaussianRational(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    GaussianRational conj() const { return {re, mpq_class(-im)}; }
    // re^2 + im^2, exact.
    mpq_class norm() const { return re * re + im * im; }
    // max(|re|, |im|): the coefficient norm used throughout.
    mpq_class max_norm() const {
        mpq_class a = abs(re), b = abs(im);
        return a >= b ? a : b;
    }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        mpq_class n = b.norm();
        if (n == 0) throw std::domain_error("division by zero Gaussian rational");
        GaussianRational t = a * b.conj();
        return {t.re / n, t.im / n};
    }
    GaussianRational operator-() const { return {mpq_class(-re), mpq_class(-im)}; }

    GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
    GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
    GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    BigComplex to_complex(mpfr_prec_t prec = 0) const {
        return BigComplex(BigFloat(re, prec), BigFloat(im, prec));
    }

    // Canonical form: "a/b", "a/b*i", or "(a/b+c/d*i)"; see polynomial printer.
    std::string to_string() const;
};

// Parses "a", "a/b", "i", "2/3*i", "(1/2-1/3*i)", or decimal like "0.25".
GaussianRational parse_gaussian_rational(const std::string& s);

// Rational from decimal text, exact (e.g. "-1.25" -> -5/4).
mpq_class rational_from_decimal(const std::string& s);

} // namespace noether
