#pragma once

// Exact multivariate polynomials over the Gaussian rationals.
// Variables are named; every polynomial carries its own sorted variable
// list and exponent vectors aligned to it. Cross-arity operations align
// by name union first (lexicographic), so "x" over {x} and "x" over {x,y}
// behave identically.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noether/bigfloat.hpp"
#include "noether/rational.hpp"

namespace noether {

class Polynomial {
public:
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, GaussianRational>;

    Polynomial() = default;
    explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) { check_sorted(); }

    static Polynomial constant(GaussianRational c, std::vector<std::string> vars = {});
    static Polynomial variable(const std::string& name);

    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Zero polynomial reports the zero constant.
    GaussianRational constant_value() const;

    void add_term(const Exponents& e, const GaussianRational& c);

    // Returns this polynomial re-indexed over a superset variable list.
    Polynomial aligned_to(const std::vector<std::string>& vars) const;
    // Union of variable lists, sorted.
    static std::vector<std::string> var_union(const std::vector<std::string>& a,
                                              const std::vector<std::string>& b);

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const;
    Polynomial scaled(const GaussianRational& c) const;
    Polynomial pow(unsigned e) const;
    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // deg(0) = 0 by convention.
    unsigned total_degree() const;
    unsigned degree_in(const std::string& var) const;

    Polynomial derivative(const std::string& var) const;
    // Sum of dir_j * d/dx_j; dir aligned to vars().
    Polynomial directional_derive(const std::vector<GaussianRational>& dir) const;

    // Substitute each variable by the given polynomial (parallel substitution).
    // Map may cover a subset; unmapped variables stay themselves.
    Polynomial substitute(const std::map<std::string, Polynomial>& repl) const;
    Polynomial rename_var(const std::string& from, const std::string& to) const;

    // Max over coefficients of max(|Re|,|Im|); exact.
    mpq_class max_norm() const;

    // point aligned to vars().
    BigComplex eval(const std::vector<BigComplex>& point) const;
    struct EvalResult {
        BigComplex value;
        BigFloat error_bound;
    };
    // Error bound: 2^(1-prec) * term_count * max term magnitude.
    EvalResult eval_with_bound(const std::vector<BigComplex>& point) const;
    GaussianRational eval_exact(const std::vector<GaussianRational>& point) const;

    // View as univariate in `var`: exponent -> coefficient polynomial
    // over the remaining variables.
    std::map<unsigned, Polynomial> as_univariate(const std::string& var) const;

    // Exact division; throws std::domain_error when not divisible.
    Polynomial divide_exact(const Polynomial& divisor) const;

    std::string to_string() const;

private:
    std::vector<std::string> vars_;
    TermMap terms_;
    void check_sorted() const;
};

// Parses sums/products/powers of rationals, decimals, `i`, and variable
// names; accepts everything the canonical printer emits.
Polynomial parse_polynomial(const std::string& text);

// Resultant of a and b with respect to `var` (eliminates `var`).
Polynomial resultant(const Polynomial& a, const Polynomial& b, const std::string& var);

} // namespace noether
