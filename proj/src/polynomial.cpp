#include "noether/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace noether {

namespace {

std::string q_str(const mpq_class& q) { return q.get_str(); }

// Coefficient text; mixed re/im forms are parenthesized so they can be
// glued to a monomial with '*'.
std::string coeff_str(const GaussianRational& c) {
    if (c.is_real()) return q_str(c.re);
    if (c.re == 0) {
        if (c.im == 1) return "i";
        if (c.im == -1) return "-i";
        return q_str(c.im) + "*i";
    }
    mpq_class ia = abs(c.im);
    std::string imp = (ia == 1) ? "i" : q_str(ia) + "*i";
    return "(" + q_str(c.re) + (c.im > 0 ? "+" : "-") + imp + ")";
}

} // namespace

std::string GaussianRational::to_string() const { return coeff_str(*this); }

void Polynomial::check_sorted() const {
    for (size_t k = 1; k < vars_.size(); ++k)
        if (!(vars_[k - 1] < vars_[k])) throw std::invalid_argument("variable list must be sorted and unique");
}

Polynomial Polynomial::constant(GaussianRational c, std::vector<std::string> vars) {
    Polynomial p(std::move(vars));
    if (!c.is_zero()) p.terms_[Exponents(p.vars_.size(), 0)] = std::move(c);
    return p;
}

Polynomial Polynomial::variable(const std::string& name) {
    Polynomial p(std::vector<std::string>{name});
    p.terms_[{1u}] = GaussianRational(1);
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
}

GaussianRational Polynomial::constant_value() const {
    if (terms_.empty()) return GaussianRational();
    if (!is_constant()) throw std::domain_error("polynomial is not constant");
    return terms_.begin()->second;
}

void Polynomial::add_term(const Exponents& e, const GaussianRational& c) {
    if (e.size() != vars_.size()) throw std::invalid_argument("exponent arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_[e] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial Polynomial::aligned_to(const std::vector<std::string>& vars) const {
    if (vars == vars_) return *this;
    Polynomial out(vars);
    std::vector<size_t> pos(vars_.size());
    for (size_t k = 0; k < vars_.size(); ++k) {
        auto it = std::lower_bound(vars.begin(), vars.end(), vars_[k]);
        if (it == vars.end() || *it != vars_[k])
            throw std::invalid_argument("alignment target is not a superset");
        pos[k] = static_cast<size_t>(it - vars.begin());
    }
    for (const auto& [e, c] : terms_) {
        Exponents ne(vars.size(), 0);
        for (size_t k = 0; k < e.size(); ++k) ne[pos[k]] = e[k];
        out.terms_[std::move(ne)] = c;
    }
    return out;
}

std::vector<std::string> Polynomial::var_union(const std::vector<std::string>& a,
                                               const std::vector<std::string>& b) {
    std::vector<std::string> u;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    auto u = Polynomial::var_union(a.vars_, b.vars_);
    Polynomial x = a.aligned_to(u), y = b.aligned_to(u);
    for (const auto& [e, c] : y.terms_) x.add_term(e, c);
    return x;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial Polynomial::operator-() const {
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
}

Polynomial Polynomial::scaled(const GaussianRational& c) const {
    Polynomial out(vars_);
    if (c.is_zero()) return out;
    for (const auto& [e, k] : terms_) out.terms_[e] = k * c;
    return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    auto u = Polynomial::var_union(a.vars_, b.vars_);
    Polynomial x = a.aligned_to(u), y = b.aligned_to(u), out(u);
    for (const auto& [ea, ca] : x.terms_)
        for (const auto& [eb, cb] : y.terms_) {
            Polynomial::Exponents e(ea);
            for (size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
            out.add_term(e, ca * cb);
        }
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial acc = Polynomial::constant(GaussianRational(1), vars_);
    Polynomial base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    auto u = Polynomial::var_union(a.vars_, b.vars_);
    return a.aligned_to(u).terms_ == b.aligned_to(u).terms_;
}

unsigned Polynomial::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (unsigned x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

unsigned Polynomial::degree_in(const std::string& var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return 0;
    size_t k = static_cast<size_t>(it - vars_.begin());
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[k]);
    return d;
}

Polynomial Polynomial::derivative(const std::string& var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    Polynomial out(vars_);
    if (it == vars_.end() || *it != var) return out;
    size_t k = static_cast<size_t>(it - vars_.begin());
    for (const auto& [e, c] : terms_) {
        if (e[k] == 0) continue;
        Exponents ne(e);
        ne[k] -= 1;
        out.add_term(ne, c * GaussianRational(static_cast<long>(e[k])));
    }
    return out;
}

Polynomial Polynomial::directional_derive(const std::vector<GaussianRational>& dir) const {
    if (dir.size() != vars_.size()) throw std::invalid_argument("direction arity mismatch");
    Polynomial out(vars_);
    for (size_t k = 0; k < vars_.size(); ++k)
        if (!dir[k].is_zero()) out = out + derivative(vars_[k]).scaled(dir[k]);
    return out;
}

Polynomial Polynomial::substitute(const std::map<std::string, Polynomial>& repl) const {
    // Resulting variable universe: untouched vars plus vars of replacements.
    std::vector<std::string> u;
    for (const auto& v : vars_)
        if (!repl.count(v)) u = var_union(u, {v});
    for (const auto& [v, p] : repl) u = var_union(u, p.vars());

    Polynomial out(u);
    std::map<std::string, std::vector<Polynomial>> powers; // var -> [1, p, p^2, ...]
    auto power_of = [&](const std::string& v, unsigned e) -> Polynomial {
        auto& cache = powers[v];
        if (cache.empty()) {
            cache.push_back(Polynomial::constant(GaussianRational(1), u));
            auto it = repl.find(v);
            cache.push_back((it != repl.end() ? it->second : Polynomial::variable(v)).aligned_to(u));
        }
        while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
        return cache[e];
    };
    for (const auto& [e, c] : terms_) {
        Polynomial t = Polynomial::constant(c, u);
        for (size_t k = 0; k < vars_.size(); ++k)
            if (e[k] > 0) t = t * power_of(vars_[k], e[k]);
        out = out + t;
    }
    return out;
}

Polynomial Polynomial::rename_var(const std::string& from, const std::string& to) const {
    if (from == to) return *this;
    std::map<std::string, Polynomial> repl;
    repl.emplace(from, Polynomial::variable(to));
    return substitute(repl);
}

mpq_class Polynomial::max_norm() const {
    mpq_class m(0);
    for (const auto& [e, c] : terms_) {
        mpq_class n = c.max_norm();
        if (n > m) m = n;
    }
    return m;
}

BigComplex Polynomial::eval(const std::vector<BigComplex>& point) const {
    return eval_with_bound(point).value;
}

Polynomial::EvalResult Polynomial::eval_with_bound(const std::vector<BigComplex>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("point arity mismatch");
    mpfr_prec_t prec = BigFloat::default_precision();
    for (const auto& z : point) prec = std::max(prec, z.re.precision());

    std::vector<std::vector<BigComplex>> powers(point.size());
    auto power_of = [&](size_t k, unsigned e) -> const BigComplex& {
        auto& cache = powers[k];
        if (cache.empty()) {
            cache.push_back(BigComplex(BigFloat(mpq_class(1), prec), BigFloat(Prec{prec})));
            cache.push_back(point[k]);
        }
        while (cache.size() <= e) cache.push_back(cache.back() * point[k]);
        return cache[e];
    };

    BigComplex acc = BigComplex::zero(prec);
    BigFloat max_mag{Prec{prec}};
    for (const auto& [e, c] : terms_) {
        BigComplex t = c.to_complex(prec);
        for (size_t k = 0; k < e.size(); ++k)
            if (e[k] > 0) t *= power_of(k, e[k]);
        BigFloat mag = t.abs();
        if (mag > max_mag) max_mag = mag;
        acc += t;
    }
    BigFloat bound = BigFloat(mpq_class(static_cast<long>(terms_.size())), prec).mul_2si(1 - prec) * max_mag;
    return {acc, bound};
}

GaussianRational Polynomial::eval_exact(const std::vector<GaussianRational>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("point arity mismatch");
    GaussianRational acc;
    for (const auto& [e, c] : terms_) {
        GaussianRational t = c;
        for (size_t k = 0; k < e.size(); ++k)
            for (unsigned j = 0; j < e[k]; ++j) t *= point[k];
        acc += t;
    }
    return acc;
}

std::map<unsigned, Polynomial> Polynomial::as_univariate(const std::string& var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    bool has = (it != vars_.end() && *it == var);
    size_t k = has ? static_cast<size_t>(it - vars_.begin()) : 0;

    std::vector<std::string> rest;
    for (const auto& v : vars_)
        if (v != var) rest.push_back(v);

    std::map<unsigned, Polynomial> out;
    if (!has) {
        if (!is_zero()) out.emplace(0u, *this);
        return out;
    }
    for (const auto& [e, c] : terms_) {
        Exponents re;
        re.reserve(e.size() - 1);
        for (size_t j = 0; j < e.size(); ++j)
            if (j != k) re.push_back(e[j]);
        auto [pos, inserted] = out.try_emplace(e[k], Polynomial(rest));
        pos->second.add_term(re, c);
    }
    return out;
}

Polynomial Polynomial::divide_exact(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
    auto u = var_union(vars_, divisor.vars_);
    Polynomial rem = aligned_to(u), d = divisor.aligned_to(u), quot(u);
    const auto& dlead = *d.terms_.rbegin();
    while (!rem.is_zero()) {
        const auto& rlead = *rem.terms_.rbegin();
        Exponents qe(rlead.first);
        for (size_t k = 0; k < qe.size(); ++k) {
            if (qe[k] < dlead.first[k]) throw std::domain_error("inexact polynomial division");
            qe[k] -= dlead.first[k];
        }
        GaussianRational qc = rlead.second / dlead.second;
        Polynomial qt(u);
        qt.add_term(qe, qc);
        quot = quot + qt;
        rem = rem - qt * d;
    }
    return quot;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[k];
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        std::string t;
        if (mono.empty()) {
            t = coeff_str(c);
        } else if (c.is_one()) {
            t = mono;
        } else if (c == GaussianRational(-1)) {
            t = "-" + mono;
        } else {
            t = coeff_str(c) + "*" + mono;
        }
        if (first) {
            out = t;
            first = false;
        } else if (!t.empty() && t[0] == '-') {
            out += " - " + t.substr(1);
        } else {
            out += " + " + t;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

struct PolyLexer {
    std::string s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw std::invalid_argument(std::string("expected '") + c + "' at offset " + std::to_string(pos));
    }
    std::string number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) ++pos;
        if (start == pos) throw std::invalid_argument("expected number at offset " + std::to_string(pos));
        return s.substr(start, pos - start);
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        }
        if (start == pos) throw std::invalid_argument("expected identifier at offset " + std::to_string(pos));
        return s.substr(start, pos - start);
    }
};

class PolyParser {
public:
    explicit PolyParser(const std::string& text) { lex.s = text; }

    Polynomial parse() {
        Polynomial p = expr();
        if (!lex.eof()) throw std::invalid_argument("trailing input at offset " + std::to_string(lex.pos));
        return p;
    }

private:
    PolyLexer lex;

    Polynomial expr() {
        bool neg = false;
        if (lex.accept('-')) neg = true;
        else lex.accept('+');
        Polynomial acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (lex.accept('+')) acc = acc + term();
            else if (lex.accept('-')) acc = acc - term();
            else break;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (true) {
            if (lex.accept('*')) {
                acc = acc * factor();
            } else if (lex.accept('/')) {
                Polynomial d = factor();
                if (!d.is_constant() || d.is_zero())
                    throw std::invalid_argument("polynomial division only by nonzero constants");
                acc = acc.scaled(GaussianRational(1) / d.constant_value());
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial factor() {
        Polynomial base = atom();
        if (lex.accept('^')) {
            std::string n = lex.number();
            if (n.find('.') != std::string::npos) throw std::invalid_argument("exponent must be a natural number");
            unsigned long e = std::stoul(n);
            base = base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    Polynomial atom() {
        char c = lex.peek();
        if (c == '(') {
            lex.expect('(');
            Polynomial p = expr();
            lex.expect(')');
            return p;
        }
        if (c == '-') {
            lex.expect('-');
            return -atom();
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string n = lex.number();
            return Polynomial::constant(GaussianRational(rational_from_decimal(n)));
        }
        std::string id = lex.ident();
        if (id == "i") return Polynomial::constant(GaussianRational::i());
        return Polynomial::variable(id);
    }
};

} // namespace

Polynomial parse_polynomial(const std::string& text) { return PolyParser(text).parse(); }

mpq_class rational_from_decimal(const std::string& s) {
    std::string t = s;
    bool neg = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        neg = (t[0] == '-');
        t = t.substr(1);
    }
    auto dot = t.find('.');
    mpq_class q;
    if (dot == std::string::npos) {
        q = mpq_class(mpz_class(t, 10)); // base pinned: "025" must not read as octal
    } else {
        std::string digits = t.substr(0, dot) + t.substr(dot + 1);
        size_t frac = t.size() - dot - 1;
        if (digits.empty()) throw std::invalid_argument("bad decimal: " + s);
        mpz_class num(digits, 10);
        mpz_class den(1);
        for (size_t k = 0; k < frac; ++k) den *= 10;
        q = mpq_class(num, den);
    }
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

GaussianRational parse_gaussian_rational(const std::string& s) {
    Polynomial p = parse_polynomial(s);
    if (!p.is_constant()) throw std::invalid_argument("not a constant: " + s);
    return p.constant_value();
}

Polynomial resultant(const Polynomial& a, const Polynomial& b, const std::string& var) {
    auto ua = a.as_univariate(var);
    auto ub = b.as_univariate(var);
    unsigned m = a.degree_in(var), n = b.degree_in(var);
    auto rest = Polynomial::var_union(
        ua.empty() ? std::vector<std::string>{} : ua.begin()->second.vars(),
        ub.empty() ? std::vector<std::string>{} : ub.begin()->second.vars());
    auto one = Polynomial::constant(GaussianRational(1), rest);
    auto zero = Polynomial(rest);
    auto coeff = [&](const std::map<unsigned, Polynomial>& u, unsigned k) {
        auto it = u.find(k);
        return it == u.end() ? zero : it->second.aligned_to(rest);
    };
    if (m == 0 && n == 0) return one; // both constant in var
    if (m == 0) return coeff(ua, 0).pow(n);
    if (n == 0) return coeff(ub, 0).pow(m);

    size_t N = m + n;
    std::vector<std::vector<Polynomial>> M(N, std::vector<Polynomial>(N, zero));
    for (unsigned r = 0; r < n; ++r)
        for (unsigned k = 0; k <= m; ++k) M[r][r + k] = coeff(ua, m - k);
    for (unsigned r = 0; r < m; ++r)
        for (unsigned k = 0; k <= n; ++k) M[n + r][r + k] = coeff(ub, n - k);

    // Bareiss fraction-free elimination.
    Polynomial prev = one;
    int sign = 1;
    for (size_t k = 0; k + 1 < N; ++k) {
        if (M[k][k].is_zero()) {
            size_t swap_row = k + 1;
            while (swap_row < N && M[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == N) return zero;
            std::swap(M[k], M[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < N; ++i) {
            for (size_t j = k + 1; j < N; ++j) {
                Polynomial num = M[i][j] * M[k][k] - M[i][k] * M[k][j];
                M[i][j] = num.divide_exact(prev);
            }
            M[i][k] = zero;
        }
        prev = M[k][k];
    }
    Polynomial det = M[N - 1][N - 1];
    return sign < 0 ? -det : det;
}

} // namespace noether
