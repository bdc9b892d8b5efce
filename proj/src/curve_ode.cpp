#include "noether/curve_ode.hpp"

#include "noether/evaluate.hpp"
#include "noether/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace noether {

namespace {

// ---------------------------------------------------------------------------
// Univariate polynomials over Q(i) as dense coefficient vectors, and the
// rational-function field built on them. Everything here is exact.

using UVec = std::vector<GaussianRational>;

void utrim(UVec& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

UVec uvec_of(const Polynomial& p, const std::string& var) {
    for (const auto& v : p.vars())
        if (v != var && p.degree_in(v) > 0)
            throw std::invalid_argument("uvec_of: not univariate in " + var);
    UVec out;
    for (const auto& [e, c] : p.as_univariate(var)) {
        if (out.size() <= e) out.resize(e + 1);
        out[e] = c.constant_value();
    }
    utrim(out);
    return out;
}

Polynomial poly_of(const UVec& v, const std::string& var) {
    Polynomial p(std::vector<std::string>{var});
    for (size_t e = 0; e < v.size(); ++e)
        if (!v[e].is_zero()) p.add_term({unsigned(e)}, v[e]);
    return p;
}

UVec uadd(UVec a, const UVec& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    utrim(a);
    return a;
}

UVec uneg(UVec a) {
    for (auto& c : a) c = -c;
    return a;
}

UVec usub(UVec a, const UVec& b) { return uadd(std::move(a), uneg(b)); }

UVec umul(const UVec& a, const UVec& b) {
    if (a.empty() || b.empty()) return {};
    UVec r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    utrim(r);
    return r;
}

UVec uscale(UVec a, const GaussianRational& c) {
    for (auto& x : a) x *= c;
    utrim(a);
    return a;
}

UVec uderiv(const UVec& a) {
    UVec r;
    for (size_t e = 1; e < a.size(); ++e) r.push_back(GaussianRational(long(e)) * a[e]);
    utrim(r);
    return r;
}

std::pair<UVec, UVec> udivmod(UVec a, const UVec& b) {
    if (b.empty()) throw std::domain_error("udivmod: division by zero");
    UVec q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size()) {
        size_t sh = a.size() - b.size();
        GaussianRational c = a.back() / b.back();
        q[sh] = c;
        for (size_t i = 0; i < b.size(); ++i) a[sh + i] -= c * b[i];
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    utrim(q);
    return {std::move(q), std::move(a)};
}

UVec umonic(UVec a) {
    if (a.empty()) return a;
    return uscale(std::move(a), GaussianRational(1) / a.back());
}

UVec ugcd(UVec a, UVec b) {
    while (!b.empty()) {
        UVec r = udivmod(a, b).second;
        // monic remainders keep the rational coefficients from exploding
        if (!r.empty()) r = umonic(std::move(r));
        a = std::move(b);
        b = std::move(r);
    }
    return umonic(std::move(a));
}

// num/den with gcd 1 and monic den.
struct RatFun {
    UVec num, den;
    RatFun() : den{GaussianRational(1)} {}
    explicit RatFun(GaussianRational c) : den{GaussianRational(1)} {
        if (!c.is_zero()) num = {std::move(c)};
    }
    bool is_zero() const { return num.empty(); }
};

bool uis_one(const UVec& v) { return v.size() == 1 && v[0].is_one(); }

RatFun rf_make(UVec n, UVec d) {
    if (d.empty()) throw std::domain_error("rational function with zero denominator");
    RatFun r;
    if (n.empty()) return r;
    if (d.size() == 1) {
        r.num = uscale(std::move(n), GaussianRational(1) / d[0]);
        return r;
    }
    UVec g = ugcd(n, d);
    if (g.size() > 1) {
        n = udivmod(std::move(n), g).first;
        d = udivmod(std::move(d), g).first;
    }
    GaussianRational lead = d.back();
    r.num = uscale(std::move(n), GaussianRational(1) / lead);
    r.den = uscale(std::move(d), GaussianRational(1) / lead);
    return r;
}

RatFun rf_add(const RatFun& a, const RatFun& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (uis_one(a.den) && uis_one(b.den)) {
        RatFun r;
        r.num = uadd(a.num, b.num);
        return r;
    }
    // shared denominator factor stays out of the cross multiplication
    UVec g = ugcd(a.den, b.den);
    if (uis_one(g)) return rf_make(uadd(umul(a.num, b.den), umul(b.num, a.den)), umul(a.den, b.den));
    UVec da = udivmod(a.den, g).first, db = udivmod(b.den, g).first;
    return rf_make(uadd(umul(a.num, db), umul(b.num, da)), umul(da, b.den));
}

RatFun rf_neg(RatFun a) {
    a.num = uneg(std::move(a.num));
    return a;
}

RatFun rf_sub(const RatFun& a, const RatFun& b) { return rf_add(a, rf_neg(b)); }

RatFun rf_mul(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return RatFun();
    if (uis_one(a.den) && uis_one(b.den)) {
        RatFun r;
        r.num = umul(a.num, b.num);
        return r;
    }
    // cancel across before multiplying: gcd(a.num, b.den), gcd(b.num, a.den)
    UVec one{GaussianRational(1)};
    UVec g1 = uis_one(b.den) ? one : ugcd(a.num, b.den);
    UVec g2 = uis_one(a.den) ? one : ugcd(b.num, a.den);
    UVec an = g1.size() > 1 ? udivmod(a.num, g1).first : a.num;
    UVec bd = g1.size() > 1 ? udivmod(b.den, g1).first : b.den;
    UVec bn = g2.size() > 1 ? udivmod(b.num, g2).first : b.num;
    UVec ad = g2.size() > 1 ? udivmod(a.den, g2).first : a.den;
    return rf_make(umul(an, bn), umul(ad, bd));
}

RatFun rf_div(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw std::domain_error("rational function division by zero");
    RatFun binv;
    binv.num = b.den;
    binv.den = b.num;
    GaussianRational lead = binv.den.back();
    binv.num = uscale(std::move(binv.num), GaussianRational(1) / lead);
    binv.den = uscale(std::move(binv.den), GaussianRational(1) / lead);
    return rf_mul(a, binv);
}

RatFun rf_deriv(const RatFun& a) {
    if (uis_one(a.den)) {
        RatFun r;
        r.num = uderiv(a.num);
        return r;
    }
    // (n/d)' = (n'd - nd') / d^2
    return rf_make(usub(umul(uderiv(a.num), a.den), umul(a.num, uderiv(a.den))),
                   umul(a.den, a.den));
}

// ---------------------------------------------------------------------------
// Polynomials in y over the field Q(i)(t).

using YPoly = std::vector<RatFun>;

void ytrim(YPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

YPoly yadd(YPoly a, const YPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] = rf_add(a[i], b[i]);
    ytrim(a);
    return a;
}

YPoly yscale(YPoly a, const RatFun& c) {
    for (auto& x : a) x = rf_mul(x, c);
    ytrim(a);
    return a;
}

YPoly ymul(const YPoly& a, const YPoly& b) {
    if (a.empty() || b.empty()) return {};
    YPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] = rf_add(r[i + j], rf_mul(a[i], b[j]));
    }
    ytrim(r);
    return r;
}

std::pair<YPoly, YPoly> ydivmod(YPoly a, const YPoly& b) {
    if (b.empty()) throw std::domain_error("ydivmod: division by zero");
    YPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size()) {
        size_t sh = a.size() - b.size();
        RatFun c = rf_div(a.back(), b.back());
        q[sh] = c;
        for (size_t i = 0; i < b.size(); ++i) a[sh + i] = rf_sub(a[sh + i], rf_mul(c, b[i]));
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    ytrim(q);
    return {std::move(q), std::move(a)};
}

YPoly ymod(YPoly a, const YPoly& p) { return ydivmod(std::move(a), p).second; }

YPoly yderiv_y(const YPoly& a) {
    YPoly r;
    for (size_t e = 1; e < a.size(); ++e)
        r.push_back(rf_mul(RatFun(GaussianRational(long(e))), a[e]));
    ytrim(r);
    return r;
}

YPoly yderiv_t(YPoly a) {
    for (auto& c : a) c = rf_deriv(c);
    ytrim(a);
    return a;
}

// Inverse of u modulo monic p; throws domain_error when gcd(u, p) != 1.
YPoly yinv_mod(YPoly u, const YPoly& p) {
    YPoly r0 = p, r1 = ymod(std::move(u), p);
    YPoly s0, s1{RatFun(GaussianRational(1))};
    while (!r1.empty()) {
        auto [q, r2] = ydivmod(r0, r1);
        YPoly s2 = yadd(s0, yscale(ymul(q, s1), RatFun(GaussianRational(-1))));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1)
        throw std::domain_error("derivative is not invertible modulo the defining polynomial");
    return yscale(std::move(s0), rf_div(RatFun(GaussianRational(1)), r0[0]));
}

YPoly ypoly_of(const Polynomial& P, const std::string& yvar, const std::string& tvar) {
    YPoly f;
    for (const auto& [e, coeff] : P.as_univariate(yvar)) {
        if (f.size() <= e) f.resize(e + 1);
        f[e] = rf_make(uvec_of(coeff, tvar), UVec{GaussianRational(1)});
    }
    ytrim(f);
    return f;
}

// Clear denominators: smallest common multiple of the dens, then content out.
std::vector<UVec> clear_denominators(const std::vector<RatFun>& mu) {
    UVec lcm{GaussianRational(1)};
    for (const auto& m : mu) {
        if (m.is_zero()) continue;
        UVec g = ugcd(lcm, m.den);
        lcm = udivmod(umul(lcm, m.den), g).first;
    }
    std::vector<UVec> out;
    for (const auto& m : mu) {
        if (m.is_zero()) {
            out.push_back({});
            continue;
        }
        out.push_back(umul(m.num, udivmod(lcm, m.den).first));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Branch lifting: roots of the plane models over a moving base point.

Polynomial plane_model(const AlgebraicCurve& C, const std::string& v) {
    std::vector<Polynomial> polys = C.generators;
    for (const auto& w : C.vars) {
        if (w == C.projection || w == v) continue;
        std::vector<Polynomial> keep, with_w;
        for (const auto& p : polys)
            (p.degree_in(w) > 0 ? with_w : keep).push_back(p);
        // A single generator involving w is solvable fiber data: projecting it
        // away is exact. Several combine pairwise through resultants.
        for (size_t i = 1; i < with_w.size(); ++i) {
            Polynomial r = resultant(with_w[0], with_w[i], w);
            if (!r.is_zero()) keep.push_back(std::move(r));
        }
        if (keep.empty())
            throw std::invalid_argument("plane_model: cannot eliminate " + w);
        polys = std::move(keep);
    }

    // Common factor of everything that still involves v.
    YPoly acc;
    for (const auto& p : polys) {
        if (p.degree_in(v) == 0) continue;
        YPoly f = ypoly_of(p, v, C.projection);
        acc = acc.empty() ? std::move(f) : [&] {
            YPoly g = acc, h = f;
            while (!h.empty()) {
                YPoly r = ymod(g, h);
                g = std::move(h);
                h = std::move(r);
            }
            return g;
        }();
    }
    if (acc.size() < 2)
        throw std::invalid_argument("plane_model: projection misses coordinate " + v);

    // Squarefree part.
    YPoly der = yderiv_y(acc);
    YPoly g = acc, h = der;
    while (!h.empty()) {
        YPoly r = ymod(g, h);
        g = std::move(h);
        h = std::move(r);
    }
    if (g.size() > 1) acc = ydivmod(acc, g).first;

    // Back to a polynomial: multiply by the common denominator.
    UVec lcm{GaussianRational(1)};
    for (const auto& c : acc) {
        if (c.is_zero()) continue;
        UVec gg = ugcd(lcm, c.den);
        lcm = udivmod(umul(lcm, c.den), gg).first;
    }
    Polynomial out;
    for (size_t e = 0; e < acc.size(); ++e) {
        if (acc[e].is_zero()) continue;
        UVec cleared = umul(acc[e].num, udivmod(lcm, acc[e].den).first);
        out = out + poly_of(cleared, C.projection) * Polynomial::variable(v).pow(unsigned(e));
    }
    return out;
}

struct CurveLift {
    std::string proj;
    std::vector<std::string> vars; // sorted ambient roster
    std::vector<std::string> others;
    std::vector<std::map<unsigned, Polynomial>> model_coeffs; // per other, by y-degree
    std::vector<Polynomial> gens;
    RunConfig cfg;

    CurveLift(const AlgebraicCurve& C, const RunConfig& cfg_) : proj(C.projection), vars(C.vars), cfg(cfg_) {
        for (const auto& v : C.vars) {
            if (v == proj) continue;
            others.push_back(v);
            model_coeffs.push_back(plane_model(C, v).as_univariate(v));
        }
        gens = C.generators;
    }

    std::vector<BigComplex> roots_of(size_t which, const BigComplex& t) const {
        const auto& mc = model_coeffs[which];
        unsigned top = mc.rbegin()->first;
        std::vector<BigComplex> coeffs(top + 1, BigComplex(BigFloat(0)));
        for (const auto& [e, poly] : mc) {
            std::vector<BigComplex> pt;
            if (poly.nvars() == 1) pt.push_back(t);
            coeffs[e] = poly.eval(pt);
        }
        return all_roots(coeffs, cfg);
    }

    // All branch tuples over t, in ambient coordinate order.
    std::vector<std::vector<BigComplex>> tuples(const BigComplex& t) const {
        std::vector<std::vector<BigComplex>> parts;
        for (size_t i = 0; i < others.size(); ++i) parts.push_back(roots_of(i, t));
        std::vector<std::vector<BigComplex>> combos{{}};
        for (const auto& roots : parts) {
            std::vector<std::vector<BigComplex>> next;
            for (const auto& base : combos)
                for (const auto& r : roots) {
                    auto c = base;
                    c.push_back(r);
                    next.push_back(std::move(c));
                }
            combos = std::move(next);
        }
        std::vector<std::vector<BigComplex>> out;
        for (const auto& combo : combos) {
            std::vector<BigComplex> pt;
            size_t oi = 0;
            BigFloat scale(1.0);
            for (const auto& v : vars) {
                if (v == proj) {
                    pt.push_back(t);
                    scale = max(scale, abs(t));
                } else {
                    pt.push_back(combo[oi]);
                    scale = max(scale, abs(combo[oi]));
                    ++oi;
                }
            }
            if (others.size() > 1) {
                bool on_curve = true;
                for (const auto& g : gens) {
                    BigFloat tol = BigFloat(1e-10) * pow_ui(scale, g.total_degree()) *
                                   BigFloat(1.0 + mpq_get_d(g.max_norm().get_mpq_t()));
                    if (abs(g.aligned_to(vars).eval(pt)) > tol) {
                        on_curve = false;
                        break;
                    }
                }
                if (!on_curve) continue;
            }
            out.push_back(std::move(pt));
        }
        if (out.empty()) throw std::runtime_error("curve lift found no branches");
        return out;
    }
};

BigFloat tuple_dist(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b) {
    BigFloat d(Prec{BigFloat::default_precision()});
    for (size_t i = 0; i < a.size(); ++i) d = d + abs(a[i] - b[i]);
    return d;
}

size_t nearest_tuple(const std::vector<std::vector<BigComplex>>& pool,
                     const std::vector<BigComplex>& to) {
    size_t best = 0;
    BigFloat bd = tuple_dist(pool[0], to);
    for (size_t i = 1; i < pool.size(); ++i) {
        BigFloat d = tuple_dist(pool[i], to);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

// Chain evaluation that hops from the nearest previously visited state, so
// dense circle scans cost short continuations instead of basepoint restarts.
struct Walker {
    std::shared_ptr<ChainRuntime> rt;
    std::vector<ChainState> pool;
    size_t cap = 96, next = 1;

    Walker(ChainPtr chain, const RunConfig& cfg) : rt(std::make_shared<ChainRuntime>(chain, cfg)) {}

    BigComplex eval(const Polynomial& f, const std::vector<BigComplex>& pt) {
        ChainState s;
        if (pool.empty()) {
            s = rt->initial_state();
        } else {
            size_t best = 0;
            BigFloat bd = tuple_dist(pool[0].position, pt);
            for (size_t i = 1; i < pool.size(); ++i) {
                BigFloat d = tuple_dist(pool[i].position, pt);
                if (d < bd) {
                    bd = d;
                    best = i;
                }
            }
            s = pool[best];
        }
        rt->continue_to(s, pt);
        BigComplex v = rt->eval_value(f, s);
        if (pool.size() < cap)
            pool.push_back(std::move(s));
        else {
            pool[next] = std::move(s);
            next = next % (cap - 1) + 1; // slot 0 stays as the seed
        }
        return v;
    }
};

} // namespace

// ---------------------------------------------------------------------------

mpq_class ScalarODE::slope() const {
    if (a.empty() || a[0].is_zero()) throw std::logic_error("slope: missing leading coefficient");
    mpq_class a0 = a[0].max_norm(), s = 0;
    for (size_t i = 1; i < a.size(); ++i) s = std::max(s, mpq_class(a[i].max_norm() / a0));
    return s;
}

ScalarODE annihilator(const Polynomial& P, const std::string& yvar, const std::string& tvar) {
    for (const auto& v : P.vars())
        if (v != yvar && v != tvar && P.degree_in(v) > 0)
            throw std::invalid_argument("annihilator: unexpected variable " + v);
    if (P.degree_in(yvar) == 0)
        throw std::invalid_argument("annihilator: polynomial does not involve " + yvar);

    YPoly f = ypoly_of(P, yvar, tvar);
    YPoly pm = yscale(f, rf_div(RatFun(GaussianRational(1)), f.back())); // monic in y
    size_t d = pm.size() - 1;

    // y' = -P_t / P_y mod P.
    YPoly py = yderiv_y(f);
    YPoly pt = yderiv_t(f);
    YPoly y1 = ymod(ymul(yscale(pt, RatFun(GaussianRational(-1))), yinv_mod(py, pm)), pm);

    // Successive derivatives of y in the quotient ring, with a tracked
    // elimination to find the first linear dependence.
    struct Row {
        std::vector<RatFun> vec;   // length d
        std::vector<RatFun> track; // over r_0..r_m
        size_t pivot;
    };
    std::vector<Row> rows;
    std::vector<std::vector<RatFun>> reps; // r_m as vectors, kept for the final check
    std::vector<RatFun> mu;

    YPoly r = ymod(YPoly{RatFun(), RatFun(GaussianRational(1))}, pm); // y itself
    long k = -1;
    for (size_t m = 0; m <= d; ++m) {
        std::vector<RatFun> vec(d);
        for (size_t i = 0; i < r.size(); ++i) vec[i] = r[i];
        reps.push_back(vec);

        std::vector<RatFun> track(m + 1);
        track[m] = RatFun(GaussianRational(1));
        for (const auto& row : rows) {
            if (vec[row.pivot].is_zero()) continue;
            RatFun factor = vec[row.pivot];
            for (size_t i = 0; i < d; ++i) vec[i] = rf_sub(vec[i], rf_mul(factor, row.vec[i]));
            for (size_t i = 0; i < row.track.size(); ++i)
                track[i] = rf_sub(track[i], rf_mul(factor, row.track[i]));
        }
        size_t piv = d;
        for (size_t i = 0; i < d; ++i)
            if (!vec[i].is_zero()) {
                piv = i;
                break;
            }
        if (piv == d) {
            k = long(m);
            mu = std::move(track);
            break;
        }
        RatFun inv = rf_div(RatFun(GaussianRational(1)), vec[piv]);
        for (auto& x : vec) x = rf_mul(x, inv);
        for (auto& x : track) x = rf_mul(x, inv);
        rows.push_back({std::move(vec), std::move(track), piv});

        // r_{m+1} = dr/dt + dr/dy * y'.
        r = yadd(yderiv_t(r), ymod(ymul(yderiv_y(r), y1), pm));
    }
    if (k < 0) throw std::logic_error("annihilator: no dependence within the ring dimension");

    // Clear denominators; a_j multiplies y^{(k-j)}.
    std::vector<UVec> cleared = clear_denominators(mu);
    ScalarODE ode;
    ode.tvar = tvar;
    mpq_class lead_norm = poly_of(cleared[size_t(k)], tvar).max_norm();
    GaussianRational scale(mpq_class(1) / lead_norm);
    for (long j = k; j >= 0; --j)
        ode.a.push_back(poly_of(uscale(cleared[size_t(j)], scale), tvar));

    // Re-verify L(y) = 0 in the quotient ring before handing the operator out.
    std::vector<RatFun> total(d);
    for (long j = 0; j <= k; ++j) {
        RatFun aj = rf_make(uvec_of(ode.a[size_t(k - j)], tvar), UVec{GaussianRational(1)});
        for (size_t i = 0; i < d; ++i)
            total[i] = rf_add(total[i], rf_mul(aj, reps[size_t(j)][i]));
    }
    for (const auto& c : total)
        if (!c.is_zero()) throw std::logic_error("annihilator: certificate failed to verify");
    return ode;
}

unsigned AlgebraicCurve::degree() const {
    unsigned d = 0;
    for (const auto& g : generators) d = std::max(d, g.total_degree());
    return d;
}

void AlgebraicCurve::validate() const {
    if (!std::is_sorted(vars.begin(), vars.end()) ||
        std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw std::invalid_argument("curve variables must be sorted and distinct");
    if (std::find(vars.begin(), vars.end(), projection) == vars.end())
        throw std::invalid_argument("projection is not a curve variable");
    if (generators.empty()) throw std::invalid_argument("curve needs at least one generator");
    for (const auto& g : generators) {
        if (g.is_zero()) throw std::invalid_argument("zero generator");
        for (const auto& v : g.vars())
            if (g.degree_in(v) > 0 && !std::binary_search(vars.begin(), vars.end(), v))
                throw std::invalid_argument("generator variable " + v + " not on the roster");
    }
}

RestrictionSystem restriction_system(const ChainPtr& chain, const AlgebraicCurve& C,
                                     const RunConfig& cfg) {
    (void)cfg;
    C.validate();
    if (chain->coords != C.vars)
        throw std::invalid_argument("restriction_system: chain and curve coordinates differ");

    RestrictionSystem sys;
    sys.field.tvar = C.projection;

    std::map<std::string, Polynomial> coord_sub; // chain coordinate -> roster expression
    std::map<std::string, Polynomial> deriv_sub; // coordinate -> expression for x'
    std::set<std::string> taken(C.vars.begin(), C.vars.end());

    auto add_rule = [&sys, &taken](const std::string& name, Polynomial rhs) {
        if (name != sys.field.tvar && !taken.insert(name).second)
            throw std::invalid_argument("restriction_system: roster name collision on " + name);
        sys.field.xvars.push_back(name);
        sys.field.xi.push_back(std::move(rhs));
    };

    for (const auto& v : C.vars) {
        if (v == C.projection) continue;
        ScalarODE L = annihilator(plane_model(C, v), v, C.projection);
        long k = L.order();
        sys.annihilators.push_back(L);
        sys.coordinates.push_back(v);
        if (k == 0) {
            // relation a0 * y = 0: the coordinate vanishes on the curve
            coord_sub[v] = Polynomial();
            deriv_sub[v] = Polynomial();
            continue;
        }
        auto dname = [&v](long i) { return v + "_d" + std::to_string(i); };
        std::string qname = v + "_q";
        coord_sub[v] = Polynomial::variable(dname(0));

        for (long i = 0; i + 1 < k; ++i) add_rule(dname(i), Polynomial::variable(dname(i + 1)));
        Polynomial top(std::vector<std::string>{});
        for (long i = 1; i <= k; ++i)
            top = top + L.a[size_t(i)] * Polynomial::variable(dname(k - i));
        top = -(Polynomial::variable(qname) * top);
        add_rule(dname(k - 1), top);
        add_rule(qname, -(L.a[0].derivative(C.projection) * Polynomial::variable(qname).pow(2)));
        deriv_sub[v] = k >= 2 ? Polynomial::variable(dname(1)) : top;
    }

    // Members differentiate through the chain rule; the projection coordinate
    // contributes derivative 1.
    size_t proj_idx = size_t(std::find(C.vars.begin(), C.vars.end(), C.projection) - C.vars.begin());
    for (size_t l = 0; l < chain->members.size(); ++l) {
        Polynomial rhs;
        for (size_t j = 0; j < C.vars.size(); ++j) {
            Polynomial pj = chain->rhs[l][j].substitute(coord_sub);
            rhs = rhs + (j == proj_idx ? pj : pj * deriv_sub[C.vars[j]]);
        }
        add_rule(chain->members[l], std::move(rhs));
    }

    sys.n_state = long(sys.field.xvars.size());
    sys.xi_norm = 0;
    for (const auto& p : sys.field.xi) sys.xi_norm = std::max(sys.xi_norm, p.max_norm());
    double d = double(std::max(C.degree(), 1u));
    sys.shape_log2 = std::pow(2.0, d * d);
    double xn = mpq_get_d(sys.xi_norm.get_mpq_t());
    sys.within_shape = xn <= 1.0 || std::log2(xn) <= sys.shape_log2 + 1.0;
    return sys;
}

AnnulusReport good_annulus(const AlgebraicCurve& C, const RunConfig& cfg) {
    C.validate();
    AnnulusReport rep{BigFloat(0), BigFloat(0), BigFloat(0), {}, false};
    for (const auto& v : C.vars) {
        if (v == C.projection) continue;
        Polynomial model = plane_model(C, v);
        ScalarODE L = annihilator(model, v, C.projection);
        Polynomial disc = resultant(model, model.derivative(v), v);
        for (const Polynomial& p : {disc, L.a[0]}) {
            UVec u = uvec_of(p, C.projection);
            if (u.size() < 2) continue;
            std::vector<BigComplex> coeffs;
            for (const auto& c : u) coeffs.push_back(c.to_complex());
            for (const auto& z : all_roots(coeffs, cfg)) rep.exclusions.push_back(z);
        }
    }

    std::vector<BigFloat> cuts{BigFloat(0.5), BigFloat(0.75)};
    for (const auto& z : rep.exclusions) {
        BigFloat m = abs(z);
        if (m > cuts.front() && m < cuts.back()) cuts.push_back(m);
    }
    std::sort(cuts.begin(), cuts.end(), [](const BigFloat& a, const BigFloat& b) { return a < b; });

    BigFloat best_width(Prec{BigFloat::default_precision()});
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        BigFloat w = cuts[i + 1] - cuts[i];
        if (w > best_width) {
            best_width = w;
            rep.r = (cuts[i] + cuts[i + 1]) * BigFloat(0.5);
            rep.rho = w * BigFloat(0.25);
        }
    }
    rep.margin = rep.rho;
    for (size_t i = 0; i < rep.exclusions.size(); ++i) {
        BigFloat d = abs(abs(rep.exclusions[i]) - rep.r) - rep.rho;
        rep.margin = i == 0 ? d : min(rep.margin, d);
    }
    rep.ok = rep.margin > BigFloat(0);
    return rep;
}

CurveZeroReport count_zeros_on_curve(const NoetherianFunction& F, const AlgebraicCurve& C,
                                     const Disc& B, const RunConfig& cfg) {
    C.validate();
    if (F.chain->coords != C.vars)
        throw std::invalid_argument("count_zeros_on_curve: coordinate mismatch");

    CurveZeroReport rep;
    RestrictionSystem sys = restriction_system(F.chain, C, cfg);
    rep.n_state = sys.n_state;
    rep.xi_norm = sys.xi_norm;

    CurveLift lift(C, cfg);
    Walker walker(F.chain, cfg);
    BigFloat two_pi = pi(cfg.precision_bits) * BigFloat(2.0);
    auto at_angle = [&](double frac) {
        return B.center + BigComplex(B.radius) * unit_circle(two_pi * BigFloat(frac));
    };

    // Identical-vanishing pre-pass on a coarse sample of each branch.
    auto start = lift.tuples(at_angle(0.0));
    rep.branches = long(start.size());
    {
        std::vector<BigFloat> branch_max(start.size(), BigFloat(Prec{BigFloat::default_precision()}));
        std::vector<std::vector<BigComplex>> cur = start;
        int coarse = 16;
        for (int s = 0; s <= coarse; ++s) {
            auto tup = lift.tuples(at_angle(double(s) / coarse));
            for (size_t b = 0; b < cur.size(); ++b) {
                cur[b] = tup[nearest_tuple(tup, cur[b])];
                branch_max[b] = max(branch_max[b], abs(walker.eval(F.poly, cur[b])));
            }
        }
        for (size_t b = 0; b < branch_max.size(); ++b)
            if (branch_max[b] < BigFloat(1e-30))
                throw std::domain_error("count_zeros_on_curve: function vanishes on a component");
    }

    // Argument-principle walk: each branch accumulates arg F around the
    // contour; segments refine until the increment is safely below pi/2.
    long evals = 0;
    const long eval_budget = 400000;
    std::function<BigFloat(std::vector<BigComplex>&, BigComplex&, double, double, int)> walk_arg =
        [&](std::vector<BigComplex>& tuple, BigComplex& fv, double lo, double hi,
            int depth) -> BigFloat {
        if (++evals > eval_budget)
            throw std::runtime_error("count_zeros_on_curve: refinement budget exhausted");
        auto tup = lift.tuples(at_angle(hi));
        std::vector<BigComplex> nxt = tup[nearest_tuple(tup, tuple)];
        BigComplex fn = walker.eval(F.poly, nxt);
        if (abs(fn) < BigFloat(1e-40))
            throw std::runtime_error("count_zeros_on_curve: zero on the contour");
        BigComplex ratio = fn / fv;
        BigFloat dArg = atan2(ratio.im, ratio.re);
        if (dArg > BigFloat(1.55) || dArg < BigFloat(-1.55)) {
            if (depth > 40) throw std::runtime_error("count_zeros_on_curve: refinement too deep");
            double mid = 0.5 * (lo + hi);
            BigFloat first = walk_arg(tuple, fv, lo, mid, depth + 1);
            return first + walk_arg(tuple, fv, mid, hi, depth + 1);
        }
        tuple = std::move(nxt);
        fv = fn;
        return dArg;
    };

    long steps = std::max<long>(cfg.circle_samples, 48);
    BigFloat total(Prec{BigFloat::default_precision()});
    std::vector<size_t> landing(start.size());
    for (size_t b = 0; b < start.size(); ++b) {
        std::vector<BigComplex> tuple = start[b];
        BigComplex fv = walker.eval(F.poly, tuple);
        for (long s = 0; s < steps; ++s)
            total = total + walk_arg(tuple, fv, double(s) / steps, double(s + 1) / steps, 0);
        landing[b] = nearest_tuple(start, tuple);
    }
    BigFloat winding = total / two_pi;
    double w = winding.to_double();
    if (std::abs(w - std::round(w)) > 0.05)
        throw std::runtime_error("count_zeros_on_curve: winding did not close to an integer");
    rep.zeros = long(std::llround(w));

    // Monodromy orbits.
    {
        std::vector<char> seen(start.size(), 0);
        for (size_t b = 0; b < start.size(); ++b) {
            if (seen[b]) continue;
            ++rep.cycles;
            size_t at = b;
            while (!seen[at]) {
                seen[at] = 1;
                at = landing[at];
            }
        }
    }

    // Bound side: index of the branch product on the doubled disc.
    Disc U(B.center, B.radius * BigFloat(2.0));
    LineMap rf = [&](const BigComplex& t) {
        BigComplex prod(1.0);
        for (const auto& pt : lift.tuples(t)) prod = prod * walker.eval(F.poly, pt);
        return prod;
    };
    rep.resultant_index = bernstein_gap_index(rf, U, BigFloat(2.0), cfg).index;

    // Per-branch indices when every branch is globally single-valued over U:
    // no ramification and no model degree drop inside the doubled disc.
    bool branchwise = true;
    for (const auto& v : C.vars) {
        if (v == C.projection) continue;
        Polynomial model = plane_model(C, v);
        Polynomial disc = resultant(model, model.derivative(v), v);
        Polynomial lead = model.as_univariate(v).rbegin()->second;
        for (const Polynomial& p : {disc, lead}) {
            UVec u = uvec_of(p, C.projection);
            if (u.size() < 2) continue;
            std::vector<BigComplex> coeffs;
            for (const auto& c : u) coeffs.push_back(c.to_complex());
            for (const auto& z : all_roots(coeffs, cfg))
                if (abs(z - U.center) < U.radius * BigFloat(1.05)) branchwise = false;
        }
    }
    if (branchwise && rep.cycles == rep.branches) {
        BigFloat sum(Prec{BigFloat::default_precision()});
        for (size_t b = 0; b < start.size(); ++b) {
            LineMap fb = [&, b](const BigComplex& t) {
                auto ref = start[b];
                // continuity from the contour start: hop along a straight path
                int hops = 4;
                BigComplex t0 = at_angle(0.0);
                std::vector<BigComplex> cur = ref;
                for (int h = 1; h <= hops; ++h) {
                    BigComplex th = t0 + (t - t0) * BigComplex(BigFloat(double(h) / hops));
                    auto tup = lift.tuples(th);
                    cur = tup[nearest_tuple(tup, cur)];
                }
                return walker.eval(F.poly, cur);
            };
            BigFloat idx = bernstein_gap_index(fb, U, BigFloat(2.0), cfg).index;
            rep.branch_indices.push_back(idx);
            sum = sum + idx;
        }
        rep.subadd_bound =
            BigFloat(cfg.c_cal) * log(BigFloat(double(rep.branches + 1))) * sum;
    } else {
        rep.branch_indices.push_back(rep.resultant_index);
        rep.subadd_bound = BigFloat(0);
    }

    rep.gamma = BigFloat(2.0 + cfg.gamma_cal);
    rep.bound = rep.gamma * max(rep.resultant_index, rep.subadd_bound);
    rep.holds = BigFloat(double(rep.zeros)) <= rep.bound;
    return rep;
}

} // namespace noether
