#include "noether/ideal_chain.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace noether {

namespace {

// Evaluate q at (t, x) when the point is known by variable name.
BigComplex eval_named(const Polynomial& q, const std::map<std::string, BigComplex>& point) {
    std::vector<BigComplex> p;
    p.reserve(q.nvars());
    for (const auto& v : q.vars()) {
        auto it = point.find(v);
        if (it == point.end()) throw std::invalid_argument("eval_named: unbound variable " + v);
        p.push_back(it->second);
    }
    return q.eval(p);
}

} // namespace

unsigned DerivationField::degree() const {
    unsigned d = 0;
    for (const auto& p : xi) d = std::max(d, p.total_degree());
    return d;
}

mpq_class DerivationField::sup_norm() const {
    mpq_class m = 0;
    for (const auto& p : xi) m = std::max(m, p.max_norm());
    return m;
}

std::vector<std::string> DerivationField::roster() const {
    std::vector<std::string> r{tvar};
    for (const auto& v : xvars) r = Polynomial::var_union(r, {v});
    for (const auto& p : xi) r = Polynomial::var_union(r, p.vars());
    return r;
}

Polynomial lie_derive(const DerivationField& field, const Polynomial& P) {
    if (field.xvars.size() != field.xi.size())
        throw std::invalid_argument("lie_derive: field arity mismatch");
    Polynomial out = P.derivative(field.tvar);
    for (size_t i = 0; i < field.xi.size(); ++i)
        out = out + field.xi[i] * P.derivative(field.xvars[i]);
    return out;
}

StabilizationResult stabilize(const DerivationField& field, const Polynomial& P,
                              const RunConfig& cfg) {
    StabilizationResult res;
    std::vector<std::string> roster = Polynomial::var_union(field.roster(), P.vars());
    TermOrder order = TermOrder::degrevlex(roster, {field.tvar});

    res.lie_chain.push_back(P.aligned_to(roster));
    for (long m = 0; m <= cfg.stabilize_max_k; ++m) {
        GroebnerBasis gb = buchberger(res.lie_chain, order, cfg);
        bool budget = !gb.complete;
        res.bases.push_back(std::move(gb));
        if (budget) return res;

        Polynomial next = lie_derive(field, res.lie_chain.back()).aligned_to(roster);
        Membership mem = res.bases.back().reduce(next);
        res.lie_chain.push_back(std::move(next));
        if (!mem.member) continue;

        res.k = m;
        res.complete = true;
        // xi^{k+1} P == sum_j c_j xi^{k-j} P: generator i = xi^i P, so c_j
        // reads the certificate backwards.
        res.cofactors.resize(size_t(m) + 1);
        for (long j = 0; j <= m; ++j) res.cofactors[j] = mem.cofactors[size_t(m - j)];
        Polynomial after = lie_derive(field, res.lie_chain.back());
        res.spot_check = res.bases.back().reduce(after).member;
        return res;
    }
    return res;
}

std::vector<BigComplex> disc_derivatives(const LineMap& g, const BigComplex& c,
                                         const BigFloat& r, long m, const RunConfig& cfg) {
    mpfr_prec_t prec = cfg.precision_bits;
    long ns = std::max<long>({cfg.circle_samples, 4 * m + 16, 32});
    BigFloat two_pi = pi(prec + 32) * BigFloat(2L, prec + 32);
    std::vector<BigComplex> acc(size_t(m) + 1, BigComplex(BigFloat(Prec{prec})));
    for (long j = 0; j < ns; ++j) {
        BigComplex z = c + BigComplex(r) * unit_circle(two_pi * BigFloat(double(j)) / BigFloat(double(ns)));
        BigComplex v = g(z);
        for (long q = 0; q <= m; ++q) {
            long idx = (j * q) % ns;
            acc[size_t(q)] = acc[size_t(q)] + v * unit_circle(-(two_pi * BigFloat(double(idx)) / BigFloat(double(ns))));
        }
    }
    std::vector<BigComplex> out(size_t(m) + 1);
    BigFloat rq(1L, prec);
    BigFloat fact(1L, prec);
    for (long q = 0; q <= m; ++q) {
        if (q > 0) {
            rq = rq * r;
            fact = fact * BigFloat(double(q));
        }
        out[size_t(q)] = acc[size_t(q)] * BigComplex(fact / (BigFloat(double(ns)) * rq));
    }
    return out;
}

DerivedODE derived_linear_ode(const StabilizationResult& res, const DerivationField& field,
                              const PathEvaluator& path, const Disc& domain,
                              const RunConfig& cfg) {
    if (!res.complete)
        throw std::invalid_argument("derived_linear_ode: chain did not stabilize");
    DerivedODE ode;
    ode.k = res.k;

    auto on_arc = [field, path](const Polynomial& q, const BigComplex& t) {
        std::vector<BigComplex> x = path(t);
        if (x.size() != field.xvars.size())
            throw std::invalid_argument("derived_linear_ode: path arity mismatch");
        std::map<std::string, BigComplex> point;
        point[field.tvar] = t;
        for (size_t i = 0; i < x.size(); ++i) point[field.xvars[i]] = x[i];
        return eval_named(q, point);
    };

    Polynomial P = res.lie_chain.front();
    ode.restricted = [on_arc, P](const BigComplex& t) { return on_arc(P, t); };
    for (long j = 0; j <= res.k; ++j) {
        Polynomial cj = res.cofactors[size_t(j)];
        ode.coeffs.push_back([on_arc, cj](const BigComplex& t) { return on_arc(cj, t); });
    }

    // Defect of the derivative identity on a circle halfway out, with the
    // derivatives taken over a quarter-radius circle so everything stays
    // inside the domain.
    BigFloat worst(Prec{BigFloat::default_precision()});
    long nt = std::max(cfg.line_samples, 8);
    BigFloat two_pi = pi(cfg.precision_bits) * BigFloat(2.0);
    BigFloat rs = domain.radius * BigFloat(0.5);
    BigFloat rc = domain.radius * BigFloat(0.25);
    for (long s = 0; s < nt; ++s) {
        BigComplex ts = domain.center + BigComplex(rs) * unit_circle(two_pi * BigFloat(double(s)) / BigFloat(double(nt)));
        std::vector<BigComplex> der = disc_derivatives(ode.restricted, ts, rc, res.k + 1, cfg);
        BigComplex rhs(BigFloat(0));
        BigFloat scale(1.0);
        for (long j = 0; j <= res.k; ++j) {
            BigComplex term = ode.coeffs[size_t(j)](ts) * der[size_t(res.k - j)];
            rhs = rhs + term;
            scale = max(scale, abs(term));
        }
        scale = max(scale, abs(der[size_t(res.k) + 1]));
        BigFloat defect = abs(der[size_t(res.k) + 1] - rhs) / scale;
        worst = max(worst, defect);
    }
    ode.residual = worst;
    return ode;
}

OdeBound bernstein_from_ode(const std::vector<LineMap>& coeffs, const Disc& D, const Disc& K,
                            const RunConfig& cfg) {
    if (coeffs.empty()) throw std::invalid_argument("bernstein_from_ode: empty operator");
    if (!(abs(K.center - D.center) + K.radius <= D.radius))
        throw std::invalid_argument("bernstein_from_ode: K not inside D");
    OdeBound out;
    out.k = long(coeffs.size()) - 1;

    // Rescale to the unit disc: coefficient j of the monic operator picks up
    // a factor rho^{j+1}.
    long ns = std::max(cfg.circle_samples, 32);
    BigFloat two_pi = pi(cfg.precision_bits) * BigFloat(2.0);
    BigFloat m(Prec{BigFloat::default_precision()});
    for (long s = 0; s < ns; ++s) {
        BigComplex t = D.center + BigComplex(D.radius) * unit_circle(two_pi * BigFloat(double(s)) / BigFloat(double(ns)));
        BigFloat rj = D.radius;
        for (size_t j = 0; j < coeffs.size(); ++j) {
            m = max(m, abs(coeffs[j](t)) * rj);
            rj = rj * D.radius;
        }
    }
    out.m = m;
    BigFloat kterm = BigFloat(double(out.k)) * log(BigFloat(double(out.k + 1)));
    out.bound = BigFloat(cfg.c_cal) * (m + kterm);
    return out;
}

} // namespace noether
