#include "noether/closure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace noether {

namespace {

BigFloat estimate_ns(ChainPtr c, const RunConfig& cfg) {
    ChainRuntime rt(c, cfg);
    return noetherian_size(rt).value;
}

std::string point_str(const std::vector<BigComplex>& p) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i].to_string(8);
    os << ")";
    return os.str();
}

// states at basepoint + boundary + interior samples, each reached by
// straight-line continuation from the basepoint
std::vector<ChainState> survey_states(ChainRuntime& rt, int count) {
    std::vector<ChainState> out;
    out.push_back(rt.initial_state());
    const auto& dom = rt.chain().domain;
    for (int g = 0; g < count; ++g) {
        ChainState s = rt.initial_state();
        rt.continue_to(s, dom.boundary_sample((size_t)g));
        out.push_back(std::move(s));
        s = rt.initial_state();
        rt.continue_to(s, dom.interior_sample((size_t)g));
        out.push_back(std::move(s));
    }
    return out;
}

void require_same_chain(const CertifiedFn& a, const CertifiedFn& b) {
    if (a.fn.chain == b.fn.chain) return;
    if (!a.fn.chain || !b.fn.chain || !a.fn.chain->same_system(*b.fn.chain))
        throw std::invalid_argument("operands live on different chains");
}

unsigned lemma_derivative_degree(unsigned alpha, unsigned beta) {
    return (alpha + beta == 0) ? 0u : alpha + beta - 1;
}

} // namespace

Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
    size_t k = m.size();
    if (k == 0) return Polynomial::constant(GaussianRational(1));
    if (k == 1) return m[0][0];
    Polynomial det;
    for (size_t c = 0; c < k; ++c) {
        std::vector<std::vector<Polynomial>> minor;
        for (size_t r = 1; r < k; ++r) {
            std::vector<Polynomial> row;
            for (size_t cc = 0; cc < k; ++cc)
                if (cc != c) row.push_back(m[r][cc]);
            minor.push_back(std::move(row));
        }
        Polynomial term = m[0][c] * poly_det(minor);
        det = (c % 2 == 0) ? det + term : det - term;
    }
    return det;
}

std::vector<std::vector<Polynomial>> poly_adjugate(const std::vector<std::vector<Polynomial>>& m) {
    size_t k = m.size();
    std::vector<std::vector<Polynomial>> adj(k, std::vector<Polynomial>(k));
    if (k == 1) {
        adj[0][0] = Polynomial::constant(GaussianRational(1));
        return adj;
    }
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            std::vector<std::vector<Polynomial>> minor;
            for (size_t r = 0; r < k; ++r) {
                if (r == j) continue; // adj[i][j] = cofactor C_{j,i}
                std::vector<Polynomial> row;
                for (size_t c = 0; c < k; ++c)
                    if (c != i) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Polynomial d = poly_det(minor);
            adj[i][j] = ((i + j) % 2 == 0) ? d : -d;
        }
    return adj;
}

CertifiedChain make_chain(NoetherianChain c, const RunConfig& cfg, OpLog* log) {
    c.validate();
    auto ptr = std::make_shared<const NoetherianChain>(std::move(c));
    ChainParams p;
    p.n = (unsigned)ptr->n();
    p.ell = (unsigned)ptr->ell();
    p.alpha = ptr->alpha();
    p.beta = 0;
    p.ns = estimate_ns(ptr, cfg);
    if (log) log->record("make_chain", {}, p);
    return {ptr, p};
}

CertifiedFn as_function(const CertifiedChain& c, Polynomial p, OpLog* log) {
    NoetherianFunction fn{c.chain, std::move(p)};
    fn.validate();
    ChainParams out = c.params;
    out.beta = fn.poly.total_degree();
    if (log) log->record("function", {c.params}, out);
    return {std::move(fn), out};
}

CertifiedChain chain_union(const CertifiedChain& a, const CertifiedChain& b, const RunConfig& cfg,
                           OpLog* log) {
    (void)cfg;
    const auto& ca = *a.chain;
    const auto& cb = *b.chain;
    if (ca.coords != cb.coords) throw std::invalid_argument("union: coordinate mismatch");
    if (!(ca.domain == cb.domain)) throw std::invalid_argument("union: domain mismatch");
    for (size_t j = 0; j < ca.n(); ++j)
        if (!(ca.basepoint[j] == cb.basepoint[j]))
            throw std::invalid_argument("union: basepoint mismatch");

    NoetherianChain u = ca;
    for (size_t i = 0; i < cb.ell(); ++i) {
        auto it = std::find(u.members.begin(), u.members.end(), cb.members[i]);
        if (it != u.members.end()) {
            size_t k = (size_t)(it - u.members.begin());
            bool same = u.initial_values[k] == cb.initial_values[i];
            for (size_t j = 0; same && j < ca.n(); ++j) same = u.rhs[k][j] == cb.rhs[i][j];
            if (!same)
                throw std::invalid_argument("union: member '" + cb.members[i] +
                                            "' exists with different data");
            continue;
        }
        u.members.push_back(cb.members[i]);
        u.rhs.push_back(cb.rhs[i]);
        u.initial_values.push_back(cb.initial_values[i]);
    }
    u.declared_ns.reset();
    u.validate();

    ChainParams p;
    p.n = a.params.n;
    p.ell = a.params.ell + b.params.ell;
    p.alpha = std::max(a.params.alpha, b.params.alpha);
    p.beta = 0;
    p.ns = max(a.params.ns, b.params.ns);
    if (log) log->record("union", {a.params, b.params}, p);
    return {std::make_shared<const NoetherianChain>(std::move(u)), p};
}

CertifiedFn transfer(const CertifiedFn& f, const CertifiedChain& target, OpLog* log) {
    const auto& src = *f.fn.chain;
    const auto& dst = *target.chain;
    if (src.coords != dst.coords) throw std::invalid_argument("transfer: coordinate mismatch");
    for (size_t i = 0; i < src.ell(); ++i) {
        auto it = std::find(dst.members.begin(), dst.members.end(), src.members[i]);
        if (it == dst.members.end())
            throw std::invalid_argument("transfer: target chain lacks member " + src.members[i]);
        size_t k = (size_t)(it - dst.members.begin());
        for (size_t j = 0; j < src.n(); ++j)
            if (!(dst.rhs[k][j] == src.rhs[i][j]))
                throw std::invalid_argument("transfer: member '" + src.members[i] +
                                            "' differs on target chain");
    }
    ChainParams out = target.params;
    out.beta = f.params.beta;
    if (log) log->record("transfer", {f.params, target.params}, out);
    return {NoetherianFunction{target.chain, f.fn.poly}, out};
}

CertifiedFn derivative(const CertifiedFn& f, size_t coord, OpLog* log) {
    const auto& c = *f.fn.chain;
    if (coord >= c.n()) throw std::invalid_argument("derivative: coordinate index out of range");
    Polynomial out = c.total_derivative(f.fn.poly, coord);
    ChainParams p = f.params;
    p.beta = lemma_derivative_degree(f.params.alpha, f.params.beta);
    if (log) log->record("derivative", {f.params}, p);
    return {NoetherianFunction{f.fn.chain, std::move(out)}, p};
}

CertifiedFn combine(const CertifiedFn& a, const CertifiedFn& b, CombineOp op, OpLog* log) {
    require_same_chain(a, b);
    Polynomial out = (op == CombineOp::add) ? a.fn.poly + b.fn.poly : a.fn.poly * b.fn.poly;
    ChainParams p = a.params;
    p.beta = (op == CombineOp::add) ? std::max(a.params.beta, b.params.beta)
                                    : a.params.beta + b.params.beta;
    p.ns = max(a.params.ns, b.params.ns);
    if (log)
        log->record(op == CombineOp::add ? "combine_add" : "combine_mul", {a.params, b.params}, p);
    return {NoetherianFunction{a.fn.chain, std::move(out)}, p};
}

InvertResult invert(const CertifiedFn& f, const mpq_class& eps, const RunConfig& cfg, OpLog* log) {
    if (eps <= 0) throw std::invalid_argument("invert: margin must be positive");
    ChainPtr c = f.fn.chain;
    BigFloat eb(eps);

    {
        ChainRuntime rt(c, cfg);
        for (const auto& s : survey_states(rt, cfg.verify_samples)) {
            BigFloat v = rt.eval_value(f.fn.poly, s).abs();
            if (v < eb)
                throw std::domain_error("invert: |F| = " + v.to_string(6) + " < margin at " +
                                        point_str(s.position));
        }
    }

    NoetherianChain nc = *c;
    std::string rho = c->fresh_name("rho");
    Polynomial rho_p = Polynomial::variable(rho);
    std::vector<Polynomial> row;
    for (size_t j = 0; j < c->n(); ++j)
        row.push_back(-(rho_p * rho_p * c->total_derivative(f.fn.poly, j)));
    nc.members.push_back(rho);
    nc.rhs.push_back(std::move(row));
    BigComplex f0 = f.fn.poly.aligned_to(c->all_vars())
                        .eval(c->pack_values(c->basepoint, c->initial_values));
    nc.initial_values.push_back(BigComplex(BigFloat(1)) / f0);
    nc.declared_ns.reset();
    nc.validate();
    auto ptr = std::make_shared<const NoetherianChain>(std::move(nc));

    ChainParams p;
    p.n = f.params.n;
    p.ell = f.params.ell + 1;
    p.alpha = f.params.alpha + f.params.beta + 1;
    p.beta = 1;
    p.ns = estimate_ns(ptr, cfg);
    if (log) log->record("invert", {f.params}, p);

    ChainParams chain_p = p;
    chain_p.beta = 0;
    return {{ptr, chain_p}, {NoetherianFunction{ptr, Polynomial::variable(rho)}, p}};
}

CertifiedFn compose(const std::vector<CertifiedFn>& F, const CertifiedFn& g, const RunConfig& cfg,
                    OpLog* log) {
    if (F.empty()) throw std::invalid_argument("compose: empty tuple");
    for (size_t i = 1; i < F.size(); ++i) require_same_chain(F[0], F[i]);
    ChainPtr c1 = F[0].fn.chain;
    ChainPtr c2 = g.fn.chain;
    if (F.size() != c2->n())
        throw std::invalid_argument("compose: tuple length != inner dimension of target chain");

    std::vector<Polynomial> fpolys;
    for (const auto& f : F) fpolys.push_back(f.fn.poly.aligned_to(c1->all_vars()));

    // image containment, sampled; slack absorbs roundoff when the image
    // touches the target boundary (x^2 on the closed unit disc does)
    BigFloat slack(cfg.tol_membership);
    for (const auto& r : c2->domain.radius) slack = max(slack, BigFloat(cfg.tol_membership) * r);
    ChainRuntime rt1(c1, cfg);
    std::vector<BigComplex> image_base;
    for (const auto& s : survey_states(rt1, cfg.verify_samples)) {
        std::vector<BigComplex> w(fpolys.size());
        auto packed = c1->pack_values(s.position, s.values);
        for (size_t k = 0; k < fpolys.size(); ++k) w[k] = fpolys[k].eval(packed);
        if (!c2->domain.contains(w, slack))
            throw std::domain_error("compose: image point " + point_str(w) +
                                    " escapes the target domain");
        if (s.steps == 0 && image_base.empty()) image_base = w; // basepoint comes first
    }

    // fresh names for the pulled-back members
    std::set<std::string> used(c1->coords.begin(), c1->coords.end());
    used.insert(c1->members.begin(), c1->members.end());
    std::vector<std::string> psi(c2->ell());
    for (size_t k = 0; k < c2->ell(); ++k) {
        std::string base = c2->members[k];
        std::string cand = base;
        for (int t = 2; used.count(cand); ++t) cand = base + "_" + std::to_string(t);
        used.insert(cand);
        psi[k] = cand;
    }

    std::map<std::string, Polynomial> subst;
    for (size_t s = 0; s < c2->n(); ++s) subst[c2->coords[s]] = F[s].fn.poly;
    for (size_t k = 0; k < c2->ell(); ++k) subst[c2->members[k]] = Polynomial::variable(psi[k]);

    std::vector<Polynomial> dF(c2->n() * c1->n()); // [s][j]
    for (size_t s = 0; s < c2->n(); ++s)
        for (size_t j = 0; j < c1->n(); ++j)
            dF[s * c1->n() + j] = c1->total_derivative(F[s].fn.poly, j);

    NoetherianChain nc = *c1;
    for (size_t k = 0; k < c2->ell(); ++k) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < c1->n(); ++j) {
            Polynomial entry;
            for (size_t s = 0; s < c2->n(); ++s) {
                Polynomial pulled = c2->rhs[k][s].substitute(subst);
                entry = entry + pulled * dF[s * c1->n() + j];
            }
            row.push_back(std::move(entry));
        }
        nc.members.push_back(psi[k]);
        nc.rhs.push_back(std::move(row));
    }

    // initial values of the pullbacks: continue the target chain to F(base)
    ChainRuntime rt2(c2, cfg);
    ChainState s2 = rt2.initial_state();
    rt2.continue_to(s2, image_base);
    for (size_t k = 0; k < c2->ell(); ++k) nc.initial_values.push_back(s2.values[k]);
    nc.declared_ns.reset();
    nc.validate();
    auto ptr = std::make_shared<const NoetherianChain>(std::move(nc));

    unsigned beta1 = 0;
    for (const auto& f : F) beta1 = std::max(beta1, f.params.beta);
    ChainParams p;
    p.n = F[0].params.n;
    p.ell = F[0].params.ell + g.params.ell;
    p.alpha = std::max(F[0].params.alpha + beta1, g.params.alpha);
    p.beta = g.params.beta;
    p.ns = estimate_ns(ptr, cfg);
    std::vector<ChainParams> ins;
    for (const auto& f : F) ins.push_back(f.params);
    ins.push_back(g.params);
    if (log) log->record("compose", std::move(ins), p);

    return {NoetherianFunction{ptr, g.fn.poly.substitute(subst)}, p};
}

CompInverseResult compositional_inverse(const std::vector<CertifiedFn>& F, const mpq_class& eps,
                                        const RunConfig& cfg, OpLog* log) {
    if (F.empty()) throw std::invalid_argument("inverse: empty tuple");
    for (size_t i = 1; i < F.size(); ++i) require_same_chain(F[0], F[i]);
    ChainPtr c = F[0].fn.chain;
    const size_t n = c->n();
    if (F.size() != n) throw std::invalid_argument("inverse: tuple length != dimension");

    std::vector<std::vector<Polynomial>> J(n, std::vector<Polynomial>(n));
    for (size_t s = 0; s < n; ++s)
        for (size_t j = 0; j < n; ++j) J[s][j] = c->total_derivative(F[s].fn.poly, j);
    Polynomial det = poly_det(J);
    auto adj = poly_adjugate(J);

    BigFloat eb(eps);
    ChainRuntime rt(c, cfg);
    Polynomial det_a = det.aligned_to(Polynomial::var_union(det.vars(), c->all_vars()));
    std::vector<BigComplex> w0;
    BigFloat img_r(-1);
    {
        auto states = survey_states(rt, cfg.verify_samples);
        for (const auto& s : states) {
            auto packed = c->pack_values(s.position, s.values);
            BigFloat dv = det_a.aligned_to(c->all_vars()).eval(packed).abs();
            if (dv < eb)
                throw std::domain_error("inverse: |det dF| = " + dv.to_string(6) +
                                        " < margin at " + point_str(s.position));
        }
        // image basepoint and a univalence-radius heuristic from the
        // boundary image distance
        auto packed0 = c->pack_values(c->basepoint, c->initial_values);
        for (size_t s = 0; s < n; ++s)
            w0.push_back(F[s].fn.poly.aligned_to(c->all_vars()).eval(packed0));
        for (size_t g = 0; g < (size_t)cfg.verify_samples; ++g) {
            ChainState st = rt.initial_state();
            rt.continue_to(st, c->domain.boundary_sample(g));
            auto packed = c->pack_values(st.position, st.values);
            BigFloat d(0);
            for (size_t s = 0; s < n; ++s)
                d = max(d, (F[s].fn.poly.aligned_to(c->all_vars()).eval(packed) - w0[s]).abs());
            img_r = (img_r < BigFloat(0)) ? d : min(img_r, d);
        }
    }
    if (!(img_r > BigFloat(0))) throw std::runtime_error("inverse: degenerate image radius");

    // fresh image coordinates; original coordinate/member names become the
    // inverse chain's member names, so the polynomials carry over unchanged
    std::set<std::string> used(c->coords.begin(), c->coords.end());
    used.insert(c->members.begin(), c->members.end());
    std::vector<std::string> wnames(n);
    for (size_t j = 0; j < n; ++j) {
        std::string cand = (n == 1) ? "w" : "w" + std::to_string(j + 1);
        while (used.count(cand)) cand += "_";
        used.insert(cand);
        wnames[j] = cand;
    }
    std::string uname = "jac";
    while (used.count(uname)) uname += "_";
    Polynomial u = Polynomial::variable(uname);

    NoetherianChain nc;
    nc.coords = wnames;
    nc.members = c->coords;
    nc.members.insert(nc.members.end(), c->members.begin(), c->members.end());
    nc.members.push_back(uname);

    std::vector<Polynomial> ddet(n);
    for (size_t s = 0; s < n; ++s) ddet[s] = c->total_derivative(det, s);

    for (size_t s = 0; s < n; ++s) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < n; ++j) row.push_back(adj[s][j] * u);
        nc.rhs.push_back(std::move(row));
    }
    for (size_t k = 0; k < c->ell(); ++k) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < n; ++j) {
            Polynomial entry;
            for (size_t s = 0; s < n; ++s) entry = entry + c->rhs[k][s] * adj[s][j];
            row.push_back(entry * u);
        }
        nc.rhs.push_back(std::move(row));
    }
    {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < n; ++j) {
            Polynomial entry;
            for (size_t s = 0; s < n; ++s) entry = entry + ddet[s] * adj[s][j];
            row.push_back(-(u * u * u * entry));
        }
        nc.rhs.push_back(std::move(row));
    }

    BigFloat r = img_r * BigFloat(0.45);
    auto packed0 = c->pack_values(c->basepoint, c->initial_values);
    BigComplex det0 = det_a.aligned_to(c->all_vars()).eval(packed0);
    nc.basepoint = w0;
    nc.initial_values = c->basepoint;
    for (const auto& v : c->initial_values) nc.initial_values.push_back(v);
    nc.initial_values.push_back(BigComplex(BigFloat(1)) / det0);

    // shrink until the round trip F^-1(F(x)) = x verifies on a small grid
    std::shared_ptr<const NoetherianChain> ptr;
    BigFloat tol = BigFloat(cfg.tol_eval) * BigFloat(100);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 8) throw std::runtime_error("inverse: round-trip verification failed");
        nc.domain = ComplexBox(w0, std::vector<BigFloat>(n, r));
        nc.validate();
        auto cand = std::make_shared<const NoetherianChain>(nc);
        try {
            ChainRuntime irt(cand, cfg);
            bool ok = true;
            for (int gidx = 0; gidx < cfg.base_samples && ok; ++gidx) {
                // probe x near the basepoint, compare xi(F(x)) with x
                auto xs = c->domain.scaled(BigFloat(0.25)).interior_sample((size_t)gidx);
                ChainState sx = rt.initial_state();
                rt.continue_to(sx, xs);
                auto packed = c->pack_values(sx.position, sx.values);
                std::vector<BigComplex> w(n);
                bool inside = true;
                for (size_t s = 0; s < n; ++s) {
                    w[s] = F[s].fn.poly.aligned_to(c->all_vars()).eval(packed);
                    if ((w[s] - w0[s]).abs() > r) inside = false;
                }
                if (!inside) continue;
                ChainState sw = irt.initial_state();
                irt.continue_to(sw, w);
                for (size_t s = 0; s < n; ++s)
                    if ((sw.values[s] - xs[s]).abs() > tol) ok = false;
            }
            if (ok) {
                ptr = cand;
                break;
            }
        } catch (const std::exception&) {
            // continuation failure inside the candidate image box: shrink
        }
        r = r.mul_2si(-1);
    }

    unsigned beta_max = 0;
    for (const auto& f : F) beta_max = std::max(beta_max, f.params.beta);
    unsigned dJ = lemma_derivative_degree(F[0].params.alpha, beta_max);
    ChainParams p;
    p.n = (unsigned)n;
    p.ell = F[0].params.ell + (unsigned)n + 1;
    p.alpha = (2 * (unsigned)n - 1) * dJ + F[0].params.alpha + 2;
    p.beta = 1;
    p.ns = estimate_ns(ptr, cfg);
    std::vector<ChainParams> ins;
    for (const auto& f : F) ins.push_back(f.params);
    if (log) log->record("comp_inverse", std::move(ins), p);

    CompInverseResult res;
    res.chain = {ptr, [&] {
                     ChainParams q = p;
                     q.beta = 0;
                     return q;
                 }()};
    for (size_t s = 0; s < n; ++s)
        res.inverse.push_back({NoetherianFunction{ptr, Polynomial::variable(c->coords[s])}, p});
    return res;
}

ImplicitResult implicit_solve(const std::vector<CertifiedFn>& F,
                              const std::vector<std::string>& solve_for, const mpq_class& eps,
                              const RunConfig& cfg, OpLog* log) {
    if (F.empty()) throw std::invalid_argument("implicit: empty system");
    for (size_t i = 1; i < F.size(); ++i) require_same_chain(F[0], F[i]);
    if (F.size() != solve_for.size())
        throw std::invalid_argument("implicit: need as many equations as unknowns");
    ChainPtr c = F[0].fn.chain;
    const size_t m = F.size();

    std::vector<size_t> ypos;
    for (const auto& name : solve_for) ypos.push_back(c->coord_index(name));
    std::vector<size_t> xpos;
    for (size_t j = 0; j < c->n(); ++j)
        if (std::find(ypos.begin(), ypos.end(), j) == ypos.end()) xpos.push_back(j);
    if (xpos.empty()) throw std::invalid_argument("implicit: no free coordinates left");

    std::vector<std::vector<Polynomial>> Jy(m, std::vector<Polynomial>(m));
    for (size_t s = 0; s < m; ++s)
        for (size_t t = 0; t < m; ++t) Jy[s][t] = c->total_derivative(F[s].fn.poly, ypos[t]);
    Polynomial det = poly_det(Jy);
    auto adj = poly_adjugate(Jy);

    // basepoint must sit on the zero set
    auto packed0 = c->pack_values(c->basepoint, c->initial_values);
    for (const auto& f : F) {
        BigFloat v = f.fn.poly.aligned_to(c->all_vars()).eval(packed0).abs();
        if (v > BigFloat(cfg.tol_eval))
            throw std::domain_error("implicit: basepoint violates F = 0 (|F| = " + v.to_string(6) +
                                    ")");
    }
    BigComplex det0 = det.aligned_to(Polynomial::var_union(det.vars(), c->all_vars()))
                          .aligned_to(c->all_vars())
                          .eval(packed0);
    if (det0.abs() < BigFloat(eps))
        throw std::domain_error("implicit: |det dF/dy| below margin at basepoint");

    std::set<std::string> used(c->coords.begin(), c->coords.end());
    used.insert(c->members.begin(), c->members.end());
    std::string uname = "jac";
    while (used.count(uname)) uname += "_";
    Polynomial u = Polynomial::variable(uname);

    // A[t][j]: derivative of solved coordinate t along free coordinate j
    std::vector<std::vector<Polynomial>> A(m, std::vector<Polynomial>(xpos.size()));
    for (size_t t = 0; t < m; ++t)
        for (size_t j = 0; j < xpos.size(); ++j) {
            Polynomial acc;
            for (size_t s = 0; s < m; ++s)
                acc = acc + adj[t][s] * c->total_derivative(F[s].fn.poly, xpos[j]);
            A[t][j] = -(u * acc);
        }

    NoetherianChain nc;
    for (size_t j : xpos) nc.coords.push_back(c->coords[j]);
    nc.members = c->members;
    for (size_t t = 0; t < m; ++t) nc.members.push_back(c->coords[ypos[t]]);
    nc.members.push_back(uname);

    for (size_t k = 0; k < c->ell(); ++k) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < xpos.size(); ++j) {
            Polynomial entry = c->rhs[k][xpos[j]];
            for (size_t t = 0; t < m; ++t) entry = entry + c->rhs[k][ypos[t]] * A[t][j];
            row.push_back(std::move(entry));
        }
        nc.rhs.push_back(std::move(row));
    }
    for (size_t t = 0; t < m; ++t) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < xpos.size(); ++j) row.push_back(A[t][j]);
        nc.rhs.push_back(std::move(row));
    }
    {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < xpos.size(); ++j) {
            Polynomial entry = c->total_derivative(det, xpos[j]);
            for (size_t t = 0; t < m; ++t) entry = entry + c->total_derivative(det, ypos[t]) * A[t][j];
            row.push_back(-(u * u * entry));
        }
        nc.rhs.push_back(std::move(row));
    }

    std::vector<BigComplex> xc, xr_c;
    std::vector<BigFloat> xr;
    for (size_t j : xpos) {
        xc.push_back(c->domain.center[j]);
        xr.push_back(c->domain.radius[j]);
        xr_c.push_back(c->basepoint[j]);
    }
    nc.domain = ComplexBox(xc, xr);
    nc.basepoint = xr_c;
    nc.initial_values = c->initial_values;
    for (size_t t = 0; t < m; ++t) nc.initial_values.push_back(c->basepoint[ypos[t]]);
    nc.initial_values.push_back(BigComplex(BigFloat(1)) / det0);
    nc.validate();
    auto ptr = std::make_shared<const NoetherianChain>(std::move(nc));

    // sampled graph check: F = 0, |det| >= eps, solved coords stay in their box
    {
        ChainRuntime grt(ptr, cfg);
        auto det_g = det.aligned_to(ptr->all_vars());
        std::vector<Polynomial> f_g;
        for (const auto& f : F) f_g.push_back(f.fn.poly.aligned_to(ptr->all_vars()));
        for (const auto& s : survey_states(grt, cfg.base_samples)) {
            auto packed = ptr->pack_values(s.position, s.values);
            for (const auto& fp : f_g) {
                BigFloat v = fp.eval(packed).abs();
                if (v > BigFloat(cfg.tol_eval) * (BigFloat(1) + s.err * BigFloat(1e6)) &&
                    v > BigFloat(1e-8))
                    throw std::domain_error("implicit: graph violates F = 0 at " +
                                            point_str(s.position) + " (|F| = " + v.to_string(6) +
                                            ")");
            }
            if (det_g.eval(packed).abs() < BigFloat(eps))
                throw std::domain_error("implicit: Jacobian below margin on graph at " +
                                        point_str(s.position));
            for (size_t t = 0; t < m; ++t) {
                BigComplex yv = s.values[c->ell() + t];
                if ((yv - c->domain.center[ypos[t]]).abs() > c->domain.radius[ypos[t]])
                    throw std::domain_error("implicit: graph leaves the solved-variable box at " +
                                            point_str(s.position));
            }
        }
    }

    unsigned beta_max = 0;
    for (const auto& f : F) beta_max = std::max(beta_max, f.params.beta);
    unsigned dJ = lemma_derivative_degree(F[0].params.alpha, beta_max);
    ChainParams p;
    p.n = (unsigned)xpos.size();
    p.ell = F[0].params.ell + (unsigned)m + 1;
    p.alpha = 2 * (unsigned)m * dJ + F[0].params.alpha + 2;
    p.beta = 1;
    p.ns = estimate_ns(ptr, cfg);
    std::vector<ChainParams> ins;
    for (const auto& f : F) ins.push_back(f.params);
    if (log) log->record("implicit", std::move(ins), p);

    ImplicitResult res;
    res.chain = {ptr, [&] {
                     ChainParams q = p;
                     q.beta = 0;
                     return q;
                 }()};
    for (size_t t = 0; t < m; ++t)
        res.graph.push_back({NoetherianFunction{ptr, Polynomial::variable(c->coords[ypos[t]])}, p});
    return res;
}

CertifiedChain depolarize(const RationalSystem& sys, const mpq_class& eps, const RunConfig& cfg,
                          OpLog* log) {
    if (eps <= 0) throw std::invalid_argument("depolarize: margin must be positive");
    const size_t l = sys.members.size(), n = sys.coords.size();
    if (sys.rhs.size() != l) throw std::invalid_argument("depolarize: rhs shape mismatch");

    // distinct non-constant denominators, in first-appearance order
    std::vector<Polynomial> dens;
    std::vector<std::string> den_keys;
    auto den_slot = [&](const Polynomial& d) -> int {
        if (d.is_constant()) return -1;
        std::string key = d.to_string();
        for (size_t k = 0; k < den_keys.size(); ++k)
            if (den_keys[k] == key) return (int)k;
        den_keys.push_back(key);
        dens.push_back(d);
        return (int)dens.size() - 1;
    };

    std::vector<std::vector<std::pair<Polynomial, int>>> plan(l); // member -> per-coord (num*, den slot)
    for (size_t i = 0; i < l; ++i)
        for (size_t j = 0; j < n; ++j) {
            const auto& e = sys.rhs[i][j];
            if (e.den.is_zero()) throw std::invalid_argument("depolarize: zero denominator");
            int slot = den_slot(e.den);
            if (slot < 0) {
                GaussianRational cd = e.den.constant_value();
                plan[i].push_back({e.num.scaled(GaussianRational(1) / cd), -1});
            } else {
                plan[i].push_back({e.num, slot});
            }
        }

    std::set<std::string> used(sys.coords.begin(), sys.coords.end());
    used.insert(sys.members.begin(), sys.members.end());
    std::vector<std::string> rho_names;
    for (size_t k = 0; k < dens.size(); ++k) {
        std::string cand = "rho" + std::to_string(k + 1);
        while (used.count(cand)) cand += "_";
        used.insert(cand);
        rho_names.push_back(cand);
    }

    NoetherianChain nc;
    nc.coords = sys.coords;
    nc.members = sys.members;
    for (size_t i = 0; i < l; ++i) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < n; ++j) {
            const auto& [num, slot] = plan[i][j];
            row.push_back(slot < 0 ? num : num * Polynomial::variable(rho_names[(size_t)slot]));
        }
        nc.rhs.push_back(std::move(row));
    }
    // rho_R' = -rho^2 * D_j R, with D_j taken through the rationalized rules
    for (size_t k = 0; k < dens.size(); ++k) {
        Polynomial rho = Polynomial::variable(rho_names[k]);
        std::vector<Polynomial> row;
        for (size_t j = 0; j < n; ++j) {
            Polynomial d = dens[k].derivative(sys.coords[j]);
            for (size_t i = 0; i < l; ++i) {
                Polynomial dk = dens[k].derivative(sys.members[i]);
                if (dk.is_zero()) continue;
                d = d + dk * nc.rhs[i][j];
            }
            row.push_back(-(rho * rho * d));
        }
        nc.members.push_back(rho_names[k]);
        nc.rhs.push_back(std::move(row));
    }

    nc.domain = sys.domain;
    nc.basepoint = sys.basepoint;
    nc.initial_values = sys.initial_values;
    std::vector<std::string> vars = nc.coords;
    vars.insert(vars.end(), sys.members.begin(), sys.members.end());
    std::sort(vars.begin(), vars.end());
    {
        // value slots for evaluating denominators at the basepoint
        std::vector<BigComplex> vals(vars.size());
        for (size_t j = 0; j < n; ++j)
            vals[(size_t)(std::lower_bound(vars.begin(), vars.end(), sys.coords[j]) - vars.begin())] =
                sys.basepoint[j];
        for (size_t i = 0; i < l; ++i)
            vals[(size_t)(std::lower_bound(vars.begin(), vars.end(), sys.members[i]) - vars.begin())] =
                sys.initial_values[i];
        for (const auto& den : dens) {
            BigComplex dv = den.aligned_to(vars).eval(vals);
            if (dv.abs() < BigFloat(eps))
                throw std::domain_error("depolarize: denominator " + den.to_string() +
                                        " below margin at the basepoint");
            nc.initial_values.push_back(BigComplex(BigFloat(1)) / dv);
        }
    }
    nc.validate();
    auto ptr = std::make_shared<const NoetherianChain>(std::move(nc));

    // sampled margin check via the built chain: |rho| <= 1/eps
    {
        ChainRuntime rt(ptr, cfg);
        BigFloat bound = BigFloat(1) / BigFloat(eps);
        for (const auto& s : survey_states(rt, cfg.verify_samples))
            for (size_t k = 0; k < dens.size(); ++k) {
                BigFloat rv = s.values[l + k].abs();
                if (rv > bound)
                    throw std::domain_error("depolarize: denominator " + dens[k].to_string() +
                                            " below margin at " + point_str(s.position));
            }
    }

    ChainParams p;
    p.n = (unsigned)n;
    p.ell = (unsigned)(l + dens.size());
    p.alpha = ptr->alpha();
    p.beta = 0;
    p.ns = estimate_ns(ptr, cfg);
    if (log) log->record("depolarize", {}, p);
    return {ptr, p};
}

ExtendResult extend_domain(const CertifiedChain& c, const RunConfig& cfg, OpLog* log) {
    BigFloat ns = c.params.ns;
    BigFloat rho = BigFloat(1) / pow_ui(ns, static_cast<unsigned long>(cfg.kappa));
    for (int attempt = 0; attempt < 10; ++attempt) {
        NoetherianChain nc = *c.chain;
        nc.domain = nc.domain.inflated(rho);
        nc.declared_ns.reset();
        auto ptr = std::make_shared<const NoetherianChain>(std::move(nc));
        try {
            BigFloat ns2 = estimate_ns(ptr, cfg);
            if (ns2 <= BigFloat(2) * ns) {
                ChainParams p = c.params;
                p.ns = ns2;
                if (log) log->record("extend", {c.params}, p);
                return {{ptr, p}, rho};
            }
        } catch (const std::exception&) {
            // continuation hit trouble in the inflated band; shrink
        }
        rho = rho.mul_2si(-1);
    }
    throw std::runtime_error("extend_domain: no inflation margin verified");
}

ChainParams replay_op(const std::string& op, const std::vector<ChainParams>& in) {
    auto need = [&](size_t k) {
        if (in.size() < k) throw std::invalid_argument("replay: too few inputs for " + op);
    };
    ChainParams out;
    if (op == "union") {
        need(2);
        out = in[0];
        out.ell = in[0].ell + in[1].ell;
        out.alpha = std::max(in[0].alpha, in[1].alpha);
        out.beta = 0;
        out.ns = max(in[0].ns, in[1].ns);
    } else if (op == "transfer") {
        need(2);
        out = in[1];
        out.beta = in[0].beta;
    } else if (op == "derivative") {
        need(1);
        out = in[0];
        out.beta = lemma_derivative_degree(in[0].alpha, in[0].beta);
    } else if (op == "combine_add") {
        need(2);
        out = in[0];
        out.beta = std::max(in[0].beta, in[1].beta);
        out.ns = max(in[0].ns, in[1].ns);
    } else if (op == "combine_mul") {
        need(2);
        out = in[0];
        out.beta = in[0].beta + in[1].beta;
        out.ns = max(in[0].ns, in[1].ns);
    } else if (op == "invert") {
        need(1);
        out = in[0];
        out.ell = in[0].ell + 1;
        out.alpha = in[0].alpha + in[0].beta + 1;
        out.beta = 1;
    } else if (op == "compose") {
        need(2);
        size_t m = in.size() - 1;
        unsigned b1 = 0;
        for (size_t k = 0; k < m; ++k) b1 = std::max(b1, in[k].beta);
        out = in[0];
        out.ell = in[0].ell + in[m].ell;
        out.alpha = std::max(in[0].alpha + b1, in[m].alpha);
        out.beta = in[m].beta;
    } else if (op == "comp_inverse") {
        need(1);
        unsigned n = (unsigned)in.size();
        unsigned bmax = 0;
        for (const auto& q : in) bmax = std::max(bmax, q.beta);
        unsigned dJ = lemma_derivative_degree(in[0].alpha, bmax);
        out = in[0];
        out.n = n;
        out.ell = in[0].ell + n + 1;
        out.alpha = (2 * n - 1) * dJ + in[0].alpha + 2;
        out.beta = 1;
    } else if (op == "implicit") {
        need(1);
        unsigned m = (unsigned)in.size();
        unsigned bmax = 0;
        for (const auto& q : in) bmax = std::max(bmax, q.beta);
        unsigned dJ = lemma_derivative_degree(in[0].alpha, bmax);
        out = in[0];
        out.n = in[0].n - m;
        out.ell = in[0].ell + m + 1;
        out.alpha = 2 * m * dJ + in[0].alpha + 2;
        out.beta = 1;
    } else if (op == "extend") {
        need(1);
        out = in[0];
    } else {
        throw std::invalid_argument("replay: unknown operation " + op);
    }
    return out;
}

} // namespace noether
