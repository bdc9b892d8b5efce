#include "noether/weierstrass.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "noether/roots.hpp"

namespace noether {

namespace {

BigFloat vec_norm(const std::vector<BigComplex>& v) {
    BigFloat s(0);
    for (const auto& z : v) s = s + z.re * z.re + z.im * z.im;
    return sqrt(s);
}

// Hermitian inner product, conjugate-linear in b.
BigComplex inner(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b) {
    BigComplex acc(BigFloat(0));
    for (size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i].conj();
    return acc;
}

nlohmann::json box_to_json(const ComplexBox& b) {
    nlohmann::json c = nlohmann::json::array(), r = nlohmann::json::array();
    for (const auto& z : b.center) c.push_back(complex_to_json(z));
    for (const auto& x : b.radius) r.push_back(bigfloat_to_json(x));
    return {{"center", c}, {"radius", r}};
}

ComplexBox box_from_json(const nlohmann::json& j) {
    std::vector<BigComplex> c;
    std::vector<BigFloat> r;
    for (const auto& e : j.at("center")) c.push_back(complex_from_json(e));
    for (const auto& e : j.at("radius")) r.push_back(bigfloat_from_json(e));
    return ComplexBox(std::move(c), std::move(r));
}

std::vector<BigComplex> concat(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b) {
    std::vector<BigComplex> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// unit direction k of a deterministic low-discrepancy sweep of the sphere;
// amplitudes stay in [1/2, 3/2] before normalization so no component is
// degenerate
std::vector<BigComplex> sphere_direction(size_t k, size_t n, mpfr_prec_t prec) {
    std::vector<BigComplex> d(n, BigComplex(BigFloat{Prec{prec}}));
    if (n == 1) {
        d[0] = unit_circle(rotation_angle(k, 5, prec));
        return d;
    }
    BigFloat two_pi = pi(prec) * 2;
    for (size_t i = 0; i < n; ++i) {
        BigFloat amp = BigFloat(0.5) + rotation_angle(k + 1, 2 * i + 1, prec) / two_pi;
        d[i] = unit_circle(rotation_angle(k + 1, 2 * i, prec)) * amp;
    }
    BigFloat nm = vec_norm(d);
    for (auto& z : d) z = z * (BigFloat(1) / nm);
    return d;
}

std::string fmt(const BigFloat& x) { return x.to_string(6); }

} // namespace

std::vector<BigComplex> UnitaryFrame::to_ambient(const std::vector<BigComplex>& u) const {
    if (u.size() != columns.size()) throw std::invalid_argument("frame: local point arity mismatch");
    std::vector<BigComplex> x = origin;
    for (size_t j = 0; j < columns.size(); ++j)
        for (size_t i = 0; i < x.size(); ++i) x[i] = x[i] + u[j] * columns[j][i];
    return x;
}

std::vector<BigComplex> UnitaryFrame::to_local(const std::vector<BigComplex>& x) const {
    if (x.size() != origin.size()) throw std::invalid_argument("frame: ambient point arity mismatch");
    std::vector<BigComplex> diff(x.size(), BigComplex(BigFloat(0)));
    for (size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - origin[i];
    std::vector<BigComplex> u(columns.size(), BigComplex(BigFloat(0)));
    for (size_t j = 0; j < columns.size(); ++j) u[j] = inner(diff, columns[j]);
    return u;
}

UnitaryFrame UnitaryFrame::identity(std::vector<BigComplex> origin) {
    UnitaryFrame f;
    size_t n = origin.size();
    f.origin = std::move(origin);
    f.columns.assign(n, std::vector<BigComplex>(n, BigComplex(BigFloat(0))));
    for (size_t j = 0; j < n; ++j) f.columns[j][j] = BigComplex(BigFloat(1));
    return f;
}

UnitaryFrame UnitaryFrame::orthonormalized(std::vector<BigComplex> origin,
                                           std::vector<std::vector<BigComplex>> raw) {
    size_t n = origin.size();
    UnitaryFrame f;
    f.origin = std::move(origin);
    for (auto& v : raw) {
        if (v.size() != n) throw std::invalid_argument("frame: column length mismatch");
        BigFloat before = vec_norm(v);
        for (int pass = 0; pass < 2; ++pass) { // one re-orthogonalization pass
            for (const auto& c : f.columns) {
                BigComplex p = inner(v, c);
                for (size_t i = 0; i < n; ++i) v[i] = v[i] - p * c[i];
            }
        }
        BigFloat after = vec_norm(v);
        if (!(after > before * BigFloat(1e-20)))
            throw std::domain_error("frame: columns are numerically dependent");
        for (auto& z : v) z = z * (BigFloat(1) / after);
        f.columns.push_back(std::move(v));
    }
    return f;
}

UnitaryFrame UnitaryFrame::fiber_last(std::vector<BigComplex> origin, std::vector<BigComplex> dir) {
    size_t n = origin.size();
    if (dir.size() != n) throw std::invalid_argument("frame: direction arity mismatch");
    std::vector<std::vector<BigComplex>> raw{std::move(dir)};
    for (size_t k = 0; k < n && raw.size() < n; ++k) {
        std::vector<BigComplex> e(n, BigComplex(BigFloat(0)));
        e[k] = BigComplex(BigFloat(1));
        // provisional orthonormalization decides independence
        auto probe = raw;
        probe.push_back(e);
        try {
            (void)orthonormalized(std::vector<BigComplex>(n, BigComplex(BigFloat(0))), probe);
            raw.push_back(std::move(e));
        } catch (const std::domain_error&) {
        }
    }
    if (raw.size() < n) throw std::domain_error("frame: completion failed");
    UnitaryFrame f = orthonormalized(std::move(origin), std::move(raw));
    std::rotate(f.columns.begin(), f.columns.begin() + 1, f.columns.end());
    return f;
}

nlohmann::json UnitaryFrame::to_json() const {
    nlohmann::json o = nlohmann::json::array(), cols = nlohmann::json::array();
    for (const auto& z : origin) o.push_back(complex_to_json(z));
    for (const auto& c : columns) {
        nlohmann::json col = nlohmann::json::array();
        for (const auto& z : c) col.push_back(complex_to_json(z));
        cols.push_back(std::move(col));
    }
    return {{"origin", o}, {"columns", cols}};
}

UnitaryFrame UnitaryFrame::from_json(const nlohmann::json& j) {
    UnitaryFrame f;
    for (const auto& e : j.at("origin")) f.origin.push_back(complex_from_json(e));
    for (const auto& c : j.at("columns")) {
        std::vector<BigComplex> col;
        for (const auto& e : c) col.push_back(complex_from_json(e));
        f.columns.push_back(std::move(col));
    }
    return f;
}

std::vector<BigComplex> WeierstrassPolydisc::ambient_point(const std::vector<BigComplex>& z,
                                                           const std::vector<BigComplex>& w) const {
    return frame.to_ambient(concat(z, w));
}

nlohmann::json WeierstrassPolydisc::to_json() const {
    nlohmann::json j{{"frame", frame.to_json()},
                     {"base", box_to_json(base)},
                     {"fiber", box_to_json(fiber)},
                     {"margin", bigfloat_to_json(margin)}};
    if (degree)
        j["degree"] = *degree;
    else
        j["degree"] = nullptr;
    return j;
}

WeierstrassPolydisc WeierstrassPolydisc::from_json(const nlohmann::json& j) {
    WeierstrassPolydisc d;
    d.frame = UnitaryFrame::from_json(j.at("frame"));
    d.base = box_from_json(j.at("base"));
    d.fiber = box_from_json(j.at("fiber"));
    if (!j.at("degree").is_null()) d.degree = j.at("degree").get<long>();
    d.margin = bigfloat_from_json(j.at("margin"));
    return d;
}

void AlgebraicVariety::validate() const {
    if (!std::is_sorted(vars.begin(), vars.end()))
        throw std::invalid_argument("variety: variables must be sorted");
    if (generators.empty()) throw std::invalid_argument("variety: no generators");
    for (const auto& g : generators) {
        if (g.is_zero()) throw std::invalid_argument("variety: zero generator");
        for (const auto& v : g.vars())
            if (!std::binary_search(vars.begin(), vars.end(), v))
                throw std::invalid_argument("variety: generator variable outside the ambient list");
    }
    if (dimension < 0 || dimension >= static_cast<int>(vars.size()))
        throw std::invalid_argument("variety: dimension out of range");
}

size_t ambient_dim(const AnalyticSet& X) {
    if (const auto* v = std::get_if<AlgebraicVariety>(&X)) return v->vars.size();
    return std::get<NoetherianZeroLocus>(X).chain->n();
}

int set_dimension(const AnalyticSet& X) {
    if (const auto* v = std::get_if<AlgebraicVariety>(&X)) return v->dimension;
    return std::get<NoetherianZeroLocus>(X).dimension;
}

std::vector<MultiMap> defining_maps(const AnalyticSet& X, const RunConfig& cfg) {
    std::vector<MultiMap> maps;
    if (const auto* v = std::get_if<AlgebraicVariety>(&X)) {
        for (const auto& g : v->generators) {
            Polynomial p = g.aligned_to(v->vars);
            maps.emplace_back([p](const std::vector<BigComplex>& x) { return p.eval(x); });
        }
        return maps;
    }
    const auto& nz = std::get<NoetherianZeroLocus>(X);
    auto rt = std::make_shared<ChainRuntime>(nz.chain, cfg);
    for (const auto& f : nz.functions)
        maps.emplace_back([rt, f](const std::vector<BigComplex>& x) {
            return evaluate_at(*rt, f, x).value;
        });
    return maps;
}

VerifyReport verify_polydisc(const std::vector<MultiMap>& eqs, const WeierstrassPolydisc& disc,
                             const RunConfig& cfg) {
    if (disc.fiber.dim() == 0) throw std::invalid_argument("verify: fiber dimension must be positive");
    if (eqs.empty()) throw std::invalid_argument("verify: no defining equations");
    size_t fd = disc.fiber.dim();
    mpfr_prec_t prec = BigFloat::default_precision();
    VerifyReport rep;
    rep.margin = BigFloat(0);
    rep.scale = BigFloat(0);
    size_t total = std::max<size_t>(static_cast<size_t>(std::max(cfg.verify_samples, 1)), 8 * fd);
    for (size_t k = 0; k < total; ++k) {
        size_t face = k % fd; // cover every boundary face, not just the torus
        auto fp = disc.fiber.interior_sample(k);
        fp[face] = disc.fiber.center[face] +
                   unit_circle(rotation_angle(k, 2 * disc.frame.dim() + 3 + face, prec)) *
                       disc.fiber.radius[face];
        std::vector<BigComplex> bp;
        if (disc.base.dim() > 0)
            bp = (k % 2 == 0) ? disc.base.boundary_sample(k / 2) : disc.base.interior_sample(k / 2);
        auto x = disc.ambient_point(bp, fp);
        BigFloat worst(0);
        for (const auto& f : eqs) {
            BigFloat v = abs(f(x));
            worst = max(worst, v);
            rep.scale = max(rep.scale, v);
        }
        rep.margin = (k == 0) ? worst : min(rep.margin, worst);
    }
    rep.ok = rep.margin > rep.scale * BigFloat(cfg.tol_membership) + BigFloat(cfg.noise_floor);

    // Point sampling alone misses a zero set that crosses the fiber wall
    // between samples. For a single equation with a one-dimensional fiber the
    // winding number over the base closure is the reliable detector: a
    // crossing makes it jump (or puts a zero on the contour, which the zero
    // counter refuses).
    if (rep.ok && eqs.size() == 1 && fd == 1) {
        size_t ws = disc.base.dim() == 0 ? 1 : static_cast<size_t>(std::max(cfg.base_samples, 1));
        long w0 = -1;
        try {
            for (size_t s = 0; s < ws; ++s) {
                std::vector<BigComplex> z;
                if (disc.base.dim() > 0) {
                    if (s == 0)
                        z = disc.base.center;
                    else
                        z = (s % 2) ? disc.base.boundary_sample(s / 2)
                                    : disc.base.interior_sample(s / 2);
                }
                LineMap g = [&eqs, &disc, &z](const BigComplex& t) {
                    return eqs[0](disc.ambient_point(z, {disc.fiber.center[0] + t}));
                };
                long w = count_zeros_disc(g, Disc(BigComplex(BigFloat(0)), disc.fiber.radius[0]), cfg);
                if (w0 < 0)
                    w0 = w;
                else if (w != w0)
                    rep.ok = false;
                if (!rep.ok) break;
            }
        } catch (const std::exception&) {
            rep.ok = false;
        }
    }
    return rep;
}

VerifyReport verify_polydisc(const AnalyticSet& X, const WeierstrassPolydisc& disc,
                             const RunConfig& cfg) {
    return verify_polydisc(defining_maps(X, cfg), disc, cfg);
}

namespace {

long fiber_count_algebraic(const AlgebraicVariety& V, const WeierstrassPolydisc& disc,
                           const std::vector<BigComplex>& z, const RunConfig& cfg) {
    auto a = disc.ambient_point(z, disc.fiber.center);
    const auto& b = disc.frame.columns[disc.base.dim()];
    Polynomial g0 = V.generators[0].aligned_to(V.vars);
    auto roots = all_roots(restrict_to_line(g0, a, b), cfg);
    long count = 0;
    for (const auto& t : roots) {
        if (!(abs(t) <= disc.fiber.radius[0])) continue;
        bool common = true;
        for (size_t gi = 1; gi < V.generators.size() && common; ++gi) {
            std::vector<BigComplex> x(a.size(), BigComplex(BigFloat(0)));
            for (size_t i = 0; i < a.size(); ++i) x[i] = a[i] + t * b[i];
            Polynomial g = V.generators[gi].aligned_to(V.vars);
            // heuristic residual filter for the remaining generators
            BigFloat thr = BigFloat(1e-6) * (BigFloat(1) + BigFloat(mpq_class(g.max_norm())));
            if (abs(g.eval(x)) > thr) common = false;
        }
        if (common) ++count;
    }
    return count;
}

long fiber_count_noetherian(const NoetherianZeroLocus& N, const WeierstrassPolydisc& disc,
                            const std::vector<BigComplex>& z,
                            const std::shared_ptr<ChainRuntime>& rt, const RunConfig& cfg) {
    if (N.functions.size() != 1)
        throw std::domain_error(
            "degree: argument-principle counting needs a single defining function");
    auto a = disc.ambient_point(z, disc.fiber.center);
    auto cursor = std::make_shared<LineCursor>(rt, N.functions[0], a, disc.frame.columns[disc.base.dim()]);
    return count_zeros_disc(line_map(cursor), Disc(BigComplex(BigFloat(0)), disc.fiber.radius[0]), cfg);
}

} // namespace

long degree(const AnalyticSet& X, const WeierstrassPolydisc& disc, const RunConfig& cfg) {
    if (disc.fiber.dim() != 1)
        throw std::domain_error(
            "degree: fiber dimension above one is handled by the intersection reduction");
    if (ambient_dim(X) != disc.frame.dim())
        throw std::invalid_argument("degree: ambient dimension mismatch");
    std::shared_ptr<ChainRuntime> rt;
    if (const auto* nz = std::get_if<NoetherianZeroLocus>(&X))
        rt = std::make_shared<ChainRuntime>(nz->chain, cfg);
    size_t samples = disc.base.dim() == 0 ? 1 : static_cast<size_t>(std::max(cfg.base_samples, 1));
    long count = -1;
    for (size_t s = 0; s < samples; ++s) {
        std::vector<BigComplex> z =
            disc.base.dim() == 0 ? std::vector<BigComplex>{}
            : (s == 0 ? disc.base.center : disc.base.interior_sample(s - 1));
        long c = std::holds_alternative<AlgebraicVariety>(X)
                     ? fiber_count_algebraic(std::get<AlgebraicVariety>(X), disc, z, cfg)
                     : fiber_count_noetherian(std::get<NoetherianZeroLocus>(X), disc, z, rt, cfg);
        if (count < 0) {
            count = c;
        } else if (c != count) {
            std::ostringstream os;
            os << "degree: fiber count varies across the base (" << count << " vs " << c
               << " at sample " << s << ")";
            throw std::runtime_error(os.str());
        }
    }
    return count;
}

WeierstrassPolydisc hypersurface_polydisc(const MultiMap& R, const std::vector<BigComplex>& center,
                                          const BigFloat& radius, const RunConfig& cfg) {
    size_t n = center.size();
    if (n == 0) throw std::invalid_argument("hypersurface polydisc: empty ambient space");
    if (!(radius > BigFloat(0))) throw std::invalid_argument("hypersurface polydisc: radius");
    mpfr_prec_t prec = BigFloat::default_precision();

    // direction of (sampled) maximum modulus on the sphere
    size_t ns = static_cast<size_t>(std::max(cfg.ns_grid, 32));
    BigFloat m_ball(0);
    std::vector<BigComplex> u_line;
    for (size_t k = 0; k < ns; ++k) {
        auto d = sphere_direction(k, n, prec);
        std::vector<BigComplex> x(n, BigComplex(BigFloat(0)));
        for (size_t i = 0; i < n; ++i) x[i] = center[i] + d[i] * radius;
        BigFloat v = abs(R(x));
        if (v > m_ball) {
            m_ball = v;
            u_line = d;
        }
    }
    if (!(m_ball > BigFloat(cfg.noise_floor)))
        throw std::domain_error("hypersurface polydisc: function is numerically zero on the ball");

    LineMap g = [&R, &center, &u_line](const BigComplex& t) {
        std::vector<BigComplex> x(center.size(), BigComplex(BigFloat(0)));
        for (size_t i = 0; i < center.size(); ++i) x[i] = center[i] + t * u_line[i];
        return R(x);
    };
    LowValueDisc low = low_value_disc(g, Disc(BigComplex(BigFloat(0)), radius), cfg);

    WeierstrassPolydisc disc;
    disc.frame = UnitaryFrame::fiber_last(center, u_line);
    disc.fiber = ComplexBox({low.disc.center}, {low.disc.radius});

    // Cauchy bound on the transverse gradient sizes the base; verification
    // has the last word and halves it when the sampling disagrees
    BigFloat rho = low.m * radius / (BigFloat(cfg.c_cal) * m_ball);
    std::vector<MultiMap> eqs{R};
    for (int attempt = 0;; ++attempt) {
        disc.base = ComplexBox(std::vector<BigComplex>(n - 1, BigComplex(BigFloat(0))),
                               std::vector<BigFloat>(n - 1, rho));
        auto rep = verify_polydisc(eqs, disc, cfg);
        if (rep.ok) {
            disc.margin = rep.margin;
            break;
        }
        if (n == 1 || attempt >= cfg.polydisc_retries)
            throw std::runtime_error("hypersurface polydisc: verification failed (margin " +
                                     fmt(rep.margin) + " of scale " + fmt(rep.scale) + ")");
        rho = rho / 2;
    }
    disc.degree = count_zeros_disc(g, low.disc, cfg);
    return disc;
}

BigComplex analytic_resultant(const AlgebraicVariety& W, const WeierstrassPolydisc& disc,
                              const NoetherianFunction& F, const std::vector<BigComplex>& z_local,
                              const RunConfig& cfg) {
    W.validate();
    if (disc.fiber.dim() != 1)
        throw std::domain_error("analytic resultant: fiber dimension must be one");
    if (z_local.size() != disc.base.dim())
        throw std::invalid_argument("analytic resultant: base point arity mismatch");
    if (F.chain->coords != W.vars)
        throw std::invalid_argument("analytic resultant: chain coordinates differ from the variety's");

    auto a = disc.ambient_point(z_local, disc.fiber.center);
    const auto& b = disc.frame.columns[disc.base.dim()];
    Polynomial g0 = W.generators[0].aligned_to(W.vars);
    ChainRuntime rt(F.chain, cfg);

    mpfr_prec_t prec = BigFloat::default_precision();
    for (int attempt = 0;; ++attempt) {
        auto coeffs = restrict_to_line(g0, a, b, prec);
        auto roots = all_roots(coeffs, cfg, prec);
        std::vector<BigComplex> in_fiber;
        for (const auto& t : roots)
            if (abs(t) <= disc.fiber.radius[0]) in_fiber.push_back(t);

        // residual test relative to the coefficient scale
        BigFloat cscale(0);
        for (const auto& c : coeffs) cscale = max(cscale, abs(c));
        BigFloat tol = cscale;
        mpfr_mul_2si(tol.raw(), tol.raw(), -(prec - 60), MPFR_RNDN);
        bool good = true;
        for (const auto& t : in_fiber) {
            BigComplex v(BigFloat(0));
            for (size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
            BigFloat grow = pow_ui(BigFloat(1) + abs(t), static_cast<unsigned long>(coeffs.size()));
            if (!(abs(v) <= tol * grow)) good = false;
        }
        if (disc.degree && static_cast<long>(in_fiber.size()) != *disc.degree) good = false;

        if (good) {
            BigComplex prod(BigFloat(1));
            for (const auto& t : in_fiber) {
                std::vector<BigComplex> x(a.size(), BigComplex(BigFloat(0)));
                for (size_t i = 0; i < a.size(); ++i) x[i] = a[i] + t * b[i];
                prod = prod * evaluate_at(rt, F.poly, x).value;
            }
            return prod;
        }
        if (attempt >= 1)
            throw std::runtime_error("analytic resultant: fiber solve failed near the discriminant");
        prec *= 2; // once more, twice the working precision
    }
}

WeierstrassPolydisc intersect_polydisc(const AlgebraicVariety& W, const WeierstrassPolydisc& disc,
                                       const NoetherianFunction& F,
                                       const std::vector<BigComplex>& bz_center,
                                       const BigFloat& bz_radius, const RunConfig& cfg) {
    size_t m = disc.base.dim();
    size_t n = disc.frame.dim();
    if (bz_center.size() != m) throw std::invalid_argument("intersection: base center arity mismatch");
    if (!(bz_radius > BigFloat(0))) throw std::invalid_argument("intersection: base radius");
    for (size_t j = 0; j < m; ++j)
        if (!(abs(bz_center[j] - disc.base.center[j]) + bz_radius <=
              disc.base.radius[j] * (BigFloat(1) + BigFloat(1e-12))))
            throw std::invalid_argument("intersection: ball escapes the verified base");

    MultiMap R = [&W, &disc, &F, &cfg](const std::vector<BigComplex>& z) {
        return analytic_resultant(W, disc, F, z, cfg);
    };

    // F identically zero on a component would make the resultant vanish on
    // all of B_z; sampled test against the chain's size scale
    {
        ChainRuntime rt(F.chain, cfg);
        BigFloat ns = noetherian_size(rt, 16).value;
        BigFloat rscale(0);
        mpfr_prec_t prec = BigFloat::default_precision();
        for (size_t k = 0; k < 12; ++k) {
            auto d = sphere_direction(k, m, prec);
            BigFloat frac = BigFloat(1) - BigFloat(static_cast<long>(k % 5)) / BigFloat(8);
            std::vector<BigComplex> z(m, BigComplex(BigFloat(0)));
            for (size_t i = 0; i < m; ++i) z[i] = bz_center[i] + d[i] * (bz_radius * frac);
            rscale = max(rscale, abs(R(z)));
        }
        if (!(rscale > BigFloat(1e-10) * ns))
            throw std::domain_error(
                "intersection: F vanishes identically on the covered set (sampled)");
    }

    WeierstrassPolydisc hz = hypersurface_polydisc(R, bz_center, bz_radius, cfg);

    WeierstrassPolydisc out;
    out.frame.origin =
        disc.frame.to_ambient(concat(bz_center, std::vector<BigComplex>(n - m, BigComplex(BigFloat(0)))));
    for (const auto& col : hz.frame.columns) {
        std::vector<BigComplex> amb(n, BigComplex(BigFloat(0)));
        for (size_t k = 0; k < m; ++k)
            for (size_t i = 0; i < n; ++i) amb[i] = amb[i] + col[k] * disc.frame.columns[k][i];
        out.frame.columns.push_back(std::move(amb));
    }
    for (size_t j = m; j < n; ++j) out.frame.columns.push_back(disc.frame.columns[j]);
    out.base = hz.base;
    out.fiber = ComplexBox(concat(hz.fiber.center, disc.fiber.center), [&] {
        std::vector<BigFloat> r = hz.fiber.radius;
        r.insert(r.end(), disc.fiber.radius.begin(), disc.fiber.radius.end());
        return r;
    }());
    out.degree = hz.degree;

    auto eqs = defining_maps(AnalyticSet(W), cfg);
    auto rtf = std::make_shared<ChainRuntime>(F.chain, cfg);
    Polynomial fp = F.poly;
    eqs.emplace_back(
        [rtf, fp](const std::vector<BigComplex>& x) { return evaluate_at(*rtf, fp, x).value; });
    auto rep = verify_polydisc(eqs, out, cfg);
    if (!rep.ok)
        throw std::runtime_error("intersection: combined polydisc failed verification (margin " +
                                 fmt(rep.margin) + ")");
    out.margin = rep.margin;
    return out;
}

FrameSearchReport algebraic_polydisc(const AlgebraicVariety& V, const std::vector<BigComplex>& center,
                                     const BigFloat& radius, const RunConfig& cfg) {
    V.validate();
    size_t n = V.vars.size();
    if (center.size() != n) throw std::invalid_argument("frame search: center arity mismatch");
    int fd = static_cast<int>(n) - V.dimension;
    if (fd < 1) throw std::invalid_argument("frame search: nonpositive codimension");

    auto eqs = defining_maps(AnalyticSet(V), cfg);
    std::mt19937_64 rng(cfg.seed);
    auto uniform = [&rng]() { return (static_cast<double>(rng() >> 11) * 0x1p-53) * 2.0 - 1.0; };

    FrameSearchReport rep;
    rep.best_margin = BigFloat(0);
    const double shrinks[] = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    BigFloat root_n = sqrt(BigFloat(static_cast<long>(n)));

    for (size_t fk = 0; rep.attempts < cfg.frame_search_budget; ++fk) {
        UnitaryFrame frame;
        if (fk < n) {
            // coordinate orders first: cyclic shifts of the identity
            frame.origin = center;
            frame.columns.assign(n, std::vector<BigComplex>(n, BigComplex(BigFloat(0))));
            for (size_t j = 0; j < n; ++j) frame.columns[j][(j + fk) % n] = BigComplex(BigFloat(1));
        } else {
            std::vector<std::vector<BigComplex>> raw(n, std::vector<BigComplex>(n, BigComplex(BigFloat(0))));
            for (auto& col : raw)
                for (auto& z : col) z = BigComplex(uniform(), uniform());
            try {
                frame = UnitaryFrame::orthonormalized(center, std::move(raw));
            } catch (const std::domain_error&) {
                continue;
            }
        }
        for (double s : shrinks) {
            if (rep.attempts >= cfg.frame_search_budget) break;
            ++rep.attempts;
            BigFloat r = radius * BigFloat(s) / root_n;
            WeierstrassPolydisc d;
            d.frame = frame;
            d.base = ComplexBox(std::vector<BigComplex>(V.dimension, BigComplex(BigFloat(0))),
                                std::vector<BigFloat>(V.dimension, r));
            d.fiber = ComplexBox(std::vector<BigComplex>(fd, BigComplex(BigFloat(0))),
                                 std::vector<BigFloat>(fd, r));
            auto vr = verify_polydisc(eqs, d, cfg);
            if (!vr.ok) {
                if (vr.margin > rep.best_margin) {
                    rep.best_margin = vr.margin;
                    rep.disc = d;
                }
                continue;
            }
            d.margin = vr.margin;
            if (fd == 1) { // codimension one also demands a constant fiber count
                try {
                    d.degree = degree(AnalyticSet(V), d, cfg);
                } catch (const std::exception&) {
                    continue;
                }
            }
            rep.disc = d;
            rep.eta = radius / r;
            rep.ok = true;
            return rep;
        }
    }
    return rep;
}

} // namespace noether
