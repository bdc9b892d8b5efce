#include "noether/bernstein.hpp"

#include "noether/complexbox.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace noether {

Disc::Disc(BigComplex c, BigFloat r) : center(std::move(c)), radius(std::move(r)) {
    if (!(radius > BigFloat(0))) throw std::invalid_argument("disc radius must be positive");
}

Disc Disc::shrink(const BigFloat& eta) const {
    if (!(eta >= BigFloat(1))) throw std::invalid_argument("shrink factor must be >= 1");
    Disc out(center, radius / eta);
    out.ambient = ambient;
    return out;
}

namespace {

BigComplex circle_point(const Disc& d, const BigFloat& th) {
    return d.center + unit_circle(th) * d.radius;
}

CircleExtremum scan_circle(const LineMap& f, const Disc& d, const RunConfig& cfg, bool maximize) {
    int n = std::max(8, cfg.circle_samples);
    mpfr_prec_t prec = BigFloat::default_precision() + 32;
    auto val = [&](const BigFloat& th) { return f(circle_point(d, th)).abs(); };

    BigFloat tau = pi(prec).mul_2si(1);
    CircleExtremum best{BigFloat(0), d.center, BigFloat(0)};
    BigFloat best_th(0);
    for (int k = 0; k < n; ++k) {
        BigFloat th = tau * BigFloat(k) / BigFloat(n);
        BigFloat v = val(th);
        if (k == 0 || (maximize ? v > best.value : v < best.value)) {
            best.value = v;
            best_th = th;
        }
    }

    // local ternary refinement inside the bracketing arc
    BigFloat width = tau / BigFloat(n);
    BigFloat lo = best_th - width, hi = best_th + width;
    BigFloat spread = width;
    for (int it = 0; it < cfg.refine_iters * 3; ++it) {
        BigFloat third = (hi - lo) / BigFloat(3);
        BigFloat m1 = lo + third, m2 = hi - third;
        BigFloat v1 = val(m1), v2 = val(m2);
        if (maximize ? v1 > best.value : v1 < best.value) { best.value = v1; best_th = m1; }
        if (maximize ? v2 > best.value : v2 < best.value) { best.value = v2; best_th = m2; }
        if (maximize ? v1 >= v2 : v1 <= v2) hi = m2; else lo = m1;
        spread = noether::abs(v1 - v2);
    }
    best.where = circle_point(d, best_th);
    best.uncertainty = spread + best.value.mul_2si(-150);
    return best;
}

BigFloat ln2() { return log(BigFloat(2)); }

} // namespace

CircleExtremum max_on_circle(const LineMap& f, const Disc& d, const RunConfig& cfg) {
    return scan_circle(f, d, cfg, true);
}

CircleExtremum min_on_circle(const LineMap& f, const Disc& d, const RunConfig& cfg) {
    return scan_circle(f, d, cfg, false);
}

BernsteinReport bernstein_index(const LineMap& f, const Disc& U, const Disc& K, const RunConfig& cfg) {
    BigFloat slack = U.radius * BigFloat(1e-18) + BigFloat(1e-30);
    if ((K.center - U.center).abs() + K.radius > U.radius + slack)
        throw std::invalid_argument("bernstein index: inner disc is not contained in the outer disc");

    CircleExtremum mu = scan_circle(f, U, cfg, true);
    if (mu.value <= BigFloat(cfg.noise_floor))
        throw std::domain_error("bernstein index undefined: function is numerically zero on the disc");
    CircleExtremum mk = scan_circle(f, K, cfg, true);

    BernsteinReport r;
    r.m_u = mu.value;
    r.m_k = mk.value;
    r.witness_u = mu.where;
    r.witness_k = mk.where;
    r.index = log(mu.value / mk.value);
    r.eta = (U.center == K.center) ? U.radius / K.radius : BigFloat(0);
    r.uncertainty = mu.uncertainty / mu.value + mk.uncertainty / max(mk.value, BigFloat(cfg.noise_floor));
    return r;
}

BernsteinReport bernstein_gap_index(const LineMap& f, const Disc& U, const BigFloat& eta,
                                    const RunConfig& cfg) {
    if (!(eta > BigFloat(1))) throw std::invalid_argument("gap must exceed 1");
    BernsteinReport r = bernstein_index(f, U, U.shrink(eta), cfg);
    r.eta = eta;
    return r;
}

long count_zeros_disc(const LineMap& f, const Disc& d, const RunConfig& cfg) {
    mpfr_prec_t prec = BigFloat::default_precision() + 32;
    BigFloat tau = pi(prec).mul_2si(1);
    BigFloat half_pi = pi(prec).mul_2si(-1);

    struct Seg {
        BigFloat a, b;
        BigComplex fa, fb;
        int depth;
    };

    int n = std::max(16, cfg.circle_samples);
    std::vector<BigComplex> ring(n + 1);
    BigFloat scale(0);
    for (int k = 0; k <= n; ++k) {
        BigFloat th = tau * BigFloat(k) / BigFloat(n);
        ring[k] = f(circle_point(d, th));
        scale = max(scale, ring[k].abs());
    }
    BigFloat floor_ = max(BigFloat(cfg.noise_floor), scale * BigFloat(1e-45));
    auto check_floor = [&](const BigComplex& v) {
        if (v.abs() < floor_)
            throw std::domain_error("zero count refused: boundary modulus below the noise floor "
                                    "(zero on or near the contour; perturb the radius)");
    };
    for (const auto& v : ring) check_floor(v);

    std::deque<Seg> work;
    for (int k = 0; k < n; ++k)
        work.push_back({tau * BigFloat(k) / BigFloat(n), tau * BigFloat(k + 1) / BigFloat(n),
                        ring[k], ring[k + 1], 0});

    BigFloat total(0, prec);
    long evals = 0;
    while (!work.empty()) {
        Seg s = std::move(work.front());
        work.pop_front();
        BigFloat inc = (s.fb / s.fa).arg();
        if (noether::abs(inc) < half_pi) {
            total += inc;
            continue;
        }
        if (s.depth >= 40 || ++evals > 200000)
            throw std::runtime_error("zero count failed: argument tracking did not stabilize");
        BigFloat mid = (s.a + s.b).mul_2si(-1);
        BigComplex fm = f(circle_point(d, mid));
        check_floor(fm);
        work.push_front({mid, s.b, fm, s.fb, s.depth + 1});
        work.push_front({s.a, mid, s.fa, fm, s.depth + 1});
    }

    BigFloat w = total / tau;
    long rounded = w.to_long();
    if (noether::abs(w - BigFloat(rounded)) > BigFloat(0.05))
        throw std::runtime_error("zero count failed: winding " + w.to_string(8) + " is not an integer");
    return rounded;
}

ZeroBoundReport check_zero_bound(const LineMap& f, const Disc& U, const BigFloat& eps,
                                 double gamma_cal, const RunConfig& cfg) {
    if (!(eps > BigFloat(0))) throw std::invalid_argument("eps must be positive");
    BigFloat eta = BigFloat(1) + eps;
    BernsteinReport B = bernstein_gap_index(f, U, eta, cfg);
    long zeros = count_zeros_disc(f, U.shrink(eta), cfg);
    BigFloat gamma = BigFloat(2) / (eps * eps) + BigFloat(gamma_cal) * eps;
    ZeroBoundReport r;
    r.zeros = zeros;
    r.index = B.index;
    r.bound = gamma * B.index;
    r.slack = r.bound - BigFloat(zeros);
    r.holds = BigFloat(zeros) <= r.bound + gamma * B.uncertainty + BigFloat(1e-30);
    return r;
}

LowValueDisc low_value_disc(const LineMap& f, const Disc& U, const RunConfig& cfg) {
    BernsteinReport B = bernstein_gap_index(f, U, BigFloat(2), cfg);
    BigFloat floor_ = exp(-BigFloat(cfg.c_cal) * B.index) * B.m_u;

    int grid = std::max(5, cfg.base_samples);
    std::optional<LowValueDisc> fallback;
    // largest admissible disc preferred: scan [r/2 .. r/4] downward
    for (int j = grid - 1; j >= 0; --j) {
        BigFloat t = BigFloat(j) / BigFloat(grid - 1); // 0 -> r/4, 1 -> r/2
        BigFloat rj = U.radius * (BigFloat(1) + t).mul_2si(-2);
        Disc dj(U.center, rj);
        dj.ambient = U.ambient;
        CircleExtremum mn = scan_circle(f, dj, cfg, false);
        if (mn.value >= floor_)
            return {dj, mn.value, floor_, mn.value - floor_, true};
        if (!fallback || mn.value > fallback->m)
            fallback = LowValueDisc{dj, mn.value, floor_, mn.value - floor_, false};
    }
    if (!fallback || fallback->m <= BigFloat(cfg.noise_floor))
        throw std::domain_error("low value disc: every scanned circle sits below the noise floor");
    return *fallback;
}

GapConversionReport gap_conversion_check(const LineMap& f, const Disc& U, const BigFloat& eps,
                                         const RunConfig& cfg) {
    if (!(eps > BigFloat(0))) throw std::invalid_argument("eps must be positive");
    BernsteinReport b2 = bernstein_gap_index(f, U, BigFloat(2), cfg);
    BernsteinReport be = bernstein_gap_index(f, U, BigFloat(1) + eps, cfg);
    BigFloat tau_eps = BigFloat(2) / (eps * eps) + BigFloat(cfg.tau_cal) * eps;
    BigFloat chi_eps = (BigFloat(8) * log(BigFloat(1) / eps) + BigFloat(cfg.chi_cal)) / pow_ui(eps, 4);
    GapConversionReport r;
    r.lhs = b2.index;
    r.rhs = (chi_eps + tau_eps * ln2()) * be.index;
    r.slack = r.rhs - r.lhs;
    r.holds = r.lhs <= r.rhs + b2.uncertainty + BigFloat(1e-30);
    return r;
}

SubadditivityReport subadditivity_check(const std::vector<LineMap>& fs, const Disc& U,
                                        const RunConfig& cfg) {
    if (fs.empty()) throw std::invalid_argument("subadditivity check needs at least one factor");
    LineMap product = [fs](const BigComplex& z) {
        BigComplex acc = fs[0](z);
        for (size_t k = 1; k < fs.size(); ++k) acc *= fs[k](z);
        return acc;
    };
    SubadditivityReport r;
    r.factors = static_cast<int>(fs.size());
    r.product_index = bernstein_gap_index(product, U, BigFloat(2), cfg).index;
    r.index_sum = BigFloat(0);
    for (const auto& f : fs) r.index_sum += bernstein_gap_index(f, U, BigFloat(2), cfg).index;
    r.bound = BigFloat(cfg.c_cal) * log(BigFloat(r.factors + 1)) * r.index_sum;
    r.slack = r.bound - r.product_index;
    r.holds = r.product_index <= r.bound + BigFloat(1e-30);
    return r;
}

BernsteinReport directional_bernstein(const MultiMap& F, const std::vector<BigComplex>& center,
                                      const BigFloat& radius, const BigFloat& eta,
                                      int line_samples, const RunConfig& cfg) {
    size_t n = center.size();
    if (n == 0) throw std::invalid_argument("directional index needs a positive dimension");
    if (line_samples <= 0) throw std::invalid_argument("directional index needs at least one line");
    if (!(radius > BigFloat(0))) throw std::invalid_argument("ball radius must be positive");

    mpfr_prec_t prec = BigFloat::default_precision();
    BigFloat tau = pi(prec).mul_2si(1);

    // quasi-random unit directions; amplitudes in [1/2, 3/2] before
    // normalization keep every component bounded away from zero
    auto direction = [&](int k) {
        std::vector<BigComplex> u(n);
        BigFloat norm2(0);
        for (size_t j = 0; j < n; ++j) {
            BigFloat th = rotation_angle(k + 1, 2 * j, prec);
            BigFloat amp = BigFloat(mpq_class(1, 2)) + rotation_angle(k + 1, 2 * j + 1, prec) / tau;
            u[j] = unit_circle(th) * amp;
            norm2 += amp * amp;
        }
        BigFloat inv = BigFloat(1) / sqrt(norm2);
        for (auto& c : u) c = c * inv;
        return u;
    };

    std::vector<std::vector<BigComplex>> dirs;
    std::vector<CircleExtremum> outer;
    BigFloat scale(0);
    Disc line_disc(BigComplex(0.0), radius);
    for (int k = 0; k < line_samples; ++k) {
        dirs.push_back(direction(k));
        const auto& u = dirs.back();
        LineMap g = [&F, &center, u](const BigComplex& t) {
            std::vector<BigComplex> p(center.size());
            for (size_t j = 0; j < p.size(); ++j) p[j] = center[j] + t * u[j];
            return F(p);
        };
        outer.push_back(scan_circle(g, line_disc, cfg, true));
        scale = max(scale, outer.back().value);
    }
    if (scale <= BigFloat(cfg.noise_floor))
        throw std::domain_error("directional index undefined: every line restriction vanishes");

    BigFloat skip_floor = max(BigFloat(cfg.noise_floor), scale * BigFloat(1e-40));
    std::optional<BernsteinReport> best;
    int used = 0;
    for (int k = 0; k < line_samples; ++k) {
        if (outer[k].value <= skip_floor) continue;
        const auto& u = dirs[k];
        LineMap g = [&F, &center, u](const BigComplex& t) {
            std::vector<BigComplex> p(center.size());
            for (size_t j = 0; j < p.size(); ++j) p[j] = center[j] + t * u[j];
            return F(p);
        };
        CircleExtremum inner = scan_circle(g, line_disc.shrink(eta), cfg, true);
        BernsteinReport r;
        r.m_u = outer[k].value;
        r.m_k = inner.value;
        r.witness_u = outer[k].where;
        r.witness_k = inner.where;
        r.index = log(r.m_u / r.m_k);
        r.eta = eta;
        r.uncertainty = outer[k].uncertainty / r.m_u + inner.uncertainty / max(r.m_k, BigFloat(cfg.noise_floor));
        ++used;
        if (!best || r.index > best->index) best = r;
    }
    best->lines_used = used;
    return *best;
}

} // namespace noether
