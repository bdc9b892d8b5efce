#include "noether/roots.hpp"

#include <stdexcept>

namespace noether {

namespace {

BigComplex horner(const std::vector<BigComplex>& c, const BigComplex& x) {
    BigComplex acc = c.back();
    for (size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
    return acc;
}

} // namespace

std::vector<BigComplex> all_roots(const std::vector<BigComplex>& coeffs, const RunConfig& cfg,
                                  mpfr_prec_t prec) {
    (void)cfg;
    if (prec == 0) prec = BigFloat::default_precision();
    BigFloat top{Prec{prec}};
    for (const auto& c : coeffs) top = max(top, abs(c));
    if (!(top > BigFloat(0))) throw std::domain_error("all_roots: zero polynomial");

    // trim a numerically-vanishing head so stray interpolation dust does not
    // masquerade as extra roots at infinity
    BigFloat head_floor = top * BigFloat(1e-40);
    size_t deg = coeffs.size() - 1;
    while (deg > 0 && abs(coeffs[deg]) <= head_floor) --deg;
    if (deg == 0) return {};

    std::vector<BigComplex> c(deg + 1, BigComplex(BigFloat{Prec{prec}}));
    for (size_t k = 0; k <= deg; ++k) c[k] = coeffs[k] / coeffs[deg];

    BigFloat radius{Prec{prec}};
    radius = BigFloat(1);
    for (size_t k = 0; k < deg; ++k) radius = max(radius, BigFloat(1) + abs(c[k]));

    // asymmetric starting ring: varying moduli break the symmetric stalemates
    // a plain root-of-unity start runs into on even polynomials
    BigFloat two_pi = pi(prec) * 2;
    std::vector<BigComplex> x(deg, BigComplex(BigFloat{Prec{prec}}));
    for (size_t k = 0; k < deg; ++k) {
        BigFloat ang = two_pi * BigFloat(static_cast<long>(k)) / BigFloat(static_cast<long>(deg)) +
                       BigFloat(0.5517);
        BigFloat mod = radius * (BigFloat(0.35) + BigFloat(0.6) * BigFloat(static_cast<long>(k) + 1) /
                                                      BigFloat(static_cast<long>(deg)));
        x[k] = unit_circle(ang) * mod;
    }

    BigFloat stop{Prec{prec}};
    stop = radius * BigFloat(1);
    mpfr_mul_2si(stop.raw(), stop.raw(), -(prec - 24), MPFR_RNDN);
    BigFloat stall_level = radius * BigFloat(1e-24);

    BigFloat prev_delta = radius * 4;
    int stalled = 0;
    for (int sweep = 0; sweep < 600; ++sweep) {
        BigFloat delta{Prec{prec}};
        for (size_t k = 0; k < deg; ++k) {
            BigComplex num = horner(c, x[k]);
            BigComplex den(BigFloat(1), BigFloat(0));
            for (size_t j = 0; j < deg; ++j) {
                if (j == k) continue;
                den = den * (x[k] - x[j]);
            }
            if (!(abs(den) > BigFloat(0))) {
                x[k] = x[k] + unit_circle(BigFloat(static_cast<long>(k))) * (radius * BigFloat(1e-30));
                continue;
            }
            BigComplex corr = num / den;
            x[k] = x[k] - corr;
            delta = max(delta, abs(corr));
        }
        if (delta <= stop) break;
        // multiple roots converge linearly and then jitter near the cluster;
        // accept once corrections are tiny and no longer shrinking
        if (delta <= stall_level && delta > prev_delta * BigFloat(0.9)) {
            if (++stalled >= 6) break;
        } else {
            stalled = 0;
        }
        prev_delta = delta;
    }
    return x;
}

std::vector<std::pair<BigComplex, int>> cluster_points(const std::vector<BigComplex>& pts,
                                                       const BigFloat& radius) {
    std::vector<std::pair<BigComplex, int>> out;
    for (const auto& p : pts) {
        bool merged = false;
        for (auto& [rep, count] : out) {
            if (abs(p - rep) <= radius) {
                BigFloat w(static_cast<long>(count));
                rep = (rep * w + p) / (w + 1);
                ++count;
                merged = true;
                break;
            }
        }
        if (!merged) out.emplace_back(p, 1);
    }
    return out;
}

std::vector<BigComplex> restrict_to_line(const Polynomial& p, const std::vector<BigComplex>& a,
                                         const std::vector<BigComplex>& b, mpfr_prec_t prec) {
    if (prec == 0) prec = BigFloat::default_precision();
    if (a.size() != p.nvars() || b.size() != p.nvars())
        throw std::invalid_argument("restrict_to_line: point arity mismatch");
    if (p.is_zero()) return {};
    size_t m = p.total_degree() + 1;
    BigFloat two_pi = pi(prec) * 2;
    std::vector<BigComplex> values(m, BigComplex(BigFloat{Prec{prec}}));
    for (size_t j = 0; j < m; ++j) {
        BigComplex t = unit_circle(two_pi * BigFloat(static_cast<long>(j)) / BigFloat(static_cast<long>(m)));
        std::vector<BigComplex> pt(a.size(), BigComplex(BigFloat{Prec{prec}}));
        for (size_t i = 0; i < a.size(); ++i) pt[i] = a[i] + t * b[i];
        values[j] = p.eval(pt);
    }
    std::vector<BigComplex> coeff(m, BigComplex(BigFloat{Prec{prec}}));
    BigFloat inv_m = BigFloat(1) / BigFloat(static_cast<long>(m));
    for (size_t k = 0; k < m; ++k) {
        BigComplex acc(BigFloat{Prec{prec}});
        for (size_t j = 0; j < m; ++j) {
            BigFloat ang = two_pi * BigFloat(static_cast<long>((j * k) % m)) / BigFloat(static_cast<long>(m));
            acc = acc + values[j] * unit_circle(-ang);
        }
        coeff[k] = acc * inv_m;
    }
    return coeff;
}

} // namespace noether
