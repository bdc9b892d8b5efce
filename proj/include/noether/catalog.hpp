#pragma once

// Built-in analytic systems for the expression compiler: exp/sin/cos, the
// invariants-free Weierstrass chain, the modular j system (rational form,
// auto-depolarized), the Halphen quadratic system, and the two-variable
// zeta/theta-1 system with code-generated tau rules. Initial data never
// comes from the systems themselves: q-series and row-resummed lattice sums
// act as independent oracles, cached per (entry, basepoint, precision).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noether/closure.hpp"

namespace noether {

// Weierstrass p/p'/p'' for the lattice Z + tau*Z, by row-resummed lattice
// sums (each horizontal row folded into a cotangent-type closed form, rows
// decaying like exp(-2*pi*Im tau)).
struct PellValues {
    BigComplex p, p1, p2;
};
PellValues pell_oracle(const BigComplex& z, const BigComplex& tau, mpfr_prec_t prec);

// j, dj/dtau, d2j/dtau2 from the integer q-expansion j = E4^3/Delta.
struct JValues {
    BigComplex j, j1, j2;
};
JValues j_oracle(const BigComplex& tau, mpfr_prec_t prec);

// psi_j = (d theta_j / theta_j)(0, tau) under d = (1/pi i) d/dtau, plus the
// thetanulls and the first odd theta derivatives used by cross-checks.
struct HalphenValues {
    BigComplex psi2, psi3, psi4;
    BigComplex th2, th3, th4;   // theta_j(0)
    BigComplex th1p, th1ppp;    // theta_1'(0), theta_1'''(0)
};
HalphenValues halphen_oracle(const BigComplex& tau, mpfr_prec_t prec);

// Scaled zeta tower at (z, tau): zk = pi^-(k+1) * d^k zeta/dz^k for the
// lattice 2Z + 2tau*Z, th1 = theta_1(pi z/2, tau).
struct ZetaValues {
    BigComplex z0, z1, z2, z3, th1;
};
ZetaValues zeta_oracle(const BigComplex& z, const BigComplex& tau, mpfr_prec_t prec);

enum class Lattice { square, hexagonal };

enum class SingularSet {
    none,        // entire system
    j_orbit,     // SL2(Z) orbit of i and e^(2 pi i/3)
    lattice,     // poles of p on Z + tau*Z (tau in sing_params)
    cusp,        // Im tau -> 0 (coordinate t = pi*i*tau)
    theta_zero,  // zeros of theta-1 tilde in (zh, t)
};

struct CatalogEntry {
    std::string name;
    CertifiedChain chain;              // template at the documented basepoint
    std::vector<std::string> exports;  // exposed members, primary first
    std::string documentation;
    OpLog log;                         // construction record
    SingularSet singular = SingularSet::none;
    std::vector<BigComplex> sing_params;

    // Distance from a coordinate point to the entry's singular set (the
    // metric each case uses is documented in catalog.cpp); huge when none.
    BigFloat singular_distance(const std::vector<BigComplex>& p) const;
};

class Catalog {
public:
    explicit Catalog(const RunConfig& cfg = RunConfig::defaults(), std::string cache_path = "");

    bool has(const std::string& name) const;
    const CatalogEntry& entry(const std::string& name) const;
    const RunConfig& config() const { return cfg_; }

    void save_cache() const;

private:
    RunConfig cfg_;
    std::string cache_path_;
    std::map<std::string, CatalogEntry> entries_;
    mutable std::map<std::string, std::vector<BigComplex>> oracle_cache_;
    mutable bool cache_dirty_ = false;

    CatalogEntry build(const std::string& name) const;
    std::vector<BigComplex> cached_oracle(const std::string& entry,
                                          const std::vector<BigComplex>& basepoint,
                                          size_t count,
                                          const std::function<std::vector<BigComplex>()>& compute) const;
};

// One entry built standing alone, with the default basepoint.
CatalogEntry catalog_builtin(const std::string& name, const RunConfig& cfg = RunConfig::defaults());

// The Weierstrass entry for a chosen lattice; catalog_builtin("pell") is the
// square one.
CatalogEntry pell_entry(Lattice lat, const RunConfig& cfg = RunConfig::defaults());

// Entry re-based at a new point. Refuses (with the measured distance in the
// message) when the point is within `margin` of the singular set. Initial
// data is carried from the old basepoint by continuation, re-centering the
// working domain along the way, then cross-checked against the entry's
// oracle; optional waypoints steer the path.
CatalogEntry entry_at(const CatalogEntry& e, const std::vector<BigComplex>& basepoint,
                      const RunConfig& cfg,
                      const std::vector<std::vector<BigComplex>>& waypoints = {},
                      double margin = 1e-3);

} // namespace noether
