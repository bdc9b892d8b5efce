#pragma once

// Run-wide configuration: precision, calibration constants for every O(.)
// bound, sampling densities, budgets, and the RNG seed. Loaded from
// key=value files and/or CLI flags; every report embeds the values used.

#include <cstdint>
#include <map>
#include <string>

namespace noether {

struct RunConfig {
    // numeric core
    long precision_bits = 192;
    double step_safety = 0.25;  // fraction of the estimated convergence radius per step
    double step_tol = 1e-26;    // per-step Taylor tail target (scaled coefficients)
    double noise_floor = 1e-48; // "numerically zero" threshold for maxima
    int max_order = 40;         // Taylor order cap before step rejection

    // calibration constants (one per O(.) in the source bounds)
    double kappa = 3.0;     // domain-extension exponent: rho = NS^(-kappa)
    double gamma_cal = 1.0; // zero-count bound gamma_eps = 2/eps^2 + gamma_cal*eps
    double tau_cal = 1.0;   // tau_eps = 2/eps^2 + tau_cal*eps
    double chi_cal = 1.0;   // chi_eps = (8 ln(1/eps) + chi_cal)/eps^4
    double c_cal = 6.0;     // generic O(1) multiplier (low-value discs, ODE index bounds, subadditivity)

    // sampling densities
    int ns_grid = 48;          // boundary samples for Noetherian-size estimation
    int circle_samples = 64;   // initial angular samples per circle
    int refine_iters = 40;     // local bisection depth for circle maxima
    int verify_samples = 80;   // wall samples for polydisc verification
    int base_samples = 17;     // fiber-count constancy checks
    int line_samples = 16;     // sampled lines for directional indices
    int consistency_samples = 100;

    // tolerances
    double tol_eval = 1e-12;       // default evaluation target
    double tol_membership = 1e-12; // census residual acceptance (gradient-scaled)
    double cluster_radius = 1e-8;  // root multiplicity clustering

    // budgets
    int groebner_max_basis = 512;
    int groebner_max_degree = 40;
    int stabilize_max_k = 24;
    long max_steps = 4000000;
    int polydisc_retries = 24;
    int frame_search_budget = 64;
    int explore_max_depth = 4;
    int fit_max_degree = 6;

    uint64_t seed = 12345;

    static RunConfig defaults() { return RunConfig(); }

    // key=value text (one per line, '#' comments); unknown keys rejected.
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);
    void apply(const std::string& key, const std::string& value);
    std::map<std::string, std::string> to_map() const;
};

} // namespace noether
