#include "noether/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noether {

namespace {
std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
} // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    auto as_d = [&] { return std::stod(value); };
    auto as_i = [&] { return std::stoi(value); };
    auto as_l = [&] { return std::stol(value); };
    if (key == "precision_bits") precision_bits = as_l();
    else if (key == "step_safety") step_safety = as_d();
    else if (key == "step_tol") step_tol = as_d();
    else if (key == "noise_floor") noise_floor = as_d();
    else if (key == "max_order") max_order = as_i();
    else if (key == "kappa") kappa = as_d();
    else if (key == "gamma_cal") gamma_cal = as_d();
    else if (key == "tau_cal") tau_cal = as_d();
    else if (key == "chi_cal") chi_cal = as_d();
    else if (key == "c_cal") c_cal = as_d();
    else if (key == "ns_grid") ns_grid = as_i();
    else if (key == "circle_samples") circle_samples = as_i();
    else if (key == "refine_iters") refine_iters = as_i();
    else if (key == "verify_samples") verify_samples = as_i();
    else if (key == "base_samples") base_samples = as_i();
    else if (key == "line_samples") line_samples = as_i();
    else if (key == "consistency_samples") consistency_samples = as_i();
    else if (key == "tol_eval") tol_eval = as_d();
    else if (key == "tol_membership") tol_membership = as_d();
    else if (key == "cluster_radius") cluster_radius = as_d();
    else if (key == "groebner_max_basis") groebner_max_basis = as_i();
    else if (key == "groebner_max_degree") groebner_max_degree = as_i();
    else if (key == "stabilize_max_k") stabilize_max_k = as_i();
    else if (key == "max_steps") max_steps = as_l();
    else if (key == "polydisc_retries") polydisc_retries = as_i();
    else if (key == "frame_search_budget") frame_search_budget = as_i();
    else if (key == "explore_max_depth") explore_max_depth = as_i();
    else if (key == "fit_max_degree") fit_max_degree = as_i();
    else if (key == "seed") seed = std::stoull(value);
    else throw std::invalid_argument("unknown config key: " + key);
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        c.apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::map<std::string, std::string> RunConfig::to_map() const {
    auto d = [](double x) {
        std::ostringstream o;
        o.precision(17);
        o << x;
        return o.str();
    };
    std::map<std::string, std::string> m;
    m["precision_bits"] = std::to_string(precision_bits);
    m["step_safety"] = d(step_safety);
    m["step_tol"] = d(step_tol);
    m["noise_floor"] = d(noise_floor);
    m["max_order"] = std::to_string(max_order);
    m["kappa"] = d(kappa);
    m["gamma_cal"] = d(gamma_cal);
    m["tau_cal"] = d(tau_cal);
    m["chi_cal"] = d(chi_cal);
    m["c_cal"] = d(c_cal);
    m["ns_grid"] = std::to_string(ns_grid);
    m["circle_samples"] = std::to_string(circle_samples);
    m["refine_iters"] = std::to_string(refine_iters);
    m["verify_samples"] = std::to_string(verify_samples);
    m["base_samples"] = std::to_string(base_samples);
    m["line_samples"] = std::to_string(line_samples);
    m["consistency_samples"] = std::to_string(consistency_samples);
    m["tol_eval"] = d(tol_eval);
    m["tol_membership"] = d(tol_membership);
    m["cluster_radius"] = d(cluster_radius);
    m["groebner_max_basis"] = std::to_string(groebner_max_basis);
    m["groebner_max_degree"] = std::to_string(groebner_max_degree);
    m["stabilize_max_k"] = std::to_string(stabilize_max_k);
    m["max_steps"] = std::to_string(max_steps);
    m["polydisc_retries"] = std::to_string(polydisc_retries);
    m["frame_search_budget"] = std::to_string(frame_search_budget);
    m["explore_max_depth"] = std::to_string(explore_max_depth);
    m["fit_max_degree"] = std::to_string(fit_max_degree);
    m["seed"] = std::to_string(seed);
    return m;
}

} // namespace noether
