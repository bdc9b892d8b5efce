#include "noether/chain.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace noether {

using nlohmann::json;

unsigned NoetherianChain::alpha() const {
    unsigned a = 0;
    for (const auto& row : rhs)
        for (const auto& p : row) a = std::max(a, p.total_degree());
    return a;
}

mpq_class NoetherianChain::coeff_norm() const {
    mpq_class m = 0;
    for (const auto& row : rhs)
        for (const auto& p : row) {
            mpq_class v = p.max_norm();
            if (v > m) m = v;
        }
    return m;
}

void NoetherianChain::build_index() const {
    all_vars_ = coords;
    all_vars_.insert(all_vars_.end(), members.begin(), members.end());
    std::sort(all_vars_.begin(), all_vars_.end());
    auto slot = [&](const std::string& name) {
        return (size_t)(std::lower_bound(all_vars_.begin(), all_vars_.end(), name) -
                        all_vars_.begin());
    };
    coord_slots_.clear();
    member_slots_.clear();
    for (const auto& c : coords) coord_slots_.push_back(slot(c));
    for (const auto& m : members) member_slots_.push_back(slot(m));
}

const std::vector<std::string>& NoetherianChain::all_vars() const {
    if (all_vars_.size() != coords.size() + members.size()) build_index();
    return all_vars_;
}

const std::vector<size_t>& NoetherianChain::coord_slots() const {
    all_vars();
    return coord_slots_;
}

const std::vector<size_t>& NoetherianChain::member_slots() const {
    all_vars();
    return member_slots_;
}

std::vector<BigComplex> NoetherianChain::pack_values(
    const std::vector<BigComplex>& coord_vals, const std::vector<BigComplex>& member_vals) const {
    std::vector<BigComplex> out(all_vars().size());
    for (size_t j = 0; j < coords.size(); ++j) out[coord_slots_[j]] = coord_vals[j];
    for (size_t i = 0; i < members.size(); ++i) out[member_slots_[i]] = member_vals[i];
    return out;
}

size_t NoetherianChain::coord_index(const std::string& name) const {
    auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end()) throw std::invalid_argument("no such coordinate: " + name);
    return (size_t)(it - coords.begin());
}

size_t NoetherianChain::member_index(const std::string& name) const {
    auto it = std::find(members.begin(), members.end(), name);
    if (it == members.end()) throw std::invalid_argument("no such member: " + name);
    return (size_t)(it - members.begin());
}

void NoetherianChain::validate() const {
    if (coords.empty()) throw std::invalid_argument("chain needs at least one coordinate");
    std::set<std::string> seen;
    for (const auto& c : coords) {
        if (c.empty()) throw std::invalid_argument("empty coordinate name");
        if (!seen.insert(c).second) throw std::invalid_argument("duplicate name: " + c);
    }
    for (const auto& m : members) {
        if (m.empty()) throw std::invalid_argument("empty member name");
        if (!seen.insert(m).second) throw std::invalid_argument("duplicate name: " + m);
    }
    if (rhs.size() != members.size()) throw std::invalid_argument("rhs row count != member count");
    for (const auto& row : rhs)
        if (row.size() != coords.size()) throw std::invalid_argument("rhs column count != coord count");
    for (const auto& row : rhs)
        for (const auto& p : row)
            for (const auto& v : p.vars())
                if (!p.degree_in(v)) {
                    continue; // unused slot in the poly's own var list is fine
                } else if (!seen.count(v)) {
                    throw std::invalid_argument("rhs mentions unknown variable: " + v);
                }
    if (domain.dim() != coords.size()) throw std::invalid_argument("domain dimension != coord count");
    if (basepoint.size() != coords.size()) throw std::invalid_argument("basepoint dimension mismatch");
    if (initial_values.size() != members.size())
        throw std::invalid_argument("initial value count mismatch");
    if (!domain.contains(basepoint, BigFloat(1e-30)))
        throw std::invalid_argument("basepoint outside domain");
    if (declared_ns && *declared_ns < 2)
        throw std::invalid_argument("declared size bound below 2");
}

Polynomial NoetherianChain::total_derivative(const Polynomial& p, size_t j) const {
    Polynomial out = p.derivative(coords[j]);
    for (size_t k = 0; k < members.size(); ++k) {
        Polynomial dk = p.derivative(members[k]);
        if (dk.is_zero()) continue;
        out = out + dk * rhs[k][j];
    }
    return out;
}

std::string NoetherianChain::fresh_name(const std::string& base) const {
    std::set<std::string> used(coords.begin(), coords.end());
    used.insert(members.begin(), members.end());
    if (!used.count(base)) return base;
    for (int k = 2;; ++k) {
        std::string cand = base + "_" + std::to_string(k);
        if (!used.count(cand)) return cand;
    }
}

bool NoetherianChain::same_system(const NoetherianChain& o) const {
    if (coords != o.coords || members != o.members) return false;
    if (rhs.size() != o.rhs.size()) return false;
    for (size_t i = 0; i < rhs.size(); ++i)
        for (size_t j = 0; j < rhs[i].size(); ++j)
            if (rhs[i][j] != o.rhs[i][j]) return false;
    if (!(domain == o.domain)) return false;
    for (size_t j = 0; j < basepoint.size(); ++j)
        if (!(basepoint[j] == o.basepoint[j])) return false;
    for (size_t i = 0; i < initial_values.size(); ++i)
        if (!(initial_values[i] == o.initial_values[i])) return false;
    return true;
}

void NoetherianFunction::validate() const {
    if (!chain) throw std::invalid_argument("function without chain");
    const auto& names = chain->all_vars();
    for (const auto& v : poly.vars())
        if (poly.degree_in(v) &&
            !std::binary_search(names.begin(), names.end(), v))
            throw std::invalid_argument("function mentions unknown variable: " + v);
}

IntegrabilityReport verify_integrability(const NoetherianChain& c) {
    IntegrabilityReport rep;
    for (size_t i = 0; i < c.ell(); ++i)
        for (size_t a = 0; a < c.n(); ++a)
            for (size_t b = a + 1; b < c.n(); ++b) {
                Polynomial lhs = c.total_derivative(c.rhs[i][a], b);
                Polynomial rhsd = c.total_derivative(c.rhs[i][b], a);
                if (lhs != rhsd) {
                    rep.consistent = false;
                    rep.issues.push_back({i, a, b, lhs - rhsd});
                }
            }
    return rep;
}

// ---- serialization ----

json bigfloat_to_json(const BigFloat& x) { return x.to_hex(); }

namespace {

// Precision wide enough to hold every mantissa digit of a hex literal, so
// values produced at elevated working precision parse back exactly.
mpfr_prec_t hex_literal_prec(const std::string& s) {
    auto x = s.find('x');
    if (x == std::string::npos) return 0;
    long digits = 0;
    for (size_t i = x + 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == 'p' || c == 'P') break;
        if (c != '.') ++digits;
    }
    return std::max<mpfr_prec_t>(4 * digits, BigFloat::default_precision());
}

BigFloat parse_exact(const std::string& s) { return BigFloat(s, hex_literal_prec(s)); }

}  // namespace

BigFloat bigfloat_from_json(const json& j) {
    return parse_exact(j.get<std::string>());
}

json complex_to_json(const BigComplex& z) {
    return json::array({z.re.to_hex(), z.im.to_hex()});
}

BigComplex complex_from_json(const json& j) {
    return BigComplex(parse_exact(j.at(0).get<std::string>()), parse_exact(j.at(1).get<std::string>()));
}

json NoetherianChain::to_json() const {
    json j;
    j["version"] = 1;
    j["coords"] = coords;
    j["members"] = members;
    json rows = json::array();
    for (const auto& row : rhs) {
        json r = json::array();
        for (const auto& p : row) r.push_back(p.to_string());
        rows.push_back(std::move(r));
    }
    j["rhs"] = std::move(rows);
    json dom;
    dom["center"] = json::array();
    dom["radius"] = json::array();
    for (const auto& c : domain.center) dom["center"].push_back(complex_to_json(c));
    for (const auto& r : domain.radius) dom["radius"].push_back(bigfloat_to_json(r));
    j["domain"] = std::move(dom);
    j["basepoint"] = json::array();
    for (const auto& b : basepoint) j["basepoint"].push_back(complex_to_json(b));
    j["initial_values"] = json::array();
    for (const auto& v : initial_values) j["initial_values"].push_back(complex_to_json(v));
    if (declared_ns) j["declared_ns"] = declared_ns->get_str();
    return j;
}

NoetherianChain NoetherianChain::from_json(const json& j) {
    NoetherianChain c;
    c.coords = j.at("coords").get<std::vector<std::string>>();
    c.members = j.at("members").get<std::vector<std::string>>();
    for (const auto& row : j.at("rhs")) {
        std::vector<Polynomial> r;
        for (const auto& s : row) r.push_back(parse_polynomial(s.get<std::string>()));
        c.rhs.push_back(std::move(r));
    }
    std::vector<BigComplex> centers;
    std::vector<BigFloat> radii;
    for (const auto& e : j.at("domain").at("center")) centers.push_back(complex_from_json(e));
    for (const auto& e : j.at("domain").at("radius")) radii.push_back(bigfloat_from_json(e));
    c.domain = ComplexBox(std::move(centers), std::move(radii));
    for (const auto& e : j.at("basepoint")) c.basepoint.push_back(complex_from_json(e));
    for (const auto& e : j.at("initial_values")) c.initial_values.push_back(complex_from_json(e));
    if (j.contains("declared_ns")) c.declared_ns = mpq_class(j.at("declared_ns").get<std::string>(), 10);
    c.validate();
    return c;
}

json NoetherianFunction::to_json() const {
    json j;
    j["chain"] = chain->to_json();
    j["poly"] = poly.to_string();
    return j;
}

json ChainParams::to_json() const {
    json j;
    j["n"] = n;
    j["ell"] = ell;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["ns"] = ns.to_string();
    return j;
}

ChainParams ChainParams::from_json(const json& j) {
    ChainParams p;
    p.n = j.at("n").get<unsigned>();
    p.ell = j.at("ell").get<unsigned>();
    p.alpha = j.at("alpha").get<unsigned>();
    p.beta = j.at("beta").get<unsigned>();
    p.ns = BigFloat(j.at("ns").get<std::string>());
    return p;
}

json OpLog::to_json() const {
    json arr = json::array();
    for (const auto& e : entries) {
        json je;
        je["op"] = e.op;
        je["inputs"] = json::array();
        for (const auto& p : e.inputs) je["inputs"].push_back(p.to_json());
        je["output"] = e.output.to_json();
        arr.push_back(std::move(je));
    }
    return arr;
}

} // namespace noether
