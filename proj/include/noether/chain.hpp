#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "noether/complexbox.hpp"
#include "noether/polynomial.hpp"

#include "json.hpp"

namespace noether {

// A polynomially-closed system of analytic functions on a polydisc:
// members phi_1..phi_l whose partial derivatives are polynomial in the
// coordinates and the members themselves,
//     d(phi_i)/d(x_j) = rhs[i][j](x, phi),
// together with a basepoint and the member values there. Everything the
// numeric layer does (continuation, maxima, zero counting) consumes this
// struct; the closure operations produce new ones.
struct NoetherianChain {
    std::vector<std::string> coords;   // x variables, n of them
    std::vector<std::string> members;  // phi variables, l of them
    std::vector<std::vector<Polynomial>> rhs; // [member][coord]
    ComplexBox domain;                 // polydisc over the coords
    std::vector<BigComplex> basepoint;
    std::vector<BigComplex> initial_values;
    std::optional<mpq_class> declared_ns; // certified size bound, if known

    size_t n() const { return coords.size(); }
    size_t ell() const { return members.size(); }

    // max total degree over all rhs entries (0 for an empty/constant system)
    unsigned alpha() const;
    // max coefficient norm over all rhs entries
    mpq_class coeff_norm() const;

    // sorted union of coords and members; rhs polynomials are evaluated on
    // value vectors aligned to this ordering
    const std::vector<std::string>& all_vars() const;
    const std::vector<size_t>& coord_slots() const;  // index into all_vars per coord
    const std::vector<size_t>& member_slots() const; // index into all_vars per member
    std::vector<BigComplex> pack_values(const std::vector<BigComplex>& coord_vals,
                                        const std::vector<BigComplex>& member_vals) const;

    size_t coord_index(const std::string& name) const;  // throws if absent
    size_t member_index(const std::string& name) const;

    // structural checks: name disjointness, shape, rhs variables contained in
    // coords+members, basepoint inside the domain; throws on violation
    void validate() const;

    // derivative of p along coordinate j under the system:
    //   dp/dx_j + sum_k dp/dphi_k * rhs[k][j]
    Polynomial total_derivative(const Polynomial& p, size_t j) const;

    // a member name not colliding with anything in the chain
    std::string fresh_name(const std::string& base) const;

    bool same_system(const NoetherianChain& o) const; // symbolic equality

    nlohmann::json to_json() const;
    static NoetherianChain from_json(const nlohmann::json& j);

private:
    mutable std::vector<std::string> all_vars_;
    mutable std::vector<size_t> coord_slots_, member_slots_;
    void build_index() const;
};

using ChainPtr = std::shared_ptr<const NoetherianChain>;

// A function on the chain's domain given as a polynomial in the coordinates
// and members. Its degree is the actual degree of that polynomial; the
// closure operations additionally report lemma-level degree bounds through
// ChainParams.
struct NoetherianFunction {
    ChainPtr chain;
    Polynomial poly;

    unsigned degree() const { return poly.total_degree(); }
    void validate() const; // poly vars within chain vars

    nlohmann::json to_json() const;
};

// The size parameters (n, l, alpha, beta, NS) tracked by every closure
// operation. alpha/beta here follow the composition formulas of the
// underlying lemmas, so a replay of the operation log reproduces them even
// when the constructed polynomials happen to have smaller degree.
struct ChainParams {
    unsigned n = 0;
    unsigned ell = 0;
    unsigned alpha = 0;
    unsigned beta = 0;
    BigFloat ns; // >= 2 always

    nlohmann::json to_json() const;
    static ChainParams from_json(const nlohmann::json& j);
};

struct OpLogEntry {
    std::string op;
    std::vector<ChainParams> inputs;
    ChainParams output;
};

struct OpLog {
    std::vector<OpLogEntry> entries;
    void record(const std::string& op, std::vector<ChainParams> in, ChainParams out) {
        entries.push_back({op, std::move(in), std::move(out)});
    }
    nlohmann::json to_json() const;
};

struct IntegrabilityIssue {
    size_t member, coord_a, coord_b;
    Polynomial difference; // cross-derivative mismatch, identically 0 when consistent
};

struct IntegrabilityReport {
    bool consistent = true;
    std::vector<IntegrabilityIssue> issues;
};

// Symbolic cross-derivative check: D_b(rhs[i][a]) == D_a(rhs[i][b]) for all
// members i and coordinate pairs a < b, where D is total_derivative.
IntegrabilityReport verify_integrability(const NoetherianChain& c);

// serialization helpers shared by chain/state/report writers
nlohmann::json complex_to_json(const BigComplex& z);
BigComplex complex_from_json(const nlohmann::json& j);
nlohmann::json bigfloat_to_json(const BigFloat& x);
BigFloat bigfloat_from_json(const nlohmann::json& j);

} // namespace noether
