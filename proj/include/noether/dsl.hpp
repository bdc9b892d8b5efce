#pragma once

// A small analytic-expression language compiled through the chain closure
// algebra. parse/print handle the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ['-'] atom ['^' nat]
//   atom   := rational | ident | ident '(' args ')' | '(' expr ')'
// with D(e, x) reserved for derivation and i for the imaginary unit;
// rational literals like 3/4 are single tokens when written without spaces.
// compile() lowers an expression onto one ambient chain by instantiating
// catalog systems, then unions/combines/inverts/composes per the closure
// lemmas, recording every operation for independent replay.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "noether/catalog.hpp"
#include "noether/closure.hpp"

namespace noether {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { lit, imag, var, call, neg, add, sub, mul, div, derive };
    Kind kind;
    mpq_class lit;                // Kind::lit (parser output is always >= 0)
    std::string name;             // var and call names; derive's coordinate
    std::vector<ExprPtr> args;    // call arguments, or the 1-2 children
    std::optional<mpq_class> eps; // division margin; unset = policy decides

    // a call whose argument is more than a bare coordinate, i.e. a
    // composition in the closure sense
    bool composes() const;
};

ExprPtr expr_lit(mpq_class q);
ExprPtr expr_imag();
ExprPtr expr_var(std::string name);
ExprPtr expr_call(std::string name, std::vector<ExprPtr> args);
ExprPtr expr_unary(Expr::Kind k, ExprPtr a);                 // neg
ExprPtr expr_binary(Expr::Kind k, ExprPtr a, ExprPtr b);     // add/sub/mul/div
ExprPtr expr_derive(ExprPtr a, std::string coord);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

struct ParseError : std::runtime_error {
    size_t line, col;
    ParseError(const std::string& msg, size_t line_, size_t col_);
};

ExprPtr parse(const std::string& text);
std::string print(const ExprPtr& e);

// Declared compilation window: coordinates with their discs and a basepoint,
// all exact so serialized declarations stay reproducible.
struct DomainSpec {
    std::vector<std::string> coords;
    std::vector<GaussianRational> center;
    std::vector<mpq_class> radius;
    std::vector<GaussianRational> basepoint;

    void validate() const; // distinct coords, positive radii, basepoint inside
    ComplexBox box(mpfr_prec_t prec) const;
    std::vector<BigComplex> base(mpfr_prec_t prec) const;
};

// One `let name = expr on domain(x in D(c, r), ...) at basepoint(x = b, ...)`
// declaration per nonblank line; '#' starts a comment.
struct Declaration {
    std::string name;
    ExprPtr expr;
    DomainSpec domain;
};
std::vector<Declaration> parse_program(const std::string& text);

// Division margin policy: a fixed margin applies to every division without
// its own annotation; otherwise |denominator| is sampled over the domain and
// half the observed minimum is used.
struct EpsPolicy {
    std::optional<mpq_class> fixed;
};

struct CompileReport {
    NoetherianFunction fn;
    ChainParams params;
    OpLog log;

    nlohmann::json to_json() const;
};

CompileReport compile(const ExprPtr& e, const Catalog& catalog, const DomainSpec& domain,
                      const EpsPolicy& policy = {},
                      const RunConfig& cfg = RunConfig::defaults());

} // namespace noether
