#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "noether/chain.hpp"
#include "noether/config.hpp"

namespace noether {

// Continuation state: where we are, the member values there, and the
// accumulated heuristic error (sum of accepted Taylor tails).
struct ChainState {
    std::vector<BigComplex> position;
    std::vector<BigComplex> values;
    BigFloat err;
    BigFloat radius_hint; // convergence-radius estimate from the last step, 0 = unknown
    long steps = 0;
};

// Compiled evaluator for one chain: the rhs polynomials are flattened into a
// multiplication tape once, then every Taylor step fills coefficient rows
// order by order. Not thread-safe (scratch buffers are reused).
class ChainRuntime {
public:
    ChainRuntime(ChainPtr chain, const RunConfig& cfg = RunConfig::defaults());

    const NoetherianChain& chain() const { return *chain_; }
    ChainPtr chain_ptr() const { return chain_; }
    const RunConfig& config() const { return cfg_; }

    ChainState initial_state() const;

    // One Taylor step of size h in direction dir (dir need not be unit).
    // Rejects (returns false, state untouched) when the tail does not reach
    // the step tolerance by max_order; on success updates state and its
    // radius hint.
    bool try_step(ChainState& s, const std::vector<BigComplex>& dir, const BigFloat& h);

    // Adaptive straight-line continuation; throws on domain exit, step
    // underflow (approaching a singularity), or step-budget exhaustion.
    void continue_to(ChainState& s, const std::vector<BigComplex>& target);

    // Polyline continuation from the basepoint.
    ChainState continue_along(const std::vector<std::vector<BigComplex>>& waypoints);

    // Value of a member polynomial combination at a state.
    struct EvalReport {
        BigComplex value;
        BigFloat err; // rounding + gradient-scaled continuation error
    };
    EvalReport eval(const Polynomial& f, const ChainState& s) const;
    BigComplex eval_value(const Polynomial& f, const ChainState& s) const;

    long steps_taken() const { return total_steps_; }

private:
    ChainPtr chain_;
    RunConfig cfg_;
    mpfr_prec_t prec_;
    BigFloat tol_;

    // tape: slots 0..V-1 are variable series, then one slot per product node
    struct Node {
        int a, b;
    };
    struct TermRef {
        BigComplex coeff;
        int slot; // -1: constant term
    };
    size_t nvars_ = 0;
    std::vector<Node> nodes_;
    std::vector<std::vector<TermRef>> poly_terms_; // [member*n + coord]
    std::vector<size_t> coord_slots_, member_slots_;

    // scratch
    std::vector<std::vector<BigComplex>> slot_series_;
    std::vector<std::vector<TermRef>> folded_; // per member, direction-folded
    long total_steps_ = 0;

    void build_tape();
    int power_slot(std::map<std::pair<size_t, unsigned>, int>& cache, size_t var, unsigned e);
    void fold_direction(const std::vector<BigComplex>& dir, const BigFloat& h);
};

// Single validated public step (the library-level primitive): checks the
// requested step against the safety fraction of the estimated local
// convergence radius and throws when it cannot be certified.
ChainState taylor_step(ChainRuntime& rt, const ChainState& s, const std::vector<BigComplex>& dir,
                       const BigFloat& step);

// Evaluation at a point: straight-line continuation from the basepoint.
ChainRuntime::EvalReport evaluate_at(ChainRuntime& rt, const Polynomial& f,
                                     const std::vector<BigComplex>& point);

struct SizeEstimate {
    BigFloat value; // >= 2
    int grid;
    BigFloat coord_part;  // exact sup of |x_j| over the domain
    BigFloat coeff_part;  // exact coefficient norm
    BigFloat member_part; // sampled sup of |phi_i|
};

// NS estimate: exact coordinate/coefficient parts, member part sampled on
// `grid` distinguished-boundary points (nested sequence, so enlarging the
// grid never decreases the estimate).
SizeEstimate noetherian_size(ChainRuntime& rt, int grid = 0);

// Function restricted to an affine line base + lambda*dir, with cached
// continuation state so that nearby successive calls are cheap.
class LineCursor {
public:
    LineCursor(std::shared_ptr<ChainRuntime> rt, Polynomial f, std::vector<BigComplex> base,
               std::vector<BigComplex> dir);

    BigComplex at(const BigComplex& lambda);
    ChainRuntime::EvalReport report_at(const BigComplex& lambda);
    void reset();

    const std::vector<BigComplex>& base() const { return base_; }
    const std::vector<BigComplex>& dir() const { return dir_; }
    std::vector<BigComplex> point(const BigComplex& lambda) const;

private:
    std::shared_ptr<ChainRuntime> rt_;
    Polynomial f_;
    std::vector<BigComplex> base_, dir_;
    bool have_state_ = false;
    BigComplex lambda_;
    ChainState state_;
};

// Any scalar map of one complex parameter: plain polynomials, chain
// functions along a line, oracles. The workhorse interface of the
// index/zero-counting layer.
using LineMap = std::function<BigComplex(const BigComplex&)>;

LineMap line_map(std::shared_ptr<LineCursor> cursor);
LineMap poly_line_map(Polynomial univariate, std::string var);

} // namespace noether
