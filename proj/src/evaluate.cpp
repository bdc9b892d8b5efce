#include "noether/evaluate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace noether {

ChainRuntime::ChainRuntime(ChainPtr chain, const RunConfig& cfg)
    : chain_(std::move(chain)), cfg_(cfg), prec_(cfg.precision_bits), tol_(cfg.step_tol) {
    chain_->validate();
    coord_slots_ = chain_->coord_slots();
    member_slots_ = chain_->member_slots();
    build_tape();
}

int ChainRuntime::power_slot(std::map<std::pair<size_t, unsigned>, int>& cache, size_t var,
                             unsigned e) {
    if (e == 1) return (int)var;
    auto key = std::make_pair(var, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int lower = power_slot(cache, var, e - 1);
    nodes_.push_back({lower, (int)var});
    int slot = (int)(nvars_ + nodes_.size() - 1);
    cache[key] = slot;
    return slot;
}

void ChainRuntime::build_tape() {
    const auto& names = chain_->all_vars();
    nvars_ = names.size();
    std::map<std::pair<size_t, unsigned>, int> pow_cache;
    std::map<std::pair<int, int>, int> mul_cache;
    auto mul = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        auto key = std::make_pair(a, b);
        auto it = mul_cache.find(key);
        if (it != mul_cache.end()) return it->second;
        nodes_.push_back({a, b});
        int slot = (int)(nvars_ + nodes_.size() - 1);
        mul_cache[key] = slot;
        return slot;
    };

    poly_terms_.resize(chain_->ell() * chain_->n());
    for (size_t i = 0; i < chain_->ell(); ++i)
        for (size_t j = 0; j < chain_->n(); ++j) {
            Polynomial p = chain_->rhs[i][j].aligned_to(names);
            auto& out = poly_terms_[i * chain_->n() + j];
            for (const auto& [exps, coeff] : p.terms()) {
                int slot = -1;
                for (size_t v = 0; v < exps.size(); ++v) {
                    if (!exps[v]) continue;
                    int f = power_slot(pow_cache, v, exps[v]);
                    slot = slot < 0 ? f : mul(slot, f);
                }
                out.push_back({coeff.to_complex(prec_), slot});
            }
        }
    folded_.resize(chain_->ell());
}

ChainState ChainRuntime::initial_state() const {
    ChainState s;
    s.position = chain_->basepoint;
    s.values = chain_->initial_values;
    s.err = BigFloat(0, prec_);
    s.radius_hint = BigFloat(0, prec_);
    return s;
}

void ChainRuntime::fold_direction(const std::vector<BigComplex>& dir, const BigFloat& h) {
    const size_t n = chain_->n();
    for (size_t i = 0; i < chain_->ell(); ++i) {
        auto& list = folded_[i];
        list.clear();
        std::map<int, BigComplex> acc;
        for (size_t j = 0; j < n; ++j) {
            if (dir[j].is_zero()) continue;
            BigComplex w = dir[j] * h;
            for (const auto& t : poly_terms_[i * n + j]) {
                auto [it, fresh] = acc.emplace(t.slot, w * t.coeff);
                if (!fresh) it->second += w * t.coeff;
            }
        }
        for (auto& [slot, c] : acc)
            if (!c.is_zero()) list.push_back({std::move(c), slot});
    }
}

bool ChainRuntime::try_step(ChainState& s, const std::vector<BigComplex>& dir, const BigFloat& h) {
    const size_t l = chain_->ell();
    const int maxP = std::max(6, cfg_.max_order);
    const size_t S = nvars_ + nodes_.size();

    fold_direction(dir, h);

    if (slot_series_.size() != S) slot_series_.assign(S, {});
    for (auto& row : slot_series_) {
        if ((int)row.size() < maxP + 2) row.assign(maxP + 2, BigComplex::zero(prec_));
        else
            for (auto& c : row) c = BigComplex::zero(prec_);
    }
    for (size_t j = 0; j < chain_->n(); ++j) {
        auto& row = slot_series_[coord_slots_[j]];
        row[0] = s.position[j];
        row[1] = dir[j] * h;
    }
    for (size_t i = 0; i < l; ++i) slot_series_[member_slots_[i]][0] = s.values[i];

    BigFloat scale(1, prec_);
    for (size_t i = 0; i < l; ++i) scale = max(scale, s.values[i].abs1());
    BigFloat thresh = tol_ * scale;
    BigFloat huge = BigFloat(1e60) * scale;

    std::vector<BigFloat> mag(maxP + 2, BigFloat(0, prec_));
    int small_run = (l == 0) ? 2 : 0; // no members: any step is exact
    int P = 1;                        // highest member order computed
    for (int k = 0; k + 1 <= maxP && small_run < 2; ++k) {
        for (size_t t = 0; t < nodes_.size(); ++t) {
            const auto& A = slot_series_[nodes_[t].a];
            const auto& B = slot_series_[nodes_[t].b];
            BigComplex acc = BigComplex::zero(prec_);
            for (int m = 0; m <= k; ++m) acc += A[m] * B[k - m];
            slot_series_[nvars_ + t][k] = acc;
        }
        BigFloat mk(0, prec_);
        for (size_t i = 0; i < l; ++i) {
            BigComplex acc = BigComplex::zero(prec_);
            for (const auto& t : folded_[i]) {
                if (t.slot < 0) {
                    if (k == 0) acc += t.coeff;
                } else {
                    acc += t.coeff * slot_series_[t.slot][k];
                }
            }
            BigFloat inv(1, prec_);
            inv /= BigFloat(k + 1, prec_);
            BigComplex c = inv * acc;
            slot_series_[member_slots_[i]][k + 1] = c;
            mk = max(mk, c.abs1());
        }
        P = k + 1;
        mag[P] = mk;
        if (mk > huge) return false;
        small_run = (mk <= thresh) ? small_run + 1 : 0;
    }

    BigFloat tail = mag[P] + (P >= 1 ? mag[P - 1] : BigFloat(0));
    if (small_run < 2) {
        // ran out of orders; accept only on clear decay
        if (!(tail <= thresh)) return false;
    }

    // radius estimate from coefficient decay (series is scaled by h, so a
    // decay ratio q per order means radius ~ h/q)
    BigFloat tiny = BigFloat(1e-70) * scale;
    int kmax = 0;
    for (int k = 1; k <= P; ++k)
        if (mag[k] > tiny) kmax = k;
    BigFloat radius(0, prec_);
    if (kmax <= 2) {
        radius = abs(h) * BigFloat(1 << 20); // effectively unbounded
    } else {
        int k0 = std::max(1, kmax - 6);
        BigFloat q = mag[kmax] / max(mag[k0], tiny);
        // q^(1/(kmax-k0))
        BigFloat root = exp(log(max(q, BigFloat(1e-70))) / BigFloat(kmax - k0));
        radius = root >= BigFloat(1) ? abs(h) : abs(h) / root;
    }

    for (size_t j = 0; j < chain_->n(); ++j) s.position[j] += dir[j] * h;
    for (size_t i = 0; i < l; ++i) {
        const auto& row = slot_series_[member_slots_[i]];
        BigComplex acc = BigComplex::zero(prec_);
        for (int k = P; k >= 0; --k) acc += row[k];
        s.values[i] = acc;
    }
    s.err += BigFloat(2) * tail;
    s.radius_hint = radius;
    s.steps++;
    total_steps_++;
    return true;
}

void ChainRuntime::continue_to(ChainState& s, const std::vector<BigComplex>& target) {
    if (target.size() != chain_->n()) throw std::invalid_argument("target dimension mismatch");
    BigFloat slack = BigFloat(1e-20);
    for (const auto& r : chain_->domain.radius) slack = max(slack, r * BigFloat(1e-18));
    if (!chain_->domain.contains(target, slack))
        throw std::domain_error("continuation target outside the chain domain");

    long budget = cfg_.max_steps;
    for (;;) {
        BigFloat dist(0, prec_);
        std::vector<BigComplex> delta(chain_->n());
        for (size_t j = 0; j < chain_->n(); ++j) {
            delta[j] = target[j] - s.position[j];
            dist = hypot(dist, delta[j].abs());
        }
        if (dist <= BigFloat(1e-45) * (BigFloat(1) + dist)) {
            s.position = target;
            return;
        }
        BigFloat inv = BigFloat(1) / dist;
        for (auto& d : delta) d = inv * d;

        BigFloat h = dist;
        if (s.radius_hint > BigFloat(0)) h = min(h, BigFloat(cfg_.step_safety) * s.radius_hint);
        for (;;) {
            if (--budget < 0) throw std::runtime_error("continuation step budget exhausted");
            if (try_step(s, delta, h)) break;
            h = h.mul_2si(-1);
            if (h < BigFloat(1e-45) * (BigFloat(1) + dist))
                throw std::runtime_error("continuation step underflow (singularity nearby?)");
        }
        if (h == dist) {
            s.position = target;
            return;
        }
    }
}

ChainState ChainRuntime::continue_along(const std::vector<std::vector<BigComplex>>& waypoints) {
    ChainState s = initial_state();
    for (const auto& wp : waypoints) continue_to(s, wp);
    return s;
}

ChainRuntime::EvalReport ChainRuntime::eval(const Polynomial& f, const ChainState& s) const {
    Polynomial g = f.aligned_to(chain_->all_vars());
    std::vector<BigComplex> point = chain_->pack_values(s.position, s.values);
    auto base = g.eval_with_bound(point);
    // continuation error enters through the member values; scale by the
    // l1 norm of the gradient at the point
    BigFloat grad(0, prec_);
    if (!(s.err == BigFloat(0)))
        for (const auto& v : g.vars()) {
            Polynomial d = g.derivative(v);
            if (!d.is_zero()) grad += d.eval(point).abs();
        }
    return {base.value, base.error_bound + grad * s.err};
}

BigComplex ChainRuntime::eval_value(const Polynomial& f, const ChainState& s) const {
    Polynomial g = f.aligned_to(chain_->all_vars());
    return g.eval(chain_->pack_values(s.position, s.values));
}

ChainState taylor_step(ChainRuntime& rt, const ChainState& s, const std::vector<BigComplex>& dir,
                       const BigFloat& step) {
    BigFloat safety(rt.config().step_safety);
    if (s.radius_hint > BigFloat(0) && step > safety * s.radius_hint) {
        // a-priori floor: steps within safety * NS^-kappa are always admissible
        bool excused = false;
        if (rt.chain().declared_ns) {
            BigFloat ns(*rt.chain().declared_ns);
            BigFloat floor = safety * exp(BigFloat(-rt.config().kappa) * log(ns));
            excused = step <= floor;
        }
        if (!excused)
            throw std::invalid_argument("taylor_step: step exceeds the certified radius fraction");
    }
    ChainState out = s;
    if (!rt.try_step(out, dir, step))
        throw std::runtime_error("taylor_step: Taylor tail did not converge at this step size");
    return out;
}

ChainRuntime::EvalReport evaluate_at(ChainRuntime& rt, const Polynomial& f,
                                     const std::vector<BigComplex>& point) {
    ChainState s = rt.initial_state();
    rt.continue_to(s, point);
    return rt.eval(f, s);
}

SizeEstimate noetherian_size(ChainRuntime& rt, int grid) {
    const auto& c = rt.chain();
    if (grid <= 0) grid = rt.config().ns_grid;
    SizeEstimate est;
    est.grid = grid;
    est.coord_part = BigFloat(0);
    for (size_t j = 0; j < c.n(); ++j)
        est.coord_part = max(est.coord_part, c.domain.center[j].abs() + c.domain.radius[j]);
    est.coeff_part = BigFloat(c.coeff_norm());
    est.member_part = BigFloat(0);
    for (const auto& v : c.initial_values) est.member_part = max(est.member_part, v.abs());
    for (int g = 0; g < grid; ++g) {
        ChainState s = rt.initial_state();
        rt.continue_to(s, c.domain.boundary_sample((size_t)g));
        for (const auto& v : s.values) est.member_part = max(est.member_part, v.abs());
    }
    est.value = max(BigFloat(2), max(est.coord_part, max(est.coeff_part, est.member_part)));
    return est;
}

LineCursor::LineCursor(std::shared_ptr<ChainRuntime> rt, Polynomial f, std::vector<BigComplex> base,
                       std::vector<BigComplex> dir)
    : rt_(std::move(rt)), f_(std::move(f)), base_(std::move(base)), dir_(std::move(dir)) {
    f_ = f_.aligned_to(rt_->chain().all_vars());
}

std::vector<BigComplex> LineCursor::point(const BigComplex& lambda) const {
    std::vector<BigComplex> p(base_.size());
    for (size_t j = 0; j < base_.size(); ++j) p[j] = base_[j] + lambda * dir_[j];
    return p;
}

BigComplex LineCursor::at(const BigComplex& lambda) {
    auto target = point(lambda);
    try {
        if (!have_state_) {
            state_ = rt_->initial_state();
            have_state_ = true;
        }
        rt_->continue_to(state_, target);
    } catch (...) {
        have_state_ = false;
        throw;
    }
    lambda_ = lambda;
    return rt_->eval_value(f_, state_);
}

ChainRuntime::EvalReport LineCursor::report_at(const BigComplex& lambda) {
    at(lambda);
    return rt_->eval(f_, state_);
}

void LineCursor::reset() { have_state_ = false; }

LineMap line_map(std::shared_ptr<LineCursor> cursor) {
    return [cursor](const BigComplex& z) { return cursor->at(z); };
}

LineMap poly_line_map(Polynomial p, std::string var) {
    auto u = std::make_shared<Polynomial>(p.aligned_to({var}));
    return [u](const BigComplex& z) { return u->eval({z}); };
}

} // namespace noether
