#include "noether/groebner.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace noether {

namespace {

using Expo = Polynomial::Exponents;

unsigned expo_degree(const Expo& e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool divides(const Expo& a, const Expo& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Expo expo_sub(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Expo expo_lcm(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

bool expo_coprime(const Expo& a, const Expo& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return false;
    return true;
}

Polynomial monomial(const std::vector<std::string>& vars, const Expo& e,
                    const GaussianRational& c) {
    Polynomial m(vars);
    m.add_term(e, c);
    return m;
}

struct Lead {
    Expo e;
    GaussianRational c;
};

Lead leading_term(const Polynomial& p, const TermOrder& ord) {
    const auto& ts = p.terms();
    auto best = ts.begin();
    for (auto it = std::next(ts.begin()); it != ts.end(); ++it)
        if (ord.less(best->first, it->first)) best = it;
    return {best->first, best->second};
}

} // namespace

TermOrder TermOrder::degrevlex(std::vector<std::string> vars,
                               const std::vector<std::string>& last) {
    TermOrder ord;
    ord.vars = std::move(vars);
    std::vector<std::string> head, tail;
    for (const auto& v : ord.vars)
        if (std::find(last.begin(), last.end(), v) == last.end()) head.push_back(v);
    for (const auto& v : last)
        if (std::find(ord.vars.begin(), ord.vars.end(), v) != ord.vars.end()) tail.push_back(v);
    ord.sig.resize(ord.vars.size());
    for (size_t i = 0; i < ord.vars.size(); ++i) {
        auto h = std::find(head.begin(), head.end(), ord.vars[i]);
        if (h != head.end())
            ord.sig[i] = size_t(h - head.begin());
        else
            ord.sig[i] = head.size() +
                         size_t(std::find(tail.begin(), tail.end(), ord.vars[i]) - tail.begin());
    }
    return ord;
}

bool TermOrder::less(const Expo& a, const Expo& b) const {
    unsigned da = expo_degree(a), db = expo_degree(b);
    if (da != db) return da < db;
    // Reverse scan over significance: the monomial with the larger exponent
    // at the least significant difference is the smaller one.
    std::vector<long> diff(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) diff[sig[i]] = long(a[i]) - long(b[i]);
    for (size_t s = a.size(); s-- > 0;)
        if (diff[s] != 0) return diff[s] > 0;
    return false;
}

Membership GroebnerBasis::reduce(const Polynomial& f) const {
    Membership out;
    out.remainder = Polynomial(order.vars);
    std::vector<Polynomial> quot(basis.size(), Polynomial(order.vars));
    Polynomial work = f.aligned_to(order.vars);
    while (!work.is_zero()) {
        Lead lt = leading_term(work, order);
        bool hit = false;
        for (size_t i = 0; i < basis.size(); ++i) {
            Lead lg = leading_term(basis[i].p, order);
            if (!divides(lg.e, lt.e)) continue;
            Polynomial m = monomial(order.vars, expo_sub(lt.e, lg.e), lt.c / lg.c);
            quot[i] = quot[i] + m;
            work = work - m * basis[i].p;
            hit = true;
            break;
        }
        if (!hit) {
            Polynomial m = monomial(order.vars, lt.e, lt.c);
            out.remainder = out.remainder + m;
            work = work - m;
        }
    }
    out.member = out.remainder.is_zero();
    out.cofactors.assign(gens.size(), Polynomial(order.vars));
    for (size_t i = 0; i < basis.size(); ++i) {
        if (quot[i].is_zero()) continue;
        for (size_t g = 0; g < gens.size(); ++g)
            out.cofactors[g] = out.cofactors[g] + quot[i] * basis[i].rep[g];
    }
    return out;
}

GroebnerBasis buchberger(const std::vector<Polynomial>& gens, TermOrder order,
                         const RunConfig& cfg) {
    GroebnerBasis gb;
    gb.order = std::move(order);
    for (const auto& g : gens) gb.gens.push_back(g.aligned_to(gb.order.vars));

    auto tracked_reduce = [&](TrackedPoly f) -> TrackedPoly {
        // Same loop as Membership reduce, but keeps the representation.
        Polynomial rem(gb.order.vars);
        while (!f.p.is_zero()) {
            Lead lt = leading_term(f.p, gb.order);
            bool hit = false;
            for (const auto& b : gb.basis) {
                Lead lg = leading_term(b.p, gb.order);
                if (!divides(lg.e, lt.e)) continue;
                Polynomial m = monomial(gb.order.vars, expo_sub(lt.e, lg.e), lt.c / lg.c);
                f.p = f.p - m * b.p;
                for (size_t g = 0; g < f.rep.size(); ++g)
                    f.rep[g] = f.rep[g] - m * b.rep[g];
                hit = true;
                break;
            }
            if (!hit) {
                Polynomial m = monomial(gb.order.vars, lt.e, lt.c);
                rem = rem + m;
                f.p = f.p - m;
            }
        }
        f.p = std::move(rem);
        return f;
    };

    auto monic = [&](TrackedPoly t) {
        GaussianRational lc = leading_term(t.p, gb.order).c;
        GaussianRational inv = GaussianRational(1) / lc;
        t.p = t.p.scaled(inv);
        for (auto& r : t.rep) r = r.scaled(inv);
        return t;
    };

    std::deque<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < gb.gens.size(); ++i) {
        if (gb.gens[i].is_zero()) continue;
        TrackedPoly t;
        t.p = gb.gens[i];
        t.rep.assign(gb.gens.size(), Polynomial(gb.order.vars));
        t.rep[i] = Polynomial::constant(GaussianRational(1), gb.order.vars);
        t = tracked_reduce(std::move(t));
        if (t.p.is_zero()) continue;
        t = monic(std::move(t));
        for (size_t j = 0; j < gb.basis.size(); ++j) pairs.emplace_back(j, gb.basis.size());
        gb.basis.push_back(std::move(t));
    }

    while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        Lead li = leading_term(gb.basis[i].p, gb.order);
        Lead lj = leading_term(gb.basis[j].p, gb.order);
        if (expo_coprime(li.e, lj.e)) continue; // first Buchberger criterion
        Expo l = expo_lcm(li.e, lj.e);
        Polynomial mi = monomial(gb.order.vars, expo_sub(l, li.e), GaussianRational(1) / li.c);
        Polynomial mj = monomial(gb.order.vars, expo_sub(l, lj.e), GaussianRational(1) / lj.c);
        TrackedPoly s;
        s.p = mi * gb.basis[i].p - mj * gb.basis[j].p;
        s.rep.assign(gb.gens.size(), Polynomial(gb.order.vars));
        for (size_t g = 0; g < gb.gens.size(); ++g)
            s.rep[g] = mi * gb.basis[i].rep[g] - mj * gb.basis[j].rep[g];
        s = tracked_reduce(std::move(s));
        if (s.p.is_zero()) continue;
        if (s.p.total_degree() > unsigned(cfg.groebner_max_degree) ||
            gb.basis.size() >= size_t(cfg.groebner_max_basis)) {
            gb.complete = false;
            break;
        }
        s = monic(std::move(s));
        for (size_t m = 0; m < gb.basis.size(); ++m) pairs.emplace_back(m, gb.basis.size());
        gb.basis.push_back(std::move(s));
    }

    if (!gb.complete) return gb;

    // Minimalize: drop elements whose leading monomial another one divides.
    std::vector<char> keep(gb.basis.size(), 1);
    for (size_t i = 0; i < gb.basis.size(); ++i) {
        Lead li = leading_term(gb.basis[i].p, gb.order);
        for (size_t j = 0; j < gb.basis.size(); ++j) {
            if (i == j || !keep[j]) continue;
            Lead lj = leading_term(gb.basis[j].p, gb.order);
            if (divides(lj.e, li.e) && (lj.e != li.e || j < i)) {
                keep[i] = 0;
                break;
            }
        }
    }
    std::vector<TrackedPoly> kept;
    for (size_t i = 0; i < gb.basis.size(); ++i)
        if (keep[i]) kept.push_back(std::move(gb.basis[i]));
    gb.basis = std::move(kept);

    // Tail-reduce each element against the others: the reduced basis is the
    // canonical one for the ideal and order, so results are deterministic.
    for (size_t i = 0; i < gb.basis.size(); ++i) {
        TrackedPoly cur = std::move(gb.basis[i]);
        GroebnerBasis rest;
        rest.order = gb.order;
        rest.gens = gb.gens;
        for (size_t j = 0; j < gb.basis.size(); ++j)
            if (j != i) rest.basis.push_back(gb.basis[j]);
        // Reuse the tracked reduction against the remaining elements.
        Polynomial rem(gb.order.vars);
        while (!cur.p.is_zero()) {
            Lead lt = leading_term(cur.p, gb.order);
            bool hit = false;
            for (const auto& b : rest.basis) {
                if (b.p.is_zero()) continue;
                Lead lg = leading_term(b.p, gb.order);
                if (!divides(lg.e, lt.e)) continue;
                Polynomial m = monomial(gb.order.vars, expo_sub(lt.e, lg.e), lt.c / lg.c);
                cur.p = cur.p - m * b.p;
                for (size_t g = 0; g < cur.rep.size(); ++g)
                    cur.rep[g] = cur.rep[g] - m * b.rep[g];
                hit = true;
                break;
            }
            if (!hit) {
                Polynomial m = monomial(gb.order.vars, lt.e, lt.c);
                rem = rem + m;
                cur.p = cur.p - m;
            }
        }
        cur.p = std::move(rem);
        gb.basis[i] = std::move(cur);
    }

    // Deterministic presentation: ascending leading monomials.
    std::sort(gb.basis.begin(), gb.basis.end(), [&](const TrackedPoly& a, const TrackedPoly& b) {
        return gb.order.less(leading_term(a.p, gb.order).e, leading_term(b.p, gb.order).e);
    });
    return gb;
}

} // namespace noether
