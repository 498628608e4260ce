#pragma once

// BPS and attractor invariants from framed series.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "laurent.hpp"
#include "matchings.hpp"
#include "parallel.hpp"
#include "qspace.hpp"

namespace moltendt {

struct DegLex {
    bool operator()(const DimVec& a, const DimVec& b) const {
        int ta = total(a), tb = total(b);
        if (ta != tb) return ta < tb;
        return a < b;
    }
};

using Sparse = std::map<DimVec, VRational, DegLex>;

struct BpsTable {
    std::string tag; // "theta", "attractor", "central"
    std::vector<Q> theta;
    int bound = 0;
    Sparse omega;

    VRational at(const DimVec& d) const {
        auto it = omega.find(d);
        return it == omega.end() ? VRational() : it->second;
    }
    void add(const DimVec& d, const VRational& c) {
        if (c.is_zero()) return;
        auto& slot = omega[d];
        slot += c;
        if (slot.is_zero()) omega.erase(d);
    }
    BpsTable bar() const {
        BpsTable r = *this;
        for (auto& [d, c] : r.omega) c = c.bar();
        return r;
    }
    BpsTable S(int node, int sign) const {
        BpsTable r = *this;
        for (auto& [d, c] : r.omega) c = c.times_monomial(sign * d[node]);
        return r;
    }
    friend BpsTable operator-(const BpsTable& a, const BpsTable& b) {
        BpsTable r = a;
        for (auto& [d, c] : b.omega) r.add(d, -c);
        return r;
    }
    friend BpsTable operator+(const BpsTable& a, const BpsTable& b) {
        BpsTable r = a;
        for (auto& [d, c] : b.omega) r.add(d, c);
        return r;
    }
};

inline DimVec scaled_vec(const DimVec& d, int k) {
    DimVec r = d;
    for (int& x : r) x *= k;
    return r;
}
inline DimVec add_vec(const DimVec& a, const DimVec& b) {
    DimVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}
inline bool is_multiple_of_delta(const DimVec& d) {
    return std::all_of(d.begin(), d.end(), [&](int x) { return x == d[0]; });
}

// c * sum_{n >= n0} x^{n delta + base}, truncated
inline void add_delta_tower(BpsTable& t, const DimVec& delta, const DimVec& base, int n0, const VRational& c) {
    for (int n = n0;; ++n) {
        DimVec d = add_vec(scaled_vec(delta, n), base);
        if (total(d) > t.bound) break;
        if (total(d) == 0) continue;
        t.add(d, c);
    }
}

// ---- closed forms ----

inline VRational sqrtL(std::map<int, long> terms) { return VRational(from_sqrtL(terms)); }

inline BpsTable delta_omega_correction(const DiagramProfile& P, const std::vector<int>& interval, int bound) {
    const int ns = static_cast<int>(P.K.size());
    if (interval.empty() || static_cast<int>(interval.size()) >= ns) throw validation_error("InvalidInterval", "interval must be a nonempty strict subset of the sides");
    long sk = 0;
    for (int z : interval) {
        if (z < 0 || z >= ns) throw validation_error("InvalidInterval", "side index out of range");
        sk += P.K[z];
    }
    BpsTable t{"central", {}, bound, {}};
    DimVec zero(P.delta.size(), 0);
    add_delta_tower(t, P.delta, zero, 1, sqrtL({{3, -1}, {1, -(sk - 2)}, {-1, sk - 1}}));
    auto c = sqrtL({{1, -1}, {-1, 1}});
    for (int z : interval)
        for (auto& a : P.alphas[z]) add_delta_tower(t, P.delta, a, 0, c);
    return t;
}

inline VRational universal_ndelta(const DiagramProfile& P) {
    return sqrtL({{3, -1}, {1, -(P.b - 3 + P.interior)}, {-1, -P.interior}});
}

// Universal part: (nδ term) - L^{1/2} sum_z sum_{k != k'} sum_n x^{nδ + α}
inline BpsTable asymmetric_part(const DiagramProfile& P, int bound) {
    BpsTable t{"central", {}, bound, {}};
    DimVec zero(P.delta.size(), 0);
    add_delta_tower(t, P.delta, zero, 1, universal_ndelta(P));
    auto c = sqrtL({{1, -1}});
    for (auto& side : P.alphas)
        for (auto& a : side) add_delta_tower(t, P.delta, a, 0, c);
    return t;
}

// which: inv2-adjacent, inv2-generic, inv1:<z>, omega-ndelta, asym-part, conjecture
inline BpsTable reference_series(const DiagramProfile& P, const std::string& which, int bound) {
    BpsTable t{"central", {}, bound, {}};
    DimVec zero(P.delta.size(), 0);
    if (which == "inv2-adjacent") {
        add_delta_tower(t, P.delta, zero, 1, sqrtL({{3, -1}, {1, 2}, {-1, -1}}));
    } else if (which == "inv2-generic") {
        add_delta_tower(t, P.delta, zero, 1, sqrtL({{3, -1}, {1, 3}, {-1, -3}, {-3, 1}}));
    } else if (which.rfind("inv1:", 0) == 0) {
        int z = -1;
        try {
            z = std::stoi(which.substr(5));
        } catch (...) {
        }
        if (z < 0 || z >= static_cast<int>(P.K.size())) throw validation_error("UnknownFormula", "bad side in " + which);
        long K = P.K[z];
        add_delta_tower(t, P.delta, zero, 1, sqrtL({{3, -1}, {1, -(K - 2)}, {-1, K - 1}}));
        auto c = sqrtL({{1, -1}, {-1, 1}});
        for (auto& a : P.alphas[z]) add_delta_tower(t, P.delta, a, 0, c);
    } else if (which == "omega-ndelta") {
        add_delta_tower(t, P.delta, zero, 1, universal_ndelta(P));
    } else if (which == "asym-part") {
        t = asymmetric_part(P, bound);
    } else if (which == "conjecture") {
        if (P.interior < 1) throw validation_error("UnknownFormula", "the attractor conjecture needs an interior lattice point");
        t = asymmetric_part(P, bound);
        for (std::size_t i = 0; i < P.delta.size(); ++i) {
            DimVec e = zero;
            e[i] = 1;
            if (bound >= 1) t.add(e, VRational(1));
        }
        t.tag = "attractor";
    } else {
        throw validation_error("UnknownFormula", "unknown reference series '" + which + "'");
    }
    return t;
}

// ---- framed and unframed series ----

// Z_i = S_{-i}[Exp(sum_d ΔΩ_d (v^{2 d_i} - 1)/(v - v^{-1}) x^d)] Z_nil
inline QSeries corrected_framed_series(const QSeries& Znil, const BpsTable& dOmega, int node, AdamsRule rule = AdamsRule::euler_twisted) {
    QSeries f(Znil.shape());
    const LPoly den = v_minus_vinv();
    for (auto& [d, c] : dOmega.omega) {
        if (total(d) > Znil.shape()->bound()) continue;
        VRational q = c * VRational(LPoly::monomial(2 * d[node]) - LPoly(1), den);
        if (!q.is_laurent()) throw invariant_error("NonExactDivision", "correction coefficient is not a Laurent polynomial");
        f.set(d, q);
    }
    return exp_pleth(f, rule).S(node, -1) * Znil;
}

namespace detail {
inline std::vector<std::vector<Shape::Term>> products_by_output(const Shape& s) {
    std::vector<std::vector<Shape::Term>> r(s.size());
    for (auto& t : s.products()) r[t.out].push_back(t);
    return r;
}
} // namespace detail

// Solve Z_i (S_{-i} A) = S_i A order by order, using the node with the largest d_i.
inline QSeries solve_unframed(const std::map<int, QSeries>& framed, bool cross_check = false) {
    if (framed.empty()) throw validation_error("MissingFraming", "no framed series supplied");
    const ShapePtr shape = framed.begin()->second.shape();
    for (auto& [i, z] : framed) z.check(framed.begin()->second);
    auto by_out = detail::products_by_output(*shape);
    QSeries A = QSeries::one(shape);
    auto solve_with = [&](int i, int k) {
        const DimVec& d = shape->mono(k);
        const QSeries& Z = framed.at(i);
        VRational rhs;
        for (auto& t : by_out[k]) {
            if (t.a == 0) continue;
            const VRational& z = Z.at(t.a);
            if (z.is_zero()) continue;
            const VRational& a = A.at(t.b);
            if (a.is_zero()) continue;
            rhs += (z * a).times_monomial(t.twist - shape->mono(t.b)[i]);
        }
        return rhs / VRational(quantum_gap(d[i]));
    };
    for (int k = 1; k < shape->size(); ++k) {
        const DimVec& d = shape->mono(k);
        int best = -1;
        for (auto& [i, z] : framed)
            if (d[i] > 0 && (best < 0 || d[i] > d[best])) best = i;
        if (best < 0) throw validation_error("MissingFraming", "no framed node covers a dimension vector");
        A.at(k) = solve_with(best, k);
        if (cross_check) {
            for (auto& [i, z] : framed) {
                if (i == best || d[i] == 0) continue;
                if (solve_with(i, k) != A.at(k)) throw invariant_error("InconsistentFraming", "framed series at different nodes disagree");
            }
        }
    }
    return A;
}

// ---- sparse series on a downward-closed set of monomials ----

namespace detail {

struct SparseCtx {
    const IntMatrix* twist;
    const IntMatrix* euler;
    std::function<bool(const DimVec&)> inside;
    AdamsRule rule = AdamsRule::euler_twisted;
    bool odd(const DimVec& d) const { return !euler->empty() && (pairing(*euler, d, d) & 1); }
};

inline bool leq(const DimVec& a, const DimVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline DimVec sub_vec(const DimVec& a, const DimVec& b) {
    DimVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

// L * A with the twist, restricted to ctx.inside
inline Sparse sparse_mul(const SparseCtx& ctx, const Sparse& L, const Sparse& A) {
    Sparse r;
    for (auto& [a, x] : L)
        for (auto& [b, y] : A) {
            DimVec s = add_vec(a, b);
            if (!ctx.inside(s)) continue;
            auto& slot = r[s];
            slot += (x * y).times_monomial(pairing(*ctx.twist, a, b));
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second.is_zero() ? r.erase(it) : std::next(it);
    return r;
}

// additive closure of the support inside the set
inline std::vector<DimVec> closure(const SparseCtx& ctx, const std::vector<DimVec>& gens) {
    std::set<DimVec, DegLex> seen(gens.begin(), gens.end());
    std::vector<DimVec> todo(gens.begin(), gens.end());
    while (!todo.empty()) {
        DimVec x = todo.back();
        todo.pop_back();
        for (auto& g : gens) {
            DimVec s = add_vec(x, g);
            if (ctx.inside(s) && seen.insert(s).second) todo.push_back(s);
        }
    }
    return {seen.begin(), seen.end()};
}

// log F for commuting support, F_0 = 1 implicit (F holds nonzero degrees only)
inline Sparse sparse_log(const SparseCtx& ctx, const Sparse& F) {
    std::vector<DimVec> gens;
    for (auto& [d, c] : F) gens.push_back(d);
    Sparse G;
    for (auto& d : closure(ctx, gens)) {
        int td = total(d);
        auto self = F.find(d);
        VRational s = self == F.end() ? VRational() : self->second * VRational(td);
        for (auto& [d2, g] : G) {
            if (d2 == d || !leq(d2, d)) continue;
            auto it = F.find(sub_vec(d, d2));
            if (it == F.end()) continue;
            s -= it->second * g * VRational(total(d2));
        }
        if (!s.is_zero()) G[d] = s * VRational(LPoly(Q(1, td)));
    }
    return G;
}

inline Sparse sparse_exp(const SparseCtx& ctx, const Sparse& G) {
    std::vector<DimVec> gens;
    for (auto& [d, g] : G) gens.push_back(d);
    Sparse F;
    for (auto& d : closure(ctx, gens)) {
        VRational s;
        for (auto& [d2, g] : G) {
            if (!leq(d2, d)) continue;
            if (d2 == d) {
                s += g * VRational(total(d2));
                continue;
            }
            auto it = F.find(sub_vec(d, d2));
            if (it == F.end()) continue;
            s += g * it->second * VRational(total(d2));
        }
        if (!s.is_zero()) F[d] = s * VRational(LPoly(Q(1, total(d))));
    }
    return F;
}

inline Sparse sparse_adams(const SparseCtx& ctx, const Sparse& f, int k) {
    Sparse r;
    for (auto& [d, c] : f) {
        DimVec e = scaled_vec(d, k);
        if (ctx.inside(e)) r[e] = adams_coeff(c, k, ctx.rule, ctx.odd(d));
    }
    return r;
}

inline Sparse sparse_log_pleth(const SparseCtx& ctx, const Sparse& F, int maxk) {
    Sparse L = sparse_log(ctx, F), f;
    for (int k = 1; k <= maxk; ++k) {
        int mu = mobius(k);
        if (mu == 0) continue;
        for (auto& [d, c] : sparse_adams(ctx, L, k)) {
            auto& slot = f[d];
            slot += c * VRational(LPoly(Q(mu, k)));
        }
    }
    for (auto it = f.begin(); it != f.end();)
        it = it->second.is_zero() ? f.erase(it) : std::next(it);
    return f;
}

inline Sparse sparse_exp_pleth(const SparseCtx& ctx, const Sparse& f, int maxk) {
    Sparse L;
    for (int k = 1; k <= maxk; ++k)
        for (auto& [d, c] : sparse_adams(ctx, f, k)) {
            auto& slot = L[d];
            slot += c * VRational(LPoly(Q(1, k)));
        }
    for (auto it = L.begin(); it != L.end();)
        it = it->second.is_zero() ? L.erase(it) : std::next(it);
    return sparse_exp(ctx, L);
}

inline Q slope_of(const std::vector<Q>& theta, const DimVec& d) {
    Q s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += theta[i] * d[i];
    return s / total(d);
}

} // namespace detail

// Peel A = prod over slopes (increasing) of Exp(Ω/(v - v^{-1})); returns Ω on the given set.
// `stop_at`: if nonempty, stop once the slope of that vector has been processed.
inline Sparse factorize_sparse(const Shape& shape, Sparse A, const std::vector<Q>& theta,
                               const std::function<bool(const DimVec&)>& inside, int maxdeg, const DimVec& stop_at = {},
                               AdamsRule rule = AdamsRule::euler_twisted) {
    const IntMatrix& twist = shape.twist();
    detail::SparseCtx ctx{&twist, &shape.euler(), inside, rule};
    A.erase(DimVec(theta.size(), 0));
    Sparse omega;
    const VRational vv(v_minus_vinv());
    const bool stopping = !stop_at.empty();
    const Q stop_slope = stopping ? detail::slope_of(theta, stop_at) : Q(0);
    while (!A.empty()) {
        Q mu = detail::slope_of(theta, A.begin()->first);
        for (auto& [d, c] : A) mu = std::min(mu, detail::slope_of(theta, d));
        if (stopping && mu > stop_slope) break;
        Sparse F;
        for (auto& [d, c] : A)
            if (detail::slope_of(theta, d) == mu) F[d] = c;
        for (auto& [a, x] : F)
            for (auto& [b, y] : F)
                if (pairing(twist, a, b) != 0)
                    throw invariant_error("NonGenericStability", "non-commuting dimension vectors share a slope");
        Sparse f = detail::sparse_log_pleth(ctx, F, maxdeg);
        for (auto& [d, c] : f) {
            VRational om = c * vv;
            if (!om.is_integral_laurent()) throw invariant_error("NonIntegralBps", "BPS invariant is not an integral Laurent polynomial: " + om.str());
            omega[d] = om;
        }
        Sparse minus_f;
        for (auto& [d, c] : f) minus_f[d] = -c;
        Sparse Einv = detail::sparse_exp_pleth(ctx, minus_f, maxdeg);
        // constant terms are implicit: (1 + E)(1 + A) - 1 = E A + E + A
        Sparse next = detail::sparse_mul(ctx, Einv, A);
        for (auto* part : {&A, &Einv})
            for (auto& [d, c] : *part) {
                auto& slot = next[d];
                slot += c;
            }
        for (auto it = next.begin(); it != next.end();)
            it = it->second.is_zero() ? next.erase(it) : std::next(it);
        for (auto& [d, c] : F)
            if (next.count(d)) throw invariant_error("NonGenericStability", "ray factor did not cancel");
        A = std::move(next);
    }
    return omega;
}

inline Sparse to_sparse(const QSeries& A) {
    Sparse r;
    for (int k = 0; k < A.size(); ++k)
        if (!A.at(k).is_zero()) r[A.shape()->mono(k)] = A.at(k);
    return r;
}

inline BpsTable factorize_bps(const QSeries& A, const std::vector<Q>& theta, AdamsRule rule = AdamsRule::euler_twisted) {
    const int N = A.shape()->bound();
    if (static_cast<int>(theta.size()) != A.shape()->nodes()) throw validation_error("ValidationError", "stability has the wrong length");
    auto inside = [N](const DimVec& d) { return total(d) <= N; };
    BpsTable t{"theta", theta, N, {}};
    t.omega = factorize_sparse(*A.shape(), to_sparse(A), theta, inside, N, {}, rule);
    return t;
}

// Deterministic pseudo-random integer vector.
inline std::vector<long> seeded_vector(std::uint64_t seed, int n, int range = 1000) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-range, range);
    std::vector<long> r(n);
    for (auto& x : r) x = dist(rng);
    return r;
}

// θ_d = -twist.d (the self-stability) plus a small perturbation within θ(d) = 0.
inline std::vector<Q> attractor_stability(const IntMatrix& twist, const DimVec& d, const std::vector<long>& r, int bound) {
    const int n = static_cast<int>(d.size());
    std::vector<Q> theta(n), rp(n);
    for (int i = 0; i < n; ++i) {
        long s = 0;
        for (int j = 0; j < n; ++j) s += twist[i][j] * d[j];
        theta[i] = -s;
    }
    Q rd = 0, dd = 0;
    for (int i = 0; i < n; ++i) {
        rd += Q(r[i]) * d[i];
        dd += d[i] * d[i];
    }
    Q R = 0;
    for (int i = 0; i < n; ++i) {
        rp[i] = Q(r[i]) - rd / dd * d[i];
        R = std::max(R, Q(abs(rp[i])));
    }
    Q eps = Q(1) / (Q(4 * bound * bound) * (1 + R));
    for (int i = 0; i < n; ++i) theta[i] += eps * rp[i];
    return theta;
}

inline VRational attractor_at(const QSeries& A, const DimVec& d, const std::vector<Q>& theta, AdamsRule rule) {
    Sparse box;
    for (int k = 0; k < A.size(); ++k)
        if (!A.at(k).is_zero() && detail::leq(A.shape()->mono(k), d)) box[A.shape()->mono(k)] = A.at(k);
    auto inside = [&d](const DimVec& x) { return detail::leq(x, d); };
    auto om = factorize_sparse(*A.shape(), box, theta, inside, total(d), d, rule);
    auto it = om.find(d);
    return it == om.end() ? VRational() : it->second;
}

inline BpsTable attractor_invariants(const QSeries& A, std::uint64_t seed = 1, AdamsRule rule = AdamsRule::euler_twisted) {
    const ShapePtr& sh = A.shape();
    const int N = sh->bound();
    BpsTable t{"attractor", {}, N, {}};
    std::vector<VRational> res(sh->size());
    parallel_for(sh->size(), [&](std::size_t k) {
        if (k == 0) return;
        const DimVec& d = sh->mono(k);
        for (int attempt = 0; attempt < 3; ++attempt) {
            auto r1 = seeded_vector(seed + 7919 * (2 * attempt) + 104729 * k, sh->nodes());
            auto r2 = seeded_vector(seed + 7919 * (2 * attempt + 1) + 104729 * k, sh->nodes());
            VRational a = attractor_at(A, d, attractor_stability(sh->twist(), d, r1, N), rule);
            VRational b = attractor_at(A, d, attractor_stability(sh->twist(), d, r2, N), rule);
            if (a == b) {
                res[k] = a;
                return;
            }
        }
        throw invariant_error("PerturbationDisagreement", "attractor invariant depends on the perturbation");
    });
    for (int k = 1; k < sh->size(); ++k) t.add(sh->mono(k), res[k]);
    return t;
}

// ---- structural checks ----

struct CheckLine {
    std::string check;
    DimVec d;
    bool pass = true;
    bool hard = true; // soft lines (conjecture) never fail a run
    std::string expected, actual;
};

struct CheckReport {
    std::vector<CheckLine> lines;
    bool hard_ok() const {
        for (auto& l : lines)
            if (l.hard && !l.pass) return false;
        return true;
    }
    bool all_ok() const {
        for (auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

struct NilpotentTable {
    std::vector<int> interval;
    BpsTable omega;
};

inline std::vector<DimVec> table_support(std::initializer_list<const BpsTable*> ts) {
    std::set<DimVec, DegLex> s;
    for (auto* t : ts)
        for (auto& [d, c] : t->omega) s.insert(d);
    return {s.begin(), s.end()};
}

// conjecture: compare with the closed form for attractor tables when i >= 1 (soft)
inline CheckReport structure_checks(const BpsTable& omega, const DiagramProfile& P, const std::vector<NilpotentTable>& nil = {},
                                    bool conjecture = false) {
    CheckReport rep;
    const int N = omega.bound;
    BpsTable sym = omega - asymmetric_part(P, N);
    BpsTable symbar = sym.bar();
    for (auto& d : table_support({&sym, &symbar})) {
        VRational a = sym.at(d), b = symbar.at(d);
        rep.lines.push_back({"sym-self-dual", d, a == b, true, b.str(), a.str()});
    }
    for (int n = 1; total(scaled_vec(P.delta, n)) <= N; ++n) {
        DimVec d = scaled_vec(P.delta, n);
        rep.lines.push_back({"sym-off-delta", d, sym.at(d).is_zero(), true, "0", sym.at(d).str()});
    }
    for (auto& t : nil) {
        BpsTable rhs = delta_omega_correction(P, t.interval, N) + t.omega;
        for (auto& d : table_support({&omega, &rhs}))
            rep.lines.push_back({"nilpotent-identity", d, omega.at(d) == rhs.at(d), true, rhs.at(d).str(), omega.at(d).str()});
    }
    if (conjecture && P.interior >= 1) {
        BpsTable ref = reference_series(P, "conjecture", N);
        for (auto& d : table_support({&omega, &ref}))
            rep.lines.push_back({"conjecture", d, omega.at(d) == ref.at(d), false, ref.at(d).str(), omega.at(d).str()});
    }
    return rep;
}

// Nilpotent tables at an interval and at its complement (opposite slope) are bar-dual.
inline CheckReport duality_checks(const BpsTable& omega, const BpsTable& omega_complement) {
    CheckReport rep;
    BpsTable dual = omega.bar();
    for (auto& d : table_support({&dual, &omega_complement}))
        rep.lines.push_back({"nilpotent-duality", d, dual.at(d) == omega_complement.at(d), true, dual.at(d).str(),
                             omega_complement.at(d).str()});
    return rep;
}

// ---- JSON ----

inline nlohmann::json table_json(const BpsTable& t) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [d, c] : t.omega) terms.push_back({{"d", d}, {"poly", coeff_json(c)}});
    nlohmann::json j{{"stability", t.tag}, {"bound", t.bound}, {"terms", terms}};
    if (!t.theta.empty()) {
        nlohmann::json th = nlohmann::json::array();
        for (auto& q : t.theta) th.push_back(q.get_str());
        j["theta"] = th;
    }
    return j;
}

inline nlohmann::json report_json(const CheckReport& r) {
    nlohmann::json lines = nlohmann::json::array();
    for (auto& l : r.lines)
        lines.push_back({{"check", l.check}, {"d", l.d}, {"pass", l.pass}, {"hard", l.hard}, {"expected", l.expected}, {"actual", l.actual}});
    return {{"hard_ok", r.hard_ok()}, {"all_ok", r.all_ok()}, {"lines", lines}};
}

} // namespace moltendt
