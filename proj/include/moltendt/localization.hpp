#pragma once

// Slopes, the virtual tangent index of a crystal, and framed partition functions.

#include <string>
#include <vector>

#include "crystal.hpp"
#include "error.hpp"
#include "matchings.hpp"
#include "parallel.hpp"
#include "qspace.hpp"

namespace moltendt {

// sign(w) = sign(s.w), or sign(s2.w) when that vanishes.
struct Slope {
    Vec2 s{1, 0};
    Vec2 s2{0, 1};
    int sign(Vec2 w) const {
        int x = dot(s, w);
        if (x == 0) x = dot(s2, w);
        return (x > 0) - (x < 0);
    }
    Slope negated() const { return {-s, -s2}; }
};

inline Vec2 rot90(Vec2 s) { return {-s[1], s[0]}; }

// Smallest s (by |s0|+|s1|, then lexicographically) with sign(s.l_k) = pattern[k] for pattern[k] != 0.
inline Slope make_slope(const std::vector<Vec2>& normals, const std::vector<int>& pattern) {
    int R = 1;
    for (auto& l : normals) R += std::abs(l[0]) + std::abs(l[1]);
    R *= 4;
    for (int r = 1; r <= R; ++r) {
        for (int x = -r; x <= r; ++x) {
            int ay = r - std::abs(x);
            for (int y : {-ay, ay}) {
                Vec2 s{x, y};
                bool ok = true;
                for (std::size_t k = 0; k < normals.size() && ok; ++k) {
                    if (pattern[k] == 0) continue;
                    int v = dot(s, normals[k]);
                    ok = v != 0 && ((v > 0) == (pattern[k] > 0));
                }
                if (ok) return {s, rot90(s)};
                if (ay == 0) break;
            }
        }
    }
    throw validation_error("InfeasiblePattern", "no half-plane realizes the requested side signs");
}

// Sides z, z+1, ..., z2 (cyclic).
inline std::vector<int> interval_sides(int nsides, int z, int z2) {
    if (z < 0 || z >= nsides || z2 < 0 || z2 >= nsides) throw validation_error("InvalidInterval", "side index out of range");
    std::vector<int> r;
    for (int k = z;; k = (k + 1) % nsides) {
        r.push_back(k);
        if (k == z2) break;
    }
    return r;
}

// Negative exactly on the sides of [z, z2].
inline Slope interval_slope(const ToricDiagram& D, int z, int z2) {
    const int n = static_cast<int>(D.sides.size());
    auto in = interval_sides(n, z, z2);
    if (static_cast<int>(in.size()) == n) throw validation_error("InfeasiblePattern", "interval covers every side");
    std::vector<Vec2> normals;
    std::vector<int> pattern(n, 1);
    for (auto& s : D.sides) normals.push_back(s.l);
    for (int k : in) pattern[k] = -1;
    return make_slope(normals, pattern);
}

// Positive on both sides adjacent to the corner.
inline Slope corner_slope(const ToricDiagram& D, int corner) {
    const int n = static_cast<int>(D.sides.size());
    if (corner < 0 || corner >= n) throw validation_error("ValidationError", "corner index out of range");
    std::vector<Vec2> normals;
    std::vector<int> pattern(n, 0);
    for (auto& s : D.sides) normals.push_back(s.l);
    pattern[corner] = 1;
    pattern[(corner - 1 + n) % n] = 1;
    return make_slope(normals, pattern);
}

// Orientation of the arrow weights in S^1: forward = L(A) - L(B) + d_a, reversed = its negative.
enum class WeightOrientation { forward, reversed };

struct IndexOptions {
    WeightOrientation orientation = WeightOrientation::forward;
    bool framing_weights = true; // include the framing arrows of the framed quiver
};

struct IndexReport {
    long d0p = 0, d0m = 0, d00 = 0;
    long d1p = 0, d1m = 0, d10 = 0;
    long index = 0;
};

inline void tally(const Slope& s, Vec2 w, long& p, long& m, long& z) {
    int g = s.sign(w);
    if (g > 0) ++p;
    else if (g < 0) ++m;
    else ++z;
}

inline IndexReport crystal_index(const PeriodicQuiver& q, const Erc& erc, const std::vector<int>& atoms, const Slope& s,
                                 const IndexOptions& opt = {}) {
    IndexReport r;
    const int sg = opt.orientation == WeightOrientation::forward ? 1 : -1;
    std::vector<std::vector<Vec2>> by_color(q.num_nodes());
    for (int k : atoms) by_color[erc.atom(k).color].push_back(erc.atom(k).t);
    for (auto& col : by_color)
        for (auto& A : col)
            for (auto& B : col) tally(s, A - B, r.d0p, r.d0m, r.d00);
    auto add1 = [&](Vec2 w) { tally(s, Vec2{sg * w[0], sg * w[1]}, r.d1p, r.d1m, r.d10); };
    for (auto& a : q.arrows)
        for (auto& A : by_color[a.src])
            for (auto& B : by_color[a.tgt]) add1(A - B + a.disp);
    if (opt.framing_weights) {
        const Framing& f = erc.framing();
        for (auto& B : by_color[f.node]) add1(-B);
        if (f.kind == Framing::Kind::d4)
            for (auto& A : by_color[f.companion]) add1(A - f.seed_disp);
    }
    r.index = -r.d0p + r.d1p - r.d1m + r.d0m;
    return r;
}

// sum over crystals of v^Index x^{d_pi}
inline QSeries framed_partition_function(const PeriodicQuiver& q, const Erc& erc, const std::vector<Crystal>& crystals,
                                         const Slope& s, ShapePtr shape, const IndexOptions& opt = {}) {
    std::vector<long> idx(crystals.size());
    parallel_for(crystals.size(), [&](std::size_t k) { idx[k] = crystal_index(q, erc, crystals[k].atoms, s, opt).index; });
    // accumulate exponent counts per monomial, then build polynomials
    std::vector<std::map<long, long>> acc(shape->size());
    for (std::size_t k = 0; k < crystals.size(); ++k) {
        if (total(crystals[k].dim) > shape->bound()) continue;
        int m = shape->find(crystals[k].dim);
        if (m < 0) throw validation_error("ShapeMismatch", "crystal dimension outside series shape");
        acc[m][idx[k]]++;
    }
    QSeries Z(shape);
    for (int m = 0; m < shape->size(); ++m) {
        if (acc[m].empty()) continue;
        LPoly p;
        for (auto [e, c] : acc[m]) p += LPoly::monomial(static_cast<int>(e), Q(c));
        Z.at(m) = VRational(p);
    }
    return Z;
}

} // namespace moltendt
