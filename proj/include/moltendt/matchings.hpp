#pragma once

// Perfect matchings (cuts), the toric diagram, zig-zag paths and strips.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace moltendt {

struct Cut {
    std::vector<int> arrows; // sorted arrow indices
    Vec2 point{0, 0};
};

namespace detail {

inline void cover_search(const PeriodicQuiver& q, const std::vector<std::array<int, 2>>& terms_of,
                         std::vector<char>& covered, std::vector<int>& chosen, std::vector<std::vector<int>>& out) {
    // term with fewest admissible arrows
    int best = -1;
    std::vector<int> best_opts;
    for (int t = 0; t < static_cast<int>(q.terms.size()); ++t) {
        if (covered[t]) continue;
        std::vector<int> opts;
        for (int a : q.terms[t].cycle) {
            auto [t1, t2] = terms_of[a];
            if (!covered[t1] && !covered[t2]) opts.push_back(a);
        }
        if (best < 0 || opts.size() < best_opts.size()) {
            best = t;
            best_opts = std::move(opts);
            if (best_opts.empty()) break;
        }
    }
    if (best < 0) {
        auto c = chosen;
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
        return;
    }
    std::sort(best_opts.begin(), best_opts.end());
    best_opts.erase(std::unique(best_opts.begin(), best_opts.end()), best_opts.end());
    for (int a : best_opts) {
        auto [t1, t2] = terms_of[a];
        covered[t1] = covered[t2] = 1;
        chosen.push_back(a);
        cover_search(q, terms_of, covered, chosen, out);
        chosen.pop_back();
        covered[t1] = covered[t2] = 0;
    }
}

// Shortest closed path at node 0 with the given homology (BFS in the universal cover).
inline std::vector<int> reference_cycle(const PeriodicQuiver& q, Vec2 target) {
    const int R = 4 * (q.num_arrows() + 2);
    std::map<std::pair<int, Vec2>, std::pair<std::pair<int, Vec2>, int>> prev;
    std::deque<std::pair<int, Vec2>> dq;
    std::pair<int, Vec2> start{0, Vec2{0, 0}}, goal{0, target};
    prev[start] = {start, -1};
    dq.push_back(start);
    while (!dq.empty()) {
        auto st = dq.front();
        dq.pop_front();
        if (st == goal) break;
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (q.arrows[a].src != st.first) continue;
            std::pair<int, Vec2> ns{q.arrows[a].tgt, st.second + q.arrows[a].disp};
            if (std::abs(ns.second[0]) > R || std::abs(ns.second[1]) > R) continue;
            if (prev.count(ns)) continue;
            prev[ns] = {st, a};
            dq.push_back(ns);
        }
    }
    if (!prev.count(goal)) throw validation_error("ValidationError", "no closed path with homology (" + std::to_string(target[0]) + "," + std::to_string(target[1]) + ")");
    std::vector<int> path;
    for (auto st = goal; st != start;) {
        auto [p, a] = prev[st];
        path.push_back(a);
        st = p;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

inline std::vector<std::array<int, 2>> terms_of_arrows(const PeriodicQuiver& q) {
    std::vector<std::array<int, 2>> r(q.num_arrows(), {-1, -1});
    for (int t = 0; t < static_cast<int>(q.terms.size()); ++t)
        for (int a : q.terms[t].cycle) r[a][q.terms[t].sign > 0 ? 0 : 1] = t;
    return r;
}

} // namespace detail

// All cuts, sorted by their arrow lists; each with its diagram point -(chi_I(c1), chi_I(c2)).
inline std::vector<Cut> perfect_matchings(const PeriodicQuiver& q) {
    auto terms_of = detail::terms_of_arrows(q);
    std::vector<char> covered(q.terms.size(), 0);
    std::vector<int> chosen;
    std::vector<std::vector<int>> found;
    detail::cover_search(q, terms_of, covered, chosen, found);
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    if (found.empty()) throw validation_error("NoCutError", q.name + ": no perfect matching");
    auto c1 = detail::reference_cycle(q, {1, 0});
    auto c2 = detail::reference_cycle(q, {0, 1});
    std::vector<Cut> cuts;
    for (auto& f : found) {
        std::vector<char> in(q.num_arrows(), 0);
        for (int a : f) in[a] = 1;
        int x = 0, y = 0;
        for (int a : c1) x += in[a];
        for (int a : c2) y += in[a];
        cuts.push_back({f, Vec2{-x, -y}});
    }
    return cuts;
}

// Reference grading from the canonically first cut.
inline ReferenceGrading reference_grading(const PeriodicQuiver& q) {
    return grading_for_cut(q, perfect_matchings(q).front().arrows);
}

struct Side {
    int from = 0, to = 0; // corner indices
    Vec2 l{0, 0};         // primitive outward normal
    int K = 1;            // lattice subdivisions
};

struct ToricDiagram {
    std::vector<Cut> cuts;
    std::map<Vec2, int> multiplicity;
    std::vector<Vec2> corners;    // clockwise, corners[0] has the canonically least cut
    std::vector<int> corner_cut;  // index into cuts
    std::vector<Side> sides;      // side k joins corners k and k+1
    int b = 0;
    int interior = 0;
    int twice_area = 0;
};

inline int gcd_abs(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

inline ToricDiagram toric_diagram(const PeriodicQuiver& q) {
    ToricDiagram D;
    D.cuts = perfect_matchings(q);
    for (auto& c : D.cuts) D.multiplicity[c.point]++;
    std::vector<Vec2> pts;
    for (auto& [p, m] : D.multiplicity) pts.push_back(p);
    // monotone chain, strict turns only (counterclockwise)
    std::vector<Vec2> h;
    if (pts.size() >= 3) {
        std::vector<Vec2> lo, up;
        for (auto& p : pts) {
            while (lo.size() >= 2 && cross(lo[lo.size() - 1] - lo[lo.size() - 2], p - lo[lo.size() - 2]) <= 0) lo.pop_back();
            lo.push_back(p);
        }
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            while (up.size() >= 2 && cross(up[up.size() - 1] - up[up.size() - 2], *it - up[up.size() - 2]) <= 0) up.pop_back();
            up.push_back(*it);
        }
        h.assign(lo.begin(), lo.end() - 1);
        h.insert(h.end(), up.begin(), up.end() - 1);
    }
    if (h.size() < 3) throw validation_error("ValidationError", q.name + ": degenerate toric diagram");
    std::reverse(h.begin(), h.end()); // clockwise
    std::vector<int> cut_at(h.size(), -1);
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (D.multiplicity[h[k]] != 1)
            throw invariant_error("AmbiguousCornerError", q.name + ": several matchings at a corner of the toric diagram");
        for (std::size_t c = 0; c < D.cuts.size(); ++c)
            if (D.cuts[c].point == h[k]) cut_at[k] = static_cast<int>(c);
    }
    auto first = std::min_element(cut_at.begin(), cut_at.end()) - cut_at.begin();
    std::rotate(h.begin(), h.begin() + first, h.end());
    std::rotate(cut_at.begin(), cut_at.begin() + first, cut_at.end());
    D.corners = h;
    D.corner_cut = cut_at;
    int n = static_cast<int>(h.size());
    for (int k = 0; k < n; ++k) {
        Vec2 e = h[(k + 1) % n] - h[k];
        int g = gcd_abs(e[0], e[1]);
        Side s;
        s.from = k;
        s.to = (k + 1) % n;
        s.K = g;
        s.l = {-e[1] / g, e[0] / g};
        D.sides.push_back(s);
        D.b += g;
        D.twice_area += cross(h[k], h[(k + 1) % n]);
    }
    D.twice_area = std::abs(D.twice_area);
    D.interior = (D.twice_area - D.b + 2) / 2;
    return D;
}

// ---- zig-zag paths and strips ----

struct SideStrips {
    int side = 0;
    std::vector<std::vector<int>> paths;            // zig-zag orbits on this side (arrow sequences)
    std::vector<std::vector<int>> strips;           // strip k -> nodes
    std::vector<std::vector<int>> zig, zag, J, inner; // per strip k
    std::vector<DimVec> alpha;                      // alpha_k
    std::vector<DimVec> alpha_intervals;            // alpha_[kk'[ for k != k', ordered by (k, k')
    std::vector<std::pair<int, int>> interval_labels;
    std::vector<std::vector<int>> strip_cycle;      // per node: indecomposable cycle in its strip
};

struct ZigZagData {
    std::vector<std::vector<int>> paths; // all orbits
    std::vector<int> path_side;          // side index of each orbit
    std::vector<SideStrips> sides;
    DimVec delta;
};

// Orbits of (arrow, parity) under: next in the + term, then next in the - term, alternating.
inline std::vector<std::vector<int>> zigzag_orbits(const PeriodicQuiver& q) {
    std::vector<int> nplus(q.num_arrows()), nminus(q.num_arrows());
    for (auto& t : q.terms)
        for (std::size_t k = 0; k < t.cycle.size(); ++k)
            (t.sign > 0 ? nplus : nminus)[t.cycle[k]] = t.cycle[(k + 1) % t.cycle.size()];
    std::vector<std::array<char, 2>> seen(q.num_arrows(), {0, 0});
    std::vector<std::vector<int>> out;
    for (int a = 0; a < q.num_arrows(); ++a) {
        for (int par = 0; par < 2; ++par) {
            if (seen[a][par]) continue;
            std::vector<int> path;
            int x = a, p = par;
            while (!seen[x][p]) {
                seen[x][p] = 1;
                path.push_back(x);
                x = p == 0 ? nplus[x] : nminus[x];
                p ^= 1;
            }
            out.push_back(path);
        }
    }
    return out;
}

inline Vec2 path_displacement(const PeriodicQuiver& q, const std::vector<int>& path) {
    Vec2 s{0, 0};
    for (int a : path) s = s + q.arrows[a].disp;
    return s;
}

// The dimer zig-zag path runs against the composable arrow sequence.
inline Vec2 zigzag_class(const PeriodicQuiver& q, const std::vector<int>& path) { return -path_displacement(q, path); }

namespace detail {

inline std::vector<int> strip_cycle_at(const PeriodicQuiver& q, const std::vector<char>& allowed, int node) {
    const int R = 2 * (q.num_arrows() + 2);
    std::map<std::pair<int, Vec2>, std::pair<std::pair<int, Vec2>, int>> prev;
    std::deque<std::pair<int, Vec2>> dq;
    std::pair<int, Vec2> start{node, Vec2{0, 0}};
    prev[start] = {start, -1};
    dq.push_back(start);
    while (!dq.empty()) {
        auto st = dq.front();
        dq.pop_front();
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (!allowed[a] || q.arrows[a].src != st.first) continue;
            std::pair<int, Vec2> ns{q.arrows[a].tgt, st.second + q.arrows[a].disp};
            if (std::abs(ns.second[0]) > R || std::abs(ns.second[1]) > R) continue;
            if (ns.first == node && ns.second != Vec2{0, 0}) {
                std::vector<int> path{a};
                for (auto s = st; s != start;) {
                    auto [p, b] = prev[s];
                    path.push_back(b);
                    s = p;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (prev.count(ns)) continue;
            prev[ns] = {st, a};
            dq.push_back(ns);
        }
    }
    return {};
}

} // namespace detail

inline ZigZagData zigzag_analysis(const PeriodicQuiver& q, const ToricDiagram& D) {
    ZigZagData Z;
    const int n = q.num_nodes();
    Z.delta.assign(n, 1);
    Z.paths = zigzag_orbits(q);
    Z.path_side.assign(Z.paths.size(), -1);
    const int ns = static_cast<int>(D.sides.size());
    for (std::size_t p = 0; p < Z.paths.size(); ++p) {
        Vec2 c = zigzag_class(q, Z.paths[p]);
        for (int s = 0; s < ns; ++s)
            if (D.sides[s].l == c) Z.path_side[p] = s;
        if (Z.path_side[p] < 0)
            throw invariant_error("StripCountMismatch", q.name + ": zig-zag path with class matching no side normal");
    }
    for (int s = 0; s < ns; ++s) {
        SideStrips S;
        S.side = s;
        for (std::size_t p = 0; p < Z.paths.size(); ++p)
            if (Z.path_side[p] == s) S.paths.push_back(Z.paths[p]);
        const int K = D.sides[s].K;
        if (static_cast<int>(S.paths.size()) != K)
            throw invariant_error("StripCountMismatch", q.name + ": side " + std::to_string(s) + " has " + std::to_string(S.paths.size()) + " zig-zag paths, expected " + std::to_string(K));
        std::vector<char> inA(q.num_arrows(), 0), inB(q.num_arrows(), 0);
        for (int a : D.cuts[D.corner_cut[D.sides[s].from]].arrows) inA[a] = 1;
        for (int a : D.cuts[D.corner_cut[D.sides[s].to]].arrows) inB[a] = 1;
        // strips: components of arrows outside I_k u I_{k+1}
        std::vector<int> comp(n);
        std::iota(comp.begin(), comp.end(), 0);
        std::function<int(int)> root = [&](int x) { return comp[x] == x ? x : comp[x] = root(comp[x]); };
        std::vector<char> free(q.num_arrows(), 0);
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (inA[a] || inB[a]) continue;
            free[a] = 1;
            comp[root(q.arrows[a].src)] = root(q.arrows[a].tgt);
        }
        std::map<int, int> label;
        for (int v = 0; v < n; ++v) label.emplace(root(v), static_cast<int>(label.size()));
        if (static_cast<int>(label.size()) != K)
            throw invariant_error("StripCountMismatch", q.name + ": side " + std::to_string(s) + " has " + std::to_string(label.size()) + " strips, expected " + std::to_string(K));
        std::vector<int> raw(n);
        for (int v = 0; v < n; ++v) raw[v] = label[root(v)];
        // order: strip 0 holds node 0; Zig arrows (I_k - I_{k+1}) go from strip m+1 to strip m
        std::vector<int> order{raw[0]};
        std::vector<int> up(K, -1);
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (!inA[a] || inB[a]) continue;
            int from = raw[q.arrows[a].src], to = raw[q.arrows[a].tgt];
            if (K == 1) continue;
            if (up[to] >= 0 && up[to] != from)
                throw invariant_error("StripCountMismatch", q.name + ": inconsistent strip order on side " + std::to_string(s));
            up[to] = from;
        }
        while (static_cast<int>(order.size()) < K) {
            int nx = up[order.back()];
            if (nx < 0 || std::find(order.begin(), order.end(), nx) != order.end())
                throw invariant_error("StripCountMismatch", q.name + ": strips of side " + std::to_string(s) + " are not cyclically ordered");
            order.push_back(nx);
        }
        std::vector<int> pos(K);
        for (int k = 0; k < K; ++k) pos[order[k]] = k;
        std::vector<int> strip_of(n);
        S.strips.assign(K, {});
        S.alpha.assign(K, DimVec(n, 0));
        for (int v = 0; v < n; ++v) {
            strip_of[v] = pos[raw[v]];
            S.strips[strip_of[v]].push_back(v);
            S.alpha[strip_of[v]][v] = 1;
        }
        S.zig.assign(K, {});
        S.zag.assign(K, {});
        S.J.assign(K, {});
        S.inner.assign(K, {});
        for (int a = 0; a < q.num_arrows(); ++a) {
            int ks = strip_of[q.arrows[a].src], kt = strip_of[q.arrows[a].tgt];
            if (inA[a] && inB[a]) S.J[ks].push_back(a);
            else if (inA[a]) S.zig[kt].push_back(a);
            else if (inB[a]) S.zag[ks].push_back(a);
            else S.inner[ks].push_back(a);
        }
        for (int k = 0; k < K; ++k) {
            for (int k2 = 0; k2 < K; ++k2) {
                if (k == k2) continue;
                DimVec d(n, 0);
                for (int m = k; m != k2; m = (m + 1) % K)
                    for (int v = 0; v < n; ++v) d[v] += S.alpha[m][v];
                S.alpha_intervals.push_back(d);
                S.interval_labels.push_back({k, k2});
            }
        }
        for (int v = 0; v < n; ++v) S.strip_cycle.push_back(detail::strip_cycle_at(q, free, v));
        Z.sides.push_back(std::move(S));
    }
    return Z;
}

// Profile data used by the closed-form BPS formulas.
struct DiagramProfile {
    int b = 0, interior = 0;
    std::vector<int> K;
    std::vector<std::vector<DimVec>> alphas; // per side, alpha_[kk'[ with multiplicity
    DimVec delta;
};

inline DiagramProfile make_profile(const ToricDiagram& D, const ZigZagData& Z) {
    DiagramProfile P;
    P.b = D.b;
    P.interior = D.interior;
    for (auto& s : D.sides) P.K.push_back(s.K);
    for (auto& s : Z.sides) P.alphas.push_back(s.alpha_intervals);
    P.delta = Z.delta;
    return P;
}

// Arrows usable as D4 seeds at a corner: in the corner cut and on zig-zag paths of both adjacent sides.
inline std::vector<int> d4_seed_arrows(const ToricDiagram& D, const ZigZagData& Z, int corner) {
    const int n = static_cast<int>(D.corners.size());
    if (corner < 0 || corner >= n) throw validation_error("ValidationError", "corner index out of range");
    int sa = (corner - 1 + n) % n, sb = corner;
    auto on_side = [&](int s, int a) {
        for (auto& p : Z.sides[s].paths)
            if (std::find(p.begin(), p.end(), a) != p.end()) return true;
        return false;
    };
    std::vector<int> r;
    for (int a : D.cuts[D.corner_cut[corner]].arrows)
        if (on_side(sa, a) && on_side(sb, a)) r.push_back(a);
    return r;
}

} // namespace moltendt
