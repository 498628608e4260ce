#pragma once

// Empty room configurations for D6/D4 framings and molten crystal enumeration.

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "matchings.hpp"
#include "parallel.hpp"

namespace moltendt {

struct Framing {
    enum class Kind { d6, d4 } kind = Kind::d6;
    int node = 0;       // framed node i
    int corner = -1;    // D4 only
    int seed = -1;      // D4 seed arrow a
    int companion = -1; // D4: tgt(a)
    std::vector<char> allowed; // arrows usable by paths from the framing node
    Vec2 seed_disp{0, 0};
};

inline Framing d6_framing(const PeriodicQuiver& q, int node) {
    if (node < 0 || node >= q.num_nodes()) throw validation_error("ValidationError", "framed node out of range");
    Framing f;
    f.kind = Framing::Kind::d6;
    f.node = node;
    f.allowed.assign(q.num_arrows(), 1);
    return f;
}

// seed < 0 picks the canonically least valid arrow.
inline Framing d4_framing(const PeriodicQuiver& q, const ToricDiagram& D, const ZigZagData& Z, int corner, int seed = -1) {
    auto valid = d4_seed_arrows(D, Z, corner);
    if (valid.empty()) throw invariant_error("InvalidSeedArrow", "no arrow of the corner cut lies on both adjacent zig-zag families");
    if (seed < 0) seed = valid.front();
    if (std::find(valid.begin(), valid.end(), seed) == valid.end())
        throw validation_error("InvalidSeedArrow", "arrow " + (seed < q.num_arrows() && seed >= 0 ? q.arrows[seed].id : std::to_string(seed)) + " is not a valid D4 seed at corner " + std::to_string(corner));
    Framing f;
    f.kind = Framing::Kind::d4;
    f.corner = corner;
    f.seed = seed;
    f.node = q.arrows[seed].src;
    f.companion = q.arrows[seed].tgt;
    f.seed_disp = q.arrows[seed].disp;
    f.allowed.assign(q.num_arrows(), 1);
    for (int a : D.cuts[D.corner_cut[corner]].arrows) f.allowed[a] = 0;
    return f;
}

struct Atom {
    int color = 0;
    Vec2 t{0, 0};
    int n = 0;
    friend bool operator<(const Atom& a, const Atom& b) {
        return std::tie(a.color, a.t, a.n) < std::tie(b.color, b.t, b.n);
    }
    friend bool operator==(const Atom& a, const Atom& b) { return a.color == b.color && a.t == b.t && a.n == b.n; }
};

class Erc {
public:
    Erc(const PeriodicQuiver& q, const ReferenceGrading& g, Framing f, int radius)
        : f_(std::move(f)), radius_(radius) {
        if (radius < 0) throw validation_error("ValidationError", "negative ERC radius");
        int maxd = 1;
        for (auto& a : q.arrows) maxd = std::max({maxd, std::abs(a.disp[0]), std::abs(a.disp[1])});
        box_ = (2 * radius + 4) * maxd + 2;
        min_depth(q, g);
        // atoms within `radius` steps of the root
        std::map<Atom, int> dist;
        std::deque<Atom> dq;
        Atom root{f_.node, {0, 0}, 0};
        dist[root] = 0;
        dq.push_back(root);
        while (!dq.empty()) {
            Atom x = dq.front();
            dq.pop_front();
            int dx = dist[x];
            if (dx == radius) continue;
            for (int a = 0; a < q.num_arrows(); ++a) {
                if (!f_.allowed[a] || q.arrows[a].src != x.color) continue;
                Atom y{q.arrows[a].tgt, x.t + g.d[a], x.n + g.m[a]};
                if (dist.count(y)) continue;
                dist[y] = dx + 1;
                dq.push_back(y);
            }
        }
        for (auto& [a, d] : dist) {
            atoms_.push_back(a);
            depth_.push_back(d);
        }
        std::map<Atom, int> index;
        for (int k = 0; k < size(); ++k) index[atoms_[k]] = k;
        succ_.assign(size(), {});
        pred_.assign(size(), {});
        blocked_.assign(size(), 0);
        for (int k = 0; k < size(); ++k) {
            const Atom& y = atoms_[k];
            for (int a = 0; a < q.num_arrows(); ++a) {
                if (!f_.allowed[a]) continue;
                if (q.arrows[a].src == y.color) {
                    Atom z{q.arrows[a].tgt, y.t + g.d[a], y.n + g.m[a]};
                    auto it = index.find(z);
                    if (it != index.end()) succ_[k].push_back(it->second);
                }
                if (q.arrows[a].tgt == y.color) {
                    Atom x{q.arrows[a].src, y.t - g.d[a], y.n - g.m[a]};
                    if (!reachable(x)) continue;
                    auto it = index.find(x);
                    if (it == index.end()) blocked_[k] = 1;
                    else pred_[k].push_back(it->second);
                }
            }
            std::sort(succ_[k].begin(), succ_[k].end());
            succ_[k].erase(std::unique(succ_[k].begin(), succ_[k].end()), succ_[k].end());
            std::sort(pred_[k].begin(), pred_[k].end());
            pred_[k].erase(std::unique(pred_[k].begin(), pred_[k].end()), pred_[k].end());
        }
        root_ = index[root];
        colors_ = q.num_nodes();
    }

    const Framing& framing() const { return f_; }
    int radius() const { return radius_; }
    int size() const { return static_cast<int>(atoms_.size()); }
    int num_colors() const { return colors_; }
    int root() const { return root_; }
    const Atom& atom(int k) const { return atoms_[k]; }
    int depth(int k) const { return depth_[k]; }
    const std::vector<int>& successors(int k) const { return succ_[k]; }
    const std::vector<int>& predecessors(int k) const { return pred_[k]; }
    // has a reachable predecessor beyond the radius
    bool blocked(int k) const { return blocked_[k]; }

    // Is the atom a path weight from the root? D6: n >= minimal depth; D4: n equals it.
    bool reachable(const Atom& x) const {
        int m = nmin(x.color, x.t);
        if (m == INT_MAX) return false;
        return f_.kind == Framing::Kind::d6 ? x.n >= m : x.n == m;
    }
    int nmin(int color, Vec2 t) const {
        if (std::abs(t[0]) > box_ || std::abs(t[1]) > box_) throw invariant_error("BoundTooSmall", "atom outside the reachability box");
        return nmin_[cell(color, t)];
    }

private:
    std::size_t cell(int color, Vec2 t) const {
        const int w = 2 * box_ + 1;
        return (static_cast<std::size_t>(color) * w + (t[0] + box_)) * w + (t[1] + box_);
    }
    void min_depth(const PeriodicQuiver& q, const ReferenceGrading& g) {
        const int w = 2 * box_ + 1;
        nmin_.assign(static_cast<std::size_t>(q.num_nodes()) * w * w, INT_MAX);
        std::deque<std::pair<int, Vec2>> dq;
        nmin_[cell(f_.node, {0, 0})] = 0;
        dq.push_back({f_.node, {0, 0}});
        while (!dq.empty()) {
            auto [c, t] = dq.front();
            dq.pop_front();
            int base = nmin_[cell(c, t)];
            for (int a = 0; a < q.num_arrows(); ++a) {
                if (!f_.allowed[a] || q.arrows[a].src != c) continue;
                Vec2 u = t + g.d[a];
                if (std::abs(u[0]) > box_ || std::abs(u[1]) > box_) continue;
                int nv = base + g.m[a];
                auto& slot = nmin_[cell(q.arrows[a].tgt, u)];
                if (nv >= slot) continue;
                slot = nv;
                if (g.m[a] == 0) dq.push_front({q.arrows[a].tgt, u});
                else dq.push_back({q.arrows[a].tgt, u});
            }
        }
    }

    Framing f_;
    int radius_ = 0;
    int box_ = 0;
    int root_ = 0;
    int colors_ = 0;
    std::vector<int> nmin_;
    std::vector<Atom> atoms_;
    std::vector<int> depth_;
    std::vector<std::vector<int>> succ_, pred_;
    std::vector<char> blocked_;
};

struct Crystal {
    std::vector<int> atoms; // sorted ERC indices (= sorted atom list)
    DimVec dim;
    std::size_t size() const { return atoms.size(); }
};

inline DimVec crystal_dim(const Erc& erc, const std::vector<int>& atoms) {
    DimVec d(erc.num_colors(), 0);
    for (int k : atoms) d[erc.atom(k).color]++;
    return d;
}

// Every finite ideal with at most max_atoms atoms, ordered by size, then key.
inline std::vector<Crystal> enumerate_crystals(const Erc& erc, int max_atoms) {
    if (max_atoms < 0) throw validation_error("ValidationError", "negative crystal size bound");
    if (erc.radius() < max_atoms) throw invariant_error("BoundTooSmall", "ERC radius " + std::to_string(erc.radius()) + " below crystal bound " + std::to_string(max_atoms));
    std::vector<Crystal> out;
    out.push_back({{}, DimVec(erc.num_colors(), 0)});
    if (max_atoms == 0) return out;
    std::vector<std::vector<int>> level{{erc.root()}};
    for (int size = 1;; ++size) {
        for (auto& c : level) out.push_back({c, crystal_dim(erc, c)});
        if (size == max_atoms) break;
        std::vector<std::vector<std::vector<int>>> grown(level.size());
        parallel_for(level.size(), [&](std::size_t idx) {
            const auto& pi = level[idx];
            std::vector<int> cand;
            for (int k : pi)
                for (int s : erc.successors(k))
                    if (!std::binary_search(pi.begin(), pi.end(), s)) cand.push_back(s);
            std::sort(cand.begin(), cand.end());
            cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            for (int y : cand) {
                if (erc.blocked(y)) continue;
                bool ok = true;
                for (int p : erc.predecessors(y))
                    if (!std::binary_search(pi.begin(), pi.end(), p)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                auto next = pi;
                next.insert(std::upper_bound(next.begin(), next.end(), y), y);
                grown[idx].push_back(std::move(next));
            }
        });
        std::set<std::vector<int>> uniq;
        for (auto& g : grown)
            for (auto& c : g) uniq.insert(std::move(c));
        if (uniq.empty()) break;
        level.assign(uniq.begin(), uniq.end());
    }
    return out;
}

// Crystal counts by size 0..max_atoms.
inline std::vector<long> crystal_counts(const std::vector<Crystal>& cs, int max_atoms) {
    std::vector<long> r(max_atoms + 1, 0);
    for (auto& c : cs)
        if (static_cast<int>(c.size()) <= max_atoms) r[c.size()]++;
    return r;
}

} // namespace moltendt
