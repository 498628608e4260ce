#pragma once

// Geometry analysis bundled with the framed -> unframed -> BPS pipeline.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "bps.hpp"
#include "crystal.hpp"
#include "geometry.hpp"
#include "localization.hpp"
#include "matchings.hpp"
#include "qspace.hpp"

namespace moltendt {

struct Model {
    PeriodicQuiver q;
    ReferenceGrading grading;
    ToricDiagram diagram;
    ZigZagData zigzag;
    DiagramProfile profile;
    IntMatrix twist;

    explicit Model(PeriodicQuiver quiver) : q(std::move(quiver)) {
        diagram = toric_diagram(q);
        grading = grading_for_cut(q, diagram.cuts.front().arrows);
        zigzag = zigzag_analysis(q, diagram);
        profile = make_profile(diagram, zigzag);
        twist = q.twist();
    }
    int num_sides() const { return static_cast<int>(diagram.sides.size()); }
    ShapePtr shape(int bound) const { return make_shape(q.num_nodes(), bound, twist, q.euler()); }
};

struct PipelineOptions {
    IndexOptions index;
    AdamsRule adams = AdamsRule::euler_twisted;
};

struct FramedCrystals {
    std::shared_ptr<const Erc> erc;
    std::vector<Crystal> crystals;
};

inline FramedCrystals d6_crystals(const Model& m, int node, int bound) {
    auto erc = std::make_shared<const Erc>(m.q, m.grading, d6_framing(m.q, node), bound);
    return {erc, enumerate_crystals(*erc, bound)};
}

inline FramedCrystals d4_crystals(const Model& m, int corner, int seed, int bound) {
    auto erc = std::make_shared<const Erc>(m.q, m.grading, d4_framing(m.q, m.diagram, m.zigzag, corner, seed), bound);
    return {erc, enumerate_crystals(*erc, bound)};
}

// Crystals at every node, computed once and reused across slopes.
class CrystalCache {
public:
    CrystalCache(const Model& m, int bound) : m_(m), bound_(bound), per_node_(m.q.num_nodes()) {}
    const FramedCrystals& at(int node) {
        if (!per_node_[node]) per_node_[node] = std::make_unique<FramedCrystals>(d6_crystals(m_, node, bound_));
        return *per_node_[node];
    }
    int bound() const { return bound_; }

private:
    const Model& m_;
    int bound_;
    std::vector<std::unique_ptr<FramedCrystals>> per_node_;
};

inline std::map<int, QSeries> nilpotent_series(const Model& m, CrystalCache& cache, const Slope& s, const PipelineOptions& opt = {}) {
    auto shape = m.shape(cache.bound());
    std::map<int, QSeries> out;
    for (int i = 0; i < m.q.num_nodes(); ++i) {
        auto& fc = cache.at(i);
        out.emplace(i, framed_partition_function(m.q, *fc.erc, fc.crystals, s, shape, opt.index));
    }
    return out;
}

inline std::map<int, QSeries> corrected_series(const Model& m, CrystalCache& cache, const std::vector<int>& interval,
                                               const Slope& s, const PipelineOptions& opt = {}) {
    auto nil = nilpotent_series(m, cache, s, opt);
    BpsTable dOmega = delta_omega_correction(m.profile, interval, cache.bound());
    std::map<int, QSeries> out;
    for (auto& [i, z] : nil) out.emplace(i, corrected_framed_series(z, dOmega, i, opt.adams));
    return out;
}

// Default stability for θ-tables: a fixed generic integer vector.
inline std::vector<Q> generic_theta(int nodes, std::uint64_t seed = 1) {
    auto r = seeded_vector(seed * 2654435761ULL + 17, nodes);
    std::vector<Q> t;
    for (long x : r) t.push_back(Q(x));
    return t;
}

// Intervals [z, z2] some slope realizes, by length then start.
inline std::vector<std::pair<int, int>> feasible_intervals(const ToricDiagram& D) {
    const int n = static_cast<int>(D.sides.size());
    std::vector<std::pair<int, int>> r;
    for (int len = 1; len < n; ++len)
        for (int z = 0; z < n; ++z) {
            try {
                interval_slope(D, z, (z + len - 1) % n);
                r.push_back({z, (z + len - 1) % n});
            } catch (const Error&) {
            }
        }
    return r;
}

// Another slope k s + s2 with the same signs on every side normal.
inline Slope alternate_slope(const ToricDiagram& D, const Slope& s) {
    for (int k = 1; k < 64; ++k) {
        Vec2 t = k * s.s + s.s2;
        bool ok = true;
        for (auto& side : D.sides)
            if (s.sign(side.l) != Slope{t, rot90(t)}.sign(side.l)) ok = false;
        if (ok && t != s.s) return {t, rot90(t)};
    }
    throw invariant_error("InfeasiblePattern", "no alternate slope with the same side signs");
}

struct CheckOptions {
    int bound = 6;
    bool attractor = true;
    std::uint64_t seed = 1;
    PipelineOptions pipe;
};

inline void append(CheckReport& to, const CheckReport& from) { to.lines.insert(to.lines.end(), from.lines.begin(), from.lines.end()); }

inline DimVec unit_vec(int n, int i) {
    DimVec e(n, 0);
    e[i] = 1;
    return e;
}

// Index antisymmetry / S^0 cancellation per node, slope invariance of Z, interval independence,
// nilpotent identities and duality, the universal nδ values, attractor agreement and the conjecture (soft).
inline CheckReport run_checks(const Model& m, const CheckOptions& o) {
    CheckReport rep;
    const int n = m.q.num_nodes();
    CrystalCache cache(m, o.bound);
    auto intervals = feasible_intervals(m.diagram);
    if (intervals.empty()) throw validation_error("InfeasiblePattern", "no interval of sides is realizable by a slope");
    const auto theta = generic_theta(n, o.seed);

    Slope s0 = interval_slope(m.diagram, intervals.front().first, intervals.front().second);
    for (int i = 0; i < n; ++i) {
        auto& fc = cache.at(i);
        bool anti = true, s0ok = true;
        for (auto& c : fc.crystals) {
            auto a = crystal_index(m.q, *fc.erc, c.atoms, s0, o.pipe.index);
            auto b = crystal_index(m.q, *fc.erc, c.atoms, s0.negated(), o.pipe.index);
            anti = anti && a.index == -b.index;
            s0ok = s0ok && a.d0p == a.d0m;
        }
        rep.lines.push_back({"index-antisymmetry", unit_vec(n, i), anti, true, "", ""});
        rep.lines.push_back({"s0-cancellation", unit_vec(n, i), s0ok, true, "", ""});
    }

    std::map<std::pair<int, int>, BpsTable> nil;
    std::vector<BpsTable> full;
    for (auto [z, z2] : intervals) {
        auto in = interval_sides(m.num_sides(), z, z2);
        Slope s = interval_slope(m.diagram, z, z2);
        auto Z = nilpotent_series(m, cache, s, o.pipe);
        auto Zalt = nilpotent_series(m, cache, alternate_slope(m.diagram, s), o.pipe);
        for (int i = 0; i < n; ++i)
            rep.lines.push_back({"slope-invariance", unit_vec(n, i), Z.at(i) == Zalt.at(i), true, "", ""});
        auto nt = factorize_bps(solve_unframed(Z, true), theta, o.pipe.adams);
        std::map<int, QSeries> corr;
        BpsTable dOmega = delta_omega_correction(m.profile, in, o.bound);
        for (auto& [i, zi] : Z) corr.emplace(i, corrected_framed_series(zi, dOmega, i, o.pipe.adams));
        auto om = factorize_bps(solve_unframed(corr, true), theta, o.pipe.adams);
        append(rep, structure_checks(om, m.profile, {NilpotentTable{in, nt}}, false));
        nil.emplace(std::make_pair(z, z2), nt);
        full.push_back(om);
    }
    for (std::size_t k = 1; k < full.size(); ++k)
        for (auto& d : table_support({&full[0], &full[k]}))
            rep.lines.push_back({"interval-independence", d, full[0].at(d) == full[k].at(d), true, full[0].at(d).str(), full[k].at(d).str()});
    const int ns = m.num_sides();
    for (auto& [iv, t] : nil) {
        auto comp = std::make_pair((iv.second + 1) % ns, (iv.first - 1 + ns) % ns);
        if (comp <= iv) continue;
        auto it = nil.find(comp);
        if (it != nil.end()) append(rep, duality_checks(t, it->second));
    }
    VRational u = universal_ndelta(m.profile);
    for (int k = 1; total(scaled_vec(m.profile.delta, k)) <= o.bound; ++k) {
        DimVec d = scaled_vec(m.profile.delta, k);
        rep.lines.push_back({"universal-ndelta", d, full[0].at(d) == u, true, u.str(), full[0].at(d).str()});
    }
    if (o.attractor) {
        auto [z, z2] = intervals.front();
        auto A = solve_unframed(corrected_series(m, cache, interval_sides(ns, z, z2), interval_slope(m.diagram, z, z2), o.pipe), false);
        auto at = attractor_invariants(A, o.seed, o.pipe.adams);
        std::vector<char> loop(n, 0);
        for (auto& a : m.q.arrows)
            if (a.src == a.tgt) loop[a.src] = 1;
        for (int i = 0; i < n; ++i)
            if (!loop[i]) rep.lines.push_back({"attractor-simple", unit_vec(n, i), at.at(unit_vec(n, i)) == VRational(1), true, "1", at.at(unit_vec(n, i)).str()});
        append(rep, structure_checks(at, m.profile, {}, true));
    }
    return rep;
}

} // namespace moltendt
