#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include <moltendt/catalog.hpp>
#include <moltendt/pipeline.hpp>

#include "oracles.hpp"

using namespace moltendt;

namespace {

using AtomSet = std::set<Atom>;

// Path weights from the root by naive BFS over many steps; D4 keeps the minimal-n weights only.
AtomSet naive_atoms(const PeriodicQuiver& q, const ReferenceGrading& g, const Framing& f, int steps) {
    AtomSet seen{{f.node, {0, 0}, 0}};
    std::vector<Atom> frontier(seen.begin(), seen.end());
    for (int s = 0; s < steps; ++s) {
        std::vector<Atom> next;
        for (auto& x : frontier)
            for (int a = 0; a < q.num_arrows(); ++a) {
                if (!f.allowed[a] || q.arrows[a].src != x.color) continue;
                Atom y{q.arrows[a].tgt, x.t + g.d[a], x.n + g.m[a]};
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    if (f.kind == Framing::Kind::d6) return seen;
    std::map<std::pair<int, Vec2>, int> low;
    for (auto& x : seen) {
        auto key = std::make_pair(x.color, x.t);
        if (!low.count(key) || x.n < low[key]) low[key] = x.n;
    }
    AtomSet r;
    for (auto& x : seen)
        if (x.n == low[{x.color, x.t}]) r.insert(x);
    return r;
}

// All downward-closed atom sets containing the root with at most N atoms.
std::set<AtomSet> naive_ideals(const PeriodicQuiver& q, const ReferenceGrading& g, const Framing& f, int N) {
    AtomSet atoms = naive_atoms(q, g, f, 3 * N + 6);
    auto preds = [&](const Atom& y) {
        std::vector<Atom> r;
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (!f.allowed[a] || q.arrows[a].tgt != y.color) continue;
            Atom x{q.arrows[a].src, y.t - g.d[a], y.n - g.m[a]};
            if (atoms.count(x)) r.push_back(x);
        }
        return r;
    };
    auto succs = [&](const Atom& x) {
        std::vector<Atom> r;
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (!f.allowed[a] || q.arrows[a].src != x.color) continue;
            Atom y{q.arrows[a].tgt, x.t + g.d[a], x.n + g.m[a]};
            if (atoms.count(y)) r.push_back(y);
        }
        return r;
    };
    std::set<AtomSet> out{{}};
    std::vector<AtomSet> level{{Atom{f.node, {0, 0}, 0}}};
    for (int size = 1; size <= N && !level.empty(); ++size) {
        std::set<AtomSet> next;
        for (auto& S : level) {
            out.insert(S);
            if (size == N) continue;
            for (auto& x : S)
                for (auto& y : succs(x)) {
                    if (S.count(y)) continue;
                    bool ok = true;
                    for (auto& p : preds(y)) ok = ok && S.count(p);
                    if (!ok) continue;
                    auto T = S;
                    T.insert(y);
                    next.insert(T);
                }
        }
        level.assign(next.begin(), next.end());
    }
    return out;
}

std::set<AtomSet> as_atom_sets(const Erc& erc, const std::vector<Crystal>& cs) {
    std::set<AtomSet> r;
    for (auto& c : cs) {
        AtomSet s;
        for (int k : c.atoms) s.insert(erc.atom(k));
        r.insert(s);
    }
    return r;
}

} // namespace

TEST_CASE("oracles") {
    CHECK(oracle::plane_partitions(3) == 6);
    CHECK(oracle::plane_partitions(5) == 24);
    CHECK(oracle::plane_partitions(7) == 86);
    CHECK(oracle::integer_partitions(6) == 11);
}

TEST_CASE("c3 D6 root and its successors") {
    Model m(builtin("c3"));
    Erc erc(m.q, m.grading, d6_framing(m.q, 0), 3);
    auto& r = erc.atom(erc.root());
    CHECK(r.color == 0);
    CHECK(r.t == Vec2{0, 0});
    CHECK(r.n == 0);
    CHECK(erc.predecessors(erc.root()).empty());
    auto& s = erc.successors(erc.root());
    REQUIRE(s.size() == 3);
    int n0 = 0, n1 = 0;
    for (int k : s) {
        n0 += erc.atom(k).n == 0;
        n1 += erc.atom(k).n == 1;
        CHECK(erc.depth(k) == 1);
    }
    CHECK(n0 == 2);
    CHECK(n1 == 1);
}

TEST_CASE("c3 D6 counts are plane partitions") {
    Model m(builtin("c3"));
    const int N = 7;
    auto fc = d6_crystals(m, 0, N);
    auto c = crystal_counts(fc.crystals, N);
    for (int n = 0; n <= N; ++n) CHECK(c[n] == oracle::plane_partitions(n));
}

TEST_CASE("c3 D4 counts are partitions, growing in a quadrant") {
    Model m(builtin("c3"));
    const int N = 7;
    for (int corner = 0; corner < 3; ++corner) {
        auto fc = d4_crystals(m, corner, -1, N);
        auto c = crystal_counts(fc.crystals, N);
        for (int n = 0; n <= N; ++n) CHECK(c[n] == oracle::integer_partitions(n));
        // two arrows left: at most one atom over each lattice position
        for (auto& cr : fc.crystals) {
            std::set<Vec2> pos;
            for (int k : cr.atoms) pos.insert(fc.erc->atom(k).t);
            CHECK(pos.size() == cr.atoms.size());
        }
    }
}

TEST_CASE("crystals agree with naive ideal growth") {
    for (auto& name : builtin_names()) {
        CAPTURE(name);
        Model m(builtin(name));
        const int N = m.q.num_nodes() > 4 ? 4 : 5;
        for (int node = 0; node < std::min(2, m.q.num_nodes()); ++node) {
            auto fc = d6_crystals(m, node, N);
            CHECK(as_atom_sets(*fc.erc, fc.crystals) == naive_ideals(m.q, m.grading, fc.erc->framing(), N));
            for (auto& c : fc.crystals) CHECK(c.dim == crystal_dim(*fc.erc, c.atoms));
        }
        for (int corner = 0; corner < m.num_sides(); ++corner) {
            if (d4_seed_arrows(m.diagram, m.zigzag, corner).empty()) continue;
            auto fc = d4_crystals(m, corner, -1, N);
            CHECK(as_atom_sets(*fc.erc, fc.crystals) == naive_ideals(m.q, m.grading, fc.erc->framing(), N));
        }
    }
}

TEST_CASE("crystal ordering and small bounds") {
    Model m(builtin("conifold"));
    auto fc = d6_crystals(m, 0, 1);
    REQUIRE(fc.crystals.size() == 2);
    CHECK(fc.crystals[0].atoms.empty());
    CHECK(fc.crystals[1].atoms == std::vector<int>{fc.erc->root()});
    CHECK(fc.crystals[1].dim == DimVec{1, 0});

    fc = d6_crystals(m, 1, 5);
    for (std::size_t k = 1; k < fc.crystals.size(); ++k) {
        auto& a = fc.crystals[k - 1];
        auto& b = fc.crystals[k];
        CHECK((a.size() < b.size() || (a.size() == b.size() && a.atoms < b.atoms)));
    }

    Erc small(m.q, m.grading, d6_framing(m.q, 0), 2);
    CHECK_THROWS_WITH_AS(enumerate_crystals(small, 3), doctest::Contains("below crystal bound"), Error);
    try {
        enumerate_crystals(small, 3);
    } catch (const Error& e) {
        CHECK(e.kind() == "BoundTooSmall");
        CHECK(e.severity() == Severity::invariant);
    }
    CHECK_THROWS_AS(d6_framing(m.q, 2), Error);
}

TEST_CASE("invalid D4 seeds") {
    Model m(builtin("pdp3a"));
    auto valid = d4_seed_arrows(m.diagram, m.zigzag, 0);
    REQUIRE(!valid.empty());
    for (int a = 0; a < m.q.num_arrows(); ++a)
        if (std::find(valid.begin(), valid.end(), a) == valid.end())
            CHECK_THROWS_AS(d4_framing(m.q, m.diagram, m.zigzag, 0, a), Error);
}
