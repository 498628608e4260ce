#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <set>

#include <moltendt/catalog.hpp>
#include <moltendt/matchings.hpp>

using namespace moltendt;

namespace {

// every arrow subset meeting each term exactly once
std::vector<std::vector<int>> brute_cuts(const PeriodicQuiver& q) {
    std::vector<std::vector<int>> out;
    const int n = q.num_arrows();
    REQUIRE(n <= 22);
    for (unsigned long m = 0; m < (1ul << n); ++m) {
        bool ok = true;
        for (auto& t : q.terms) {
            int c = 0;
            for (int a : t.cycle) c += (m >> a) & 1;
            if (c != 1) { ok = false; break; }
        }
        if (!ok) continue;
        std::vector<int> s;
        for (int a = 0; a < n; ++a)
            if ((m >> a) & 1) s.push_back(a);
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// shortest closed path from node 0 with the given displacement, by BFS on (node, offset)
std::vector<int> bfs_cycle(const PeriodicQuiver& q, Vec2 target) {
    using State = std::tuple<int, int, int>;
    std::map<State, std::pair<State, int>> prev;
    std::deque<State> dq{{0, 0, 0}};
    prev[{0, 0, 0}] = {{-1, 0, 0}, -1};
    State goal{0, target[0], target[1]};
    while (!dq.empty()) {
        auto s = dq.front();
        dq.pop_front();
        if (s == goal) break;
        for (int a = 0; a < q.num_arrows(); ++a) {
            if (q.arrows[a].src != std::get<0>(s)) continue;
            State t{q.arrows[a].tgt, std::get<1>(s) + q.arrows[a].disp[0], std::get<2>(s) + q.arrows[a].disp[1]};
            if (std::abs(std::get<1>(t)) > 4 || std::abs(std::get<2>(t)) > 4 || prev.count(t)) continue;
            prev[t] = {s, a};
            dq.push_back(t);
        }
    }
    REQUIRE(prev.count(goal));
    std::vector<int> path;
    for (State s = goal; prev[s].second >= 0; s = prev[s].first) path.push_back(prev[s].second);
    return path;
}

int count_in(const std::vector<int>& path, const std::vector<int>& cut) {
    int c = 0;
    for (int a : path) c += std::count(cut.begin(), cut.end(), a);
    return c;
}

// lattice points strictly inside a convex polygon
int interior_points(const std::vector<Vec2>& poly) {
    int lo = 1 << 20, hi = -(1 << 20);
    for (auto& p : poly) lo = std::min({lo, p[0], p[1]}), hi = std::max({hi, p[0], p[1]});
    int n = 0;
    for (int x = lo; x <= hi; ++x)
        for (int y = lo; y <= hi; ++y) {
            bool in = true;
            for (std::size_t k = 0; k < poly.size() && in; ++k) {
                Vec2 e = poly[(k + 1) % poly.size()] - poly[k];
                in = cross(e, Vec2{x, y} - poly[k]) < 0; // clockwise: interior on the right
            }
            n += in;
        }
    return n;
}

int boundary_points(const std::vector<Vec2>& poly) {
    int b = 0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        Vec2 e = poly[(k + 1) % poly.size()] - poly[k];
        b += std::gcd(std::abs(e[0]), std::abs(e[1]));
    }
    return b;
}

DimVec zero(int n) { return DimVec(n, 0); }

} // namespace

TEST_CASE("perfect matchings agree with exhaustive subsets") {
    for (auto& name : builtin_names()) {
        CAPTURE(name);
        auto q = builtin(name);
        if (q.num_arrows() > 22) continue;
        auto cuts = perfect_matchings(q);
        auto brute = brute_cuts(q);
        REQUIRE(cuts.size() == brute.size());
        for (std::size_t k = 0; k < cuts.size(); ++k) CHECK(cuts[k].arrows == brute[k]);

        // points agree up to one overall translation
        auto c1 = bfs_cycle(q, {1, 0}), c2 = bfs_cycle(q, {0, 1});
        Vec2 shift = cuts[0].point + Vec2{count_in(c1, cuts[0].arrows), count_in(c2, cuts[0].arrows)};
        for (auto& c : cuts) CHECK(c.point + Vec2{count_in(c1, c.arrows), count_in(c2, c.arrows)} == shift);
    }
}

TEST_CASE("toric diagrams of small geometries") {
    auto D = toric_diagram(builtin("c3"));
    CHECK(D.cuts.size() == 3);
    CHECK(D.b == 3);
    CHECK(D.interior == 0);
    CHECK(D.twice_area == 1);

    D = toric_diagram(builtin("conifold"));
    CHECK(D.corners.size() == 4);
    CHECK(D.b == 4);
    CHECK(D.interior == 0);

    auto q = builtin("pdp3a");
    D = toric_diagram(q);
    CHECK(D.corners.size() == 3);
    CHECK(D.b == 6);
    CHECK(D.interior == 1);
    std::vector<int> K;
    for (auto& s : D.sides) K.push_back(s.K);
    CHECK(K == std::vector<int>{1, 3, 2});
    for (int k = 0; k < 3; ++k)
        for (int a : D.cuts[D.corner_cut[k]].arrows) CHECK(q.arrows[a].id.rfind("phi" + std::to_string(k) + "_", 0) == 0);

    D = toric_diagram(builtin("c3-z2z2"));
    CHECK(D.b == 6);
    CHECK(D.interior == 0);
}

TEST_CASE("diagram geometry: closed boundary, Pick, clockwise corners") {
    for (auto& name : builtin_names()) {
        CAPTURE(name);
        auto D = toric_diagram(builtin(name));
        Vec2 s{0, 0};
        for (auto& side : D.sides) s = s + side.K * side.l;
        CHECK(s == Vec2{0, 0});
        CHECK(D.b == boundary_points(D.corners));
        CHECK(D.interior == interior_points(D.corners));
        CHECK(D.twice_area == 2 * D.interior + D.b - 2);
        int area = 0;
        for (std::size_t k = 0; k < D.corners.size(); ++k) area += cross(D.corners[k], D.corners[(k + 1) % D.corners.size()]);
        CHECK(area < 0);
        for (auto& side : D.sides) {
            Vec2 e = D.corners[side.to] - D.corners[side.from];
            CHECK(e == side.K * Vec2{side.l[1], -side.l[0]});
        }
        // every cut point lies in the polygon
        for (auto& c : D.cuts)
            for (std::size_t k = 0; k < D.corners.size(); ++k)
                CHECK(cross(D.corners[(k + 1) % D.corners.size()] - D.corners[k], c.point - D.corners[k]) <= 0);
    }
}

TEST_CASE("zig-zag paths: two per arrow, classes are side normals") {
    for (auto& name : builtin_names()) {
        CAPTURE(name);
        auto q = builtin(name);
        auto D = toric_diagram(q);
        auto Z = zigzag_analysis(q, D);
        std::vector<int> seen(q.num_arrows(), 0);
        for (auto& p : Z.paths)
            for (int a : p) seen[a]++;
        for (int a = 0; a < q.num_arrows(); ++a) CHECK(seen[a] == 2);
        for (std::size_t k = 0; k < Z.paths.size(); ++k) CHECK(zigzag_class(q, Z.paths[k]) == D.sides[Z.path_side[k]].l);
        for (std::size_t s = 0; s < D.sides.size(); ++s) {
            CHECK(static_cast<int>(Z.sides[s].paths.size()) == D.sides[s].K);
            CHECK(static_cast<int>(Z.sides[s].alpha.size()) == D.sides[s].K);
            auto sum = zero(q.num_nodes());
            for (auto& a : Z.sides[s].alpha)
                for (int i = 0; i < q.num_nodes(); ++i) sum[i] += a[i];
            CHECK(sum == Z.delta);
            // strips partition the nodes
            std::vector<int> cover(q.num_nodes(), 0);
            for (auto& st : Z.sides[s].strips)
                for (int i : st) cover[i]++;
            for (int c : cover) CHECK(c == 1);
        }
    }
}

TEST_CASE("pdp3a side 1 strips") {
    auto q = builtin("pdp3a");
    auto Z = zigzag_analysis(q, toric_diagram(q));
    std::set<DimVec> a(Z.sides[1].alpha.begin(), Z.sides[1].alpha.end());
    CHECK(a == std::set<DimVec>{{1, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 1, 0}, {0, 0, 1, 0, 0, 1}});
    CHECK(Z.sides[1].alpha_intervals.size() == 6);
    CHECK(Z.delta == DimVec{1, 1, 1, 1, 1, 1});
}

TEST_CASE("spp side 3 strip") {
    auto q = builtin("spp");
    auto Z = zigzag_analysis(q, toric_diagram(q));
    auto& s = Z.sides[3];
    REQUIRE(s.strips.size() == 1);
    auto ids = [&](const std::vector<int>& v) {
        std::set<std::string> r;
        for (int a : v) r.insert(q.arrows[a].id);
        return r;
    };
    CHECK(ids(s.zig[0]) == std::set<std::string>{"phi32"});
    CHECK(ids(s.zag[0]) == std::set<std::string>{"phi23"});
    CHECK(ids(s.J[0]) == std::set<std::string>{"phi11"});
    auto& t = Z.sides[1];
    REQUIRE(t.strips.size() == 2);
    CHECK(t.alpha_intervals.size() == 2);
}

TEST_CASE("d4 seed arrows sit on both adjacent sides") {
    for (auto& name : builtin_names()) {
        CAPTURE(name);
        auto q = builtin(name);
        auto D = toric_diagram(q);
        auto Z = zigzag_analysis(q, D);
        const int n = static_cast<int>(D.corners.size());
        for (int c = 0; c < n; ++c) {
            auto seeds = d4_seed_arrows(D, Z, c);
            auto& cut = D.cuts[D.corner_cut[c]].arrows;
            for (int a : seeds) {
                CHECK(std::count(cut.begin(), cut.end(), a) == 1);
                int sides = 0;
                for (int s : {(c - 1 + n) % n, c})
                    for (auto& p : Z.sides[s].paths)
                        if (std::count(p.begin(), p.end(), a)) { ++sides; break; }
                CHECK(sides == 2);
            }
        }
        CHECK_THROWS_AS(d4_seed_arrows(D, Z, n), Error);
    }
    auto q = builtin("c3");
    auto D = toric_diagram(q);
    auto Z = zigzag_analysis(q, D);
    for (int c = 0; c < 3; ++c) CHECK(d4_seed_arrows(D, Z, c).size() == 1);
}
