#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <moltendt/catalog.hpp>
#include <moltendt/matchings.hpp>

using namespace moltendt;
using json = nlohmann::json;

namespace {

// honeycomb: one white, one black node
json c3_tiling() {
    return json::parse(R"({
      "nodes": [{"id": "w", "color": "white", "pos": [0, 0]}, {"id": "b", "color": "black", "pos": [0.333, 0.333]}],
      "edges": [{"id": "a", "white": "w", "black": "b"},
                {"id": "b", "white": "w", "black": "b", "shift": [-1, 0]},
                {"id": "c", "white": "w", "black": "b", "shift": [0, -1]}]})");
}

// square lattice: one white, one black node of degree 4
json conifold_tiling() {
    return json::parse(R"({
      "nodes": [{"id": "w", "color": "white", "pos": [0, 0]}, {"id": "b", "color": "black", "pos": [0.5, 0.5]}],
      "edges": [{"white": "w", "black": "b"}, {"white": "w", "black": "b", "shift": [-1, 0]},
                {"white": "w", "black": "b", "shift": [0, -1]}, {"white": "w", "black": "b", "shift": [-1, -1]}]})");
}

// honeycomb supercell over {a - b = 0 mod 3}: the local P2 tiling
json p2_tiling() {
    // coordinates w.r.t. the basis (1, 1), (0, 3)
    auto to_new = [](double a, double b) { return std::array<double, 2>{a, (b - a) / 3}; };
    json t{{"nodes", json::array()}, {"edges", json::array()}};
    for (int r = 0; r < 3; ++r) {
        auto w = to_new(r, 0), b = to_new(r + 0.333, 0.333);
        t["nodes"].push_back({{"id", "w" + std::to_string(r)}, {"color", "white"}, {"pos", {w[0], w[1]}}});
        t["nodes"].push_back({{"id", "b" + std::to_string(r)}, {"color", "black"}, {"pos", {b[0], b[1]}}});
    }
    const int shifts[3][2] = {{0, 0}, {-1, 0}, {0, -1}};
    for (int r = 0; r < 3; ++r)
        for (auto& s : shifts) {
            int a = r + s[0], b = s[1];
            int rr = ((a - b) % 3 + 3) % 3;
            int la = a - rr, lb = b;
            json sh = json::array({la, (lb - la) / 3});
            t["edges"].push_back({{"white", "w" + std::to_string(r)}, {"black", "b" + std::to_string(rr)}, {"shift", sh}});
        }
    return t;
}

json flip_colors(json t) {
    for (auto& n : t["nodes"]) n["color"] = n["color"] == "white" ? "black" : "white";
    for (auto& e : t["edges"]) {
        std::swap(e["white"], e["black"]);
        if (e.contains("shift")) e["shift"] = json::array({-e["shift"][0].get<int>(), -e["shift"][1].get<int>()});
    }
    return t;
}

// equal after relabelling nodes
bool same_up_to_relabel(const IntMatrix& a, const IntMatrix& b) {
    std::vector<int> pi(a.size());
    std::iota(pi.begin(), pi.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i)
            for (std::size_t j = 0; j < a.size() && ok; ++j) ok = a[pi[i]][pi[j]] == b[i][j];
        if (ok) return true;
    } while (std::next_permutation(pi.begin(), pi.end()));
    return false;
}

IntMatrix transpose(const IntMatrix& m) {
    IntMatrix r(m[0].size(), std::vector<int>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) r[j][i] = m[i][j];
    return r;
}

// signed turning of the edge directions around a node, in the order given by a potential term
double winding(const json& t, const std::string& node, const std::vector<std::string>& edge_order) {
    std::map<std::string, double> angle;
    std::array<double, 2> p{};
    for (auto& n : t["nodes"])
        if (n["id"] == node) p = {n["pos"][0].get<double>(), n["pos"][1].get<double>()};
    int k = 0;
    for (auto& e : t["edges"]) {
        std::string id = e.contains("id") ? e["id"].get<std::string>() : "e" + std::to_string(k);
        ++k;
        bool white = e["white"] == node;
        std::string other = white ? e["black"] : e["white"];
        std::array<double, 2> o{};
        for (auto& n : t["nodes"])
            if (n["id"] == other) o = {n["pos"][0].get<double>(), n["pos"][1].get<double>()};
        double sx = e.contains("shift") ? e["shift"][0].get<double>() : 0, sy = e.contains("shift") ? e["shift"][1].get<double>() : 0;
        if (!white) sx = -sx, sy = -sy;
        angle[id] = std::atan2(o[1] + sy - p[1], o[0] + sx - p[0]);
    }
    double total = 0;
    for (std::size_t i = 0; i < edge_order.size(); ++i) {
        double d = angle[edge_order[(i + 1) % edge_order.size()]] - angle[edge_order[i]];
        while (d <= -M_PI) d += 2 * M_PI;
        while (d > M_PI) d -= 2 * M_PI;
        total += d;
    }
    return total;
}

} // namespace

TEST_CASE("builtins load and satisfy the quiver invariants") {
    for (auto& name : builtin_names()) {
        CAPTURE(name);
        auto q = builtin(name);
        CHECK_NOTHROW(validate(q));
        for (auto& t : q.terms) {
            Vec2 s{0, 0};
            for (int a : t.cycle) s = s + q.arrows[a].disp;
            CHECK(s == Vec2{0, 0});
        }
    }
    CHECK_THROWS_AS(builtin("nope"), Error);
}

TEST_CASE("c3 and conifold builtins") {
    auto c3 = builtin("c3");
    CHECK(c3.num_nodes() == 1);
    CHECK(c3.num_arrows() == 3);
    CHECK(c3.terms.size() == 2);
    CHECK(c3.euler() == IntMatrix{{-2}});
    CHECK(c3.twist() == IntMatrix{{0}});

    auto con = builtin("conifold");
    CHECK(con.num_nodes() == 2);
    CHECK(con.num_arrows() == 4);
    CHECK(con.terms.size() == 2);
    for (auto& t : con.terms) CHECK(t.cycle.size() == 4);
    CHECK(con.euler() == IntMatrix{{1, -2}, {-2, 1}});
    CHECK(con.twist() == IntMatrix{{0, 0}, {0, 0}});
}

TEST_CASE("pdp3a antisymmetrized Euler form") {
    auto q = builtin("pdp3a");
    int n01 = 0, n10 = 0;
    for (auto& a : q.arrows) {
        n01 += a.src == 0 && a.tgt == 1;
        n10 += a.src == 1 && a.tgt == 0;
    }
    CHECK(euler_pairing(q, {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}) == -n01);
    CHECK(pairing(q.twist(), {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}) == n10 - n01);
    CHECK(pairing(q.twist(), {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}) == -1);
    auto B = q.twist();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) CHECK(B[i][j] == -B[j][i]);
}

TEST_CASE("reference grading from a cut") {
    auto q = builtin("c3");
    auto g = grading_for_cut(q, {q.arrow_index("c")});
    CHECK(g.d[q.arrow_index("a")] == Vec2{1, 0});
    CHECK(g.d[q.arrow_index("b")] == Vec2{0, 1});
    CHECK(g.d[q.arrow_index("c")] == Vec2{-1, -1});
    CHECK(g.m == std::vector<int>{0, 0, 1});
    CHECK_THROWS_AS(grading_for_cut(q, {0, 1}), Error);
    for (auto& name : builtin_names()) {
        auto p = builtin(name);
        auto D = toric_diagram(p);
        auto h = grading_for_cut(p, D.cuts.front().arrows);
        for (auto& t : p.terms) {
            Vec2 s{0, 0};
            int m = 0;
            for (int a : t.cycle) s = s + h.d[a], m += h.m[a];
            CHECK(s == Vec2{0, 0});
            CHECK(m == 1);
        }
    }
}

TEST_CASE("quiver validation errors") {
    auto j = quiver_to_json(builtin("c3"));
    CHECK(quiver_from_json(j).num_arrows() == 3);
    auto bad = j;
    bad["arrows"][0]["disp"] = json::array({2, 0});
    CHECK_THROWS_WITH_AS(quiver_from_json(bad), doctest::Contains("displacement sum"), Error);
    bad = j;
    bad["potential"].erase(1);
    CHECK_THROWS_AS(quiver_from_json(bad), Error);
    bad = j;
    bad["arrows"][1]["id"] = "a";
    CHECK_THROWS_AS(quiver_from_json(bad), Error);
    CHECK_THROWS_AS(geometry_from_json(json::object(), "x"), Error);
    CHECK_THROWS_AS(load_geometry("/nonexistent/file.json"), Error);
}

TEST_CASE("c3 tiling gives the c3 quiver with clockwise + terms") {
    auto t = c3_tiling();
    auto q = geometry_from_json(t, "c3-tiling");
    CHECK(q.num_nodes() == 1);
    CHECK(q.num_arrows() == 3);
    CHECK(q.euler() == IntMatrix{{-2}});
    for (auto& term : q.terms) {
        std::vector<std::string> order;
        for (int a : term.cycle) order.push_back(q.arrows[a].id);
        double w = winding(t, term.sign > 0 ? "w" : "b", order);
        if (term.sign > 0) CHECK(w == doctest::Approx(-2 * M_PI));
        else CHECK(w == doctest::Approx(2 * M_PI));
    }
    auto D = toric_diagram(q);
    CHECK(D.cuts.size() == 3);
    CHECK(D.b == 3);
    CHECK(D.interior == 0);
}

TEST_CASE("conifold tiling") {
    auto q = geometry_from_json(conifold_tiling(), "conifold-tiling");
    CHECK(q.num_nodes() == 2);
    CHECK(q.num_arrows() == 4);
    CHECK(q.euler() == IntMatrix{{1, -2}, {-2, 1}});
    auto D = toric_diagram(q);
    CHECK(D.cuts.size() == 4);
    CHECK(D.twice_area == 2);
}

TEST_CASE("flipping tiling colors transposes the Euler form") {
    for (auto t : {c3_tiling(), conifold_tiling(), p2_tiling()}) {
        auto q = geometry_from_json(t, "t");
        auto f = geometry_from_json(flip_colors(t), "f");
        CHECK(same_up_to_relabel(f.euler(), transpose(q.euler())));
    }
    auto q = builtin("pdp3a");
    auto chi = q.euler();
    CHECK(transpose(transpose(chi)) == chi);
}

TEST_CASE("local P2 tiling") {
    auto t = p2_tiling();
    auto q = geometry_from_json(t, "p2-tiling");
    CHECK(q.num_nodes() == 3);
    CHECK(q.num_arrows() == 9);
    auto chi = q.euler();
    CHECK(chi != transpose(chi));
    for (int i = 0; i < 3; ++i) {
        CHECK(chi[i][i] == 1);
        CHECK(chi[i][(i + 1) % 3] + chi[(i + 1) % 3][i] == -3);
    }
    auto D = toric_diagram(q);
    CHECK(D.b == 3);
    CHECK(D.interior == 1);
    CHECK(D.twice_area == 3);
    for (auto& term : q.terms) {
        std::vector<std::string> order;
        for (int a : term.cycle) order.push_back(q.arrows[a].id);
        std::string node;
        // the node whose edges are exactly this term's arrows
        for (int v = 0; v < 3; ++v) {
            std::string id = (term.sign > 0 ? "w" : "b") + std::to_string(v);
            std::set<std::string> mine;
            int k = 0;
            for (auto& e : t["edges"]) {
                if (e[term.sign > 0 ? "white" : "black"] == id) mine.insert("e" + std::to_string(k));
                ++k;
            }
            if (mine == std::set<std::string>(order.begin(), order.end())) node = id;
        }
        REQUIRE(!node.empty());
        CHECK(winding(t, node, order) == doctest::Approx(term.sign > 0 ? -2 * M_PI : 2 * M_PI));
    }
}

TEST_CASE("tiling validation errors") {
    auto t = c3_tiling();
    auto bad = t;
    bad["edges"].erase(2);
    bad["edges"].erase(1);
    CHECK_THROWS_AS(geometry_from_json(bad, "x"), Error);
    bad = t;
    bad["nodes"][1]["color"] = "white";
    CHECK_THROWS_AS(geometry_from_json(bad, "x"), Error);
    bad = t;
    bad["nodes"][1]["color"] = "green";
    CHECK_THROWS_AS(geometry_from_json(bad, "x"), Error);
    bad = t;
    bad["edges"][0]["black"] = "zz";
    CHECK_THROWS_AS(geometry_from_json(bad, "x"), Error);
}

TEST_CASE("tiling positions outside the unit cell") {
    auto t = c3_tiling();
    t["nodes"][0]["pos"] = json::array({3.0, -2.0});
    t["nodes"][1]["pos"] = json::array({3.333, -1.667});
    auto q = geometry_from_json(t, "shifted");
    CHECK(q.num_arrows() == 3);
    CHECK(toric_diagram(q).b == 3);
}
