#pragma once

// Periodic quivers with potential, brane tilings and the conversion between them.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "qspace.hpp"

namespace moltendt {

using Vec2 = std::array<int, 2>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator-(Vec2 a) { return {-a[0], -a[1]}; }
inline Vec2 operator*(int k, Vec2 a) { return {k * a[0], k * a[1]}; }
inline int dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline int cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }

struct Arrow {
    std::string id;
    int src = 0, tgt = 0;
    Vec2 disp{0, 0};
};

struct Term {
    int sign = 1;
    std::vector<int> cycle; // arrow indices
};

struct PeriodicQuiver {
    std::string name;
    std::vector<std::string> nodes;
    std::vector<Arrow> arrows;
    std::vector<Term> terms;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_arrows() const { return static_cast<int>(arrows.size()); }

    int node_index(const std::string& id) const {
        auto it = std::find(nodes.begin(), nodes.end(), id);
        if (it == nodes.end()) throw validation_error("ValidationError", "unknown node '" + id + "'");
        return static_cast<int>(it - nodes.begin());
    }
    int arrow_index(const std::string& id) const {
        for (int k = 0; k < num_arrows(); ++k)
            if (arrows[k].id == id) return k;
        throw validation_error("ValidationError", "unknown arrow '" + id + "'");
    }

    // chi(d,d') = sum d_i d'_i - sum_{a:i->j} d_i d'_j
    IntMatrix euler() const {
        int n = num_nodes();
        IntMatrix chi(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i) chi[i][i] = 1;
        for (auto& a : arrows) chi[a.src][a.tgt] -= 1;
        return chi;
    }
    IntMatrix twist() const {
        auto chi = euler();
        int n = num_nodes();
        IntMatrix B(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) B[i][j] = chi[i][j] - chi[j][i];
        return B;
    }
};

inline int euler_pairing(const PeriodicQuiver& q, const DimVec& a, const DimVec& b) { return pairing(q.euler(), a, b); }

// Throws ValidationError naming the first violated invariant.
inline void validate(const PeriodicQuiver& q) {
    auto fail = [&](const std::string& m) { throw validation_error("ValidationError", q.name + ": " + m); };
    if (q.nodes.empty()) fail("no nodes");
    std::set<std::string> ids(q.nodes.begin(), q.nodes.end());
    if (ids.size() != q.nodes.size()) fail("duplicate node id");
    std::set<std::string> aids;
    for (auto& a : q.arrows) {
        if (!aids.insert(a.id).second) fail("duplicate arrow id '" + a.id + "'");
        if (a.src < 0 || a.src >= q.num_nodes() || a.tgt < 0 || a.tgt >= q.num_nodes()) fail("arrow endpoint out of range");
    }
    std::vector<int> plus(q.num_arrows(), 0), minus(q.num_arrows(), 0);
    for (std::size_t t = 0; t < q.terms.size(); ++t) {
        auto& T = q.terms[t];
        if (T.sign != 1 && T.sign != -1) fail("potential term sign must be +1 or -1");
        if (T.cycle.empty()) fail("empty potential term");
        Vec2 s{0, 0};
        for (std::size_t k = 0; k < T.cycle.size(); ++k) {
            int a = T.cycle[k], b = T.cycle[(k + 1) % T.cycle.size()];
            if (a < 0 || a >= q.num_arrows()) fail("potential term refers to unknown arrow");
            if (q.arrows[a].tgt != q.arrows[b].src)
                fail("potential term " + std::to_string(t) + " is not a closed cycle at arrow '" + q.arrows[a].id + "'");
            s = s + q.arrows[a].disp;
            (T.sign > 0 ? plus : minus)[a]++;
        }
        if (s != Vec2{0, 0})
            fail("potential term " + std::to_string(t) + " has displacement sum (" + std::to_string(s[0]) + "," +
                 std::to_string(s[1]) + "), expected (0,0)");
    }
    for (int a = 0; a < q.num_arrows(); ++a)
        if (plus[a] != 1 || minus[a] != 1)
            fail("arrow '" + q.arrows[a].id + "' must occur in exactly one + term and one - term");
    // strong connectivity
    int n = q.num_nodes();
    auto reach = [&](bool fwd) {
        std::vector<char> seen(n, 0);
        std::vector<int> st{0};
        seen[0] = 1;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            for (auto& a : q.arrows) {
                int from = fwd ? a.src : a.tgt, to = fwd ? a.tgt : a.src;
                if (from == u && !seen[to]) {
                    seen[to] = 1;
                    st.push_back(to);
                }
            }
        }
        return std::count(seen.begin(), seen.end(), 1) == n;
    };
    if (!reach(true) || !reach(false)) fail("quiver is not strongly connected");
}

// ---- brane tilings ----

struct TilingNode {
    std::string id;
    bool white = false;
    std::array<double, 2> pos{0, 0};
};

struct TilingEdge {
    std::string id; // optional; becomes the arrow id
    int white = 0, black = 0;
    Vec2 shift{0, 0}; // translation applied to the black endpoint
};

struct BraneTiling {
    std::vector<TilingNode> nodes;
    std::vector<TilingEdge> edges;
};

namespace detail {

struct Dart {
    int edge;
    bool from_white;
};

struct HalfEdge {
    int edge;
    double angle;
};

} // namespace detail

// Faces are traced with the face on the left of each dart; each edge becomes an arrow crossing it
// with the black node on the left. White nodes give + terms (clockwise), black nodes - terms.
inline PeriodicQuiver quiver_from_tiling(const BraneTiling& t, const std::string& name = "tiling") {
    auto fail = [&](const std::string& m) { throw validation_error("ValidationError", name + ": " + m); };
    const int nv = static_cast<int>(t.nodes.size()), ne = static_cast<int>(t.edges.size());
    if (ne == 0) fail("tiling has no edges");
    for (auto& e : t.edges) {
        if (e.white < 0 || e.white >= nv || e.black < 0 || e.black >= nv) fail("edge endpoint out of range");
        if (!t.nodes[e.white].white || t.nodes[e.black].white) fail("edge does not join a white node to a black node");
    }
    // rotation system: half-edges around each node in counterclockwise order
    std::vector<std::vector<detail::HalfEdge>> around(nv);
    for (int k = 0; k < ne; ++k) {
        auto& e = t.edges[k];
        auto& pw = t.nodes[e.white].pos;
        auto& pb = t.nodes[e.black].pos;
        double dx = pb[0] + e.shift[0] - pw[0], dy = pb[1] + e.shift[1] - pw[1];
        if (dx == 0 && dy == 0) fail("degenerate edge");
        around[e.white].push_back({k, std::atan2(dy, dx)});
        around[e.black].push_back({k, std::atan2(-dy, -dx)});
    }
    for (int v = 0; v < nv; ++v) {
        if (around[v].size() < 2) fail("node '" + t.nodes[v].id + "' has degree < 2");
        std::sort(around[v].begin(), around[v].end(), [](auto& a, auto& b) { return a.angle < b.angle; });
        for (std::size_t k = 1; k < around[v].size(); ++k)
            if (std::abs(around[v][k].angle - around[v][k - 1].angle) < 1e-12)
                fail("two edges leave node '" + t.nodes[v].id + "' in the same direction");
    }
    auto pos_in = [&](int v, int edge) {
        for (std::size_t k = 0; k < around[v].size(); ++k)
            if (around[v][k].edge == edge) return static_cast<int>(k);
        return -1;
    };
    auto head = [&](detail::Dart d) { return d.from_white ? t.edges[d.edge].black : t.edges[d.edge].white; };
    auto offset = [&](detail::Dart d) { return d.from_white ? t.edges[d.edge].shift : -t.edges[d.edge].shift; };
    auto dart_id = [](detail::Dart d) { return 2 * d.edge + (d.from_white ? 0 : 1); };

    // face tracing; cell[d] is the cell of the dart's tail inside its face's lift
    std::vector<int> face(2 * ne, -1);
    std::vector<Vec2> cell(2 * ne);
    int nf = 0;
    for (int s = 0; s < 2 * ne; ++s) {
        if (face[s] >= 0) continue;
        detail::Dart d{s / 2, s % 2 == 0};
        Vec2 c{0, 0};
        while (face[dart_id(d)] < 0) {
            face[dart_id(d)] = nf;
            cell[dart_id(d)] = c;
            c = c + offset(d);
            int v = head(d);
            int k = pos_in(v, d.edge);
            int m = static_cast<int>(around[v].size());
            int nxt = around[v][(k - 1 + m) % m].edge;
            d = detail::Dart{nxt, t.edges[nxt].white == v};
        }
        if (dart_id(d) != s) fail("face tracing did not close");
        if (c != Vec2{0, 0}) fail("non-contractible face");
        ++nf;
    }
    if (nf - ne + nv != 0) fail("Euler count #faces - #edges + #nodes = " + std::to_string(nf - ne + nv) + ", expected 0");

    PeriodicQuiver q;
    q.name = name;
    for (int f = 0; f < nf; ++f) q.nodes.push_back(std::to_string(f));
    for (int k = 0; k < ne; ++k) {
        auto& e = t.edges[k];
        Arrow a;
        a.id = e.id.empty() ? "e" + std::to_string(k) : e.id;
        a.src = face[2 * k];
        a.tgt = face[2 * k + 1];
        a.disp = e.shift - cell[2 * k + 1] + cell[2 * k];
        q.arrows.push_back(a);
    }
    for (int v = 0; v < nv; ++v) {
        Term T;
        T.sign = t.nodes[v].white ? 1 : -1;
        int m = static_cast<int>(around[v].size());
        for (int k = 0; k < m; ++k) T.cycle.push_back(around[v][t.nodes[v].white ? (m - 1 - k) : k].edge);
        q.terms.push_back(T);
    }
    // connectivity of the tiling graph is implied by strong connectivity of the dual check below
    validate(q);
    return q;
}

// ---- JSON ----

inline Vec2 vec2_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw validation_error("ParseError", std::string(what) + " must be a pair of integers");
    return {j[0].get<int>(), j[1].get<int>()};
}

inline PeriodicQuiver quiver_from_json(const nlohmann::json& j, const std::string& name = "quiver") {
    PeriodicQuiver q;
    q.name = name;
    try {
        for (auto& n : j.at("nodes")) q.nodes.push_back(n.is_string() ? n.get<std::string>() : n.dump());
        std::map<std::string, int> nid;
        for (int k = 0; k < q.num_nodes(); ++k) nid[q.nodes[k]] = k;
        auto node_of = [&](const nlohmann::json& x) {
            std::string s = x.is_string() ? x.get<std::string>() : x.dump();
            auto it = nid.find(s);
            if (it == nid.end()) throw validation_error("ValidationError", name + ": unknown node '" + s + "'");
            return it->second;
        };
        std::map<std::string, int> aid;
        for (auto& a : j.at("arrows")) {
            Arrow ar;
            ar.id = a.at("id").get<std::string>();
            ar.src = node_of(a.at("src"));
            ar.tgt = node_of(a.at("tgt"));
            ar.disp = vec2_json(a.at("disp"), "disp");
            aid[ar.id] = static_cast<int>(q.arrows.size());
            q.arrows.push_back(ar);
        }
        for (auto& t : j.at("potential")) {
            Term T;
            T.sign = t.at("sign").get<int>();
            for (auto& a : t.at("cycle")) {
                auto it = aid.find(a.get<std::string>());
                if (it == aid.end()) throw validation_error("ValidationError", name + ": unknown arrow in potential");
                T.cycle.push_back(it->second);
            }
            q.terms.push_back(T);
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("ParseError", name + ": " + e.what());
    }
    validate(q);
    return q;
}

inline BraneTiling tiling_from_json(const nlohmann::json& j, const std::string& name = "tiling") {
    BraneTiling t;
    try {
        std::map<std::string, int> nid;
        for (auto& n : j.at("nodes")) {
            TilingNode tn;
            tn.id = n.at("id").get<std::string>();
            std::string c = n.at("color").get<std::string>();
            if (c != "white" && c != "black") throw validation_error("ParseError", name + ": node color must be black or white");
            tn.white = c == "white";
            auto& p = n.at("pos");
            if (!p.is_array() || p.size() != 2) throw validation_error("ParseError", name + ": pos must be [x, y]");
            tn.pos = {p[0].get<double>(), p[1].get<double>()};
            if (!nid.emplace(tn.id, static_cast<int>(t.nodes.size())).second)
                throw validation_error("ValidationError", name + ": duplicate tiling node '" + tn.id + "'");
            t.nodes.push_back(tn);
        }
        auto node_of = [&](const nlohmann::json& x) {
            auto it = nid.find(x.get<std::string>());
            if (it == nid.end()) throw validation_error("ValidationError", name + ": unknown tiling node");
            return it->second;
        };
        for (auto& e : j.at("edges")) {
            TilingEdge te;
            te.white = node_of(e.at("white"));
            te.black = node_of(e.at("black"));
            te.shift = e.contains("shift") ? vec2_json(e.at("shift"), "shift") : Vec2{0, 0};
            if (e.contains("id")) te.id = e.at("id").get<std::string>();
            t.edges.push_back(te);
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("ParseError", name + ": " + e.what());
    }
    return t;
}

inline nlohmann::json quiver_to_json(const PeriodicQuiver& q) {
    nlohmann::json arrows = nlohmann::json::array(), pot = nlohmann::json::array();
    for (auto& a : q.arrows)
        arrows.push_back({{"id", a.id}, {"src", q.nodes[a.src]}, {"tgt", q.nodes[a.tgt]}, {"disp", {a.disp[0], a.disp[1]}}});
    for (auto& t : q.terms) {
        nlohmann::json cyc = nlohmann::json::array();
        for (int a : t.cycle) cyc.push_back(q.arrows[a].id);
        pot.push_back({{"sign", t.sign}, {"cycle", cyc}});
    }
    return {{"nodes", q.nodes}, {"arrows", arrows}, {"potential", pot}};
}

// ---- reference grading ----

struct ReferenceGrading {
    std::vector<Vec2> d;
    std::vector<int> m;
    std::vector<int> cut; // arrow indices of I_0
};

inline ReferenceGrading grading_for_cut(const PeriodicQuiver& q, const std::vector<int>& cut) {
    ReferenceGrading g;
    g.cut = cut;
    g.m.assign(q.num_arrows(), 0);
    for (int a : cut) g.m[a] = 1;
    for (auto& a : q.arrows) g.d.push_back(a.disp);
    for (auto& t : q.terms) {
        int s = 0;
        for (int a : t.cycle) s += g.m[a];
        if (s != 1) throw validation_error("ValidationError", "reference set is not a cut");
    }
    return g;
}

} // namespace moltendt
