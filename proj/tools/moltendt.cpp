// moltendt: refined DT / BPS invariants of toric quivers from molten crystals.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include <moltendt/catalog.hpp>
#include <moltendt/pipeline.hpp>

using namespace moltendt;
using json = nlohmann::json;

namespace {

struct RunConfig {
    std::string geometry;
    std::string framing; // empty: D6 at the first node
    std::string interval;
    std::string slope;
    std::string theta = "generic";
    std::string emit = "omega";
    std::string out;
    int max_atoms = 6;
    int max_degree = 6;
    std::uint64_t seed = 1;
    bool atoms = false;
};

// config keys mirror the long flags; '-' and '_' are interchangeable
void apply_config(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("ParseError", "cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw validation_error("ParseError", path + ": " + e.what());
    }
    if (!j.is_object()) throw validation_error("ParseError", path + ": config must be an object");
    for (auto& [k0, v] : j.items()) {
        std::string k = k0;
        std::replace(k.begin(), k.end(), '_', '-');
        try {
            if (k == "geometry") c.geometry = v.get<std::string>();
            else if (k == "framing") c.framing = v.get<std::string>();
            else if (k == "interval") c.interval = v.get<std::string>();
            else if (k == "slope") c.slope = v.get<std::string>();
            else if (k == "theta") c.theta = v.get<std::string>();
            else if (k == "emit") c.emit = v.get<std::string>();
            else if (k == "out") c.out = v.get<std::string>();
            else if (k == "max-atoms") c.max_atoms = v.get<int>();
            else if (k == "max-degree") c.max_degree = v.get<int>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "atoms") c.atoms = v.get<bool>();
            else throw validation_error("ParseError", path + ": unknown key '" + k0 + "'");
        } catch (const json::exception& e) {
            throw validation_error("ParseError", path + ": bad value for '" + k0 + "': " + e.what());
        }
    }
}

std::optional<std::string> config_path(int argc, char** argv) {
    for (int k = 1; k < argc; ++k) {
        std::string a = argv[k];
        if (a == "--config" && k + 1 < argc) return std::string(argv[k + 1]);
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return std::nullopt;
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    throw validation_error("ParseError", "bad " + what + " '" + s + "'");
}

std::pair<int, int> parse_interval(const std::string& s, int nsides) {
    static const std::regex re(R"(^\s*z?(\d+)\s*\.\.\s*z?(\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw validation_error("ParseError", "interval must look like z0..z1, got '" + s + "'");
    int a = parse_int(m[1], "side"), b = parse_int(m[2], "side");
    interval_sides(nsides, a, b);
    return {a, b};
}

Slope parse_slope(const std::string& s) {
    static const std::regex re(R"(^\s*(-?\d+)\s*,\s*(-?\d+)\s*;\s*(-?\d+)\s*,\s*(-?\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw validation_error("ParseError", "slope must look like \"s1,s2;t1,t2\", got '" + s + "'");
    Slope r{{parse_int(m[1], "slope"), parse_int(m[2], "slope")}, {parse_int(m[3], "slope"), parse_int(m[4], "slope")}};
    if (cross(r.s, r.s2) == 0) throw validation_error("ParseError", "slope vectors must be independent");
    return r;
}

std::vector<Q> parse_theta(const std::string& s, int nodes) {
    std::vector<Q> r;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        static const std::regex re(R"(^-?\d+(/\d+)?$)");
        if (!std::regex_match(item, re)) throw validation_error("ParseError", "bad stability entry '" + item + "'");
        Q q(item);
        if (q.get_den() == 0) throw validation_error("ParseError", "zero denominator in '" + item + "'");
        q.canonicalize();
        r.push_back(q);
    }
    if (static_cast<int>(r.size()) != nodes)
        throw validation_error("ParseError", "stability needs " + std::to_string(nodes) + " entries, got " + std::to_string(r.size()));
    return r;
}

struct FramingChoice {
    bool d4 = false;
    int node = 0, corner = 0, seed = -1;
};

FramingChoice parse_framing(const std::string& s, const Model& m) {
    FramingChoice f;
    if (s.empty()) return f;
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() == 2 && parts[0] == "d6") {
        f.node = m.q.node_index(parts[1]);
        return f;
    }
    if (parts[0] == "d4" && (parts.size() == 2 || parts.size() == 3)) {
        f.d4 = true;
        f.corner = parse_int(parts[1], "corner");
        if (f.corner < 0 || f.corner >= m.num_sides()) throw validation_error("ValidationError", "corner index out of range");
        if (parts.size() == 3) f.seed = m.q.arrow_index(parts[2]);
        return f;
    }
    throw validation_error("ParseError", "framing must be d6:<node> or d4:<corner>[:arrow], got '" + s + "'");
}

// the first realizable interval unless one is given
std::pair<int, int> pick_interval(const RunConfig& c, const Model& m) {
    if (!c.interval.empty()) return parse_interval(c.interval, m.num_sides());
    auto all = feasible_intervals(m.diagram);
    if (all.empty()) throw validation_error("InfeasiblePattern", "no interval of sides is realizable by a slope");
    return all.front();
}

std::string interval_str(std::pair<int, int> iv) { return "z" + std::to_string(iv.first) + "..z" + std::to_string(iv.second); }

json vec_json(Vec2 v) { return json::array({v[0], v[1]}); }

json ids(const PeriodicQuiver& q, const std::vector<int>& arrows) {
    json r = json::array();
    for (int a : arrows) r.push_back(q.arrows[a].id);
    return r;
}

json node_ids(const PeriodicQuiver& q, const std::vector<int>& nodes) {
    json r = json::array();
    for (int i : nodes) r.push_back(q.nodes[i]);
    return r;
}

json head(const Model& m) { return {{"geometry", m.q.name}, {"nodes", m.q.nodes}}; }

json analyze(const Model& m) {
    const auto& D = m.diagram;
    json points = json::array();
    for (auto& [p, k] : D.multiplicity) points.push_back({{"point", vec_json(p)}, {"multiplicity", k}});
    json corners = json::array();
    for (std::size_t k = 0; k < D.corners.size(); ++k)
        corners.push_back({{"index", k}, {"point", vec_json(D.corners[k])}, {"cut", ids(m.q, D.cuts[D.corner_cut[k]].arrows)}});
    json sides = json::array();
    for (std::size_t k = 0; k < D.sides.size(); ++k)
        sides.push_back({{"side", "z" + std::to_string(k)}, {"from", D.sides[k].from}, {"to", D.sides[k].to}, {"l", vec_json(D.sides[k].l)}, {"K", D.sides[k].K}});
    json zz = json::array();
    for (auto& s : m.zigzag.sides) {
        json paths = json::array(), strips = json::array(), alphas = json::array(), ints = json::array();
        for (auto& p : s.paths) paths.push_back(ids(m.q, p));
        for (std::size_t k = 0; k < s.strips.size(); ++k) {
            strips.push_back({{"k", k}, {"nodes", node_ids(m.q, s.strips[k])}, {"zig", ids(m.q, s.zig[k])}, {"zag", ids(m.q, s.zag[k])}, {"J", ids(m.q, s.J[k])}});
            alphas.push_back(s.alpha[k]);
        }
        for (std::size_t k = 0; k < s.alpha_intervals.size(); ++k)
            ints.push_back({{"k", s.interval_labels[k].first}, {"k2", s.interval_labels[k].second}, {"d", s.alpha_intervals[k]}});
        zz.push_back({{"side", "z" + std::to_string(s.side)}, {"paths", paths}, {"strips", strips}, {"alphas", alphas}, {"alpha_intervals", ints}});
    }
    json j = head(m);
    j["diagram"] = {{"points", points}, {"corners", corners}, {"sides", sides}, {"b", D.b}, {"i_int", D.interior}};
    j["zigzags"] = zz;
    j["delta"] = m.profile.delta;
    j["euler"] = m.q.euler();
    j["quiver"] = quiver_to_json(m.q);
    return j;
}

FramedCrystals framed(const Model& m, const FramingChoice& f, int bound) {
    return f.d4 ? d4_crystals(m, f.corner, f.seed, bound) : d6_crystals(m, f.node, bound);
}

json framing_json(const Model& m, const Erc& erc) {
    const Framing& f = erc.framing();
    if (f.kind == Framing::Kind::d6) return {{"kind", "d6"}, {"node", m.q.nodes[f.node]}};
    return {{"kind", "d4"}, {"corner", f.corner}, {"seed", m.q.arrows[f.seed].id}};
}

json crystals(const Model& m, const RunConfig& c) {
    if (c.max_atoms < 0) throw validation_error("ValidationError", "--max-atoms must be >= 0");
    auto fc = framed(m, parse_framing(c.framing, m), c.max_atoms);
    std::map<DimVec, long> by_dim;
    for (auto& cr : fc.crystals) by_dim[cr.dim]++;
    json dims = json::array();
    std::vector<std::pair<DimVec, long>> sorted(by_dim.begin(), by_dim.end());
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return DegLex{}(a.first, b.first); });
    for (auto& [d, k] : sorted) dims.push_back({{"d", d}, {"count", k}});
    json j = head(m);
    j["framing"] = framing_json(m, *fc.erc);
    j["max_atoms"] = c.max_atoms;
    j["counts"] = crystal_counts(fc.crystals, c.max_atoms);
    j["by_dimension"] = dims;
    if (c.atoms) {
        json all = json::array();
        for (auto& cr : fc.crystals) {
            json as = json::array();
            for (int k : cr.atoms) {
                auto& a = fc.erc->atom(k);
                as.push_back({{"color", m.q.nodes[a.color]}, {"t", vec_json(a.t)}, {"n", a.n}});
            }
            all.push_back(as);
        }
        j["crystals"] = all;
    }
    return j;
}

json slope_json(const Slope& s) { return {{"s", vec_json(s.s)}, {"s2", vec_json(s.s2)}}; }

json zfun(const Model& m, const RunConfig& c) {
    if (c.max_atoms < 0) throw validation_error("ValidationError", "--max-atoms must be >= 0");
    auto f = parse_framing(c.framing, m);
    auto iv = pick_interval(c, m);
    Slope s = c.slope.empty() ? interval_slope(m.diagram, iv.first, iv.second) : parse_slope(c.slope);
    auto fc = framed(m, f, c.max_atoms);
    auto shape = m.shape(c.max_atoms);
    QSeries Z = framed_partition_function(m.q, *fc.erc, fc.crystals, s, shape);
    json j = head(m);
    j["framing"] = framing_json(m, *fc.erc);
    j["slope"] = slope_json(s);
    j["bound"] = c.max_atoms;
    j["terms"] = series_json(Z)["terms"];
    if (!f.d4 && c.slope.empty()) {
        j["interval"] = interval_str(iv);
        auto dOmega = delta_omega_correction(m.profile, interval_sides(m.num_sides(), iv.first, iv.second), c.max_atoms);
        j["corrected"] = series_json(corrected_framed_series(Z, dOmega, f.node))["terms"];
    }
    return j;
}

// returns the JSON and whether every hard check passed
std::pair<json, bool> bps(const Model& m, const RunConfig& c) {
    if (c.max_degree < 0) throw validation_error("ValidationError", "--max-degree must be >= 0");
    static const std::set<std::string> emits{"omega", "zfun", "A", "checks"};
    if (!emits.count(c.emit)) throw validation_error("ParseError", "--emit must be one of omega, zfun, A, checks");
    auto iv = pick_interval(c, m);
    auto in = interval_sides(m.num_sides(), iv.first, iv.second);
    Slope s = interval_slope(m.diagram, iv.first, iv.second);
    const bool attractor = c.theta == "attractor";
    std::vector<Q> theta = attractor || c.theta == "generic" ? generic_theta(m.q.num_nodes(), c.seed) : parse_theta(c.theta, m.q.num_nodes());
    CrystalCache cache(m, c.max_degree);
    auto Z = corrected_series(m, cache, in, s);
    json j = head(m);
    j["interval"] = interval_str(iv);
    j["slope"] = slope_json(s);
    j["bound"] = c.max_degree;
    if (c.emit == "zfun") {
        json zs = json::object();
        for (auto& [i, z] : Z) zs[m.q.nodes[i]] = series_json(z)["terms"];
        j["zfun"] = zs;
        return {j, true};
    }
    QSeries A = solve_unframed(Z, false);
    if (c.emit == "A") {
        j["A"] = series_json(A)["terms"];
        return {j, true};
    }
    BpsTable omega = attractor ? attractor_invariants(A, c.seed) : factorize_bps(A, theta);
    j["omega"] = table_json(omega);
    if (c.emit == "omega") return {j, true};
    CheckReport rep;
    if (attractor) {
        rep = structure_checks(omega, m.profile, {}, true);
    } else {
        auto nt = factorize_bps(solve_unframed(nilpotent_series(m, cache, s), false), theta);
        rep = structure_checks(omega, m.profile, {NilpotentTable{in, nt}}, false);
    }
    j["checks"] = report_json(rep);
    return {j, rep.hard_ok()};
}

std::pair<json, bool> check(const RunConfig& c) {
    if (c.max_degree < 0) throw validation_error("ValidationError", "--max-degree must be >= 0");
    std::vector<std::string> names = c.geometry.empty() ? builtin_names() : std::vector<std::string>{c.geometry};
    json all = json::array();
    bool ok = true;
    for (auto& g : names) {
        Model m(load_geometry(g));
        CheckOptions o;
        o.bound = c.max_degree;
        o.seed = c.seed;
        auto rep = run_checks(m, o);
        json r = report_json(rep);
        r["geometry"] = m.q.name;
        all.push_back(r);
        ok = ok && rep.hard_ok();
    }
    return {{{"bound", c.max_degree}, {"reports", all}, {"hard_ok", ok}}, ok};
}

void emit(const json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw validation_error("ValidationError", "cannot write '" + out + "'");
    f << text;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        if (auto p = config_path(argc, argv)) apply_config(cfg, *p);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Refined DT and BPS invariants of toric quivers from molten crystals"};
    app.require_subcommand(1);
    std::string config;
    app.add_option("--config", config, "JSON file whose keys mirror the long flags");
    auto geometry = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--geometry,-g", cfg.geometry, "builtin name or path to a tiling/quiver JSON file");
        if (required && cfg.geometry.empty()) o->required();
    };
    auto out = [&](CLI::App* s) {
        s->add_option("--out,-o", cfg.out, "write JSON here instead of stdout");
        s->add_option("--config", config, "JSON file whose keys mirror the long flags");
    };

    auto* an = app.add_subcommand("analyze", "toric diagram, sides, zig-zag paths and strips");
    geometry(an, true);
    out(an);

    auto* cr = app.add_subcommand("crystals", "enumerate molten crystals");
    geometry(cr, true);
    cr->add_option("--framing", cfg.framing, "d6:<node> or d4:<corner>[:arrow]");
    cr->add_option("--max-atoms", cfg.max_atoms, "crystal size bound");
    cr->add_flag("--atoms", cfg.atoms, "list every crystal's atoms");
    out(cr);

    auto* zf = app.add_subcommand("zfun", "localized framed partition function");
    geometry(zf, true);
    zf->add_option("--framing", cfg.framing, "d6:<node> or d4:<corner>[:arrow]");
    zf->add_option("--interval", cfg.interval, "sides z..z' where the slope is negative");
    zf->add_option("--slope", cfg.slope, "explicit slope \"s1,s2;t1,t2\"");
    zf->add_option("--max-atoms", cfg.max_atoms, "crystal size bound");
    out(zf);

    auto* bp = app.add_subcommand("bps", "BPS or attractor invariants");
    geometry(bp, true);
    bp->add_option("--interval", cfg.interval, "sides z..z' used for localization");
    bp->add_option("--theta", cfg.theta, "\"q,...,q\", generic or attractor");
    bp->add_option("--max-degree", cfg.max_degree, "total dimension bound");
    bp->add_option("--emit", cfg.emit, "omega, zfun, A or checks");
    bp->add_option("--seed", cfg.seed, "seed for generic stabilities and perturbations");
    out(bp);

    auto* ck = app.add_subcommand("check", "structural checks and the attractor conjecture (all builtins by default)");
    geometry(ck, false);
    ck->add_option("--max-degree", cfg.max_degree, "total dimension bound");
    ck->add_option("--seed", cfg.seed, "seed for generic stabilities and perturbations");
    out(ck);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        json j;
        bool ok = true;
        if (*an) j = analyze(Model(load_geometry(cfg.geometry)));
        else if (*cr) j = crystals(Model(load_geometry(cfg.geometry)), cfg);
        else if (*zf) j = zfun(Model(load_geometry(cfg.geometry)), cfg);
        else if (*bp) std::tie(j, ok) = bps(Model(load_geometry(cfg.geometry)), cfg);
        else std::tie(j, ok) = check(cfg);
        emit(j, cfg.out);
        return ok ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.severity() == Severity::invariant ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
