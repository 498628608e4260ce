#pragma once

// Built-in geometries. Displacements are given in a positively oriented basis of the period lattice.
//   c3        one node, W = abc - acb
//   conifold  two nodes, arrows a1,a2: 0->1 and b1,b2: 1->0
//   c3-z2z2   C^3/(Z2 x Z2), nodes labelled by Z2 x Z2 (x + 2y)
//   spp       suspended pinched point, nodes 1,2,3, loop at 1
//   pdp3a     phi<k>_<ij> is the arrow i->j in the corner cut I_k
//   local-p2  C^3/Z3
//   c2z2-x-c  C^2/Z2 x C, the small crepant resolution with N0 = 2, N1 = 0

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace moltendt {

inline const std::vector<std::pair<std::string, std::string>>& builtin_sources() {
    static const std::vector<std::pair<std::string, std::string>> src = {
        {"c3", R"json(
{"nodes": ["0"],
 "arrows": [
  {"id": "a", "src": "0", "tgt": "0", "disp": [1, 0]},
  {"id": "b", "src": "0", "tgt": "0", "disp": [0, 1]},
  {"id": "c", "src": "0", "tgt": "0", "disp": [-1, -1]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["a", "b", "c"]},
  {"sign": -1, "cycle": ["a", "c", "b"]}
 ]})json"},
        {"conifold", R"json(
{"nodes": ["0", "1"],
 "arrows": [
  {"id": "a1", "src": "0", "tgt": "1", "disp": [0, 0]},
  {"id": "a2", "src": "0", "tgt": "1", "disp": [-1, -1]},
  {"id": "b1", "src": "1", "tgt": "0", "disp": [1, 0]},
  {"id": "b2", "src": "1", "tgt": "0", "disp": [0, 1]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["a1", "b2", "a2", "b1"]},
  {"sign": -1, "cycle": ["a1", "b1", "a2", "b2"]}
 ]})json"},
        {"c3-z2z2", R"json(
{"nodes": ["0", "1", "2", "3"],
 "arrows": [
  {"id": "a0", "src": "0", "tgt": "1", "disp": [0, 0]},
  {"id": "b0", "src": "0", "tgt": "2", "disp": [0, 0]},
  {"id": "c0", "src": "0", "tgt": "3", "disp": [-1, -1]},
  {"id": "a1", "src": "1", "tgt": "0", "disp": [1, 0]},
  {"id": "b1", "src": "1", "tgt": "3", "disp": [0, 0]},
  {"id": "c1", "src": "1", "tgt": "2", "disp": [0, -1]},
  {"id": "a2", "src": "2", "tgt": "3", "disp": [0, 0]},
  {"id": "b2", "src": "2", "tgt": "0", "disp": [0, 1]},
  {"id": "c2", "src": "2", "tgt": "1", "disp": [-1, 0]},
  {"id": "a3", "src": "3", "tgt": "2", "disp": [1, 0]},
  {"id": "b3", "src": "3", "tgt": "1", "disp": [0, 1]},
  {"id": "c3", "src": "3", "tgt": "0", "disp": [0, 0]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["a0", "b1", "c3"]},
  {"sign": -1, "cycle": ["a0", "c1", "b2"]},
  {"sign": 1, "cycle": ["a1", "b0", "c2"]},
  {"sign": -1, "cycle": ["a1", "c0", "b3"]},
  {"sign": 1, "cycle": ["a2", "b3", "c1"]},
  {"sign": -1, "cycle": ["a2", "c3", "b0"]},
  {"sign": 1, "cycle": ["a3", "b2", "c0"]},
  {"sign": -1, "cycle": ["a3", "c2", "b1"]}
 ]})json"},
        {"spp", R"json(
{"nodes": ["1", "2", "3"],
 "arrows": [
  {"id": "phi11", "src": "1", "tgt": "1", "disp": [-1, 0]},
  {"id": "phi12", "src": "1", "tgt": "2", "disp": [1, 0]},
  {"id": "phi21", "src": "2", "tgt": "1", "disp": [0, 0]},
  {"id": "phi13", "src": "1", "tgt": "3", "disp": [1, 0]},
  {"id": "phi31", "src": "3", "tgt": "1", "disp": [0, 0]},
  {"id": "phi23", "src": "2", "tgt": "3", "disp": [-1, 1]},
  {"id": "phi32", "src": "3", "tgt": "2", "disp": [0, -1]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["phi12", "phi21", "phi11"]},
  {"sign": 1, "cycle": ["phi31", "phi13", "phi32", "phi23"]},
  {"sign": -1, "cycle": ["phi13", "phi31", "phi11"]},
  {"sign": -1, "cycle": ["phi21", "phi12", "phi23", "phi32"]}
 ]})json"},
        {"pdp3a", R"json(
{"nodes": ["0", "1", "2", "3", "4", "5"],
 "arrows": [
  {"id": "phi0_03", "src": "0", "tgt": "3", "disp": [-1, 1]},
  {"id": "phi0_14", "src": "1", "tgt": "4", "disp": [-1, 1]},
  {"id": "phi0_25", "src": "2", "tgt": "5", "disp": [0, 1]},
  {"id": "phi0_30", "src": "3", "tgt": "0", "disp": [0, 0]},
  {"id": "phi0_41", "src": "4", "tgt": "1", "disp": [0, 0]},
  {"id": "phi0_52", "src": "5", "tgt": "2", "disp": [-1, 0]},
  {"id": "phi1_02", "src": "0", "tgt": "2", "disp": [0, 0]},
  {"id": "phi1_13", "src": "1", "tgt": "3", "disp": [0, 0]},
  {"id": "phi1_24", "src": "2", "tgt": "4", "disp": [0, 1]},
  {"id": "phi1_35", "src": "3", "tgt": "5", "disp": [1, 0]},
  {"id": "phi1_40", "src": "4", "tgt": "0", "disp": [1, -1]},
  {"id": "phi1_51", "src": "5", "tgt": "1", "disp": [0, 0]},
  {"id": "phi2_01", "src": "0", "tgt": "1", "disp": [0, 0]},
  {"id": "phi2_12", "src": "1", "tgt": "2", "disp": [0, -1]},
  {"id": "phi2_23", "src": "2", "tgt": "3", "disp": [0, 0]},
  {"id": "phi2_34", "src": "3", "tgt": "4", "disp": [0, 0]},
  {"id": "phi2_45", "src": "4", "tgt": "5", "disp": [1, -1]},
  {"id": "phi2_50", "src": "5", "tgt": "0", "disp": [0, -1]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["phi0_14", "phi1_40", "phi2_01"]},
  {"sign": 1, "cycle": ["phi0_52", "phi1_24", "phi2_45"]},
  {"sign": 1, "cycle": ["phi0_41", "phi1_13", "phi2_34"]},
  {"sign": 1, "cycle": ["phi0_25", "phi1_51", "phi2_12"]},
  {"sign": 1, "cycle": ["phi0_03", "phi1_35", "phi2_50"]},
  {"sign": 1, "cycle": ["phi0_30", "phi1_02", "phi2_23"]},
  {"sign": -1, "cycle": ["phi1_51", "phi0_14", "phi2_45"]},
  {"sign": -1, "cycle": ["phi1_35", "phi0_52", "phi2_23"]},
  {"sign": -1, "cycle": ["phi1_13", "phi0_30", "phi2_01"]},
  {"sign": -1, "cycle": ["phi1_40", "phi0_03", "phi2_34"]},
  {"sign": -1, "cycle": ["phi1_24", "phi0_41", "phi2_12"]},
  {"sign": -1, "cycle": ["phi1_02", "phi0_25", "phi2_50"]}
 ]})json"},
        {"local-p2", R"json(
{"nodes": ["0", "1", "2"],
 "arrows": [
  {"id": "a0", "src": "0", "tgt": "1", "disp": [0, 0]},
  {"id": "b0", "src": "0", "tgt": "1", "disp": [-1, 0]},
  {"id": "c0", "src": "0", "tgt": "1", "disp": [1, -1]},
  {"id": "a1", "src": "1", "tgt": "2", "disp": [0, 0]},
  {"id": "b1", "src": "1", "tgt": "2", "disp": [-1, 0]},
  {"id": "c1", "src": "1", "tgt": "2", "disp": [1, -1]},
  {"id": "a2", "src": "2", "tgt": "0", "disp": [0, 1]},
  {"id": "b2", "src": "2", "tgt": "0", "disp": [-1, 1]},
  {"id": "c2", "src": "2", "tgt": "0", "disp": [1, 0]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["a0", "b1", "c2"]},
  {"sign": -1, "cycle": ["a0", "c1", "b2"]},
  {"sign": 1, "cycle": ["a1", "b2", "c0"]},
  {"sign": -1, "cycle": ["a1", "c2", "b0"]},
  {"sign": 1, "cycle": ["a2", "b0", "c1"]},
  {"sign": -1, "cycle": ["a2", "c0", "b1"]}
 ]})json"},
        {"c2z2-x-c", R"json(
{"nodes": ["0", "1"],
 "arrows": [
  {"id": "a0", "src": "0", "tgt": "1", "disp": [0, 0]},
  {"id": "b0", "src": "0", "tgt": "1", "disp": [-1, 0]},
  {"id": "c0", "src": "0", "tgt": "0", "disp": [0, -1]},
  {"id": "a1", "src": "1", "tgt": "0", "disp": [1, 1]},
  {"id": "b1", "src": "1", "tgt": "0", "disp": [0, 1]},
  {"id": "c1", "src": "1", "tgt": "1", "disp": [0, -1]}
 ],
 "potential": [
  {"sign": 1, "cycle": ["a0", "b1", "c0"]},
  {"sign": -1, "cycle": ["a0", "c1", "b1"]},
  {"sign": 1, "cycle": ["a1", "b0", "c1"]},
  {"sign": -1, "cycle": ["a1", "c0", "b0"]}
 ]})json"},
    };
    return src;
}

inline std::vector<std::string> builtin_names() {
    std::vector<std::string> v;
    for (auto& [n, s] : builtin_sources()) v.push_back(n);
    return v;
}

inline bool is_builtin(const std::string& name) {
    for (auto& [n, s] : builtin_sources())
        if (n == name) return true;
    return false;
}

inline PeriodicQuiver builtin(const std::string& name) {
    for (auto& [n, s] : builtin_sources())
        if (n == name) return quiver_from_json(nlohmann::json::parse(s), n);
    throw validation_error("ValidationError", "unknown builtin geometry '" + name + "'");
}

// Geometry from JSON: a tiling if the nodes carry colors, otherwise a quiver.
inline PeriodicQuiver geometry_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_object() || !j.contains("nodes")) throw validation_error("ParseError", name + ": missing \"nodes\"");
    const auto& nodes = j.at("nodes");
    bool tiling = j.contains("edges") || (!nodes.empty() && nodes.front().is_object());
    if (tiling) return quiver_from_tiling(tiling_from_json(j, name), name);
    return quiver_from_json(j, name);
}

// Builtin name, or path to a tiling / quiver JSON file.
inline PeriodicQuiver load_geometry(const std::string& source) {
    if (is_builtin(source)) return builtin(source);
    std::ifstream in(source);
    if (!in) throw validation_error("ParseError", "cannot open geometry '" + source + "' (not a builtin or readable file)");
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("ParseError", source + ": " + e.what());
    }
    return geometry_from_json(j, source);
}

} // namespace moltendt
