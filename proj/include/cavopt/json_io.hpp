#pragma once

#include <cavopt/hamiltonian.hpp>
#include <cavopt/radicals.hpp>
#include <cavopt/reductions.hpp>

#include <nlohmann/json.hpp>

#include <string>

namespace cavopt {

using Json = nlohmann::ordered_json;

/// One radical term as {"alpha": a, "coeff_num": "...", "coeff_den": "..."};
/// numerator/denominator are decimal strings (coefficients are unbounded).
inline Json radical_to_json(const RadicalSum& r) {
    Json terms = Json::array();
    for (const auto& [alpha, q] : r.terms()) {
        Json t;
        t["alpha"] = alpha;
        t["coeff_num"] = boost::multiprecision::numerator(q).str();
        t["coeff_den"] = boost::multiprecision::denominator(q).str();
        terms.push_back(t);
    }
    return terms;
}

inline Json meta_to_json(const ProgramMeta& meta) {
    Json j;
    j["source"] = meta.source;
    j["source_n"] = meta.source_n;
    j["source_m"] = meta.source_m;
    if (meta.source == "vertex_cover") j["kappa"] = meta.kappa;
    if (meta.source == "qubo") {
        j["sat_n"] = meta.sat_n;
        j["sat_m"] = meta.sat_m;
        Json pairs = Json::array();
        for (const auto& [a, b] : meta.pair_order) pairs.push_back(Json::array({a, b}));
        j["pair_order"] = pairs;
        Json plq = Json::array();
        for (const auto& q : meta.plaquettes)
            plq.push_back(Json{{"i", q[0]}, {"ip", q[1]},
                               {"kind", q[2] == 0 ? "triangle" : "interior"}});
        j["plaquettes"] = plq;
    }
    j["atom_count"] = meta.atom_count;
    j["overhead"] = meta.overhead;
    j["cost_positions"] = meta.cost_positions;
    if (meta.dummy_padding) j["dummy_padding"] = true;
    return j;
}

inline Json program_to_json(const SubsetTargetProgram& prog) {
    Json j;
    Json rs = Json::array();
    Json rs_text = Json::array();
    for (const auto& rk : prog.r) {
        rs.push_back(radical_to_json(rk));
        rs_text.push_back(rk.str());
    }
    j["r"] = rs;
    j["r_text"] = rs_text;
    j["target"] = radical_to_json(prog.target);
    j["target_text"] = prog.target.str();
    j["linear_cost"] = prog.linear_cost;
    j["penalty"] = prog.penalty;
    j["meta"] = meta_to_json(prog.meta);
    return j;
}

inline Json cavity_program_to_json(const CavityProgram& cp) {
    Json j;
    j["n_atoms"] = cp.N;
    j["lambda"] = cp.lambda;
    j["h"] = cp.h;
    j["g4"] = cp.g4;
    j["delta_m"] = cp.delta_m;
    j["offset"] = cp.offset;
    j["scale"] = cp.scale;
    j["c_shift"] = cp.c_shift;
    j["penalty"] = cp.penalty;
    // Linear sigma-x fields assume per-atom drive addressing on hardware.
    j["requires_local_sigma_x_drive"] = std::any_of(cp.h.begin(), cp.h.end(),
                                                    [](double v) { return v != 0.0; });
    return j;
}

}  // namespace cavopt
