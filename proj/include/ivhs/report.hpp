#pragma once

#include <json.hpp>
#include <string>

#include "ivhs/filtration.hpp"
#include "ivhs/quadrics.hpp"

namespace ivhs {

using Json = nlohmann::ordered_json;

// a numeric claim annotated with the invariant that checked it
inline Json claimed(std::int64_t value, const std::string& checked_by) {
    return Json{{"value", value}, {"checked_by", checked_by}};
}

template <class K>
Json vec_to_json(const Vec<K>& v) {
    Json a = Json::array();
    for (auto& c : v) a.push_back(c.str());
    return a;
}

template <class K>
Json mat_to_json(const Mat<K>& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(m.at(i, j).str());
        rows.push_back(std::move(r));
    }
    return rows;
}

template <class K>
Json filtration_to_json(const XiPhiFiltration<K>& f, bool splitting_invariance_checked) {
    Json j;
    j["length"] = f.l;
    j["partition"] = f.partition;
    j["chain_dims"] = f.chain_dims;
    j["splitting_invariance_checked"] = splitting_invariance_checked;
    return j;
}

template <class K>
Json sl2_to_json(const Sl2Report<K>& r) {
    Json j;
    j["quotient_dim"] = r.quotient_dim;
    j["nilpotency_index"] = r.nilpotency_index;
    j["jordan_blocks"] = r.jordan_blocks;
    Json w = Json::object();
    for (auto& [n, d] : r.weight_dims) w[std::to_string(n)] = d;
    j["weight_dims"] = w;
    Json bg = Json::object();
    for (auto& [kn, d] : r.bigraded)
        bg["(" + std::to_string(kn.first) + "," + std::to_string(kn.second) + ")"] = d;
    j["bigraded"] = bg;
    j["lefschetz_ok"] = r.lefschetz_ok;
    j["nilpotency_checked"] = r.nilpotency_checked;
    j["multiplicity_reading"] = Json{{"blocks_equal_h", r.blocks_match_h},
                                     {"blocks_equal_h_difference", r.blocks_match_h_difference}};
    return j;
}

template <class F, class K = typename F::Elem>
Json quadric_cert_to_json(const PlaneCurve<F>& C, const QuadricCert<K>& cert) {
    Json j;
    j["Q_coeffs"] = mat_to_json(cert.Q);
    j["cofactor"] = cert.cofactor.has_value() ? cert.cofactor->str() : "absent";
    j["curve_hash"] = cert.curve_hash;
    j["verified"] = cert.identity_checked && verify_quadric_cert(C, cert);
    return j;
}

}  // namespace ivhs
