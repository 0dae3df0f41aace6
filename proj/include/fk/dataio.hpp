#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include "fk/resolution.hpp"
#include "json.hpp"

namespace fk {

using json = nlohmann::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    json j;
    in >> j;
    return j;
}

inline int dual_star_index(const DualAlgebra& D, int level, const std::string& name) {
    auto labels = D.dual_star_labels(level);
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name) return (int)i;
    throw std::runtime_error("unknown dual functional '" + name + "' at level " + std::to_string(level));
}

// locate a dual-star label across levels 0..max
inline std::pair<int, int> dual_star_locate(const DualAlgebra& D, const std::string& name) {
    for (int lv = 0; lv <= D.max_degree(); ++lv) {
        auto labels = D.dual_star_labels(lv);
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return {lv, (int)i};
    }
    throw std::runtime_error("unknown dual functional: " + name);
}

// term arrays [c, x, u, y] into a K_level element
inline SparseVec parse_k_element(const Resolution& R, int level, const json& terms) {
    const KSpace& K = R.kspace(level);
    const GradedAlgebra& A = R.algebra();
    SparseVec v;
    for (const auto& t : terms) {
        long c = t.at(0).get<long>();
        int x = A.index_of(t.at(1).get<std::string>());
        int u = dual_star_index(R.dual(), level, t.at(2).get<std::string>());
        int y = A.index_of(t.at(3).get<std::string>());
        v.add_term(K.flat(x, u, y), Scalar(c, A.field()));
    }
    return v;
}

// term arrays [c, x, u, y] or [c, x, u, y, omega] into a P_n element
inline SparseVec parse_p_element(const Resolution& R, int n, const json& terms) {
    const PSpace& P = R.pspace(n);
    const GradedAlgebra& A = R.algebra();
    SparseVec v;
    for (const auto& t : terms) {
        long c = t.at(0).get<long>();
        int x = A.index_of(t.at(1).get<std::string>());
        int w = t.size() > 4 ? t.at(4).get<int>() : 0;
        int level = n - 4 * w;
        int u = dual_star_index(R.dual(), level, t.at(2).get<std::string>());
        int y = A.index_of(t.at(3).get<std::string>());
        v.add_term(P.offsets[w] + R.kspace(level).flat(x, u, y), Scalar(c, A.field()));
    }
    return v;
}

// A-element from [[c, label], ...]
inline SparseVec parse_a_element(const GradedAlgebra& A, const json& terms) {
    SparseVec v;
    for (const auto& t : terms)
        v.add_term(A.index_of(t.at(1).get<std::string>()), Scalar(t.at(0).get<long>(), A.field()));
    return v;
}

inline std::map<std::string, SparseVec> load_fb0(const Resolution& R, const std::string& path) {
    json j = load_json(path);
    std::map<std::string, SparseVec> out;
    for (auto& [key, terms] : j.at("entries").items()) out[key] = parse_k_element(R, 3, terms);
    return out;
}

}  // namespace fk
