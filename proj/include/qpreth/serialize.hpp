#pragma once

#include <fstream>
#include <json.hpp>

#include "qpreth/interaction.hpp"

namespace qpreth {

using nlohmann::json;

inline json to_json(const LatticeSpec& lat) {
    json j;
    j["d"] = lat.d;
    j["q"] = lat.q;
    bool cube = true;
    for (auto& [lo, hi] : lat.range) cube = cube && (lo == -hi);
    if (cube) {
        j["L"] = lat.range[0].second;
    } else {
        json r = json::array();
        for (auto& [lo, hi] : lat.range) r.push_back({lo, hi});
        j["range"] = r;
    }
    return j;
}

inline LatticeSpec lattice_from_json(const json& j) {
    int d = j.at("d").get<int>();
    int q = j.at("q").get<int>();
    if (j.contains("range")) {
        LatticeSpec s;
        s.d = d;
        s.q = q;
        s.range.clear();
        for (const auto& r : j.at("range")) s.range.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
        if (static_cast<int>(s.range.size()) != d) throw config_error("lattice: range length != d");
        return s;
    }
    return LatticeSpec::cube(d, j.at("L").get<int>(), q);
}

/// Interaction as a structured text document. Matrices are row-major
/// re/im arrays; doubles print in their shortest round-trip form, so the
/// document round-trips exactly.
inline json to_json(const Interaction& a) {
    json j;
    j["lattice"] = to_json(a.lattice());
    j["n"] = a.angles();
    json terms = json::array();
    for (const auto& [s, t] : a.terms()) {
        json jt;
        json sites = json::array();
        for (const auto& x : s.sites) sites.push_back(x);
        jt["sites"] = sites;
        json coeffs = json::array();
        for (const auto& [l, m] : t.payload.coeffs()) {
            json jc;
            jc["l"] = l;
            json re = json::array(), im = json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                json rr = json::array(), ri = json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    rr.push_back(m(r, c).real());
                    ri.push_back(m(r, c).imag());
                }
                re.push_back(rr);
                im.push_back(ri);
            }
            jc["re"] = re;
            jc["im"] = im;
            coeffs.push_back(jc);
        }
        jt["coeffs"] = coeffs;
        terms.push_back(jt);
    }
    j["terms"] = terms;
    return j;
}

inline Interaction interaction_from_json(const json& j) {
    LatticeSpec lat = lattice_from_json(j.at("lattice"));
    int n = j.at("n").get<int>();
    Interaction a(lat, n);
    for (const auto& jt : j.at("terms")) {
        std::vector<Site> sites;
        for (const auto& jx : jt.at("sites")) sites.push_back(jx.get<Site>());
        SupportSet s(std::move(sites));
        long long dim = ipow(lat.q, static_cast<long long>(s.size()));
        TrigMatrix p(n, static_cast<int>(dim));
        for (const auto& jc : jt.at("coeffs")) {
            Mode l = jc.at("l").get<Mode>();
            MatrixXcd m(dim, dim);
            const auto& re = jc.at("re");
            const auto& im = jc.at("im");
            for (long long r = 0; r < dim; ++r)
                for (long long c = 0; c < dim; ++c)
                    m(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
            p.set_coeff(l, m);
        }
        a.add_term(s, p);
    }
    return a;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for reading: " + path);
    return json::parse(f);
}

}  // namespace qpreth
