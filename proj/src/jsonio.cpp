#include "plab/jsonio.hpp"

#include <stdexcept>

namespace plab::io {

using nlohmann::json;

namespace {

json mi_to_json(const MultiIndex& mi) {
    json a = json::array();
    for (uint32_t e : mi.entries()) a.push_back(e);
    return a;
}

MultiIndex mi_from_json(const json& j) {
    std::vector<uint32_t> e;
    for (const auto& v : j) e.push_back(v.get<uint32_t>());
    return MultiIndex(std::move(e));
}

}  // namespace

json frame_to_json(const Frame& fr) {
    return json{{"n", fr.n}, {"m", fr.m}, {"l", fr.l}, {"k", fr.k}};
}

Frame frame_from_json(const json& j) {
    return Frame(j.at("n").get<uint32_t>(), j.at("m").get<uint32_t>(), j.at("k").get<uint32_t>(),
                 j.at("l").get<uint32_t>());
}

json hompoly_to_json(const HomPoly& f) {
    json terms = json::array();
    for (const auto& [key, c] : f.coeffs()) {
        terms.push_back(json{{"delta", mi_to_json(key.delta)},
                             {"lambda", mi_to_json(key.lambda)},
                             {"h", key.h + 1},
                             {"coeff", c.str()}});
    }
    return json{{"frame", frame_to_json(f.frame())}, {"terms", terms}};
}

HomPoly hompoly_from_json(const json& j) {
    HomPoly f(frame_from_json(j.at("frame")));
    for (const auto& t : j.at("terms")) {
        uint32_t h = t.at("h").get<uint32_t>();
        if (h == 0) throw std::invalid_argument("hompoly_from_json: h is 1-based");
        f.add_coeff(mi_from_json(t.at("delta")), mi_from_json(t.at("lambda")), h - 1,
                    Rational::parse(t.at("coeff").get<std::string>()));
    }
    return f;
}

json jetpoint_to_json(const jet::JetPoint& p) {
    json xs = json::array();
    for (const auto& c : p.x) xs.push_back(c.str());
    json terms = json::array();
    for (const auto& [key, c] : p.u) {
        terms.push_back(
            json{{"sigma", mi_to_json(key.first)}, {"j", key.second + 1}, {"value", c.str()}});
    }
    return json{{"n", p.n}, {"m", p.m}, {"order", p.order}, {"x", xs}, {"terms", terms}};
}

jet::JetPoint jetpoint_from_json(const json& j) {
    jet::JetPoint p;
    p.n = j.at("n").get<uint32_t>();
    p.m = j.at("m").get<uint32_t>();
    p.order = j.at("order").get<uint32_t>();
    for (const auto& c : j.at("x")) p.x.push_back(Rational::parse(c.get<std::string>()));
    if (p.x.size() != p.n) throw std::invalid_argument("jetpoint_from_json: wrong base size");
    for (const auto& t : j.at("terms")) {
        uint32_t h = t.at("j").get<uint32_t>();
        if (h == 0) throw std::invalid_argument("jetpoint_from_json: j is 1-based");
        p.set_coord(mi_from_json(t.at("sigma")), h - 1,
                    Rational::parse(t.at("value").get<std::string>()));
    }
    return p;
}

json section_to_json(const pasting::Section& s) {
    const Frame& fr = s.frame;
    json entries = json::array();
    for (const auto& [key, poly] : s.values) {
        json monos = json::array();
        for (const auto& [mono, c] : poly.terms()) {
            json factors = json::array();
            for (const auto& [var, exp] : mono.factors()) {
                uint32_t i = var / fr.l, j2 = var % fr.l;
                factors.push_back(json::array({i + 1, j2 + 1, exp}));
            }
            monos.push_back(json{{"monomial", factors}, {"coeff", c.str()}});
        }
        entries.push_back(
            json{{"lambda", mi_to_json(key.first)}, {"h", key.second + 1}, {"poly", monos}});
    }
    return json{{"frame", frame_to_json(fr)}, {"entries", entries}};
}

pasting::Section section_from_json(const json& j) {
    pasting::Section s;
    s.frame = frame_from_json(j.at("frame"));
    for (const auto& entry : j.at("entries")) {
        uint32_t h = entry.at("h").get<uint32_t>();
        if (h == 0) throw std::invalid_argument("section_from_json: h is 1-based");
        Poly p;
        for (const auto& mono : entry.at("poly")) {
            Monomial m = Monomial::one();
            for (const auto& factor : mono.at("monomial")) {
                uint32_t i = factor.at(0).get<uint32_t>(), j2 = factor.at(1).get<uint32_t>(),
                         exp = factor.at(2).get<uint32_t>();
                if (i == 0 || j2 == 0)
                    throw std::invalid_argument("section_from_json: indices are 1-based");
                m = m.times(Monomial::var((i - 1) * s.frame.l + (j2 - 1), exp));
            }
            p.add_term(m, Rational::parse(mono.at("coeff").get<std::string>()));
        }
        s.set_value(mi_from_json(entry.at("lambda")), h - 1, std::move(p));
    }
    return s;
}

}  // namespace plab::io
