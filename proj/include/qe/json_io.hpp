#pragma once

#include <string>

#include "autos.hpp"
#include "json.hpp"
#include "torsors.hpp"

namespace qe::io {

using json = nlohmann::json;

/// Member lookup that reports a missing key as a ParseError.
inline const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing \"") + key + "\"");
    return j[key];
}

// ---------------------------------------------------------------------------
// Scalars, forms, points
// ---------------------------------------------------------------------------

inline json to_json(const Field& F) { return {{"k", F->k()}, {"modulus", F->modulus()}}; }

inline Field field_from_json(const json& j) {
    if (!j.is_object() || !j.contains("k")) throw ParseError("field needs a \"k\" entry");
    std::optional<std::uint64_t> modulus;
    if (j.contains("modulus") && !j["modulus"].is_null()) modulus = j["modulus"].get<std::uint64_t>();
    return make_field(j["k"].get<int>(), modulus);
}

/// Parses "k" or "k:modulus".
inline Field parse_field_spec(const std::string& spec) {
    try {
        const auto colon = spec.find(':');
        const int k = std::stoi(spec.substr(0, colon));
        if (colon == std::string::npos) return make_field(k);
        return make_field(k, std::stoull(spec.substr(colon + 1), nullptr, 0));
    } catch (const std::logic_error&) {
        throw ParseError("bad field spec '" + spec + "'");
    }
}

inline elem_t elem_from_json(const json& j, const Field& F) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ParseError("field element must be a non-negative integer");
    const auto v = j.get<std::uint64_t>();
    if (v >= F->size()) throw InvalidParams("element " + std::to_string(v) + " outside GF(2^" + std::to_string(F->k()) + ")");
    return elem_t(v);
}

inline json to_json(const BinForm& f) { return {{"deg", f.deg}, {"coeffs", f.c}}; }

inline BinForm binform_from_json(const json& j, const Field& F, std::optional<int> want_deg = std::nullopt) {
    if (!j.is_object() || !j.contains("coeffs")) throw ParseError("binform needs \"coeffs\"");
    const json& cs = j["coeffs"];
    if (!cs.is_array()) throw ParseError("binform coeffs must be an array");
    const int deg = j.contains("deg") ? j["deg"].get<int>() : int(cs.size()) - 1;
    if (int(cs.size()) != deg + 1) throw DegreeMismatch("binform needs deg+1 coefficients");
    if (want_deg && deg != *want_deg)
        throw DegreeMismatch("expected degree " + std::to_string(*want_deg) + ", got " + std::to_string(deg));
    std::vector<elem_t> c;
    for (auto& x : cs) c.push_back(elem_from_json(x, F));
    return BinForm(F, deg, c);
}

inline json to_json(const ProjPoint& p) {
    json j{{"k", p.F->k()}};
    if (p.inf)
        j["tau"] = nullptr;
    else
        j["tau"] = p.tau;
    return j;
}

inline ProjPoint point_from_json(const json& j, const Field& base) {
    Field F = base;
    if (j.contains("k") && j["k"].get<int>() != base->k()) F = extend_field(base, j["k"].get<int>() / base->k()).first;
    if (!j.contains("tau") || j["tau"].is_null()) return ProjPoint::infinity(F);
    return ProjPoint::finite(F, elem_from_json(j["tau"], F));
}

inline json to_json(const Mobius& m) { return {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}}; }

inline Mobius mobius_from_json(const json& j, const Field& F) {
    Mobius m{F, elem_from_json(need(j, "a"), F), elem_from_json(need(j, "b"), F), elem_from_json(need(j, "c"), F),
             elem_from_json(need(j, "d"), F)};
    if (m.det() == 0) throw InvalidParams("singular Mobius matrix");
    return m;
}

// ---------------------------------------------------------------------------
// Surface models
// ---------------------------------------------------------------------------

inline json to_json(const QEForm& f) {
    return {{"field", to_json(f.F)}, {"a0", f.a0},           {"a1", to_json(f.a1)},
            {"a2", to_json(f.a2)},   {"g2", to_json(f.g2)}, {"c1", to_json(f.c1)}};
}

/// The field comes from the document, else from the fallback.
inline Field document_field(const json& j, const Field& fallback) {
    if (j.contains("field")) return field_from_json(j["field"]);
    if (!fallback) throw ParseError("no field given (use a \"field\" entry or --field)");
    return fallback;
}

inline QEForm qeform_from_json(const json& j, const Field& fallback = nullptr) {
    const Field F = document_field(j, fallback);
    return {F, elem_from_json(need(j, "a0"), F), binform_from_json(need(j, "a1"), F, 1), binform_from_json(need(j, "a2"), F, 2),
            binform_from_json(need(j, "g2"), F, 2), binform_from_json(need(j, "c1"), F, 1)};
}

inline json to_json(const Homog18& h) {
    return {{"field", to_json(h.a9.F)}, {"a9", to_json(h.a9)}, {"a10", to_json(h.a10)},
            {"a14", to_json(h.a14)},    {"a18", to_json(h.a18)}};
}

inline Homog18 homog18_from_json(const json& j, const Field& fallback = nullptr) {
    const Field F = document_field(j, fallback);
    return {binform_from_json(need(j, "a9"), F, 9), binform_from_json(need(j, "a10"), F, 10),
            binform_from_json(need(j, "a14"), F, 14), binform_from_json(need(j, "a18"), F, 18)};
}

inline json to_json(const QueenForm& q) {
    return {{"field", to_json(q.h4.F)}, {"h4", to_json(q.h4)}, {"h6", to_json(q.h6)}, {"q2", to_json(q.q2)},
            {"g5", to_json(q.g5)},      {"g6", to_json(q.g6)}, {"g8", to_json(q.g8)}};
}

inline QueenForm queen_from_json(const json& j, const Field& fallback = nullptr) {
    const Field F = document_field(j, fallback);
    return {binform_from_json(need(j, "h4"), F, 4), binform_from_json(need(j, "h6"), F, 6),
            binform_from_json(need(j, "q2"), F, 2), binform_from_json(need(j, "g5"), F, 5),
            binform_from_json(need(j, "g6"), F, 6), binform_from_json(need(j, "g8"), F, 8)};
}

inline json to_json(const UniqueForm& u) {
    return {{"field", to_json(u.a9.F)}, {"a9", to_json(u.a9)}, {"a4", to_json(u.a4)},
            {"a14", to_json(u.a14)},    {"a3", to_json(u.a3)}};
}

inline json to_json(const ModelForm& m) {
    return {{"field", to_json(m.F)}, {"g", to_json(m.g)},   {"a1", to_json(m.a1)},
            {"a0", m.a0},            {"a2", to_json(m.a2)}, {"a3", to_json(m.a3)}};
}

inline ModelForm model_from_json(const json& j, const Field& fallback = nullptr) {
    const Field F = document_field(j, fallback);
    return {F, binform_from_json(need(j, "g"), F, 4), binform_from_json(need(j, "a1"), F, 1), elem_from_json(need(j, "a0"), F),
            binform_from_json(need(j, "a2"), F, 2), binform_from_json(need(j, "a3"), F, 3)};
}

/// The weight D is written only when it differs from 10.
inline json to_json(const CoordMap& m) {
    json j{{"base", to_json(m.M)},   {"u", m.u},           {"v", m.v},          {"d1", to_json(m.d1)},
           {"d2", to_json(m.d2)},    {"d3", to_json(m.d3)}, {"d5", to_json(m.d5)}};
    if (m.D != 10) j["D"] = m.D;
    return j;
}

inline CoordMap coordmap_from_json(const json& j, const Field& F) {
    CoordMap m = identity_map(F, j.value("D", 10));
    m.M = mobius_from_json(need(j, "base"), F);
    m.u = elem_from_json(need(j, "u"), F);
    m.v = elem_from_json(need(j, "v"), F);
    m.d1 = binform_from_json(need(j, "d1"), F, m.d1.deg);
    m.d2 = binform_from_json(need(j, "d2"), F, m.d2.deg);
    m.d3 = binform_from_json(need(j, "d3"), F, m.d3.deg);
    m.d5 = binform_from_json(need(j, "d5"), F, m.d5.deg);
    if (!m.u || !m.v) throw InvalidParams("unit scalings must be nonzero");
    return m;
}

inline json to_json(const Auto& a) {
    json j = to_json(a.map);
    j["order"] = a.order;
    return j;
}

// ---------------------------------------------------------------------------
// Jacobians and fibers
// ---------------------------------------------------------------------------

inline json to_json(const WeierstrassQE& w) {
    return {{"A", to_json(w.A)}, {"B", to_json(w.B)}, {"model", w.provenance == Provenance::Minimal ? "minimal" : "raw56"}};
}

inline json to_json(const FiberConfig& c) {
    json list = json::array();
    for (auto& e : c.fibers)
        list.push_back({{"point", to_json(e.point)}, {"kodaira", to_string(e.type)}, {"delta_mult", e.delta_mult}});
    return list;
}

inline json to_json(const FiberReport& r) {
    json j{{"point", to_json(r.point)},
           {"kodaira", to_string(r.kodaira)},
           {"multiplicity", r.multiplicity},
           {"ade", r.ade},
           {"delta_mult", r.delta_mult}};
    if (r.residual) j["residual"] = to_string(*r.residual);
    return j;
}

inline json to_json(const FiberInventory& inv) {
    json list = json::array();
    for (auto& r : inv.reports) list.push_back(to_json(r));
    return {{"fibers", list}, {"complete", inv.complete}};
}

inline json to_json(const CanonicalDivisor& k) {
    json roots = json::array();
    for (auto& [p, m] : k.minimal_roots) roots.push_back({{"point", to_json(p)}, {"multiplicity", m}, {"coefficient", -m / 2.0}});
    return {{"d", k.d},
            {"infinity_coefficient", k.infinity_coeff},
            {"minimal_roots", roots},
            {"numerically_trivial", k.numerically_trivial},
            {"trivial", k.trivial},
            {"diagnosis", k.diagnosis}};
}

inline json to_json(const ItoMatch& m) {
    json j{{"row", row_tag(m.row)}, {"field", to_json(m.F)}, {"parameters_found", m.parameters_found},
           {"exhaustive", m.exhaustive}};
    if (row_uses_alpha(m.row)) j["alpha"] = m.alpha;
    if (row_uses_beta(m.row)) j["beta"] = m.beta;
    return j;
}

// ---------------------------------------------------------------------------
// Torsors and automorphisms
// ---------------------------------------------------------------------------

inline ItoRow row_from_json(const json& j) {
    std::string tag = j.get<std::string>();
    if (tag.rfind("table2:", 0) == 0) tag = tag.substr(7);
    return parse_ito_row(tag);
}

inline ItoFamily family_from_json(const json& j, const Field& F) {
    ItoFamily fam;
    fam.row = row_from_json(need(j, "row"));
    if (j.contains("alpha")) fam.alpha = elem_from_json(j["alpha"], F);
    if (j.contains("beta")) fam.beta = elem_from_json(j["beta"], F);
    return fam;
}

inline json to_json(const ItoFamily& fam) {
    json j{{"row", row_tag(fam.row)}};
    if (row_uses_alpha(fam.row)) j["alpha"] = fam.alpha;
    if (row_uses_beta(fam.row)) j["beta"] = fam.beta;
    return j;
}

inline json to_json(const TorsorEnumeration& e) {
    json classes = json::array();
    for (auto& c : e.classes)
        classes.push_back({{"representative", to_json(c.representative)},
                           {"members", c.members},
                           {"type", to_string(classify_type(c.representative))}});
    return {{"family", to_json(e.family)},
            {"field", to_json(e.F)},
            {"candidates", e.candidates},
            {"rejected", e.rejected},
            {"undecided", e.undecided},
            {"counts",
             {{"classical", e.count(SurfaceType::Classical)}, {"supersingular", e.count(SurfaceType::Supersingular)}}},
            {"classes", classes}};
}

inline FamilyParams family_params_from_json(const json& j, const Field& F) {
    FamilyParams p;
    auto read = [&](const char* key, elem_t& dst) {
        if (j.contains(key)) dst = elem_from_json(j[key], F);
    };
    read("a", p.a);
    read("b", p.b);
    read("c", p.c);
    read("alpha", p.alpha);
    read("gamma", p.gamma);
    if (j.contains("c1")) p.c1 = binform_from_json(j["c1"], F, 1);
    return p;
}

inline json to_json(const AutoGroup& g) {
    json els = json::array();
    for (auto& a : g.elements) els.push_back(to_json(a));
    return {{"field", to_json(g.F)}, {"complete", g.complete}, {"elements", els}};
}

inline json to_json(const ComponentAction& c) {
    return {{"point", to_json(c.point)}, {"root_field", to_json(c.root_field)}, {"roots", c.roots},
            {"permutation", c.permutation}};
}

}  // namespace qe::io
