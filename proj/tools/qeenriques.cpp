// Command-line front end: reads JSON surface descriptions, writes JSON or text reports.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qe/qe.hpp"

using namespace qe;
using qe::io::json;

namespace {

enum Exit { kOk = 0, kInputError = 1, kRejected = 2, kInternal = 3 };

struct Options {
    std::string command;
    std::string input = "-";
    std::string field;
    std::uint64_t seed = 0;
    int max_ext = 1;
    bool text = false;
    std::string out;
    std::string schema_name;
};

/// Result of a command: the report and whether it is a mathematical rejection.
struct Outcome {
    json report;
    bool rejected = false;
};

json read_document(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

/// A QEForm document may be wrapped as {"qeform": {...}}.
const json& unwrap(const json& doc, const char* key) { return doc.contains(key) ? doc[key] : doc; }

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

Outcome cmd_classify(const json& doc, const Field& F) {
    const QEForm f = io::qeform_from_json(unwrap(doc, "qeform"), F);
    const auto violations = validate_qeform(f);
    json r{{"valid", violations.empty()}};
    if (!violations.empty()) {
        r["violations"] = violations;
        return {r, true};
    }
    r["type"] = to_string(classify_type(f));
    return {r, false};
}

Outcome cmd_jacobian(const json& doc, const Field& F) {
    const QEForm f = io::qeform_from_json(unwrap(doc, "qeform"), F);
    const JacobianData j = jacobian_data(f);
    const FiberConfig cfg = fiber_configuration(j);
    return {{{"weierstrass", io::to_json(weierstrass(j))},
             {"discriminant", io::to_json(minimal_discriminant(f))},
             {"fibers", io::to_json(cfg)},
             {"pattern", cfg.pattern()},
             {"complete", cfg.complete},
             {"ito", io::to_json(ito_identify(j))}},
            false};
}

Outcome cmd_fibers(const json& doc, const Field& F) {
    const QEForm f = io::qeform_from_json(unwrap(doc, "qeform"), F);
    if (!is_valid(f)) throw InvalidParams(validate_qeform(f).front());
    return {{{"inventory", io::to_json(fiber_inventory(f))}, {"canonical", io::to_json(canonical_report(f))}}, false};
}

Outcome cmd_canon(const json& doc, const Field& F) {
    const QEForm f = io::qeform_from_json(unwrap(doc, "qeform"), F);
    const CanonResult c = canonicalize(f);
    return {{{"form", io::to_json(c.form)}, {"map", io::to_json(c.map)}, {"type", to_string(classify_type(f))}}, false};
}

Outcome cmd_isom(const json& doc, const Field& F) {
    if (!doc.contains("source") || !doc.contains("target")) throw ParseError("isom needs \"source\" and \"target\"");
    const QEForm a = io::qeform_from_json(doc["source"], F), b = io::qeform_from_json(doc["target"], F);
    for (const QEForm* f : {&a, &b})
        if (!is_valid(*f)) throw InvalidParams(validate_qeform(*f).front());
    const auto w = isomorphic(a, b);
    if (!w) return {{{"isomorphic", false}}, true};
    return {{{"isomorphic", true}, {"witness", io::to_json(w->map)}}, false};
}

Outcome cmd_torsors(const json& doc, const Field& fallback) {
    const Field F = io::document_field(doc, fallback);
    if (doc.contains("special")) {
        const std::string tag = doc["special"].get<std::string>();
        const FamilyParams p = io::family_params_from_json(doc.value("params", json::object()), F);
        const QEForm f = special_family(tag, F, p);
        return {{{"family", tag}, {"source", family_source(tag)}, {"form", io::to_json(f)},
                 {"type", to_string(classify_type(f))}, {"ito", io::to_json(ito_identify(jacobian_data(f)))}},
                false};
    }
    if (!doc.contains("family")) throw ParseError("torsors needs \"family\" or \"special\"");
    const ItoFamily fam = io::family_from_json(doc["family"], F);
    if (doc.contains("c1") || doc.contains("g2")) {
        const QEForm f =
            build_torsor(fam, io::binform_from_json(doc.at("c1"), F, 1), io::binform_from_json(doc.at("g2"), F, 2));
        return {{{"family", io::to_json(fam)}, {"form", io::to_json(f)}, {"type", to_string(classify_type(f))},
                 {"minimal", multiple_fibres_minimal(f)}},
                false};
    }
    return {io::to_json(enumerate_torsors(fam, F)), false};
}

Outcome cmd_autos(const json& doc, const Field& F, int max_ext) {
    const QEForm f = io::qeform_from_json(unwrap(doc, "qeform"), F);
    if (!is_valid(f)) throw InvalidParams(validate_qeform(f).front());
    return {io::to_json(automorphism_group(f, max_ext)), false};
}

Outcome cmd_pipeline(const json& doc, const Field& fallback) {
    const Field F = io::document_field(doc, fallback);
    json stages = json::object();
    std::optional<Homog18> h;
    std::optional<UniqueForm> u;
    std::optional<ModelForm> m;
    try {
        if (doc.contains("h4")) {
            h = ingest_queen(io::queen_from_json(doc, F));
            stages["homog18"] = io::to_json(*h);
        } else if (doc.contains("a10")) {
            h = io::homog18_from_json(doc, F);
        } else if (doc.contains("g")) {
            m = io::model_from_json(doc, F);
        } else {
            throw ParseError("pipeline input must be a Queen, Homog18 or model form");
        }
        if (h) {
            const NormalizeResult n = normalize_to_unique(*h);
            u = n.form;
            stages["unique"] = io::to_json(n.form);
            stages["normalizing_map"] = io::to_json(n.map);
            stages["doublings"] = n.doublings;
        }
        if (u) {
            m = extract_model(*u);
            stages["model"] = io::to_json(*m);
        }
        const ReduceResult r = reduce_to_general(*m);
        json stripped = json::array();
        for (auto& g : r.stripped) stripped.push_back(io::to_json(g));
        stages["stripped"] = stripped;
        return {{{"stages", stages},
                 {"qeform", io::to_json(r.form)},
                 {"type", to_string(classify_type(r.form))},
                 {"ito", io::to_json(ito_identify(jacobian_data(r.form)))}},
                false};
    } catch (const NotEnriques& e) {
        return {{{"stages", stages}, {"rejected", e.kind()}, {"diagnostic", e.what()}}, true};
    } catch (const NotRational& e) {
        return {{{"stages", stages}, {"rejected", e.kind()}, {"diagnostic", e.what()}}, true};
    }
}

// ---------------------------------------------------------------------------
// Schemas
// ---------------------------------------------------------------------------

json ref(const std::string& name) { return {{"$ref", "#/definitions/" + name}}; }

json object_schema(const std::vector<std::pair<std::string, json>>& props, std::vector<std::string> required = {}) {
    json p = json::object();
    for (auto& [k, v] : props) p[k] = v;
    if (required.empty())
        for (auto& [k, v] : props) required.push_back(k);
    return {{"type", "object"}, {"properties", p}, {"required", required}};
}

json definitions() {
    const json uint{{"type", "integer"}, {"minimum", 0}};
    const json integer{{"type", "integer"}};
    json d;
    d["field"] = object_schema({{"k", {{"type", "integer"}, {"minimum", 1}, {"maximum", 24}}}, {"modulus", uint}}, {"k"});
    d["binform"] = object_schema({{"deg", uint}, {"coeffs", {{"type", "array"}, {"items", uint}}}}, {"coeffs"});
    d["point"] = object_schema({{"k", integer}, {"tau", {{"type", {"integer", "null"}}, {"minimum", 0}}}});
    d["mobius"] = object_schema({{"a", uint}, {"b", uint}, {"c", uint}, {"d", uint}});
    d["qeform"] = object_schema({{"field", ref("field")},
                                 {"a0", uint},
                                 {"a1", ref("binform")},
                                 {"a2", ref("binform")},
                                 {"g2", ref("binform")},
                                 {"c1", ref("binform")}},
                                {"a0", "a1", "a2", "g2", "c1"});
    d["homog18"] = object_schema({{"field", ref("field")},
                                  {"a9", ref("binform")},
                                  {"a10", ref("binform")},
                                  {"a14", ref("binform")},
                                  {"a18", ref("binform")}},
                                 {"a9", "a10", "a14", "a18"});
    d["queen"] = object_schema({{"field", ref("field")},
                                {"h4", ref("binform")},
                                {"h6", ref("binform")},
                                {"q2", ref("binform")},
                                {"g5", ref("binform")},
                                {"g6", ref("binform")},
                                {"g8", ref("binform")}},
                               {"h4", "h6", "q2", "g5", "g6", "g8"});
    d["model"] = object_schema({{"field", ref("field")},
                                {"g", ref("binform")},
                                {"a1", ref("binform")},
                                {"a0", uint},
                                {"a2", ref("binform")},
                                {"a3", ref("binform")}},
                               {"g", "a1", "a0", "a2", "a3"});
    d["weierstrass"] = object_schema({{"A", ref("binform")}, {"B", ref("binform")}, {"model", {{"enum", {"minimal", "raw56"}}}}},
                                     {"A", "B"});
    d["fiber_config"] = {{"type", "array"},
                         {"items", object_schema({{"point", ref("point")},
                                                  {"kodaira", {{"type", "string"}}},
                                                  {"delta_mult", integer}})}};
    d["fiber_report"] = object_schema({{"point", ref("point")},
                                       {"kodaira", {{"type", "string"}}},
                                       {"multiplicity", {{"enum", {1, 2}}}},
                                       {"ade", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                                       {"delta_mult", integer},
                                       {"residual", {{"type", "string"}}}},
                                      {"point", "kodaira", "multiplicity", "ade", "delta_mult"});
    d["coordmap"] = object_schema({{"base", ref("mobius")},
                                   {"u", uint},
                                   {"v", uint},
                                   {"d1", ref("binform")},
                                   {"d2", ref("binform")},
                                   {"d3", ref("binform")},
                                   {"d5", ref("binform")},
                                   {"D", integer}},
                                  {"base", "u", "v", "d1", "d2", "d3", "d5"});
    d["auto"] = d["coordmap"];
    d["auto"]["properties"]["order"] = integer;
    d["auto"]["required"].push_back("order");
    d["family"] = object_schema({{"row", {{"type", "string"}}}, {"alpha", uint}, {"beta", uint}},
                                {"row"});
    d["torsors_request"] = {{"type", "object"},
                            {"properties",
                             {{"field", ref("field")},
                              {"family", ref("family")},
                              {"c1", ref("binform")},
                              {"g2", ref("binform")},
                              {"special", {{"type", "string"}}},
                              {"params", {{"type", "object"}}}}}};
    d["isom_request"] = object_schema({{"source", ref("qeform")}, {"target", ref("qeform")}});
    return d;
}

const std::vector<std::string>& schema_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (auto& [k, v] : definitions().items()) out.push_back(k);
        return out;
    }();
    return names;
}

json schema(const std::string& name) {
    const json defs = definitions();
    if (!defs.contains(name)) throw InvalidParams("unknown schema '" + name + "'");
    json s = defs[name];
    s["$schema"] = "http://json-schema.org/draft-07/schema#";
    s["title"] = name;
    s["definitions"] = defs;
    return s;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

bool is_binform(const json& j) { return j.is_object() && j.size() == 2 && j.contains("deg") && j.contains("coeffs"); }

std::string render_binform(const json& j) {
    const int deg = j["deg"].get<int>();
    std::string out;
    for (int i = 0; i <= deg; ++i) {
        const auto c = j["coeffs"][i].get<std::uint64_t>();
        if (!c) continue;
        std::string mono;
        auto var = [&](const char* v, int e) {
            if (!e) return;
            if (!mono.empty()) mono += " ";
            mono += v;
            if (e > 1) mono += "^" + std::to_string(e);
        };
        var("s", deg - i);
        var("t", i);
        std::string term = c == 1 && !mono.empty() ? mono : std::to_string(c) + (mono.empty() ? "" : " " + mono);
        out += (out.empty() ? "" : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

std::string render_scalar(const json& j) {
    if (is_binform(j)) return render_binform(j);
    if (j.is_object() && j.contains("k") && j.contains("modulus") && j.size() == 2)
        return "GF(2^" + std::to_string(j["k"].get<int>()) + ")";
    if (j.is_object() && j.contains("tau") && j.contains("k") && j.size() == 2)
        return j["tau"].is_null() ? "inf" : std::to_string(j["tau"].get<std::uint64_t>()) + " in GF(2^" +
                                                std::to_string(j["k"].get<int>()) + ")";
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

bool is_leaf(const json& j) {
    if (is_binform(j)) return true;
    if (j.is_object()) return render_scalar(j) != j.dump();
    if (j.is_array()) {
        for (auto& x : j)
            if (!(x.is_primitive())) return false;
        return true;
    }
    return true;
}

void render(std::ostream& os, const json& j, int indent) {
    const std::string pad(std::size_t(indent), ' ');
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) {
            if (is_leaf(v))
                os << pad << k << ": " << render_scalar(v) << "\n";
            else {
                os << pad << k << ":\n";
                render(os, v, indent + 2);
            }
        }
    } else if (j.is_array()) {
        for (auto& v : j) {
            if (is_leaf(v))
                os << pad << "- " << render_scalar(v) << "\n";
            else {
                os << pad << "-\n";
                render(os, v, indent + 2);
            }
        }
    } else {
        os << pad << render_scalar(j) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

Outcome run(const Options& o) {
    if (o.command == "schema") return {schema(o.schema_name), false};
    if (o.max_ext < 1 || o.max_ext > 4) throw InvalidParams("--max-ext must be between 1 and 4");
    const Field F = o.field.empty() ? nullptr : io::parse_field_spec(o.field);
    const json doc = read_document(o.input);
    if (o.command == "classify") return cmd_classify(doc, F);
    if (o.command == "jacobian") return cmd_jacobian(doc, F);
    if (o.command == "fibers") return cmd_fibers(doc, F);
    if (o.command == "canon") return cmd_canon(doc, F);
    if (o.command == "isom") return cmd_isom(doc, F);
    if (o.command == "torsors") return cmd_torsors(doc, F);
    if (o.command == "autos") return cmd_autos(doc, F, o.max_ext);
    if (o.command == "pipeline") return cmd_pipeline(doc, F);
    throw InvalidParams("unknown command '" + o.command + "'");
}

void emit(const Options& o, const json& report) {
    std::ostringstream text;
    if (o.text)
        render(text, report, 0);
    else
        text << report.dump() << "\n";
    if (o.out.empty()) {
        std::cout << text.str();
        return;
    }
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + o.out + "'");
    out << text.str();
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Quasi-elliptic Enriques surfaces over GF(2^k)"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--input", o.input, "JSON input document (- for stdin)");
    app.add_option("--field", o.field, "field as k or k:modulus, used when the input has none");
    app.add_option("--seed", o.seed, "seed for randomized factor splitting");
    app.add_option("--max-ext", o.max_ext, "extension degree for automorphism search");
    auto* json_flag = app.add_flag("--json", "JSON output (default)");
    app.add_flag("--text", o.text, "human-readable output")->excludes(json_flag);
    app.add_option("--out", o.out, "write the report to a file");
    const std::vector<std::pair<std::string, std::string>> commands{
        {"classify", "surface type and validity of a form"},
        {"jacobian", "Weierstrass model, discriminant, fiber configuration and family row"},
        {"fibers", "fiber inventory and canonical divisor"},
        {"canon", "canonical shape with the transforming map"},
        {"isom", "isomorphism witness between two forms"},
        {"torsors", "build, enumerate or instantiate torsor families"},
        {"autos", "automorphism group"},
        {"pipeline", "Queen, degree-18 or model form through to a general form"},
    };
    for (auto& [name, help] : commands) app.add_subcommand(name, help)->callback([&o, n = name] { o.command = n; });
    auto* sch = app.add_subcommand("schema", "JSON schema of a document type");
    sch->add_option("name", o.schema_name, "schema name")->required();
    sch->callback([&o] { o.command = "schema"; });
    app.footer("Schemas: " + [] {
        std::string s;
        for (auto& n : schema_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }
    try {
        const Outcome r = run(o);
        emit(o, r.report);
        if (r.rejected && r.report.contains("diagnostic"))
            std::cerr << r.report["diagnostic"].get<std::string>() << "\n";
        return r.rejected ? kRejected : kOk;
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return kInputError;
    } catch (const InternalContradiction& e) {
        std::cerr << e.what() << "\n";
        return kInternal;
    } catch (const MathError& e) {
        std::cerr << e.what() << "\n";
        emit(o, {{"rejected", e.kind()}, {"diagnostic", e.what()}});
        return kRejected;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kInputError;
    }
}
