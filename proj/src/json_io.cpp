#include "modexact/json_io.hpp"

#include <climits>
#include <fstream>

namespace modexact {

namespace {

long long ll_from_json(const json& j, const char* what) {
    if (j.is_number_integer() || j.is_number_unsigned()) return j.get<long long>();
    if (j.is_string()) {
        try {
            return std::stoll(j.get<std::string>());
        } catch (const std::exception&) {
            throw input_error(std::string(what) + ": not a 64-bit integer: " + j.get<std::string>());
        }
    }
    throw input_error(std::string(what) + ": expected an integer");
}

mpz_class mpz_from_json(const json& j, const char* what) {
    if (j.is_number_integer() || j.is_number_unsigned())
        return z_of(j.get<long long>());
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::exception&) {
            throw input_error(std::string(what) + ": not a decimal integer: " + j.get<std::string>());
        }
    }
    throw input_error(std::string(what) + ": expected an integer");
}

std::vector<long long> ll_vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw input_error(std::string(what) + ": expected an array");
    std::vector<long long> v;
    v.reserve(j.size());
    for (const json& e : j) v.push_back(ll_from_json(e, what));
    return v;
}

json witness_to_json(long long d, const std::vector<long long>& k) {
    json w;
    w["d"] = d;
    w["k"] = k;
    return w;
}

}  // namespace

json to_json(const Ring& r) { return r.modulus.get_str(); }

json to_json(const Mat& a) {
    json rows = json::array();
    for (int i = 0; i < a.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < a.cols; ++j) row.push_back(std::to_string(a.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const IntMatrix& a) {
    json rows = json::array();
    for (int i = 0; i < a.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < a.cols; ++j) row.push_back(a.at(i, j).get_str());
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const FpModule& m) { return json(m.inv); }

json to_json(const Morphism& f) {
    json j;
    j["source"] = to_json(f.source);
    j["target"] = to_json(f.target);
    j["matrix"] = to_json(f.a);
    return j;
}

json to_json(const Conflation& c) {
    json j;
    j["i"] = to_json(c.i);
    j["p"] = to_json(c.p);
    return j;
}

json to_json(const ExactStructureSelector& sel) {
    switch (sel.kind) {
        case ExactStructureSelector::Kind::Abelian: return "abelian";
        case ExactStructureSelector::Kind::Pure: return "pure";
        case ExactStructureSelector::Kind::HomInto:
        case ExactStructureSelector::Kind::HomFrom: {
            json cls = json::array();
            for (const FpModule& m : sel.cls) cls.push_back(to_json(m));
            json j;
            j[sel.kind == ExactStructureSelector::Kind::HomInto ? "hom-into" : "hom-from"] =
                std::move(cls);
            return j;
        }
    }
    throw internal_error("unknown selector kind");
}

json to_json(const PurityCertificate& c) {
    json j;
    j["verdict"] = c.verdict;
    if (c.witness_d && c.witness_k) j["witness"] = witness_to_json(*c.witness_d, *c.witness_k);
    return j;
}

json to_json(const PartialVerdict& v) {
    json j;
    j["is_partial"] = v.is_partial;
    j["is_partial_iso"] = v.is_partial_iso;
    j["p"] = to_json(v.p);
    j["ibar"] = to_json(v.ibar);
    j["fbar"] = to_json(v.fbar);
    if (v.cert_ibar) j["cert_ibar"] = to_json(*v.cert_ibar);
    if (v.cert_fbar) j["cert_fbar"] = to_json(*v.cert_fbar);
    if (v.witness_d && v.witness_k) j["witness"] = witness_to_json(*v.witness_d, *v.witness_k);
    return j;
}

json to_json(const CophantomVerdict& v) {
    json j;
    j["verdict"] = v.verdict;
    if (v.failing_index) j["failing_index"] = static_cast<long long>(*v.failing_index);
    return j;
}

json to_json(const Battery& b) {
    json targets = json::array();
    for (const FpModule& m : b.targets) targets.push_back(to_json(m));
    json j;
    j["max_order"] = b.max_order;
    j["targets"] = std::move(targets);
    return j;
}

json to_json(const InflationSet& h) {
    json members = json::array();
    for (const Morphism& f : h.members) members.push_back(to_json(f));
    json j;
    j["members"] = std::move(members);
    return j;
}

json to_json(const SmallVerdict& v) {
    json j;
    j["verdict"] = v.verdict;
    if (v.cex_target) j["cex_target"] = to_json(*v.cex_target);
    if (v.cex_map) j["cex_map"] = to_json(*v.cex_map);
    return j;
}

json to_json(const Hull& h) {
    json j;
    j["e"] = to_json(h.e);
    j["u"] = to_json(h.u);
    return j;
}

json to_json(const PreenvelopeTrace& t) {
    json stages = json::array();
    for (const PreenvelopeStage& s : t.stages) {
        json stage;
        stage["p"] = to_json(s.p);
        stage["step"] = to_json(s.step);
        stages.push_back(std::move(stage));
    }
    json j;
    j["steps_used"] = t.steps_used;
    j["stages"] = std::move(stages);
    j["final"] = to_json(t.final);
    return j;
}

json to_json(const HullReport& r) {
    json j;
    j["essential_and_injective"] = r.essential_and_injective;
    j["inflation_injective_small"] = r.inflation_injective_small;
    j["battery_maps_split"] = r.battery_maps_split;
    j["envelope_minimal"] = r.envelope_minimal;
    j["weakly_essential_injective"] = r.weakly_essential_injective;
    return j;
}

json caps_to_json() {
    const Caps& c = caps();
    json j;
    j["hom"] = c.hom;
    j["subgroups"] = c.subgroups;
    j["order"] = c.order;
    j["max_steps"] = c.max_steps;
    return j;
}

json count_to_json(long long saturating_count) {
    if (saturating_count == LLONG_MAX) return json("saturated");
    return json(saturating_count);
}

Ring ring_from_json(const json& j) {
    mpz_class m = mpz_from_json(j, "ring");
    if (m == 0) return Ring::integers();
    return Ring::mod(m);
}

Mat mat_from_json(const json& j) {
    if (!j.is_array()) throw input_error("matrix: expected an array of rows");
    Mat a(static_cast<int>(j.size()), 0);
    for (size_t i = 0; i < j.size(); ++i) {
        const json& row = j[i];
        if (!row.is_array()) throw input_error("matrix: expected an array of rows");
        if (i == 0) a = Mat(static_cast<int>(j.size()), static_cast<int>(row.size()));
        if (static_cast<int>(row.size()) != a.cols)
            throw input_error("matrix: ragged rows");
        for (size_t c = 0; c < row.size(); ++c)
            a.at(static_cast<int>(i), static_cast<int>(c)) = ll_from_json(row[c], "matrix entry");
    }
    return a;
}

IntMatrix intmatrix_from_json(const json& j) {
    if (!j.is_array()) throw input_error("matrix: expected an array of rows");
    IntMatrix a(static_cast<int>(j.size()), 0);
    for (size_t i = 0; i < j.size(); ++i) {
        const json& row = j[i];
        if (!row.is_array()) throw input_error("matrix: expected an array of rows");
        if (i == 0) a = IntMatrix(static_cast<int>(j.size()), static_cast<int>(row.size()));
        if (static_cast<int>(row.size()) != a.cols)
            throw input_error("matrix: ragged rows");
        for (size_t c = 0; c < row.size(); ++c)
            a.at(static_cast<int>(i), static_cast<int>(c)) = mpz_from_json(row[c], "matrix entry");
    }
    return a;
}

FpModule module_from_json(const Ring& ring, const json& j) {
    return fp_module(ring, ll_vector_from_json(j, "module factors"));
}

Morphism morphism_from_json(const Ring& ring, const json& j) {
    if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("matrix"))
        throw input_error("morphism: expected {source, target, matrix}");
    FpModule src = module_from_json(ring, j.at("source"));
    FpModule tgt = module_from_json(ring, j.at("target"));
    IntMatrix a = intmatrix_from_json(j.at("matrix"));
    /* an empty matrix serializes without a column count; restore the shape
       from the declared endpoints */
    if (a.rows == 0 && src.ngens() == 0) a = IntMatrix(0, tgt.ngens());
    return morphism(src, tgt, a);
}

Conflation conflation_from_json(const Ring& ring, const json& j) {
    if (!j.is_object() || !j.contains("i") || !j.contains("p"))
        throw input_error("conflation: expected {i, p}");
    return conflation(morphism_from_json(ring, j.at("i")), morphism_from_json(ring, j.at("p")));
}

ExactStructureSelector selector_from_json(const Ring& ring, const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "abelian") return ExactStructureSelector::abelian();
        if (s == "pure") return ExactStructureSelector::pure();
        throw input_error("unknown structure '" + s + "'");
    }
    if (j.is_object()) {
        for (const char* key : {"hom-into", "hom-from"}) {
            if (!j.contains(key)) continue;
            std::vector<FpModule> cls;
            for (const json& e : j.at(key)) cls.push_back(module_from_json(ring, e));
            return std::string(key) == "hom-into" ? ExactStructureSelector::hom_into(std::move(cls))
                                                  : ExactStructureSelector::hom_from(std::move(cls));
        }
    }
    throw input_error("structure: expected \"abelian\", \"pure\", or {hom-into|hom-from: [...]}");
}

Battery battery_from_json(const Ring& ring, const json& j) {
    if (!j.is_object()) throw input_error("battery: expected an object");
    std::vector<FpModule> targets;
    if (j.contains("targets"))
        for (const json& e : j.at("targets")) targets.push_back(module_from_json(ring, e));
    long long max_order = j.contains("max_order") ? ll_from_json(j.at("max_order"), "max_order") : 0;
    if (max_order > 0) return default_battery(ring, max_order, targets);
    if (targets.empty()) throw input_error("battery: needs max_order or targets");
    return Battery{std::move(targets), 0};
}

InflationSet inflation_set_from_json(const Ring& ring, const json& j) {
    if (!j.is_object() || !j.contains("members"))
        throw input_error("inflation set: expected {members: [...]}");
    InflationSet h;
    for (const json& e : j.at("members")) h.members.push_back(morphism_from_json(ring, e));
    return h;
}

const FpModule& Workspace::module_named(const std::string& name) const {
    auto it = modules.find(name);
    if (it == modules.end()) throw input_error("unknown module name '" + name + "'");
    return it->second;
}

const Morphism& Workspace::morphism_named(const std::string& name) const {
    auto it = morphisms.find(name);
    if (it == morphisms.end()) throw input_error("unknown morphism name '" + name + "'");
    return it->second;
}

const Conflation& Workspace::conflation_named(const std::string& name) const {
    auto it = conflations.find(name);
    if (it == conflations.end()) throw input_error("unknown conflation name '" + name + "'");
    return it->second;
}

const Battery& Workspace::battery_named(const std::string& name) const {
    auto it = batteries.find(name);
    if (it == batteries.end()) throw input_error("unknown battery name '" + name + "'");
    return it->second;
}

const InflationSet& Workspace::inflation_set_named(const std::string& name) const {
    auto it = inflation_sets.find(name);
    if (it == inflation_sets.end())
        throw input_error("unknown inflation set name '" + name + "'");
    return it->second;
}

Workspace workspace_from_json(const json& j) {
    if (!j.is_object()) throw input_error("workspace: expected a JSON object");
    if (!j.contains("ring")) throw input_error("workspace: missing \"ring\"");
    Workspace ws;
    ws.ring = ring_from_json(j.at("ring"));
    if (!ws.ring.modular()) throw input_error("workspace ring must be modular (Z/m, m >= 2)");
    if (j.contains("meta")) ws.meta = j.at("meta");

    auto resolve_module = [&ws](const json& e) -> FpModule {
        if (e.is_string()) return ws.module_named(e.get<std::string>());
        return module_from_json(ws.ring, e);
    };
    auto resolve_morphism = [&ws](const json& e) -> Morphism {
        if (e.is_string()) return ws.morphism_named(e.get<std::string>());
        return morphism_from_json(ws.ring, e);
    };

    if (j.contains("modules"))
        for (const auto& [name, val] : j.at("modules").items())
            ws.modules.emplace(name, module_from_json(ws.ring, val));
    if (j.contains("morphisms"))
        for (const auto& [name, val] : j.at("morphisms").items()) {
            if (!val.is_object() || !val.contains("source") || !val.contains("target") ||
                !val.contains("matrix"))
                throw input_error("morphism '" + name + "': expected {source, target, matrix}");
            FpModule src = resolve_module(val.at("source"));
            FpModule tgt = resolve_module(val.at("target"));
            IntMatrix a = intmatrix_from_json(val.at("matrix"));
            if (a.rows == 0 && src.ngens() == 0) a = IntMatrix(0, tgt.ngens());
            ws.morphisms.emplace(name, morphism(src, tgt, a));
        }
    if (j.contains("conflations"))
        for (const auto& [name, val] : j.at("conflations").items()) {
            if (!val.is_object() || !val.contains("i") || !val.contains("p"))
                throw input_error("conflation '" + name + "': expected {i, p}");
            ws.conflations.emplace(
                name, conflation(resolve_morphism(val.at("i")), resolve_morphism(val.at("p"))));
        }
    if (j.contains("batteries"))
        for (const auto& [name, val] : j.at("batteries").items()) {
            if (!val.is_object()) throw input_error("battery '" + name + "': expected an object");
            std::vector<FpModule> targets;
            if (val.contains("targets"))
                for (const json& e : val.at("targets")) targets.push_back(resolve_module(e));
            long long max_order =
                val.contains("max_order") ? ll_from_json(val.at("max_order"), "max_order") : 0;
            if (max_order > 0)
                ws.batteries.emplace(name, default_battery(ws.ring, max_order, targets));
            else if (!targets.empty())
                ws.batteries.emplace(name, Battery{std::move(targets), 0});
            else
                throw input_error("battery '" + name + "': needs max_order or targets");
        }
    if (j.contains("inflation_sets"))
        for (const auto& [name, val] : j.at("inflation_sets").items()) {
            if (!val.is_object() || !val.contains("members"))
                throw input_error("inflation set '" + name + "': expected {members: [...]}");
            InflationSet h;
            for (const json& e : val.at("members")) h.members.push_back(resolve_morphism(e));
            ws.inflation_sets.emplace(name, std::move(h));
        }
    return ws;
}

json to_json(const Workspace& ws) {
    auto module_ref = [&ws](const FpModule& m) -> json {
        for (const auto& [name, mod] : ws.modules)
            if (mod.same_type(m)) return name;
        return to_json(m);
    };
    auto morphism_ref = [&ws, &module_ref](const Morphism& f) -> json {
        for (const auto& [name, mor] : ws.morphisms)
            if (morphism_eq(mor, f)) return name;
        json j;
        j["source"] = module_ref(f.source);
        j["target"] = module_ref(f.target);
        j["matrix"] = to_json(f.a);
        return j;
    };

    json j;
    j["ring"] = to_json(ws.ring);
    if (!ws.meta.is_null()) j["meta"] = ws.meta;
    if (!ws.modules.empty()) {
        json modules;
        for (const auto& [name, mod] : ws.modules) modules[name] = to_json(mod);
        j["modules"] = std::move(modules);
    }
    if (!ws.morphisms.empty()) {
        json morphisms;
        for (const auto& [name, f] : ws.morphisms) {
            json e;
            e["source"] = module_ref(f.source);
            e["target"] = module_ref(f.target);
            e["matrix"] = to_json(f.a);
            morphisms[name] = std::move(e);
        }
        j["morphisms"] = std::move(morphisms);
    }
    if (!ws.conflations.empty()) {
        json conflations;
        for (const auto& [name, c] : ws.conflations) {
            json e;
            e["i"] = morphism_ref(c.i);
            e["p"] = morphism_ref(c.p);
            conflations[name] = std::move(e);
        }
        j["conflations"] = std::move(conflations);
    }
    if (!ws.batteries.empty()) {
        json batteries;
        for (const auto& [name, b] : ws.batteries) batteries[name] = to_json(b);
        j["batteries"] = std::move(batteries);
    }
    if (!ws.inflation_sets.empty()) {
        json sets;
        for (const auto& [name, h] : ws.inflation_sets) {
            json members = json::array();
            for (const Morphism& f : h.members) members.push_back(morphism_ref(f));
            json e;
            e["members"] = std::move(members);
            sets[name] = std::move(e);
        }
        j["inflation_sets"] = std::move(sets);
    }
    return j;
}

Workspace load_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open workspace file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error("workspace '" + path + "': " + e.what());
    }
    return workspace_from_json(j);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace modexact
