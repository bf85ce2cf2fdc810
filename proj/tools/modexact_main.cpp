#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modexact/config.hpp"
#include "modexact/corpus.hpp"
#include "modexact/exact.hpp"
#include "modexact/hulls.hpp"
#include "modexact/intlin.hpp"
#include "modexact/json_io.hpp"
#include "modexact/module.hpp"
#include "modexact/partial.hpp"
#include "modexact/subgroups.hpp"
#include "modexact/suite.hpp"

using namespace modexact;

namespace {

json parse_json_arg(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("bad inline JSON: ") + e.what());
    }
}

bool looks_inline(const std::string& s) {
    return !s.empty() && (s[0] == '[' || s[0] == '{');
}

Ring ring_of_text(const std::string& text) {
    try {
        mpz_class m(text);
        return m == 0 ? Ring::integers() : Ring::mod(m);
    } catch (const std::invalid_argument&) {
        throw input_error("bad ring modulus '" + text + "'");
    }
}

/* Options shared across subcommands. Objects are named workspace entries or
   inline JSON; inline morphisms and conflations must be self-contained. */
struct GlobalOpts {
    std::string workspace_path;
    std::string ring_text;
    std::string structure = "abelian";
    std::vector<std::string> cls_args;
    std::string battery_name;
    std::string set_name;
    bool baer_flag = false;
    long long max_order = 0;
    int max_steps = 0;
    unsigned long long seed = 0;
    long long instances = 0;
    long long cap_hom = 0;
    long long cap_subgroups = 0;
    std::string output_path;

    std::optional<Workspace> ws;

    void apply_caps() {
        if (cap_hom > 0) caps().hom = cap_hom;
        if (cap_subgroups > 0) caps().subgroups = cap_subgroups;
    }

    bool has_workspace() const { return !workspace_path.empty(); }

    Workspace& workspace() {
        if (!ws) {
            if (workspace_path.empty())
                throw input_error("a named object needs --workspace");
            ws = load_workspace(workspace_path);
        }
        return *ws;
    }

    Ring ring() {
        if (has_workspace()) {
            Ring r = workspace().ring;
            if (!ring_text.empty() && !(r == ring_of_text(ring_text)))
                throw input_error("--ring conflicts with the workspace ring");
            return r;
        }
        if (!ring_text.empty()) return ring_of_text(ring_text);
        throw input_error("give --ring or --workspace");
    }

    FpModule module_arg(const std::string& s) {
        if (looks_inline(s)) return module_from_json(ring(), parse_json_arg(s));
        return workspace().module_named(s);
    }

    Morphism morphism_arg(const std::string& s) {
        if (looks_inline(s)) return morphism_from_json(ring(), parse_json_arg(s));
        return workspace().morphism_named(s);
    }

    Conflation conflation_arg(const std::string& s) {
        if (looks_inline(s)) return conflation_from_json(ring(), parse_json_arg(s));
        return workspace().conflation_named(s);
    }

    ExactStructureSelector selector() {
        if (structure == "abelian") return ExactStructureSelector::abelian();
        if (structure == "pure") return ExactStructureSelector::pure();
        if (structure == "hom-into" || structure == "hom-from") {
            if (cls_args.empty())
                throw input_error("--structure " + structure + " needs --class");
            std::vector<FpModule> cls;
            for (const std::string& s : cls_args) cls.push_back(module_arg(s));
            return structure == "hom-into" ? ExactStructureSelector::hom_into(cls)
                                           : ExactStructureSelector::hom_from(cls);
        }
        throw input_error("unknown structure '" + structure +
                          "' (abelian, pure, hom-into, hom-from)");
    }

    Battery battery_or_default(const std::vector<FpModule>& extras) {
        if (!battery_name.empty()) {
            if (looks_inline(battery_name))
                return battery_from_json(ring(), parse_json_arg(battery_name));
            return workspace().battery_named(battery_name);
        }
        return default_battery(ring(), max_order > 0 ? max_order : 16, extras);
    }

    InflationSet inflation_set_or(const std::function<InflationSet()>& dflt) {
        if (baer_flag && !set_name.empty())
            throw input_error("give --set or --baer, not both");
        if (baer_flag) return baer_inflation_set(ring());
        if (!set_name.empty()) {
            if (looks_inline(set_name))
                return inflation_set_from_json(ring(), parse_json_arg(set_name));
            return workspace().inflation_set_named(set_name);
        }
        return dflt();
    }

    void emit(const json& doc) {
        if (output_path.empty()) {
            std::cout << dump_json(doc);
            return;
        }
        std::ofstream out(output_path);
        if (!out) throw input_error("cannot write " + output_path);
        out << dump_json(doc);
    }
};

/* ---- result builders, shared between direct runs and `verify` ---- */

json snf_result(const IntMatrix& a) {
    SnfDecomposition s = smith_normal_form(a);
    json diag = json::array();
    int n = std::min(s.d.rows, s.d.cols);
    for (int i = 0; i < n; ++i) diag.push_back(s.d.at(i, i).get_str());
    return json{{"diagonal", diag},
                {"d", to_json(s.d)},
                {"u", to_json(s.u)},
                {"v", to_json(s.v)}};
}

json module_info_result(const FpModule& x) {
    return json{{"invariant_factors", to_json(x)},
                {"ngens", x.ngens()},
                {"order", count_to_json(x.order())},
                {"is_zero", x.is_zero()},
                {"injective", is_injective_closed_form(x)}};
}

json hom_result(const FpModule& a, const FpModule& b) {
    HomGroup h = hom_group(a, b);
    return json{{"orders", h.orders}, {"count", count_to_json(h.count_saturated())}};
}

json pushout_result(const Morphism& f, const Morphism& g) {
    Pushout po = pushout(f, g);
    return json{{"p", to_json(po.p)},
                {"from_m", to_json(po.from_m)},
                {"from_n", to_json(po.from_n)}};
}

json pullback_result(const Morphism& f, const Morphism& g) {
    Pullback pb = pullback(f, g);
    return json{{"q", to_json(pb.q)},
                {"to_m", to_json(pb.to_m)},
                {"to_n", to_json(pb.to_n)}};
}

json witness_json(long long d, const std::vector<long long>& k) {
    return json{{"d", d}, {"k", k}};
}

json partial_witness_result(const Morphism& u, const Morphism& f,
                            const ExactStructureSelector& sel) {
    PartialVerdict v = check_partial(partial_morphism(u, f), sel);
    json r{{"is_partial", v.is_partial}, {"is_partial_iso", v.is_partial_iso}};
    if (v.cert_ibar) r["cert_ibar"] = to_json(*v.cert_ibar);
    if (v.cert_fbar) r["cert_fbar"] = to_json(*v.cert_fbar);
    if (v.witness_d) r["witness"] = witness_json(*v.witness_d, *v.witness_k);
    return r;
}

json partial_extend_result(const Morphism& u, const Morphism& f) {
    std::optional<Morphism> h = find_extension(partial_morphism(u, f));
    json r{{"exists", h.has_value()}};
    if (h) r["extension"] = to_json(*h);
    return r;
}

json injective_result(const FpModule& e, const ExactStructureSelector& sel,
                      const InflationSet& h) {
    return json{{"verdict", is_f_injective(e, sel, h.members)}};
}

json essential_result(const Morphism& u, const ExactStructureSelector& sel,
                      const Battery& b) {
    return json{{"verdict", is_essential(u, sel, b)}};
}

/* ---- verdict documents ---- */

json verdict_doc(const std::string& command, const Ring& ring,
                 const std::optional<ExactStructureSelector>& sel,
                 const std::optional<json>& battery, const json& inputs,
                 const json& result) {
    json doc;
    doc["command"] = command;
    doc["ring"] = to_json(ring);
    if (sel) doc["structure"] = to_json(*sel);
    doc["caps"] = caps_to_json();
    if (battery) doc["battery"] = *battery;
    doc["inputs"] = inputs;
    doc["result"] = result;
    return doc;
}

/* Recomputes the result of a saved verdict document from its echoed ring,
   structure, battery and inputs. */
json recompute_result(const json& doc) {
    std::string cmd = doc.at("command").get<std::string>();
    Ring ring = ring_from_json(doc.at("ring"));
    ExactStructureSelector sel = doc.contains("structure")
        ? selector_from_json(ring, doc.at("structure"))
        : ExactStructureSelector::abelian();
    const json& in = doc.at("inputs");
    auto mod = [&](const char* key) { return module_from_json(ring, in.at(key)); };
    auto mor = [&](const char* key) { return morphism_from_json(ring, in.at(key)); };
    auto con = [&](const char* key) { return conflation_from_json(ring, in.at(key)); };
    auto iset = [&] { return inflation_set_from_json(ring, doc.at("battery")); };
    auto batt = [&] { return battery_from_json(ring, doc.at("battery")); };

    if (cmd == "snf") return snf_result(intmatrix_from_json(in.at("matrix")));
    if (cmd == "module-info") return module_info_result(mod("module"));
    if (cmd == "hom") return hom_result(mod("source"), mod("target"));
    if (cmd == "pushout") return pushout_result(mor("f"), mor("g"));
    if (cmd == "pullback") return pullback_result(mor("f"), mor("g"));
    if (cmd == "is-pure") return to_json(is_pure_mono(mor("u")));
    if (cmd == "substructure")
        return json{{"in_substructure", in_substructure(con("conflation"), sel)}};
    if (cmd == "baer-sum") return to_json(baer_sum(con("e1"), con("e2")));
    if (cmd == "ext-push") return to_json(ext_pushout(con("conflation"), mor("g")));
    if (cmd == "ext-pull") return to_json(ext_pullback(con("conflation"), mor("f")));
    if (cmd == "partial-check")
        return to_json(check_partial(partial_morphism(mor("u"), mor("f")), sel));
    if (cmd == "partial-witness") return partial_witness_result(mor("u"), mor("f"), sel);
    if (cmd == "partial-extend") return partial_extend_result(mor("u"), mor("f"));
    if (cmd == "cophantom")
        return to_json(is_cophantom(mor("f"), sel, iset().members));
    if (cmd == "injective") return injective_result(mod("module"), sel, iset());
    if (cmd == "essential") return essential_result(mor("u"), sel, batt());
    if (cmd == "small-over")
        return to_json(is_small_over(mor("v"), mor("u"), sel, batt()));
    if (cmd == "hull") return to_json(structural_injective_hull(mod("module")));
    if (cmd == "hull-report")
        return to_json(is_injective_hull(mor("u"), sel, batt()));
    if (cmd == "preenvelope")
        return to_json(iterative_preenvelope(mod("module"), iset(), sel,
                                             in.at("max_steps").get<int>()));
    if (cmd == "minimize") return to_json(minimize_envelope(mor("u"), sel));
    throw input_error("verify does not support command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    GlobalOpts g;
    int rc = 0;

    CLI::App app{"finitely presented Z/m-modules: partial morphisms, purity, "
                 "injective hulls"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("-w,--workspace", g.workspace_path, "workspace JSON file");
    app.add_option("--ring", g.ring_text, "ring modulus m (0 for Z)");
    app.add_option("--structure", g.structure,
                   "exact structure: abelian, pure, hom-into, hom-from");
    app.add_option("--class", g.cls_args,
                   "modules fixing a hom-into / hom-from structure");
    app.add_option("--battery", g.battery_name, "battery name or inline JSON");
    app.add_option("--set", g.set_name, "inflation set name or inline JSON");
    app.add_flag("--baer", g.baer_flag, "use the Baer inflation set of the ring");
    app.add_option("--max-order", g.max_order, "order bound for generated objects");
    app.add_option("--max-steps", g.max_steps, "preenvelope round bound");
    app.add_option("--seed", g.seed, "generator seed");
    app.add_option("--instances", g.instances, "sampled instances per property");
    app.add_option("--cap-hom", g.cap_hom, "hom enumeration cap");
    app.add_option("--cap-subgroups", g.cap_subgroups, "subgroup enumeration cap");
    app.add_option("-o,--output", g.output_path, "write the document here");

    /* snf */
    {
        auto* sub = app.add_subcommand("snf", "Smith normal form over Z");
        auto mat = std::make_shared<std::string>();
        sub->add_option("--matrix", *mat, "integer matrix as JSON rows")->required();
        sub->callback([&g, mat] {
            g.apply_caps();
            IntMatrix a = intmatrix_from_json(parse_json_arg(*mat));
            g.emit(verdict_doc("snf", Ring::integers(), std::nullopt, std::nullopt,
                               json{{"matrix", to_json(a)}}, snf_result(a)));
        });
    }

    /* module info */
    {
        auto* parent = app.add_subcommand("module", "module inspection");
        parent->require_subcommand(1);
        parent->fallthrough();
        auto* sub = parent->add_subcommand("info", "invariant factors and order");
        auto name = std::make_shared<std::string>();
        sub->add_option("-m,--module", *name, "module name or inline factors")->required();
        sub->callback([&g, name] {
            g.apply_caps();
            FpModule x = g.module_arg(*name);
            g.emit(verdict_doc("module-info", g.ring(), std::nullopt, std::nullopt,
                               json{{"module", to_json(x)}}, module_info_result(x)));
        });
    }

    /* hom */
    {
        auto* sub = app.add_subcommand("hom", "Hom group of two modules");
        auto s = std::make_shared<std::string>(), t = std::make_shared<std::string>();
        sub->add_option("-s,--source", *s, "source module")->required();
        sub->add_option("-t,--target", *t, "target module")->required();
        sub->callback([&g, s, t] {
            g.apply_caps();
            FpModule a = g.module_arg(*s), b = g.module_arg(*t);
            g.emit(verdict_doc("hom", g.ring(), std::nullopt, std::nullopt,
                               json{{"source", to_json(a)}, {"target", to_json(b)}},
                               hom_result(a, b)));
        });
    }

    /* pushout / pullback */
    {
        auto* sub = app.add_subcommand("pushout", "pushout of f: K->M, g: K->N");
        auto f = std::make_shared<std::string>(), gg = std::make_shared<std::string>();
        sub->add_option("-f", *f, "morphism out of the corner")->required();
        sub->add_option("-g", *gg, "morphism out of the corner")->required();
        sub->callback([&g, f, gg] {
            g.apply_caps();
            Morphism mf = g.morphism_arg(*f), mg = g.morphism_arg(*gg);
            g.emit(verdict_doc("pushout", g.ring(), std::nullopt, std::nullopt,
                               json{{"f", to_json(mf)}, {"g", to_json(mg)}},
                               pushout_result(mf, mg)));
        });
    }
    {
        auto* sub = app.add_subcommand("pullback", "pullback of f: M->C, g: N->C");
        auto f = std::make_shared<std::string>(), gg = std::make_shared<std::string>();
        sub->add_option("-f", *f, "morphism into the corner")->required();
        sub->add_option("-g", *gg, "morphism into the corner")->required();
        sub->callback([&g, f, gg] {
            g.apply_caps();
            Morphism mf = g.morphism_arg(*f), mg = g.morphism_arg(*gg);
            g.emit(verdict_doc("pullback", g.ring(), std::nullopt, std::nullopt,
                               json{{"f", to_json(mf)}, {"g", to_json(mg)}},
                               pullback_result(mf, mg)));
        });
    }

    /* is-pure */
    {
        auto* sub = app.add_subcommand("is-pure", "purity certificate for a mono");
        auto u = std::make_shared<std::string>();
        sub->add_option("-u", *u, "mono to test")->required();
        sub->callback([&g, u] {
            g.apply_caps();
            Morphism mu = g.morphism_arg(*u);
            g.emit(verdict_doc("is-pure", g.ring(), std::nullopt, std::nullopt,
                               json{{"u", to_json(mu)}}, to_json(is_pure_mono(mu))));
        });
    }

    /* substructure */
    {
        auto* sub = app.add_subcommand(
            "substructure", "does a conflation belong to the chosen structure");
        auto c = std::make_shared<std::string>();
        sub->add_option("-c,--conflation", *c, "conflation to test")->required();
        sub->callback([&g, c] {
            g.apply_caps();
            Conflation eta = g.conflation_arg(*c);
            ExactStructureSelector sel = g.selector();
            g.emit(verdict_doc("substructure", g.ring(), sel, std::nullopt,
                               json{{"conflation", to_json(eta)}},
                               json{{"in_substructure", in_substructure(eta, sel)}}));
        });
    }

    /* baer-sum */
    {
        auto* sub = app.add_subcommand("baer-sum", "Baer sum of two conflations");
        auto e1 = std::make_shared<std::string>(), e2 = std::make_shared<std::string>();
        sub->add_option("--e1", *e1, "first conflation")->required();
        sub->add_option("--e2", *e2, "second conflation")->required();
        sub->callback([&g, e1, e2] {
            g.apply_caps();
            Conflation c1 = g.conflation_arg(*e1), c2 = g.conflation_arg(*e2);
            g.emit(verdict_doc("baer-sum", g.ring(), std::nullopt, std::nullopt,
                               json{{"e1", to_json(c1)}, {"e2", to_json(c2)}},
                               to_json(baer_sum(c1, c2))));
        });
    }

    /* ext push / pull */
    {
        auto* parent = app.add_subcommand("ext", "pushout / pullback of conflations");
        parent->require_subcommand(1);
        parent->fallthrough();
        auto* pu = parent->add_subcommand("push", "pushout along g: A->X");
        auto c1 = std::make_shared<std::string>(), g1 = std::make_shared<std::string>();
        pu->add_option("-c,--conflation", *c1, "conflation A>->B->>C")->required();
        pu->add_option("-g", *g1, "morphism out of the kernel A")->required();
        pu->callback([&g, c1, g1] {
            g.apply_caps();
            Conflation eta = g.conflation_arg(*c1);
            Morphism mg = g.morphism_arg(*g1);
            g.emit(verdict_doc("ext-push", g.ring(), std::nullopt, std::nullopt,
                               json{{"conflation", to_json(eta)}, {"g", to_json(mg)}},
                               to_json(ext_pushout(eta, mg))));
        });
        auto* pl = parent->add_subcommand("pull", "pullback along f: X->C");
        auto c2 = std::make_shared<std::string>(), f2 = std::make_shared<std::string>();
        pl->add_option("-c,--conflation", *c2, "conflation A>->B->>C")->required();
        pl->add_option("-f", *f2, "morphism into the cokernel C")->required();
        pl->callback([&g, c2, f2] {
            g.apply_caps();
            Conflation eta = g.conflation_arg(*c2);
            Morphism mf = g.morphism_arg(*f2);
            g.emit(verdict_doc("ext-pull", g.ring(), std::nullopt, std::nullopt,
                               json{{"conflation", to_json(eta)}, {"f", to_json(mf)}},
                               to_json(ext_pullback(eta, mf))));
        });
    }

    /* partial check / witness / extend */
    {
        auto* parent = app.add_subcommand("partial", "partial morphism analysis");
        parent->require_subcommand(1);
        parent->fallthrough();
        auto u = std::make_shared<std::string>(), f = std::make_shared<std::string>();
        auto add = [&](CLI::App* sub) {
            sub->add_option("-u", *u, "inflation U -> X")->required();
            sub->add_option("-f", *f, "morphism U -> Y")->required();
        };
        auto* ck = parent->add_subcommand("check", "full pushout verdict");
        add(ck);
        ck->callback([&g, u, f] {
            g.apply_caps();
            Morphism mu = g.morphism_arg(*u), mf = g.morphism_arg(*f);
            ExactStructureSelector sel = g.selector();
            g.emit(verdict_doc("partial-check", g.ring(), sel, std::nullopt,
                               json{{"u", to_json(mu)}, {"f", to_json(mf)}},
                               to_json(check_partial(partial_morphism(mu, mf), sel))));
        });
        auto* wi = parent->add_subcommand("witness", "verdict with certificates only");
        add(wi);
        wi->callback([&g, u, f] {
            g.apply_caps();
            Morphism mu = g.morphism_arg(*u), mf = g.morphism_arg(*f);
            ExactStructureSelector sel = g.selector();
            g.emit(verdict_doc("partial-witness", g.ring(), sel, std::nullopt,
                               json{{"u", to_json(mu)}, {"f", to_json(mf)}},
                               partial_witness_result(mu, mf, sel)));
        });
        auto* ex = parent->add_subcommand("extend", "search a total extension");
        add(ex);
        ex->callback([&g, u, f] {
            g.apply_caps();
            Morphism mu = g.morphism_arg(*u), mf = g.morphism_arg(*f);
            g.emit(verdict_doc("partial-extend", g.ring(), std::nullopt, std::nullopt,
                               json{{"u", to_json(mu)}, {"f", to_json(mf)}},
                               partial_extend_result(mu, mf)));
        });
    }

    /* cophantom */
    {
        auto* sub = app.add_subcommand(
            "cophantom", "is (u, f) partial for every inflation u out of the source");
        auto f = std::make_shared<std::string>();
        sub->add_option("-f", *f, "morphism B -> Y")->required();
        sub->callback([&g, f] {
            g.apply_caps();
            Morphism mf = g.morphism_arg(*f);
            ExactStructureSelector sel = g.selector();
            /* default battery: the hull inclusion, the canonical inflation
               out of the source */
            InflationSet h = g.inflation_set_or([&] {
                return InflationSet{{structural_injective_hull(mf.source).u}};
            });
            g.emit(verdict_doc("cophantom", g.ring(), sel, to_json(h),
                               json{{"f", to_json(mf)}},
                               to_json(is_cophantom(mf, sel, h.members))));
        });
    }

    /* injective */
    {
        auto* sub = app.add_subcommand("injective",
                                       "injectivity relative to an inflation set");
        auto name = std::make_shared<std::string>();
        sub->add_option("-m,--module", *name, "module to test")->required();
        sub->callback([&g, name] {
            g.apply_caps();
            FpModule e = g.module_arg(*name);
            ExactStructureSelector sel = g.selector();
            InflationSet h =
                g.inflation_set_or([&] { return baer_inflation_set(g.ring()); });
            g.emit(verdict_doc("injective", g.ring(), sel, to_json(h),
                               json{{"module", to_json(e)}},
                               injective_result(e, sel, h)));
        });
    }

    /* essential */
    {
        auto* sub = app.add_subcommand("essential", "essential inflation test");
        auto u = std::make_shared<std::string>();
        sub->add_option("-u", *u, "inflation to test")->required();
        sub->callback([&g, u] {
            g.apply_caps();
            Morphism mu = g.morphism_arg(*u);
            ExactStructureSelector sel = g.selector();
            Battery b = g.battery_or_default({mu.source, mu.target});
            g.emit(verdict_doc("essential", g.ring(), sel, to_json(b),
                               json{{"u", to_json(mu)}}, essential_result(mu, sel, b)));
        });
    }

    /* small-over */
    {
        auto* sub = app.add_subcommand("small-over", "is V small over U in X");
        auto v = std::make_shared<std::string>(), u = std::make_shared<std::string>();
        sub->add_option("-v", *v, "subobject V -> X")->required();
        sub->add_option("-u", *u, "subobject U -> X, U below V")->required();
        sub->callback([&g, v, u] {
            g.apply_caps();
            Morphism mv = g.morphism_arg(*v), mu = g.morphism_arg(*u);
            ExactStructureSelector sel = g.selector();
            Battery b = g.battery_or_default({mv.source, mu.source, mv.target});
            SmallVerdict sv = is_small_over(mv, mu, sel, b);
            g.emit(verdict_doc("small-over", g.ring(), sel, to_json(b),
                               json{{"v", to_json(mv)}, {"u", to_json(mu)}},
                               to_json(sv)));
        });
    }

    /* hull: -m structural closed form, -u five-way report */
    {
        auto* sub = app.add_subcommand("hull", "injective hull");
        auto name = std::make_shared<std::string>(), u = std::make_shared<std::string>();
        auto* om = sub->add_option("-m,--module", *name, "module to hull");
        auto* ou = sub->add_option("-u", *u, "candidate hull inflation to verify");
        om->excludes(ou);
        sub->callback([&g, name, u, om, ou] {
            g.apply_caps();
            if (om->count()) {
                FpModule x = g.module_arg(*name);
                g.emit(verdict_doc("hull", g.ring(), ExactStructureSelector::abelian(),
                                   std::nullopt, json{{"module", to_json(x)}},
                                   to_json(structural_injective_hull(x))));
            } else if (ou->count()) {
                Morphism mu = g.morphism_arg(*u);
                ExactStructureSelector sel = g.selector();
                Battery b = g.battery_or_default({mu.source, mu.target});
                g.emit(verdict_doc("hull-report", g.ring(), sel, to_json(b),
                                   json{{"u", to_json(mu)}},
                                   to_json(is_injective_hull(mu, sel, b))));
            } else {
                throw input_error("hull needs -m MODULE or -u MORPHISM");
            }
        });
    }

    /* preenvelope */
    {
        auto* sub = app.add_subcommand("preenvelope",
                                       "iterative preenvelope over an inflation set");
        auto name = std::make_shared<std::string>();
        sub->add_option("-m,--module", *name, "starting module")->required();
        sub->callback([&g, name] {
            g.apply_caps();
            FpModule x = g.module_arg(*name);
            ExactStructureSelector sel = g.selector();
            InflationSet h =
                g.inflation_set_or([&] { return baer_inflation_set(g.ring()); });
            int steps = g.max_steps > 0 ? g.max_steps : caps().max_steps;
            g.emit(verdict_doc("preenvelope", g.ring(), sel, to_json(h),
                               json{{"module", to_json(x)}, {"max_steps", steps}},
                               to_json(iterative_preenvelope(x, h, sel, steps))));
        });
    }

    /* minimize */
    {
        auto* sub = app.add_subcommand("minimize",
                                       "minimal injective essential intermediate");
        auto u = std::make_shared<std::string>();
        sub->add_option("-u", *u, "inflation into an injective")->required();
        sub->callback([&g, u] {
            g.apply_caps();
            Morphism mu = g.morphism_arg(*u);
            ExactStructureSelector sel = g.selector();
            g.emit(verdict_doc("minimize", g.ring(), sel, std::nullopt,
                               json{{"u", to_json(mu)}},
                               to_json(minimize_envelope(mu, sel))));
        });
    }

    /* corpus gen */
    {
        auto* parent = app.add_subcommand("corpus", "deterministic test workspaces");
        parent->require_subcommand(1);
        parent->fallthrough();
        auto* sub = parent->add_subcommand("gen", "generate a workspace document");
        sub->callback([&g] {
            g.apply_caps();
            long long maxo = g.max_order > 0 ? g.max_order : 64;
            g.emit(to_json(corpus_generate(g.ring(), maxo, g.seed)));
        });
    }

    /* suite run */
    {
        auto* parent = app.add_subcommand("suite", "property suites");
        parent->require_subcommand(1);
        parent->fallthrough();
        auto* sub = parent->add_subcommand("run", "run a named suite");
        auto name = std::make_shared<std::string>();
        sub->add_option("name", *name, "thm-2-2, prop-2-5 or pure-collapse")->required();
        sub->callback([&g, &rc, name] {
            g.apply_caps();
            SuiteOptions opt;
            opt.max_order = g.max_order;
            opt.instances = g.instances;
            opt.seed = g.seed;
            SuiteReport rep = run_suite(*name, g.ring(), opt);
            g.emit(to_json(rep));
            if (rep.total_failures() > 0) rc = 1;
        });
    }

    /* verify */
    {
        auto* sub = app.add_subcommand("verify",
                                       "recompute a saved verdict document");
        auto path = std::make_shared<std::string>();
        sub->add_option("file", *path, "verdict JSON file")->required();
        sub->callback([&g, &rc, path] {
            g.apply_caps();
            std::ifstream in(*path);
            if (!in) throw input_error("cannot read " + *path);
            json doc;
            try {
                in >> doc;
            } catch (const json::exception& e) {
                throw input_error(std::string("bad verdict file: ") + e.what());
            }
            if (!doc.is_object() || !doc.contains("command") || !doc.contains("result"))
                throw input_error("not a verdict document: " + *path);
            json expected = doc.at("result");
            json got = recompute_result(doc);
            bool ok = (got == expected);
            json out{{"command", doc.at("command")}, {"verified", ok}};
            if (!ok) {
                out["expected"] = expected;
                out["recomputed"] = got;
                rc = 1;
            }
            g.emit(out);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cap_error& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return rc;
}
