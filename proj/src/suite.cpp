#include "modexact/suite.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "modexact/enumerate.hpp"
#include "modexact/subgroups.hpp"

namespace modexact {

namespace {

bool is_sel_inflation(const Morphism& f, const ExactStructureSelector& sel) {
    if (!is_mono(f)) return false;
    return in_substructure(conflation_of_mono(f), sel);
}

/* divisors d of m with dY a proper submodule of Y; purity and oracle
   conditions are vacuous for every other d */
std::vector<long long> useful_divisors(const FpModule& y) {
    std::vector<long long> out;
    for (long long d : divisors_of(y.m)) {
        if (d < 2) continue;
        for (long long dy : y.inv)
            if (gcd_ll(d, dy) != 1) {
                out.push_back(d);
                break;
            }
    }
    return out;
}

}  // namespace

void thm22_sweep_cell(const Morphism& u, const FpModule& y, Thm22Stats& st,
                      long long check_full) {
    const FpModule& usrc = u.source;
    const FpModule& x = u.target;
    if (!(x.ring == y.ring)) throw input_error("sweep cell ring mismatch");
    long long m = x.m;
    int gu = usrc.ngens(), gy = y.ngens(), gx = x.ngens();
    ExactStructureSelector pure = ExactStructureSelector::pure();

    if (gu == 0 || gy == 0) {
        /* Hom(U, Y) = {0}: zero extends as zero, the oracle quantifies over
           nothing, and ibar is split; all three verdicts must be true */
        PartialMorphism pm = partial_morphism(u, zero_morphism(usrc, y));
        PartialVerdict v = check_partial(pm, pure);
        bool fe = find_extension(pm).has_value();
        ++st.instances;
        st.partial_true += v.is_partial;
        st.pushout_vs_oracle += !v.is_partial;
        st.partial_vs_extend += v.is_partial != fe;
        ++st.full_path_runs;
        st.full_path_mismatch += !v.is_partial || !fe;
        return;
    }

    /* oracle data: per divisor, generators of u^{-1}(dX) in U coordinates
       and the dY membership moduli gcd(d, d_j^Y) */
    struct OracleRow {
        long long d;
        Mat w;
        std::vector<long long> ygcd;
    };
    std::vector<OracleRow> oracle;
    for (long long d : useful_divisors(y)) {
        OracleRow row;
        row.d = d;
        row.w = preimage_multiple_generators(u, d);
        for (long long dy : y.inv) row.ygcd.push_back(gcd_ll(d, dy));
        oracle.push_back(std::move(row));
    }

    /* extendability: the image of Hom(X, Y) -> Hom(U, Y), factored once */
    HomGroup huy = hom_group(usrc, y);
    HomGroup hxy = hom_group(x, y);
    Mat restr(hxy.ncoeffs(), huy.ncoeffs());
    for (int g = 0; g < hxy.ncoeffs(); ++g) {
        std::vector<long long> c = huy.coeffs_from_matrix(compose(u, hxy.generator(g)).a);
        for (int j = 0; j < huy.ncoeffs(); ++j) restr.at(g, j) = c[j];
    }
    SolveModMany ext(restr, huy.orders, m);

    /* pushout presentation skeleton over generators e_Y ++ e_X: gu rows
       [f_k | -u_k], then the order rows; only the f block varies */
    Mat pres(gu + gy + gx, gy + gx);
    for (int k = 0; k < gu; ++k)
        for (int j = 0; j < gx; ++j) pres.at(k, gy + j) = mod_reduce(-u.a.at(k, j), m);
    for (int i = 0; i < gy; ++i) pres.at(gu + i, i) = y.inv[i];
    for (int i = 0; i < gx; ++i) pres.at(gu + gy + i, gy + i) = x.inv[i];

    std::vector<int> kept;
    std::vector<long long> pinv, colmod;
    for_each_hom_matrix(huy, [&](const Mat& a) {
        /* pushout verdict: one Smith pass canonicalizes P, row i of v is
           ibar(e_i); then ibar^{-1}(dP) against dY per divisor */
        for (int k = 0; k < gu; ++k)
            for (int j = 0; j < gy; ++j) pres.at(k, j) = a.at(k, j);
        SnfMod s = snf_mod(pres, m);
        kept.clear();
        pinv.clear();
        for (int j = 0; j < gy + gx; ++j)
            if (s.d.at(j, j) >= 2) {
                kept.push_back(j);
                pinv.push_back(s.d.at(j, j));
            }
        Mat ibar(gy, static_cast<int>(kept.size()));
        for (int i = 0; i < gy; ++i)
            for (size_t jj = 0; jj < kept.size(); ++jj)
                ibar.at(i, static_cast<int>(jj)) = mod_reduce(s.v.at(i, kept[jj]), pinv[jj]);
        bool pv = true;
        for (const OracleRow& row : oracle) {
            colmod.resize(kept.size());
            for (size_t jj = 0; jj < kept.size(); ++jj) colmod[jj] = gcd_ll(row.d, pinv[jj]);
            Mat ker = left_kernel_mod(ibar, colmod, m);
            for (int i = 0; i < ker.rows && pv; ++i)
                for (int j = 0; j < gy; ++j)
                    if (ker.at(i, j) % row.ygcd[j] != 0) {
                        pv = false;
                        break;
                    }
            if (!pv) break;
        }

        /* oracle verdict: f(u^{-1}(dX)) inside dY, per generator */
        bool ov = true;
        for (const OracleRow& row : oracle) {
            for (int i = 0; i < row.w.rows && ov; ++i)
                for (int j = 0; j < gy; ++j) {
                    long long g = row.ygcd[j];
                    if (g == 1) continue;
                    long long acc = 0;
                    for (int k = 0; k < gu; ++k)
                        acc = (acc + (row.w.at(i, k) % g) * (a.at(k, j) % g)) % g;
                    if (acc != 0) {
                        ov = false;
                        break;
                    }
                }
            if (!ov) break;
        }

        bool ev = ext.solvable(huy.coeffs_from_matrix(a));

        ++st.instances;
        st.partial_true += pv;
        st.pushout_vs_oracle += pv != ov;
        st.partial_vs_extend += pv != ev;

        if (check_full > 0 && st.instances % check_full == 0) {
            PartialMorphism pm = partial_morphism(u, morphism_unchecked(usrc, y, a));
            PartialVerdict v = check_partial(pm, pure);
            bool fe = find_extension(pm).has_value();
            ++st.full_path_runs;
            st.full_path_mismatch += (v.is_partial != pv) || (fe != ev);
        }
        return true;
    });
}

Thm22Stats thm22_sweep(const Ring& ring, long long x_max, long long y_max,
                       long long check_full) {
    Thm22Stats st;
    std::vector<FpModule> xs = corpus_modules(ring, x_max);
    std::vector<FpModule> ys = corpus_modules(ring, y_max);
    for (const FpModule& x : xs)
        for (const Subgroup& s : all_subgroups(x)) {
            Morphism u = submodule(x, s.gens).incl;
            for (const FpModule& y : ys) thm22_sweep_cell(u, y, st, check_full);
        }
    return st;
}

namespace {

/* seeded instance builder shared by the prop-2-5 items */
struct Prop25Gen {
    Ring ring;
    std::vector<FpModule> mods;
    std::mt19937_64 rng;

    Prop25Gen(const Ring& r, long long max_order, unsigned long long seed)
        : ring(r), mods(corpus_modules(r, max_order)), rng(seed) {}

    long long draw(long long bound) {
        return static_cast<long long>(rng() % static_cast<unsigned long long>(bound));
    }
    const FpModule& rand_module() { return mods[static_cast<size_t>(draw((long long)mods.size()))]; }
    const FpModule& rand_nonzero_module() {
        for (;;) {
            const FpModule& m = rand_module();
            if (!m.is_zero()) return m;
        }
    }
    Morphism rand_sub_inclusion() {
        const FpModule& x = rand_nonzero_module();
        int rows = 1 + static_cast<int>(draw(x.ngens()));
        Mat gens(rows, x.ngens());
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < x.ngens(); ++c) gens.at(r, c) = draw(x.inv[c]);
        return submodule(x, gens).incl;
    }
    Morphism rand_hom(const FpModule& a, const FpModule& b) {
        HomGroup hg = hom_group(a, b);
        std::vector<long long> c(static_cast<size_t>(hg.ncoeffs()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = draw(hg.orders[i]);
        return hg.from_coeffs(c);
    }
    ExactStructureSelector rand_sel() {
        return draw(2) ? ExactStructureSelector::pure() : ExactStructureSelector::abelian();
    }
    /* an inclusion passing sel's inflation test; split fallback keeps the
       draw bounded */
    Morphism rand_inflation_inclusion(const ExactStructureSelector& sel) {
        for (int tries = 0; tries < 64; ++tries) {
            Morphism u = rand_sub_inclusion();
            if (is_sel_inflation(u, sel)) return u;
        }
        DirectSum ds = direct_sum(rand_nonzero_module(), rand_module());
        return ds.inj_a;
    }
    /* f with (u, f) partial under sel; the zero map is the fallback */
    Morphism rand_partial_map(const Morphism& u, const FpModule& y,
                              const ExactStructureSelector& sel) {
        for (int tries = 0; tries < 64; ++tries) {
            Morphism f = rand_hom(u.source, y);
            if (check_partial(partial_morphism(u, f), sel).is_partial) return f;
        }
        return zero_morphism(u.source, y);
    }
};

PropertyReport sweep_property(const std::string& name, long long n,
                              const std::function<bool()>& one) {
    PropertyReport r{name, 0, 0};
    for (long long i = 0; i < n; ++i) {
        ++r.instances;
        if (!one()) ++r.failures;
    }
    return r;
}

SuiteReport run_prop25(const Ring& ring, const SuiteOptions& opt) {
    SuiteReport rep;
    rep.suite = "prop-2-5";
    rep.ring = ring;
    rep.seed = opt.seed;
    long long n = opt.instances > 0 ? opt.instances : 10000;
    long long maxo = opt.max_order > 0 ? opt.max_order : 16;
    if (maxo < 2) throw input_error("prop-2-5 needs max_order >= 2");

    auto fresh = [&](int item) {
        return Prop25Gen(ring, maxo, opt.seed ^ (0x9e3779b97f4a7c15ULL * (item + 1)));
    };

    {
        Prop25Gen g = fresh(1);
        rep.properties.push_back(sweep_property("item-1-iso-iff-map-inflation", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_inflation_inclusion(sel);
            Morphism f = g.rand_hom(u.source, g.rand_module());
            PartialVerdict v = check_partial(partial_morphism(u, f), sel);
            return v.is_partial_iso == is_sel_inflation(f, sel);
        }));
    }
    {
        Prop25Gen g = fresh(2);
        rep.properties.push_back(sweep_property("item-2-extendable-partial", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_sub_inclusion();
            Morphism f = g.rand_hom(u.source, g.rand_module());
            PartialMorphism pm = partial_morphism(u, f);
            bool ext = find_extension(pm).has_value();
            bool part = check_partial(pm, sel).is_partial;
            if (ext && !part) return false;
            if (sel.kind == ExactStructureSelector::Kind::Pure && part != ext) return false;
            return true;
        }));
    }
    {
        Prop25Gen g = fresh(3);
        rep.properties.push_back(sweep_property("item-4a-retraction-forces-iso", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_sub_inclusion();
            Morphism f = g.rand_partial_map(u, g.rand_module(), sel);
            PartialMorphism pm = partial_morphism(u, f);
            bool hfound = check_partial_iso_via_retraction(pm, sel);
            return !hfound || check_partial(pm, sel).is_partial_iso;
        }));
    }
    {
        Prop25Gen g = fresh(4);
        rep.properties.push_back(sweep_property("item-5-ext-action", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_sub_inclusion();
            Morphism f = g.rand_hom(u.source, g.rand_module());
            bool a = check_partial(partial_morphism(u, f), sel).is_partial;
            bool b = in_substructure(ext_pushout(conflation_of_mono(u), f), sel);
            return a == b;
        }));
    }
    {
        Prop25Gen g = fresh(5);
        rep.properties.push_back(sweep_property("item-6-composition-closure", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_sub_inclusion();
            const FpModule& y = g.rand_module();
            Morphism f = g.rand_partial_map(u, y, sel);
            Morphism gm = g.rand_hom(y, g.rand_module());
            PartialMorphism pm = partial_morphism(u, f);
            PartialVerdict v1 = check_partial(pm, sel);
            PartialVerdict v2 = compose_partial(pm, gm, sel);
            if (v1.is_partial && !v2.is_partial) return false;
            if (v1.is_partial_iso && is_sel_inflation(gm, sel) && !v2.is_partial_iso) return false;
            return true;
        }));
    }
    {
        Prop25Gen g = fresh(6);
        rep.properties.push_back(sweep_property("item-7-sum-closure", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_sub_inclusion();
            const FpModule& y = g.rand_module();
            Morphism f1 = g.rand_partial_map(u, y, sel);
            Morphism f2 = g.rand_partial_map(u, y, sel);
            return check_sum_closure(partial_morphism(u, f1), partial_morphism(u, f2), sel);
        }));
    }
    {
        Prop25Gen g = fresh(7);
        rep.properties.push_back(sweep_property("item-8-ambient-enlargement", n, [&] {
            ExactStructureSelector sel = g.rand_sel();
            Morphism u = g.rand_sub_inclusion();
            Morphism f = g.rand_partial_map(u, g.rand_module(), sel);
            PartialMorphism pm = partial_morphism(u, f);
            DirectSum ds = direct_sum(u.target, g.rand_module());
            PartialVerdict v2 = enlarge_ambient(pm, ds.inj_a, sel);
            if (!v2.is_partial) return false;
            if (check_partial(pm, sel).is_partial_iso && !v2.is_partial_iso) return false;
            return true;
        }));
    }
    return rep;
}

/* every morphism U -> E extends along u: X restriction map surjectivity,
   checked on the coefficient generators of Hom(U, E) */
static bool restriction_surjective(const Morphism& u, const FpModule& e) {
    HomGroup hue = hom_group(u.source, e);
    if (hue.ncoeffs() == 0) return true;
    HomGroup hxe = hom_group(u.target, e);
    Mat restr(hxe.ncoeffs(), hue.ncoeffs());
    for (int g = 0; g < hxe.ncoeffs(); ++g) {
        std::vector<long long> c = hue.coeffs_from_matrix(compose(u, hxe.generator(g)).a);
        for (int j = 0; j < hue.ncoeffs(); ++j) restr.at(g, j) = c[j];
    }
    SolveModMany sv(restr, hue.orders, u.source.m);
    std::vector<long long> b(static_cast<size_t>(hue.ncoeffs()), 0);
    for (int g = 0; g < hue.ncoeffs(); ++g) {
        b.assign(b.size(), 0);
        b[static_cast<size_t>(g)] = 1;
        if (!sv.solvable(b)) return false;
    }
    return true;
}

SuiteReport run_pure_collapse(const Ring& ring, const SuiteOptions& opt) {
    SuiteReport rep;
    rep.suite = "pure-collapse";
    rep.ring = ring;
    rep.seed = opt.seed;
    long long maxo = opt.max_order > 0 ? opt.max_order : 32;
    std::vector<FpModule> mods = corpus_modules(ring, maxo);

    PropertyReport splits{"pure-mono-splits", 0, 0};
    PropertyReport inj{"finite-pure-injectivity", 0, 0};
    PropertyReport ess{"pure-essential-iff-iso", 0, 0};

    for (const FpModule& x : mods)
        for (const Subgroup& s : all_subgroups(x)) {
            Morphism u = submodule(x, s.gens).incl;
            if (!is_pure_mono(u).verdict) continue;

            ++splits.instances;
            std::optional<Morphism> r = retraction_of(u);
            if (!r) {
                ++splits.failures;
                continue;
            }

            /* essential-iff-iso: an iso is essential outright (f = (f u)
               u^{-1} is an inflation whenever f u is); a non-iso pure mono
               splits, and its retraction is the witness: r u = id is pure
               while the non-mono r is not */
            ++ess.instances;
            if (!is_iso(u)) {
                bool witness = morphism_eq(compose(u, *r), identity_morphism(u.source)) &&
                               !is_mono(*r);
                if (!witness) ++ess.failures;
            }

            for (const FpModule& e : mods) {
                ++inj.instances;
                if (!restriction_surjective(u, e)) ++inj.failures;
            }
        }

    rep.properties.push_back(splits);
    rep.properties.push_back(inj);
    rep.properties.push_back(ess);
    return rep;
}

SuiteReport run_thm22(const Ring& ring, const SuiteOptions& opt) {
    SuiteReport rep;
    rep.suite = "thm-2-2";
    rep.ring = ring;
    rep.seed = opt.seed;
    long long x_max = opt.max_order > 0 ? opt.max_order : 32;
    long long y_max = std::min<long long>(16, x_max);
    Thm22Stats st = thm22_sweep(ring, x_max, y_max);
    rep.properties.push_back({"pushout-vs-oracle", st.instances, st.pushout_vs_oracle});
    rep.properties.push_back({"partial-iff-extendable", st.instances, st.partial_vs_extend});
    rep.properties.push_back({"library-spot-checks", st.full_path_runs, st.full_path_mismatch});
    return rep;
}

}  // namespace

long long SuiteReport::total_failures() const {
    long long t = 0;
    for (const PropertyReport& p : properties) t += p.failures;
    return t;
}

SuiteReport run_suite(const std::string& name, const Ring& ring, const SuiteOptions& opt) {
    if (!ring.modular()) throw input_error("suites need a modular ring");
    if (name == "thm-2-2") return run_thm22(ring, opt);
    if (name == "prop-2-5") return run_prop25(ring, opt);
    if (name == "pure-collapse") return run_pure_collapse(ring, opt);
    throw input_error("unknown suite '" + name +
                      "' (available: thm-2-2, prop-2-5, pure-collapse)");
}

json to_json(const SuiteReport& r) {
    json props = json::array();
    for (const PropertyReport& p : r.properties) {
        json e;
        e["name"] = p.name;
        e["instances"] = p.instances;
        e["failures"] = p.failures;
        props.push_back(std::move(e));
    }
    json j;
    j["suite"] = r.suite;
    j["ring"] = to_json(r.ring);
    j["seed"] = r.seed;
    j["properties"] = std::move(props);
    j["total_failures"] = r.total_failures();
    return j;
}

}  // namespace modexact
