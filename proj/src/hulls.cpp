#include "modexact/hulls.hpp"

#include <algorithm>
#include <utility>

#include "modexact/config.hpp"
#include "modexact/enumerate.hpp"
#include "modexact/subgroups.hpp"

namespace modexact {

namespace {

std::vector<long long> primes_of(long long n) {
    std::vector<long long> ps;
    for (long long p = 2; n > 1; ++p) {
        if (p * p > n) p = n;
        if (n % p) continue;
        ps.push_back(p);
        while (n % p == 0) n /= p;
    }
    return ps;
}

/* p^{v_p(n)} */
long long full_power(long long p, long long n) {
    long long r = 1;
    while (n % p == 0) {
        n /= p;
        r *= p;
    }
    return r;
}

bool inflation_test(const Morphism& f, const ExactStructureSelector& sel) {
    return is_mono(f) && in_substructure(conflation_of_mono(f), sel);
}

void require_ring(const Battery& battery, const Ring& ring, const char* who) {
    for (const FpModule& z : battery.targets)
        if (!(z.ring == ring))
            throw input_error(std::string(who) +
                              ": battery member lives over a different ring");
}

bool element_in_subobject(const FpModule& ambient, const std::vector<long long>& coords,
                          const Morphism& incl) {
    Mat row(1, ambient.ngens());
    for (int j = 0; j < ambient.ngens(); ++j) row.at(0, j) = coords[j];
    return subobject_leq(submodule(ambient, row).incl, incl).has_value();
}

/* The image is essential iff it absorbs the socle: a nonzero subobject
   contains a prime-order element, and those generate the socle. */
bool essential_abelian(const Morphism& u) {
    const FpModule& y = u.target;
    Morphism img = image(u).incl;
    for (int j = 0; j < y.ngens(); ++j) {
        for (long long p : primes_of(y.inv[j])) {
            std::vector<long long> soc(y.ngens(), 0);
            soc[j] = y.inv[j] / p;
            if (!element_in_subobject(y, soc, img)) return false;
        }
    }
    return true;
}

/* (1,1)-systems over U: whenever d*x = g(v(a)) is solvable in the target
   of g, d*x = v(a) must already be solvable in X */
bool reflects_systems(const Morphism& v, const Morphism& g) {
    const FpModule& x = v.target;
    Morphism comp = compose(v, g);
    int k = v.source.ngens();
    for (long long d : divisors_of(x.m)) {
        Mat gens = preimage_multiple_generators(comp, d);
        for (int r = 0; r < gens.rows; ++r) {
            std::vector<long long> a(gens.a.begin() + r * k,
                                     gens.a.begin() + (r + 1) * k);
            if (!in_multiple_submodule(x, apply_coords(v, a), d)) return false;
        }
    }
    return true;
}

}  // namespace

Battery default_battery(const Ring& ring, long long max_order,
                        const std::vector<FpModule>& extra) {
    if (!ring.modular())
        throw input_error("default battery needs a modular ring");
    if (max_order < 1)
        throw input_error("default battery needs max_order >= 1");
    long long m = ring.modulus.get_si();
    Battery b;
    b.max_order = max_order;
    std::vector<long long> chain;
    auto rec = [&](auto&& self, long long prev, long long prod) -> void {
        b.targets.push_back(fp_module(ring, chain));
        for (long long d : divisors_of(m)) {
            if (d < 2 || d % prev != 0) continue;
            if (d > max_order / prod) continue;
            chain.push_back(d);
            self(self, d, prod * d);
            chain.pop_back();
        }
    };
    rec(rec, 1, 1);
    std::sort(b.targets.begin(), b.targets.end(),
              [](const FpModule& a, const FpModule& c) {
                  return std::make_pair(a.order(), a.inv) <
                         std::make_pair(c.order(), c.inv);
              });
    for (const FpModule& z : extra) {
        if (!(z.ring == ring))
            throw input_error("default battery: extra target over a different ring");
        bool dup = false;
        for (const FpModule& t : b.targets) dup = dup || t.same_type(z);
        if (!dup) b.targets.push_back(z);
    }
    return b;
}

InflationSet baer_inflation_set(const Ring& ring) {
    if (!ring.modular()) throw input_error("Baer set needs a modular ring");
    long long m = ring.modulus.get_si();
    FpModule r = cyclic(ring, m);
    InflationSet h;
    for (long long d : divisors_of(m)) {
        Mat g(1, 1);
        g.at(0, 0) = d % m;
        h.members.push_back(submodule(r, g).incl);
    }
    return h;
}

InflationSet fp_inflation_set(const Ring& ring, int nmax) {
    if (!ring.modular()) throw input_error("fp inflation set needs a modular ring");
    long long m = ring.modulus.get_si();
    InflationSet h;
    for (int n = 1; n <= nmax; ++n) {
        FpModule free_mod = fp_module(ring, std::vector<long long>(n, m));
        for (const Subgroup& s : all_subgroups(free_mod))
            h.members.push_back(submodule(free_mod, s.gens).incl);
    }
    return h;
}

SmallVerdict is_small_over(const Morphism& v, const Morphism& u,
                           const ExactStructureSelector& sel, const Battery& battery) {
    if (!v.target.same_type(u.target))
        throw input_error("small-over needs subobjects of one ambient module");
    if (!is_mono(v) || !is_mono(u))
        throw input_error("small-over needs mono subobject inclusions");
    std::optional<Morphism> w = subobject_leq(u, v);
    if (!w)
        throw input_error("small-over needs U contained in V");
    require_ring(battery, v.target.ring, "small-over");
    SmallVerdict out;
    for (const FpModule& y : battery.targets) {
        for (const Morphism& f : enumerate_hom(v.source, y)) {
            PartialMorphism rest = partial_morphism(u, compose(*w, f));
            if (!check_partial(rest, sel).is_partial_iso) continue;
            PartialVerdict whole = check_partial(partial_morphism(v, f), sel);
            if (whole.is_partial && !whole.is_partial_iso) {
                out.cex_target = y;
                out.cex_map = f;
                return out;
            }
        }
    }
    out.verdict = true;
    return out;
}

bool is_essential(const Morphism& u, const ExactStructureSelector& sel,
                  const Battery& battery) {
    require_ring(battery, u.target.ring, "essentiality");
    if (!inflation_test(u, sel))
        throw input_error("essentiality requires an inflation of the selected structure");
    if (sel.kind == ExactStructureSelector::Kind::Abelian)
        return essential_abelian(u);
    for (const FpModule& z : battery.targets) {
        for (const Morphism& f : enumerate_hom(u.target, z)) {
            if (!inflation_test(compose(u, f), sel)) continue;
            if (!inflation_test(f, sel)) return false;
        }
    }
    return true;
}

bool is_weakly_essential(const Morphism& u, const ExactStructureSelector& sel,
                         const Battery& battery) {
    require_ring(battery, u.target.ring, "essentiality");
    if (!inflation_test(u, sel))
        throw input_error("essentiality requires an inflation of the selected structure");
    /* in the abelian structure every mono is an inflation, so the weak and
       strong conclusions coincide */
    if (sel.kind == ExactStructureSelector::Kind::Abelian)
        return essential_abelian(u);
    for (const FpModule& z : battery.targets) {
        for (const Morphism& f : enumerate_hom(u.target, z)) {
            if (!inflation_test(compose(u, f), sel)) continue;
            if (!is_mono(f)) return false;
        }
    }
    return true;
}

bool check_pure_small_extension(const Morphism& v, const Battery& battery) {
    if (!is_mono(v))
        throw input_error("pure-small check needs a mono inclusion");
    require_ring(battery, v.target.ring, "pure-small check");
    for (const FpModule& y : battery.targets) {
        for (const Morphism& g : enumerate_hom(v.target, y)) {
            if (!is_mono(compose(v, g))) continue;
            if (!reflects_systems(v, g)) continue;
            if (!is_mono(g) || !is_pure_mono(g).verdict) return false;
        }
    }
    return true;
}

bool is_injective_closed_form(const FpModule& e) {
    for (long long d : e.inv) {
        long long rest = d;
        for (long long p = 2; rest > 1; ++p) {
            if (p * p > rest) p = rest;
            if (rest % p) continue;
            while (rest % p == 0) rest /= p;
            if (full_power(p, d) != full_power(p, e.m)) return false;
        }
    }
    return true;
}

Hull structural_injective_hull(const FpModule& m) {
    if (!m.ring.modular())
        throw input_error("structural hull needs a modular ring");
    std::vector<long long> factors;
    for (long long d : m.inv) {
        long long r = 1;
        for (long long p : primes_of(d)) r *= full_power(p, m.m);
        factors.push_back(r);
    }
    FpModule e = fp_module(m.ring, factors);
    if (e.ngens() != m.ngens())
        throw internal_error("hull factors were not an invariant chain");
    for (int j = 0; j < e.ngens(); ++j)
        if (e.inv[j] != factors[j])
            throw internal_error("hull factors were not an invariant chain");
    Mat a(m.ngens(), e.ngens());
    for (int j = 0; j < m.ngens(); ++j) a.at(j, j) = factors[j] / m.inv[j];
    Hull out{e, morphism(m, e, a)};
    if (!is_mono(out.u))
        throw internal_error("hull embedding is not mono");
    if (!is_injective_closed_form(out.e))
        throw internal_error("hull target is not injective");
    if (!essential_abelian(out.u))
        throw internal_error("hull embedding is not essential");
    if (self_check() && e.order() <= caps().hom) {
        FpModule ring_mod = cyclic(m.ring, m.m);
        std::vector<Morphism> baer;
        for (long long d : divisors_of(m.m)) {
            Mat g(1, 1);
            g.at(0, 0) = d % m.m;
            baer.push_back(submodule(ring_mod, g).incl);
        }
        if (!is_f_injective(out.e, ExactStructureSelector::abelian(), baer))
            throw internal_error("hull target failed its Baer battery");
    }
    return out;
}

PreenvelopeTrace iterative_preenvelope(const FpModule& m, const InflationSet& h,
                                       const ExactStructureSelector& sel,
                                       int max_steps) {
    if (max_steps <= 0) max_steps = caps().max_steps;
    for (const Morphism& u : h.members) {
        if (!(u.source.ring == m.ring))
            throw input_error("preenvelope set member lives over a different ring");
        if (!inflation_test(u, sel))
            throw input_error("preenvelope set member fails the selected inflation test");
    }
    PreenvelopeTrace tr;
    tr.final = identity_morphism(m);
    FpModule p = m;
    for (;;) {
        /* Obstruction scan: the first morphism out of a member domain K_i
           with no extension to H_i, in member order then hom enumeration
           order. A clean scan says the stage is H-injective. Iso members
           extend everything and are skipped before enumeration. */
        std::optional<std::pair<size_t, Morphism>> obs;
        for (size_t i = 0; i < h.members.size() && !obs; ++i) {
            if (is_iso(h.members[i])) continue;
            for (const Morphism& f : enumerate_hom(h.members[i].source, p)) {
                if (!solve_right(f, h.members[i])) {
                    obs.emplace(i, f);
                    break;
                }
            }
        }
        if (!obs) break;
        if (tr.steps_used >= max_steps)
            throw preenvelope_cap_error(
                "preenvelope did not stabilize within the step cap", tr);
        /* One member per round: resolving the least obstructed member keeps
           Baer-set towers essential, so they stop at the injective hull. */
        Pushout po = pushout(h.members[obs->first], obs->second);
        if (self_check() && !inflation_test(po.from_n, sel))
            throw internal_error("preenvelope step is not an inflation");
        tr.stages.push_back({po.p, po.from_n});
        tr.final = compose(tr.final, po.from_n);
        p = po.p;
        ++tr.steps_used;
    }
    if (!is_mono(tr.final))
        throw internal_error("preenvelope final map is not mono");
    return tr;
}

Hull minimize_envelope(const Morphism& u, const ExactStructureSelector& sel) {
    if (!inflation_test(u, sel))
        throw input_error("minimization requires an inflation into the candidate");
    if (sel.kind == ExactStructureSelector::Kind::Pure) {
        /* finite modules are pure-injective and pure-essential extensions
           are isomorphisms, so the image is already the envelope */
        ImageFact im = image(u);
        return {im.img, im.corestriction};
    }
    if (sel.kind != ExactStructureSelector::Kind::Abelian)
        throw input_error("envelope minimization supports the abelian and pure selectors");
    const FpModule& e = u.target;
    if (!is_injective_closed_form(e))
        throw input_error("envelope candidate is not injective");
    auto verify_minimal = [](const FpModule& y, const Morphism& v) {
        if (hom_group(y, y).count_saturated() > caps().hom) return;
        for (const Morphism& g : enumerate_hom(y, y))
            if (morphism_eq(compose(v, g), v) && !is_iso(g))
                throw internal_error("envelope minimality violated");
    };
    /* an essential inflation into an injective is already the envelope;
       no proper injective intermediate can exist below it */
    if (essential_abelian(u)) {
        verify_minimal(e, u);
        return {e, u};
    }
    if (e.order() > caps().order)
        throw cap_error("envelope minimization exceeds the order cap");
    for (const Subgroup& s : all_subgroups(e)) { /* sorted by order */
        SubObject sub = submodule(e, s.gens);
        if (!is_injective_closed_form(sub.sub)) continue;
        std::optional<Morphism> w = subobject_leq(u, sub.incl);
        if (!w) continue;
        if (!essential_abelian(*w)) continue;
        verify_minimal(sub.sub, *w);
        return {sub.sub, *w};
    }
    throw internal_error("no injective essential intermediate found");
}

HullReport is_injective_hull(const Morphism& u, const ExactStructureSelector& sel,
                             const Battery& battery) {
    if (sel.kind != ExactStructureSelector::Kind::Abelian &&
        sel.kind != ExactStructureSelector::Kind::Pure)
        throw input_error("hull report supports the abelian and pure selectors");
    require_ring(battery, u.target.ring, "hull report");
    HullReport r;
    if (!inflation_test(u, sel)) return r;
    bool inj = sel.kind == ExactStructureSelector::Kind::Pure ||
               is_injective_closed_form(u.target);
    if (!inj) return r;
    r.essential_and_injective = is_essential(u, sel, battery);
    r.inflation_injective_small =
        is_small_over(identity_morphism(u.target), u, sel, battery).verdict;
    bool split_ok = true;
    for (const FpModule& z : battery.targets) {
        for (const Morphism& f : enumerate_hom(u.target, z)) {
            if (inflation_test(compose(u, f), sel) && !is_split_mono(f)) {
                split_ok = false;
                break;
            }
        }
        if (!split_ok) break;
    }
    r.battery_maps_split = split_ok;
    bool minimal = true;
    for (const Morphism& g : enumerate_hom(u.target, u.target)) {
        if (morphism_eq(compose(u, g), u) && !is_iso(g)) {
            minimal = false;
            break;
        }
    }
    r.envelope_minimal = minimal;
    r.weakly_essential_injective = is_weakly_essential(u, sel, battery);
    return r;
}

}  // namespace modexact
