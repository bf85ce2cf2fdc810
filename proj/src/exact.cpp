#include "modexact/exact.hpp"

namespace modexact {

namespace {

void check_same_ring(const Ring& a, const Ring& b, const char* what) {
    if (!(a == b)) throw input_error(std::string(what) + ": ring mismatch");
}

}  // namespace

Conflation conflation(const Morphism& i, const Morphism& p) {
    if (!i.target.same_type(p.source)) throw input_error("conflation: middle objects differ");
    if (!is_mono(i)) throw input_error("conflation: i is not a monomorphism");
    if (!is_epi(p)) throw input_error("conflation: p is not an epimorphism");
    if (!is_zero(compose(i, p))) throw input_error("conflation: p∘i is nonzero");
    ImageFact im = image(i);
    SubObject ke = kernel(p);
    if (!subobject_leq(im.incl, ke.incl) || !subobject_leq(ke.incl, im.incl))
        throw input_error("conflation: image(i) and kernel(p) differ");
    return Conflation{i, p};
}

Conflation conflation_of_mono(const Morphism& i) {
    if (!is_mono(i)) throw input_error("conflation_of_mono requires a monomorphism");
    QuotObject q = cokernel(i);
    if (self_check()) return conflation(i, q.proj);
    return Conflation{i, q.proj};
}

Conflation split_conflation(const FpModule& a, const FpModule& c) {
    DirectSum ds = direct_sum(a, c);
    return Conflation{ds.inj_a, ds.proj_b};
}

Morphism pair_into_sum(const Morphism& f, const Morphism& g, const DirectSum& ds) {
    return add(compose(f, ds.inj_a), compose(g, ds.inj_b));
}

Mat preimage_multiple_generators(const Morphism& f, long long d) {
    const FpModule& a = f.source;
    const FpModule& b = f.target;
    std::vector<long long> moduli(b.ngens());
    for (int j = 0; j < b.ngens(); ++j) moduli[j] = gcd_ll(d, b.inv[j]);
    Mat gens = left_kernel_mod(f.a, moduli, a.m);
    for (int r = 0; r < gens.rows; ++r)
        for (int j = 0; j < a.ngens(); ++j)
            gens.at(r, j) = mod_reduce(gens.at(r, j), a.inv[j]);
    return gens;
}

Pushout pushout(const Morphism& f, const Morphism& g) {
    if (!f.source.same_type(g.source)) throw input_error("pushout: sources differ");
    DirectSum ds = direct_sum(g.target, f.target); /* N ⊕ M */
    Morphism u = add(compose(g, ds.inj_a), negate(compose(f, ds.inj_b)));
    QuotObject q = cokernel(u);
    Pushout out{q.quot, compose(ds.inj_b, q.proj), compose(ds.inj_a, q.proj), ds, q.proj};
    if (!morphism_eq(compose(f, out.from_m), compose(g, out.from_n)))
        throw internal_error("pushout: square does not commute");
    return out;
}

Pullback pullback(const Morphism& f, const Morphism& g) {
    if (!f.target.same_type(g.target)) throw input_error("pullback: targets differ");
    DirectSum ds = direct_sum(f.source, g.source); /* M ⊕ N */
    Morphism u = add(compose(ds.proj_a, f), negate(compose(ds.proj_b, g)));
    SubObject k = kernel(u);
    Pullback out{k.sub, compose(k.incl, ds.proj_a), compose(k.incl, ds.proj_b), ds, k.incl};
    if (!morphism_eq(compose(out.to_m, f), compose(out.to_n, g)))
        throw internal_error("pullback: square does not commute");
    return out;
}

namespace {

/* purity algorithm (a): every generator of C[d] lifts to an order-d element
   of B along p, for every divisor d of m */
bool pure_by_lifting(const FpModule& b, const FpModule& c, const Mat& mp, long long d,
                     long long m) {
    Mat scaled(b.ngens(), c.ngens());
    for (int r = 0; r < b.ngens(); ++r) {
        long long sc = b.inv[r] / gcd_ll(d, b.inv[r]);
        for (int j = 0; j < c.ngens(); ++j) scaled.at(r, j) = mod_reduce(sc * mp.at(r, j), m);
    }
    SolveModMany sys(scaled, c.inv, m);
    std::vector<long long> target(c.ngens(), 0);
    for (int j = 0; j < c.ngens(); ++j) {
        target[j] = c.inv[j] / gcd_ll(d, c.inv[j]);
        bool ok = sys.solvable(target);
        target[j] = 0;
        if (!ok) return false;
    }
    return true;
}

/* purity algorithm (b) at a fixed divisor: generators of {a : i(a) ∈ dB}
   must lie in dA; returns a violating generator if any */
std::optional<std::vector<long long>> divisor_violation(const Morphism& i, long long d) {
    const FpModule& a = i.source;
    Mat gens = preimage_multiple_generators(i, d);
    for (int r = 0; r < gens.rows; ++r) {
        std::vector<long long> row(gens.a.begin() + static_cast<size_t>(r) * a.ngens(),
                                   gens.a.begin() + static_cast<size_t>(r + 1) * a.ngens());
        if (!in_multiple_submodule(a, row, d)) return row;
    }
    return std::nullopt;
}

/* purity algorithm (c): exhaustive single-equation search */
bool pure_by_elements(const Morphism& i, long long m) {
    const FpModule& a = i.source;
    const FpModule& b = i.target;
    bool pure = true;
    for (long long d : divisors_of(m)) {
        for_each_element(a, [&](const std::vector<long long>& x) {
            auto ix = apply_coords(i, x);
            if (in_multiple_submodule(b, ix, d) && !in_multiple_submodule(a, x, d))
                pure = false;
            return pure;
        });
        if (!pure) break;
    }
    return pure;
}

}  // namespace

PurityCertificate is_pure_mono(const Morphism& i) {
    if (!is_mono(i)) throw input_error("is_pure_mono requires a monomorphism");
    const FpModule& a = i.source;
    const FpModule& b = i.target;
    long long m = a.m;
    QuotObject ck = cokernel(i);
    const FpModule& c = ck.quot;

    PurityCertificate cert;
    cert.verdict = true;
    if (!c.is_zero() && !a.is_zero()) {
        for (long long d : divisors_of(m)) {
            if (d == 1 || d == m) continue; /* both ends are vacuous */
            if (!pure_by_lifting(b, c, ck.proj.a, d, m)) {
                cert.verdict = false;
                break;
            }
        }
    }
    if (!cert.verdict) {
        for (long long d : divisors_of(m)) {
            if (auto k = divisor_violation(i, d)) {
                cert.witness_d = d;
                cert.witness_k = *k;
                break;
            }
        }
        if (!cert.witness_d) throw internal_error("is_pure_mono: no witness for a false verdict");
    }
    if (self_check()) {
        bool by_b = true;
        for (long long d : divisors_of(m))
            if (divisor_violation(i, d)) {
                by_b = false;
                break;
            }
        if (by_b != cert.verdict)
            throw internal_error("is_pure_mono: divisor criterion disagrees with lifting");
        if (a.order() <= caps().hom && pure_by_elements(i, m) != cert.verdict)
            throw internal_error("is_pure_mono: elementwise search disagrees with lifting");
        if (cert.witness_d) {
            /* the witness must re-verify: solvable over B, unsolvable over A */
            auto ik = apply_coords(i, *cert.witness_k);
            if (!in_multiple_submodule(b, ik, *cert.witness_d) ||
                in_multiple_submodule(a, *cert.witness_k, *cert.witness_d))
                throw internal_error("is_pure_mono: witness fails re-verification");
        }
    }
    return cert;
}

bool in_substructure(const Conflation& eta, const ExactStructureSelector& sel) {
    switch (sel.kind) {
        case ExactStructureSelector::Kind::Abelian:
            return true;
        case ExactStructureSelector::Kind::Pure: {
            bool v = is_pure_mono(eta.i).verdict;
            if (self_check()) {
                std::vector<FpModule> cyclics;
                for (long long d : divisors_of(eta.i.source.m))
                    if (d >= 2) cyclics.push_back(cyclic(eta.i.source.ring, d));
                if (v != in_substructure(eta, ExactStructureSelector::hom_from(cyclics)))
                    throw internal_error("purity disagrees with its HomFrom definition");
            }
            return v;
        }
        case ExactStructureSelector::Kind::HomFrom: {
            /* liftable morphisms X -> C form a subgroup: generators suffice */
            for (const FpModule& x : sel.cls) {
                check_same_ring(x.ring, eta.p.target.ring, "in_substructure");
                HomGroup h = hom_group(x, eta.p.target);
                for (int t = 0; t < h.ncoeffs(); ++t)
                    if (!solve_left(h.generator(t), eta.p)) return false;
            }
            return true;
        }
        case ExactStructureSelector::Kind::HomInto: {
            for (const FpModule& x : sel.cls) {
                check_same_ring(x.ring, eta.i.source.ring, "in_substructure");
                HomGroup h = hom_group(eta.i.source, x);
                for (int t = 0; t < h.ncoeffs(); ++t)
                    if (!solve_right(h.generator(t), eta.i)) return false;
            }
            return true;
        }
    }
    throw internal_error("in_substructure: unknown selector");
}

std::optional<Morphism> retraction_of(const Morphism& f) {
    return solve_right(identity_morphism(f.source), f);
}

std::optional<Morphism> section_of(const Morphism& p) {
    return solve_left(identity_morphism(p.target), p);
}

bool is_split_mono(const Morphism& f) { return retraction_of(f).has_value(); }
bool is_split_epi(const Morphism& p) { return section_of(p).has_value(); }

Conflation ext_pushout(const Conflation& eta, const Morphism& g) {
    if (!g.source.same_type(eta.i.source))
        throw input_error("ext_pushout: g must start at the left end");
    Pushout po = pushout(eta.i, g);
    /* cokernel transport: unique pbar with from_m;pbar = p, from_n;pbar = 0 */
    auto pbar = solve_right(compose(po.sum.proj_b, eta.p), po.quot);
    if (!pbar) throw internal_error("ext_pushout: cokernel transport failed");
    if (self_check()) return conflation(po.from_n, *pbar);
    return Conflation{po.from_n, *pbar};
}

Conflation ext_pullback(const Conflation& eta, const Morphism& f) {
    if (!f.target.same_type(eta.p.target))
        throw input_error("ext_pullback: f must end at the right end");
    Pullback pb = pullback(eta.p, f);
    Morphism into_sum =
        pair_into_sum(eta.i, zero_morphism(eta.i.source, f.source), pb.sum);
    auto ibar = solve_left(into_sum, pb.incl);
    if (!ibar) throw internal_error("ext_pullback: kernel transport failed");
    if (self_check()) return conflation(*ibar, pb.to_n);
    return Conflation{*ibar, pb.to_n};
}

Conflation baer_sum(const Conflation& e1, const Conflation& e2) {
    const FpModule& a = e1.i.source;
    const FpModule& c = e1.p.target;
    if (!a.same_type(e2.i.source) || !c.same_type(e2.p.target))
        throw input_error("baer_sum: end objects differ");

    Pullback pb = pullback(e1.p, e2.p); /* Γ = B1 ×_C B2 */
    DirectSum aa = direct_sum(a, a);
    Morphism into_sum = pair_into_sum(compose(aa.proj_a, e1.i), compose(aa.proj_b, e2.i),
                                      pb.sum);
    auto kappa = solve_left(into_sum, pb.incl);
    if (!kappa) throw internal_error("baer_sum: corestriction to the pullback failed");
    Morphism pi = compose(pb.to_m, e1.p);
    Conflation mid = self_check() ? conflation(*kappa, pi) : Conflation{*kappa, pi};
    Morphism codiag = add(aa.proj_a, aa.proj_b);
    return ext_pushout(mid, codiag);
}

std::optional<Morphism> conflations_equivalent(const Conflation& e1, const Conflation& e2) {
    if (!e1.i.source.same_type(e2.i.source) || !e1.p.target.same_type(e2.p.target))
        throw input_error("conflations_equivalent: end objects differ");
    if (e1.i.target.inv != e2.i.target.inv) return std::nullopt;
    for (const Morphism& phi : enumerate_hom(e1.i.target, e2.i.target)) {
        if (!morphism_eq(compose(e1.i, phi), e2.i)) continue;
        if (!morphism_eq(compose(phi, e2.p), e1.p)) continue;
        if (!is_iso(phi)) continue;
        return phi;
    }
    return std::nullopt;
}

FactorVerdict factor_check(const FactorLadder& ladder) {
    const Conflation& t = ladder.top;
    const Conflation& b = ladder.bottom;
    if (!morphism_eq(compose(t.i, ladder.phi2), compose(ladder.phi1, b.i)) ||
        !morphism_eq(compose(t.p, ladder.phi3), compose(ladder.phi2, b.p)))
        throw input_error("factor_check: ladder does not commute");
    FactorVerdict out;
    out.alpha = solve_left(ladder.phi3, b.p);
    out.beta = solve_right(ladder.phi1, t.i);
    if (out.alpha.has_value() != out.beta.has_value())
        throw internal_error("factor_check: the two factorizations disagree");
    out.exists = out.alpha.has_value();
    return out;
}

}  // namespace modexact
