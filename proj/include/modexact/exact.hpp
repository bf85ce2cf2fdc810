#pragma once

#include "modexact/enumerate.hpp"
#include "modexact/module.hpp"

namespace modexact {

/* A verified kernel-cokernel pair A -> B -> C. */
struct Conflation {
    Morphism i, p;
};

/* Validates: i mono, p epi, p∘i = 0, image(i) = kernel(p) as subobjects. */
Conflation conflation(const Morphism& i, const Morphism& p);
Conflation conflation_of_mono(const Morphism& i);
Conflation split_conflation(const FpModule& a, const FpModule& c);

/* Which exact substructure is in force. Pure is definitionally
   HomFrom({Z/d : d | m}); the dedicated purity code path is asserted equal
   to that definition under self_check. */
struct ExactStructureSelector {
    enum class Kind { Abelian, Pure, HomInto, HomFrom };
    Kind kind = Kind::Abelian;
    std::vector<FpModule> cls; /* for HomInto (E^X) / HomFrom (E_X) */

    static ExactStructureSelector abelian() { return {Kind::Abelian, {}}; }
    static ExactStructureSelector pure() { return {Kind::Pure, {}}; }
    static ExactStructureSelector hom_into(std::vector<FpModule> x) {
        return {Kind::HomInto, std::move(x)};
    }
    static ExactStructureSelector hom_from(std::vector<FpModule> x) {
        return {Kind::HomFrom, std::move(x)};
    }
};

struct PurityCertificate {
    bool verdict = false;
    /* set when verdict is false: x*d = k has a solution over the ambient
       module but none over the subobject; k is in subobject coordinates */
    std::optional<long long> witness_d;
    std::optional<std::vector<long long>> witness_k;
};

struct Pushout {
    FpModule p;
    Morphism from_m; /* i1 */
    Morphism from_n; /* i2 */
    /* construction internals, used for cokernel transport */
    DirectSum sum; /* N ⊕ M */
    Morphism quot; /* N ⊕ M -> P */
};
/* f: K->M, g: K->N; P = (N ⊕ M)/{(g(k), f(k))} */
Pushout pushout(const Morphism& f, const Morphism& g);

struct Pullback {
    FpModule q;
    Morphism to_m; /* p1 */
    Morphism to_n; /* p2 */
    DirectSum sum;  /* M ⊕ N */
    Morphism incl;  /* Q -> M ⊕ N */
};
/* f: M->C, g: N->C; Q = {(x, y) : f(x) = g(y)} */
Pullback pullback(const Morphism& f, const Morphism& g);

/* Three cross-checked algorithms: (a) Hom(Z/d,-)-exactness of the completed
   conflation for every d | m (the verdict); (b) the subgroup criterion
   dB ∩ Img i = d Img i; (c) elementwise single-equation search. (b)/(c) are
   asserted equal to (a) under self_check. */
PurityCertificate is_pure_mono(const Morphism& i);

/* generators (rows, in source coordinates) of the subgroup f^{-1}(d * target) */
Mat preimage_multiple_generators(const Morphism& f, long long d);

bool in_substructure(const Conflation& eta, const ExactStructureSelector& sel);

/* r with f;r = id on the source */
std::optional<Morphism> retraction_of(const Morphism& f);
/* s with s;p = id on the target */
std::optional<Morphism> section_of(const Morphism& p);
bool is_split_mono(const Morphism& f);
bool is_split_epi(const Morphism& p);

Conflation baer_sum(const Conflation& e1, const Conflation& e2);

/* searches Hom(B1, B2) for an isomorphism commuting with both legs */
std::optional<Morphism> conflations_equivalent(const Conflation& e1, const Conflation& e2);

/* Ext actions on a conflation A -> B -> C */
Conflation ext_pushout(const Conflation& eta, const Morphism& g); /* g: A -> X */
Conflation ext_pullback(const Conflation& eta, const Morphism& f); /* f: X -> C */

/* commutative ladder between conflations; phi1: A->A', phi2: B->B',
   phi3: C->C' */
struct FactorLadder {
    Conflation top, bottom;
    Morphism phi1, phi2, phi3;
};
struct FactorVerdict {
    bool exists = false;
    std::optional<Morphism> alpha; /* C -> B' with alpha;p' = phi3 */
    std::optional<Morphism> beta;  /* B -> A' with i;beta = phi1 */
};
/* decides both factorizations independently and asserts they agree */
FactorVerdict factor_check(const FactorLadder& ladder);

/* (f;inj_a) + (g;inj_b) for a shared source */
Morphism pair_into_sum(const Morphism& f, const Morphism& g, const DirectSum& ds);

}  // namespace modexact
