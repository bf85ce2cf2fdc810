#pragma once

#include "modexact/exact.hpp"

namespace modexact {

/* A morphism defined on a subobject of an ambient module: the pair
   (u: U -> X, f: U -> Y) with u mono. */
struct PartialMorphism {
    FpModule ambient;   /* X */
    Morphism inclusion; /* u: U -> X */
    Morphism map;       /* f: U -> Y */
};

/* validates: u mono, f shares its source with u */
PartialMorphism partial_morphism(const Morphism& u, const Morphism& f);

/* Decision record for one (u, f, selector) instance. The pushout of f
   along u carries the two legs ibar: Y -> P (the pushout of u) and
   fbar: X -> P (the pushout of f). */
struct PartialVerdict {
    bool is_partial = false;
    bool is_partial_iso = false;
    FpModule p;
    Morphism ibar; /* Y -> P */
    Morphism fbar; /* X -> P */
    /* selector Pure only: purity certificates of the legs (fbar's absent
       when fbar is not mono), and on failure the single-equation witness:
       d*x = u(k) is solvable in X while d*x = f(k) is not in Y; k is given
       in domain coordinates */
    std::optional<PurityCertificate> cert_ibar, cert_fbar;
    std::optional<long long> witness_d;
    std::optional<std::vector<long long>> witness_k;
};

/* f is partial when ibar is an inflation of the selected structure, a
   partial isomorphism when fbar is one as well. For the Pure selector the
   equation criterion (f(u^{-1}(dX)) inside dY for every d | m) is decided
   independently of the pushout and the two verdicts are asserted equal. */
PartialVerdict check_partial(const PartialMorphism& pm, const ExactStructureSelector& sel);

/* g: X -> Y with g∘u = f, by one generator-level linear solve */
std::optional<Morphism> find_extension(const PartialMorphism& pm);

/* Searches h: Y -> X with h∘f = u; pm must be partial under sel. A found
   h forces the iso verdict; with ambient_injective set, the converse is
   asserted as well. */
bool check_partial_iso_via_retraction(const PartialMorphism& pm,
                                      const ExactStructureSelector& sel,
                                      bool ambient_injective = false);

/* is_partial of (u, f1 + f2); the inputs must share ambient and inclusion */
bool check_sum_closure(const PartialMorphism& pm1, const PartialMorphism& pm2,
                       const ExactStructureSelector& sel);

/* verdict for (u, g∘f); g: Y -> Z */
PartialVerdict compose_partial(const PartialMorphism& pm, const Morphism& g,
                               const ExactStructureSelector& sel);

/* verdict for (v∘u, f); v: X -> Z must be an inflation of sel's structure */
PartialVerdict enlarge_ambient(const PartialMorphism& pm, const Morphism& v,
                               const ExactStructureSelector& sel);

struct CophantomVerdict {
    bool verdict = false;
    std::optional<size_t> failing_index; /* battery member blocking f */
};
/* f: B -> Y is cophantom relative to a battery of monos out of B: (u, f)
   must be partial for every battery member u */
CophantomVerdict is_cophantom(const Morphism& f, const ExactStructureSelector& sel,
                              const std::vector<Morphism>& battery);

/* E extends every hom along every battery inflation. For the Abelian
   selector the closed form (every invariant factor is a full prime power
   of m) and a full Baer battery {dZ/m -> Z/m} are computed as independent
   absolute criteria and asserted consistent with each other and with the
   battery verdict. */
bool is_f_injective(const FpModule& e, const ExactStructureSelector& sel,
                    const std::vector<Morphism>& battery);

/* every g: Y -> Z with Z in cls makes g∘f extendable along u */
bool check_e_upper_characterization(const PartialMorphism& pm,
                                    const std::vector<FpModule>& cls);

/* every commutative square (phi1: K -> U, phi2: Q -> X) over the standard
   free presentation K -> Q -> Z of each Z in cls admits g: Q -> Y with
   g∘incl = f∘phi1 */
bool check_e_lower_characterization(const PartialMorphism& pm,
                                    const std::vector<FpModule>& cls);

}  // namespace modexact
