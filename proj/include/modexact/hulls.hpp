#pragma once

#include "modexact/partial.hpp"

namespace modexact {

/* Finite quantification range standing in for "all objects Z". Generated
   batteries are deterministic in (ring, max_order); explicit extras are
   appended and deduplicated by invariant factors. */
struct Battery {
    std::vector<FpModule> targets;
    long long max_order = 0; /* 0 when the list was given explicitly */
};

/* every module over the ring with order <= max_order, plus the extras */
Battery default_battery(const Ring& ring, long long max_order = 16,
                        const std::vector<FpModule>& extra = {});

/* the set H = {u_i: K_i -> H_i} driving injectivity and preenvelopes */
struct InflationSet {
    std::vector<Morphism> members;
};

/* the Baer set {dZ/m -> Z/m : d | m}; d = 1 contributes the identity and
   d = m the zero inclusion */
InflationSet baer_inflation_set(const Ring& ring);

/* every subgroup inclusion of (Z/m)^n, n = 1..nmax; the n = 1 block leads,
   so obstruction scans resolve cyclic-source members first */
InflationSet fp_inflation_set(const Ring& ring, int nmax);

struct SmallVerdict {
    bool verdict = false;
    std::optional<FpModule> cex_target;
    std::optional<Morphism> cex_map; /* f: V -> Y violating the implication */
};

/* Is V small over U in X: every partial morphism f with domain V whose
   restriction to U is a partial isomorphism must itself be one. v: V -> X,
   u: U -> X with U a subobject of V. */
SmallVerdict is_small_over(const Morphism& v, const Morphism& u,
                           const ExactStructureSelector& sel, const Battery& battery);

/* u an inflation such that any f with f∘u an F-inflation is an F-inflation
   (essential) resp. mono (weakly essential). Abelian: exact decision via
   the cyclic-subobject criterion, battery unused. Other selectors decide
   relative to the battery. */
bool is_essential(const Morphism& u, const ExactStructureSelector& sel,
                  const Battery& battery);
bool is_weakly_essential(const Morphism& u, const ExactStructureSelector& sel,
                         const Battery& battery);

/* The two-condition pure-small criterion for v: U -> X over the battery:
   any g out of X that is mono on U and reflects the (1,1)-systems of U
   must be a pure mono. */
bool check_pure_small_extension(const Morphism& v, const Battery& battery);

/* every invariant factor carries the full m-multiplicity of its primes */
bool is_injective_closed_form(const FpModule& e);

struct Hull {
    FpModule e;
    Morphism u; /* X -> E */
};

/* Closed-form injective hull for the abelian structure: each factor Z/d
   goes into Z/r with r the product over p | d of p^{v_p(m)}, embedded by
   1 -> r/d. Mono, injective and essential are re-verified on the result. */
Hull structural_injective_hull(const FpModule& m);

struct PreenvelopeStage {
    FpModule p;    /* stage object after the pushout round */
    Morphism step; /* previous stage -> this stage */
};
struct PreenvelopeTrace {
    std::vector<PreenvelopeStage> stages;
    Morphism final; /* source -> final stage, the composed steps */
    int steps_used = 0;
};

/* thrown when max_steps rounds do not reach an H-injective stage */
struct preenvelope_cap_error : cap_error {
    PreenvelopeTrace trace;
    preenvelope_cap_error(const std::string& what, PreenvelopeTrace t)
        : cap_error(what), trace(std::move(t)) {}
};

/* Successor-step loop of the enough-injectives construction: each round
   pushes out one member u_i along the first obstructed morphism K_i -> P
   (one with no extension to H_i), scanning members in order; a clean scan
   means the stage is H-injective and stops the loop. Resolving a single
   least obstruction per round keeps Baer-set towers essential, so they
   stabilize at the injective hull. max_steps <= 0 selects the configured
   default. */
PreenvelopeTrace iterative_preenvelope(const FpModule& m, const InflationSet& h,
                                       const ExactStructureSelector& sel,
                                       int max_steps = 0);

/* Minimal injective essential intermediate X -> E' inside E; Abelian
   searches the subgroup lattice of E bottom-up, Pure collapses to the
   image. The envelope property (endomorphisms fixing v are isos) is
   verified when End(E') is enumerable. */
Hull minimize_envelope(const Morphism& u, const ExactStructureSelector& sel);

/* the five equivalent descriptions of an injective hull, evaluated
   independently */
struct HullReport {
    bool essential_and_injective = false;    /* essential + injective target */
    bool inflation_injective_small = false;  /* inflation + injective + small over */
    bool battery_maps_split = false;         /* f∘u inflation forces f split mono */
    bool envelope_minimal = false;           /* preenvelope + endo minimality */
    bool weakly_essential_injective = false; /* weakly essential + injective */
};
HullReport is_injective_hull(const Morphism& u, const ExactStructureSelector& sel,
                             const Battery& battery);

}  // namespace modexact
