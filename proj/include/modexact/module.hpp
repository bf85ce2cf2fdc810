#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modexact/intlin.hpp"

namespace modexact {

/* A finitely presented Z/m-module in invariant-factor form: the direct sum
   of Z/d_i with d_1 | d_2 | ... | d_k, every d_i in [2, m]. The zero module
   is the empty list. Construction always canonicalizes, so equal factor
   lists mean isomorphic modules. */
struct FpModule {
    Ring ring;
    long long m = 0;                /* ring modulus, cached as 64-bit */
    std::vector<long long> inv;     /* invariant factors, divisibility chain */

    /* set when the module came from an explicit presentation:
       to_can translates presentation coordinates to canonical ones,
       from_can lifts canonical generators back */
    std::optional<IntMatrix> original_presentation;
    std::optional<Mat> to_can;   /* (#presentation gens) x k */
    std::optional<Mat> from_can; /* k x (#presentation gens) */

    int ngens() const { return static_cast<int>(inv.size()); }
    long long order() const; /* saturates at LLONG_MAX */
    bool is_zero() const { return inv.empty(); }
    bool same_type(const FpModule& o) const { return ring == o.ring && inv == o.inv; }
};

struct ModElement {
    FpModule parent;
    std::vector<long long> coords; /* coords[i] in [0, d_i) */
};

/* A morphism between canonical generator systems. matrix(i, j) is the j-th
   coordinate of the image of source generator i, reduced mod target d_j.
   Well-definedness (d_i^src * row_i = 0 in the target) is enforced. */
struct Morphism {
    FpModule source, target;
    Mat a; /* ngens(source) x ngens(target) */
};

Morphism morphism(const FpModule& src, const FpModule& tgt, const Mat& a);
Morphism morphism(const FpModule& src, const FpModule& tgt, const IntMatrix& a);
/* skips the well-definedness check; for internally generated matrices */
Morphism morphism_unchecked(const FpModule& src, const FpModule& tgt, Mat a);

Morphism identity_morphism(const FpModule& a);
Morphism zero_morphism(const FpModule& src, const FpModule& tgt);
/* h = f then g */
Morphism compose(const Morphism& f, const Morphism& g);
Morphism add(const Morphism& f, const Morphism& g);
Morphism negate(const Morphism& f);
bool morphism_eq(const Morphism& f, const Morphism& g);
bool is_zero(const Morphism& f);

ModElement element(const FpModule& parent, const std::vector<long long>& coords);
ModElement zero_element(const FpModule& parent);
ModElement apply(const Morphism& f, const ModElement& x);
std::vector<long long> apply_coords(const Morphism& f, const std::vector<long long>& coords);
bool element_is_zero(const ModElement& x);

/* Canonicalization: invariant factors of Z^g / (rowspace(rel) + m Z^g),
   computed from the SNF of rel stacked on m*I. */
FpModule module_from_presentation(const Ring& ring, const IntMatrix& rel);
/* convenience: the module presented by diag(factors); factors need not be
   a divisibility chain, canonicalization sorts that out */
FpModule fp_module(const Ring& ring, const std::vector<long long>& factors);
FpModule cyclic(const Ring& ring, long long d);
FpModule zero_module(const Ring& ring);

struct DirectSum {
    FpModule sum;
    Morphism inj_a, inj_b;   /* A -> S, B -> S */
    Morphism proj_a, proj_b; /* S -> A, S -> B */
};
DirectSum direct_sum(const FpModule& a, const FpModule& b);

struct SubObject {
    FpModule sub;
    Morphism incl;  /* mono sub -> ambient */
    Mat express;    /* generator i of the input span, in sub coordinates */
};
/* the subgroup of `ambient` generated by the rows of gens (ambient coords) */
SubObject submodule(const FpModule& ambient, const Mat& gens);

struct QuotObject {
    FpModule quot;
    Morphism proj;  /* epi ambient -> quot */
};

SubObject kernel(const Morphism& f);
QuotObject cokernel(const Morphism& f);

struct ImageFact {
    FpModule img;
    Morphism incl;  /* mono img -> target */
    Morphism corestriction; /* epi source -> img; corestriction ; incl = f */
};
ImageFact image(const Morphism& f);

bool is_mono(const Morphism& f);
bool is_epi(const Morphism& f);
bool is_iso(const Morphism& f);

/* u <= v as subobjects of their shared target: returns w with v∘w = u */
std::optional<Morphism> subobject_leq(const Morphism& u, const Morphism& v);

/* h with (h then g) = f, i.e. f factors through g on the left of g */
std::optional<Morphism> solve_left(const Morphism& f, const Morphism& g);
/* h with (g then h) = f, i.e. f factors through g on the right */
std::optional<Morphism> solve_right(const Morphism& f, const Morphism& g);

/* membership x in d*M, and coordinates helpers shared by purity code */
bool in_multiple_submodule(const FpModule& mod, const std::vector<long long>& coords,
                          long long d);

}  // namespace modexact
