#pragma once

#include "modexact/module.hpp"

namespace modexact {

struct Subgroup {
    std::vector<long long> elements; /* sorted element indices (lex rank) */
    Mat gens;                        /* generating coordinate rows */
    long long order() const { return static_cast<long long>(elements.size()); }
};

/* Every subgroup of `mod`, by closure search over elements. Deterministic:
   sorted by (order, element list). Requires |mod| within the `hom` cap and
   the subgroup count within the `subgroups` cap. */
std::vector<Subgroup> all_subgroups(const FpModule& mod);

}  // namespace modexact
