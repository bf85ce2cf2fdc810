#pragma once

#include "modexact/json_io.hpp"

namespace modexact {

/* The complete duplicate-free module list over the ring with order up to
   max_order: every divisibility chain with product <= max_order, shortest
   chains first, lexicographic within a length. The zero module leads. */
std::vector<FpModule> corpus_modules(const Ring& ring, long long max_order);

/* Deterministic test workspace: the module list above named M0, M1, ...,
   plus 3n sampled morphisms f0, f1, ... and n sampled subobject inclusions
   u0, u1, ... drawn from a generator seeded with `seed`. Identical inputs
   reproduce the workspace byte for byte. max_order is capped at 4096. */
Workspace corpus_generate(const Ring& ring, long long max_order, unsigned long long seed);

}  // namespace modexact
