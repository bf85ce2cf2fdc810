#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modexact {

/* Input that violates an op's precondition. CLI maps this to exit code 2. */
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/* Enumeration or search exceeded a configured cap. CLI maps this to exit code 3.
   The message always names the cap that tripped. */
struct cap_error : std::runtime_error {
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

/* Broken internal invariant; a bug, never a user error. */
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

struct Caps {
    long long hom = 4096;        /* max Hom-set / element enumeration size */
    long long subgroups = 4096;  /* max subgroups visited in a lattice search */
    long long order = 1024;      /* max |E| for envelope minimization (2^10) */
    int max_steps = 8;           /* preenvelope pushout rounds */
};

/* Process-wide defaults; the MODEXACT_CAPS environment variable
   ("hom=8192,subgroups=2048,order=1024,steps=8") overrides them, and CLI
   flags override both. */
Caps& caps();

/* When true, ops run their redundant cross-check paths (purity algorithms
   (b)/(c) against (a), closed-form injectivity against batteries, ...).
   Unit suites switch it on; the wide acceptance sweeps leave it off and
   cross-validate explicitly instead. */
bool& self_check();

}  // namespace modexact
