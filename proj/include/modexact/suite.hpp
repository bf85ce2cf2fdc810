#pragma once

#include "modexact/corpus.hpp"

namespace modexact {

struct PropertyReport {
    std::string name;
    long long instances = 0;
    long long failures = 0;
};

struct SuiteReport {
    std::string suite;
    Ring ring = Ring::integers();
    unsigned long long seed = 0;
    std::vector<PropertyReport> properties;
    long long total_failures() const;
};

struct SuiteOptions {
    long long max_order = 0;  /* 0 = suite default */
    long long instances = 0;  /* 0 = suite default; seeded suites only */
    unsigned long long seed = 0;
};

/* Suites: "thm-2-2" (exhaustive pushout / oracle / extendability sweep),
   "prop-2-5" (seeded closure properties, items 1, 2, 4a, 5, 6, 7, 8),
   "pure-collapse" (splitting, pure-injectivity and essential-iff-iso of
   the pure structure over a fixed ring). */
SuiteReport run_suite(const std::string& name, const Ring& ring, const SuiteOptions& opt);
json to_json(const SuiteReport& r);

/* ---- building blocks shared with the acceptance harness ---- */

/* One sweep cell: an inclusion u: U -> X and a target Y. Every f in
   Hom(U, Y) is evaluated three ways and the verdicts are compared:
   - pushout verdict: P = (Y + X)/{(f k, -u k)} by one Smith pass, then
     ibar^{-1}(dP) against dY for every divisor d with dY != Y;
   - equation oracle: f(u^{-1}(dX)) against dY, preimage generators
     precomputed once per cell;
   - extendability: membership of f in the image of the restriction map
     Hom(X, Y) -> Hom(U, Y), one factored solver per cell.
   Every check_full-th instance additionally runs the library's
   check_partial and find_extension and compares those verdicts too. */
struct Thm22Stats {
    long long instances = 0;
    long long partial_true = 0;
    long long pushout_vs_oracle = 0;  /* disagreements */
    long long partial_vs_extend = 0;  /* disagreements */
    long long full_path_runs = 0;
    long long full_path_mismatch = 0; /* library spot checks disagreeing */
};
void thm22_sweep_cell(const Morphism& u, const FpModule& y, Thm22Stats& st,
                      long long check_full = 997);

/* all X of order <= x_max, all subobjects U of X, all Y of order <= y_max */
Thm22Stats thm22_sweep(const Ring& ring, long long x_max, long long y_max,
                       long long check_full = 997);

}  // namespace modexact
