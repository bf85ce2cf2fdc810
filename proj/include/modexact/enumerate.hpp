#pragma once

#include <functional>

#include "modexact/module.hpp"

namespace modexact {

/* Hom(A, B) as a finite abelian group: one coefficient per matrix entry,
   entry (i, j) having order gcd(d_i^A, d_j^B); the (i, j) generator is the
   morphism whose only nonzero entry is d_j^B / gcd(d_i^A, d_j^B) at (i, j).
   Coefficient vectors are row-major over the matrix entries. */
struct HomGroup {
    FpModule source, target;
    std::vector<long long> orders;

    int ncoeffs() const { return static_cast<int>(orders.size()); }
    long long count_saturated() const; /* saturates at LLONG_MAX */
    Mat matrix_from_coeffs(const std::vector<long long>& c) const;
    std::vector<long long> coeffs_from_matrix(const Mat& a) const;
    Morphism from_coeffs(const std::vector<long long>& c) const;
    std::vector<long long> to_coeffs(const Morphism& f) const;
    Morphism generator(int idx) const;
};

HomGroup hom_group(const FpModule& a, const FpModule& b);

/* Exhaustive, duplicate-free, lexicographic (first coordinate most
   significant). Both throw cap_error naming the `hom` enumeration cap. */
std::vector<ModElement> enumerate_elements(const FpModule& mod);
std::vector<Morphism> enumerate_hom(const FpModule& a, const FpModule& b);

/* Callback forms for the wide sweeps: same order, no cap, one reused
   buffer. Return false from fn to stop early. */
void for_each_element(const FpModule& mod,
                      const std::function<bool(const std::vector<long long>&)>& fn);
void for_each_hom_matrix(const HomGroup& h, const std::function<bool(const Mat&)>& fn);

/* mixed-radix element index <-> coordinates (lexicographic rank) */
long long element_index(const FpModule& mod, const std::vector<long long>& coords);
std::vector<long long> element_coords(const FpModule& mod, long long index);

}  // namespace modexact
