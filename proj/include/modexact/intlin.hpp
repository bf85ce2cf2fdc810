#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "modexact/config.hpp"

namespace modexact {

/* The coefficient ring: Z, or Z/m for a modulus m >= 2. */
struct Ring {
    mpz_class modulus;  /* 0 encodes Z */

    static Ring integers() { return Ring{0}; }
    static Ring mod(const mpz_class& m) {
        if (m < 2) throw input_error("ring modulus must be >= 2");
        return Ring{m};
    }
    static Ring mod(long long m) { return mod(mpz_class(static_cast<long>(m))); }
    bool modular() const { return modulus != 0; }
    bool operator==(const Ring& o) const { return modulus == o.modulus; }
};

/* Dense row-major matrix. Entry arithmetic is exact at any magnitude. */
template <class Z>
struct MatT {
    int rows = 0, cols = 0;
    std::vector<Z> a;

    MatT() = default;
    MatT(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Z& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Z& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static MatT identity(int n) {
        MatT m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static MatT diag(const std::vector<Z>& d) {
        MatT m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }
    bool operator==(const MatT& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

using IntMatrix = MatT<mpz_class>;
using Mat = MatT<long long>;  /* module-layer matrices; entries live mod a modulus < 2^31 */

struct SnfDecomposition {
    IntMatrix u, d, v;  /* u*a*v = d; u, v unimodular; d diagonal, nonnegative, d1 | d2 | ... */
};

struct SnfExtended {
    IntMatrix u, d, v, u_inv, v_inv;
};

/* Pivot rule: minimal absolute value among nonzero entries of the working
   submatrix, ties broken by lowest (row, col). A final pass repairs the
   divisibility chain by gcd-combining adjacent diagonal entries. */
SnfDecomposition smith_normal_form(const IntMatrix& a);
SnfExtended smith_normal_form_ext(const IntMatrix& a);

/* Solves x*a = b over the ring (congruence per column when modular).
   row_moduli[i] = s constrains variable i to the order-s cyclic subgroup of
   Z/m, i.e. to the multiples of m/s; it requires a modular ring and s | m.
   Modular congruences are realized by appending modulus rows to the lattice
   and solving exactly over Z, certified by the SNF divisibility criterion. */
std::optional<std::vector<mpz_class>> solve_linear(
    const IntMatrix& a, const std::vector<mpz_class>& b, const Ring& ring,
    const std::optional<std::vector<mpz_class>>& row_moduli = std::nullopt);

/* ---- module-layer kernel (64-bit coordinates, moduli < 2^31) ----
   All transforms are returned reduced mod m, which is sound for every
   module-layer use: coordinates only matter modulo m, and every lattice
   passed in contains the per-column modulus rows. On 64-bit overflow the
   same algorithm reruns on GMP integers and the result is reduced mod m,
   so verdicts never depend on which path ran. */

struct SnfMod {
    Mat u, d, v, u_inv, v_inv;  /* mod-m representatives; d exact (divides m) */
};

SnfMod snf_mod(const Mat& a, long long m);

/* x*a ≡ b with column j taken mod col_moduli[j] (each dividing m).
   Returns a witness with entries in [0, m). */
std::optional<std::vector<long long>> solve_mod(const Mat& a,
                                                const std::vector<long long>& b,
                                                const std::vector<long long>& col_moduli,
                                                long long m);

/* Same system, many right-hand sides: factor once, then test each b. */
struct SolveModMany {
    SolveModMany(Mat a, std::vector<long long> col_moduli, long long m);
    bool solvable(const std::vector<long long>& b) const;
    std::optional<std::vector<long long>> solve(const std::vector<long long>& b) const;
    int vars() const { return nvars; }

  private:
    int nvars, ncols;
    long long m;
    SnfMod f;
};

/* Rows generating {c : c*a ≡ 0 (mod col_moduli)}, reduced mod m.
   The result always spans the full solution lattice of the congruence. */
Mat left_kernel_mod(const Mat& a, const std::vector<long long>& col_moduli, long long m);

/* ---- small-matrix helpers used across the module layer ---- */

Mat mat_mul_mod(const Mat& x, const Mat& y, const std::vector<long long>& col_moduli);
Mat mat_mul_mod(const Mat& x, const Mat& y, long long m);
Mat vstack(const Mat& top, const Mat& bottom);
Mat hstack(const Mat& left, const Mat& right);
std::vector<long long> row_times_mat(const std::vector<long long>& x, const Mat& a,
                                     const std::vector<long long>& col_moduli);

inline long long mod_reduce(long long x, long long mod) {
    long long r = x % mod;
    return r < 0 ? r + mod : r;
}

/* gmpxx has no long long overloads; route every crossing through here */
inline mpz_class z_of(long long x) { return mpz_class(static_cast<long>(x)); }

long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);

/* Ascending list of divisors of m (1 and m included). */
std::vector<long long> divisors_of(long long m);

/* Conversions between the public arbitrary-precision matrices and the
   module-layer 64-bit matrices. to_mat throws input_error when an entry
   does not fit after reduction mod m (m must be < 2^31). */
Mat to_mat(const IntMatrix& a, long long m);
IntMatrix to_intmatrix(const Mat& a);

}  // namespace modexact
