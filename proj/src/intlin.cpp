#include "modexact/intlin.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace modexact {

namespace {

struct ovf {};  /* signal: retry the computation on arbitrary-precision integers */

template <class Z>
struct zops;

template <>
struct zops<long long> {
    static long long add(long long a, long long b) {
        long long r;
        if (__builtin_add_overflow(a, b, &r)) throw ovf{};
        return r;
    }
    static long long sub(long long a, long long b) {
        long long r;
        if (__builtin_sub_overflow(a, b, &r)) throw ovf{};
        return r;
    }
    static long long mul(long long a, long long b) {
        long long r;
        if (__builtin_mul_overflow(a, b, &r)) throw ovf{};
        return r;
    }
    static long long neg(long long a) {
        if (a == LLONG_MIN) throw ovf{};
        return -a;
    }
    static bool is_zero(long long a) { return a == 0; }
    static int cmp_abs(long long a, long long b) {
        unsigned long long ua = a < 0 ? -static_cast<unsigned long long>(a) : a;
        unsigned long long ub = b < 0 ? -static_cast<unsigned long long>(b) : b;
        return ua < ub ? -1 : (ua > ub ? 1 : 0);
    }
    /* r = a mod |d| in [0, |d|), q = (a - r) / d exact */
    static void divmod_pos(long long a, long long d, long long& q, long long& r) {
        if (d == LLONG_MIN) throw ovf{};
        long long ad = d < 0 ? -d : d;
        r = a % ad;
        if (r < 0) r += ad;
        q = sub(a, r) / d;
    }
    static bool divides(long long d, long long a) { return d != 0 && a % d == 0; }
    static bool is_neg(long long a) { return a < 0; }
};

template <>
struct zops<mpz_class> {
    static mpz_class add(const mpz_class& a, const mpz_class& b) { return a + b; }
    static mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }
    static mpz_class mul(const mpz_class& a, const mpz_class& b) { return a * b; }
    static mpz_class neg(const mpz_class& a) { return -a; }
    static bool is_zero(const mpz_class& a) { return sgn(a) == 0; }
    static int cmp_abs(const mpz_class& a, const mpz_class& b) {
        return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
    }
    static void divmod_pos(const mpz_class& a, const mpz_class& d, mpz_class& q, mpz_class& r) {
        mpz_class ad = abs(d);
        mpz_mod(r.get_mpz_t(), a.get_mpz_t(), ad.get_mpz_t());
        q = (a - r) / d;
    }
    static bool divides(const mpz_class& d, const mpz_class& a) {
        return sgn(d) != 0 && mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t());
    }
    static bool is_neg(const mpz_class& a) { return sgn(a) < 0; }
};

/* Row/column reduction to Smith form with tracked transforms.
   Invariant throughout: w = u * a * v, ui = u^-1, vi = v^-1. */
template <class Z>
struct SnfCore {
    using O = zops<Z>;
    int rows, cols;
    MatT<Z> w, u, ui, v, vi;

    explicit SnfCore(MatT<Z> a)
        : rows(a.rows),
          cols(a.cols),
          w(std::move(a)),
          u(MatT<Z>::identity(rows)),
          ui(MatT<Z>::identity(rows)),
          v(MatT<Z>::identity(cols)),
          vi(MatT<Z>::identity(cols)) {}

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols; ++c) std::swap(w.at(i, c), w.at(j, c));
        for (int c = 0; c < rows; ++c) {
            std::swap(u.at(i, c), u.at(j, c));
            std::swap(ui.at(c, i), ui.at(c, j));
        }
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < rows; ++r) std::swap(w.at(r, i), w.at(r, j));
        for (int r = 0; r < cols; ++r) {
            std::swap(v.at(r, i), v.at(r, j));
            std::swap(vi.at(i, r), vi.at(j, r));
        }
    }
    void negate_row(int i) {
        for (int c = 0; c < cols; ++c) w.at(i, c) = O::neg(w.at(i, c));
        for (int c = 0; c < rows; ++c) {
            u.at(i, c) = O::neg(u.at(i, c));
            ui.at(c, i) = O::neg(ui.at(c, i));
        }
    }
    /* row_i -= q * row_j */
    void row_submul(int i, int j, const Z& q) {
        for (int c = 0; c < cols; ++c) w.at(i, c) = O::sub(w.at(i, c), O::mul(q, w.at(j, c)));
        for (int c = 0; c < rows; ++c) {
            u.at(i, c) = O::sub(u.at(i, c), O::mul(q, u.at(j, c)));
            ui.at(c, j) = O::add(ui.at(c, j), O::mul(q, ui.at(c, i)));
        }
    }
    /* col_i -= q * col_j */
    void col_submul(int i, int j, const Z& q) {
        for (int r = 0; r < rows; ++r) w.at(r, i) = O::sub(w.at(r, i), O::mul(q, w.at(r, j)));
        for (int r = 0; r < cols; ++r) {
            v.at(r, i) = O::sub(v.at(r, i), O::mul(q, v.at(r, j)));
            vi.at(j, r) = O::add(vi.at(j, r), O::mul(q, vi.at(i, r)));
        }
    }
    /* col_i += col_j */
    void col_add(int i, int j) { col_submul(i, j, Z(-1)); }

    /* Pivot rule: minimal |entry| among nonzero entries of w[t.., t..],
       ties by lowest (row, col). */
    bool find_pivot(int t, int& pr, int& pc) const {
        pr = -1;
        pc = -1;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                const Z& e = w.at(i, j);
                if (O::is_zero(e)) continue;
                if (pr < 0 || O::cmp_abs(e, w.at(pr, pc)) < 0) {
                    pr = i;
                    pc = j;
                }
            }
        return pr >= 0;
    }

    void eliminate_from(int t0) {
        int n = std::min(rows, cols);
        for (int t = t0; t < n; ++t) {
            int pr, pc;
            while (true) {
                if (!find_pivot(t, pr, pc)) return;
                swap_rows(t, pr);
                swap_cols(t, pc);
                bool clean = true;
                for (int i = t + 1; i < rows; ++i) {
                    if (O::is_zero(w.at(i, t))) continue;
                    Z q, r;
                    O::divmod_pos(w.at(i, t), w.at(t, t), q, r);
                    if (!O::is_zero(q)) row_submul(i, t, q);
                    if (!O::is_zero(w.at(i, t))) clean = false;
                }
                for (int j = t + 1; j < cols; ++j) {
                    if (O::is_zero(w.at(t, j))) continue;
                    Z q, r;
                    O::divmod_pos(w.at(t, j), w.at(t, t), q, r);
                    if (!O::is_zero(q)) col_submul(j, t, q);
                    if (!O::is_zero(w.at(t, j))) clean = false;
                }
                if (clean) break;
            }
        }
    }

    void fix_signs_and_chain() {
        int n = std::min(rows, cols);
        while (true) {
            for (int i = 0; i < n; ++i)
                if (O::is_neg(w.at(i, i))) negate_row(i);
            int bad = -1;
            for (int i = 0; i + 1 < n; ++i) {
                const Z& a = w.at(i, i);
                const Z& b = w.at(i + 1, i + 1);
                if (O::is_zero(b)) continue;
                if (O::is_zero(a) || !O::divides(a, b)) {
                    bad = i;
                    break;
                }
            }
            if (bad < 0) return;
            /* couple the two diagonal entries and re-reduce */
            col_add(bad, bad + 1);
            eliminate_from(bad);
        }
    }

    void run() {
        eliminate_from(0);
        fix_signs_and_chain();
    }
};

IntMatrix mat_to_mpz(const Mat& a) {
    IntMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.a.size(); ++i) r.a[i] = z_of(a.a[i]);
    return r;
}

std::optional<Mat> try_to_ll(const IntMatrix& a) {
    Mat r(a.rows, a.cols);
    for (size_t i = 0; i < a.a.size(); ++i) {
        if (!a.a[i].fits_slong_p()) return std::nullopt;
        r.a[i] = a.a[i].get_si();
    }
    return r;
}

IntMatrix ll_to_intmatrix(const Mat& a) { return mat_to_mpz(a); }

IntMatrix mul_z(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw internal_error("matrix product shape");
    IntMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const mpz_class& e = x.at(i, k);
            if (sgn(e) == 0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += e * y.at(k, j);
        }
    return r;
}

void verify_snf(const IntMatrix& a, const SnfExtended& s) {
    if (!(mul_z(mul_z(s.u, a), s.v) == s.d)) throw internal_error("snf: u*a*v != d");
    if (!(mul_z(s.u, s.u_inv) == IntMatrix::identity(a.rows)))
        throw internal_error("snf: u_inv is not an inverse");
    if (!(mul_z(s.v, s.v_inv) == IntMatrix::identity(a.cols)))
        throw internal_error("snf: v_inv is not an inverse");
    int n = std::min(a.rows, a.cols);
    for (int i = 0; i < n; ++i) {
        if (sgn(s.d.at(i, i)) < 0) throw internal_error("snf: negative diagonal");
        if (i + 1 < n && sgn(s.d.at(i + 1, i + 1)) != 0 &&
            !(sgn(s.d.at(i, i)) != 0 &&
              mpz_divisible_p(s.d.at(i + 1, i + 1).get_mpz_t(), s.d.at(i, i).get_mpz_t())))
            throw internal_error("snf: divisibility chain broken");
    }
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (i != j && sgn(s.d.at(i, j)) != 0) throw internal_error("snf: d not diagonal");
}

}  // namespace

SnfExtended smith_normal_form_ext(const IntMatrix& a) {
    SnfExtended out;
    bool done = false;
    if (auto small = try_to_ll(a)) {
        try {
            SnfCore<long long> core(*small);
            core.run();
            out = SnfExtended{ll_to_intmatrix(core.u), ll_to_intmatrix(core.w),
                              ll_to_intmatrix(core.v), ll_to_intmatrix(core.ui),
                              ll_to_intmatrix(core.vi)};
            done = true;
        } catch (const ovf&) {
        }
    }
    if (!done) {
        SnfCore<mpz_class> core(a);
        core.run();
        out = SnfExtended{core.u, core.w, core.v, core.ui, core.vi};
    }
    verify_snf(a, out);
    return out;
}

SnfDecomposition smith_normal_form(const IntMatrix& a) {
    SnfExtended e = smith_normal_form_ext(a);
    return SnfDecomposition{std::move(e.u), std::move(e.d), std::move(e.v)};
}

namespace {

Mat reduce_mat(const Mat& a, long long m) {
    Mat r = a;
    for (auto& e : r.a) e = mod_reduce(e, m);
    return r;
}

Mat reduce_mpz_mat(const IntMatrix& a, long long m) {
    Mat r(a.rows, a.cols);
    mpz_class mm = z_of(m), t;
    for (size_t i = 0; i < a.a.size(); ++i) {
        mpz_mod(t.get_mpz_t(), a.a[i].get_mpz_t(), mm.get_mpz_t());
        r.a[i] = t.get_si();
    }
    return r;
}

}  // namespace

SnfMod snf_mod(const Mat& a, long long m) {
    if (m < 2) throw internal_error("snf_mod: modulus");
    SnfMod out;
    bool done = false;
    try {
        SnfCore<long long> core(a);
        core.run();
        out = SnfMod{reduce_mat(core.u, m), core.w, reduce_mat(core.v, m),
                     reduce_mat(core.ui, m), reduce_mat(core.vi, m)};
        done = true;
    } catch (const ovf&) {
    }
    if (!done) {
        SnfCore<mpz_class> core(mat_to_mpz(a));
        core.run();
        out = SnfMod{reduce_mpz_mat(core.u, m), Mat(), reduce_mpz_mat(core.v, m),
                     reduce_mpz_mat(core.ui, m), reduce_mpz_mat(core.vi, m)};
        Mat d(a.rows, a.cols);
        int n = std::min(a.rows, a.cols);
        for (int i = 0; i < n; ++i) {
            if (!core.w.at(i, i).fits_slong_p())
                throw internal_error("snf_mod: diagonal entry out of range");
            d.at(i, i) = core.w.at(i, i).get_si();
        }
        out.d = d;
    }
    return out;
}

SolveModMany::SolveModMany(Mat a, std::vector<long long> col_moduli, long long mm)
    : nvars(a.rows), ncols(a.cols), m(mm) {
    if (static_cast<int>(col_moduli.size()) != a.cols)
        throw internal_error("solve_mod: moduli shape");
    for (long long mu : col_moduli)
        if (mu < 1 || m % mu != 0) throw internal_error("solve_mod: column modulus must divide m");
    Mat big = vstack(a, Mat::diag(col_moduli));
    f = snf_mod(big, m);
    for (int j = 0; j < ncols; ++j) {
        long long dj = f.d.at(j, j);
        if (dj <= 0 || m % dj != 0) throw internal_error("solve_mod: lattice not moduli-complete");
    }
}

bool SolveModMany::solvable(const std::vector<long long>& b) const {
    if (static_cast<int>(b.size()) != ncols) throw internal_error("solve_mod: rhs shape");
    for (int j = 0; j < ncols; ++j) {
        __int128 acc = 0;
        for (int k = 0; k < ncols; ++k) acc += static_cast<__int128>(b[k]) * f.v.at(k, j);
        long long w = static_cast<long long>(acc % m);
        if (w % f.d.at(j, j) != 0) return false;
    }
    return true;
}

std::optional<std::vector<long long>> SolveModMany::solve(const std::vector<long long>& b) const {
    if (static_cast<int>(b.size()) != ncols) throw internal_error("solve_mod: rhs shape");
    std::vector<long long> z(ncols);
    for (int j = 0; j < ncols; ++j) {
        __int128 acc = 0;
        for (int k = 0; k < ncols; ++k) acc += static_cast<__int128>(b[k]) * f.v.at(k, j);
        long long w = mod_reduce(static_cast<long long>(acc % m), m);
        if (w % f.d.at(j, j) != 0) return std::nullopt;
        z[j] = w / f.d.at(j, j);
    }
    std::vector<long long> x(nvars);
    for (int i = 0; i < nvars; ++i) {
        __int128 acc = 0;
        for (int j = 0; j < ncols; ++j) acc += static_cast<__int128>(z[j]) * f.u.at(j, i);
        x[i] = mod_reduce(static_cast<long long>(acc % m), m);
    }
    return x;
}

std::optional<std::vector<long long>> solve_mod(const Mat& a, const std::vector<long long>& b,
                                                const std::vector<long long>& col_moduli,
                                                long long m) {
    SolveModMany s(a, col_moduli, m);
    return s.solve(b);
}

Mat left_kernel_mod(const Mat& a, const std::vector<long long>& col_moduli, long long m) {
    if (static_cast<int>(col_moduli.size()) != a.cols)
        throw internal_error("left_kernel_mod: moduli shape");
    Mat big = vstack(a, Mat::diag(col_moduli));
    SnfMod f = snf_mod(big, m);
    /* rank equals cols (the modulus rows force full column rank), so the
       null combinations are exactly the u-rows past index cols */
    Mat out(a.rows, a.rows);
    for (int r = a.cols; r < big.rows; ++r)
        for (int c = 0; c < a.rows; ++c) out.at(r - a.cols, c) = f.u.at(r, c);
    return out;
}

Mat mat_mul_mod(const Mat& x, const Mat& y, const std::vector<long long>& col_moduli) {
    if (x.cols != y.rows || static_cast<int>(col_moduli.size()) != y.cols)
        throw internal_error("mat_mul_mod shape");
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < y.cols; ++j) {
            __int128 acc = 0;
            for (int k = 0; k < x.cols; ++k) acc += static_cast<__int128>(x.at(i, k)) * y.at(k, j);
            r.at(i, j) = mod_reduce(static_cast<long long>(acc % col_moduli[j]), col_moduli[j]);
        }
    return r;
}

Mat mat_mul_mod(const Mat& x, const Mat& y, long long m) {
    return mat_mul_mod(x, y, std::vector<long long>(y.cols, m));
}

Mat vstack(const Mat& top, const Mat& bottom) {
    if (top.cols != bottom.cols && top.rows != 0 && bottom.rows != 0)
        throw internal_error("vstack shape");
    int cols = top.rows != 0 || top.cols != 0 ? top.cols : bottom.cols;
    Mat r(top.rows + bottom.rows, cols);
    for (int i = 0; i < top.rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(i, j) = top.at(i, j);
    for (int i = 0; i < bottom.rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(top.rows + i, j) = bottom.at(i, j);
    return r;
}

Mat hstack(const Mat& left, const Mat& right) {
    if (left.rows != right.rows) throw internal_error("hstack shape");
    Mat r(left.rows, left.cols + right.cols);
    for (int i = 0; i < left.rows; ++i) {
        for (int j = 0; j < left.cols; ++j) r.at(i, j) = left.at(i, j);
        for (int j = 0; j < right.cols; ++j) r.at(i, left.cols + j) = right.at(i, j);
    }
    return r;
}

std::vector<long long> row_times_mat(const std::vector<long long>& x, const Mat& a,
                                     const std::vector<long long>& col_moduli) {
    if (static_cast<int>(x.size()) != a.rows || static_cast<int>(col_moduli.size()) != a.cols)
        throw internal_error("row_times_mat shape");
    std::vector<long long> r(a.cols);
    for (int j = 0; j < a.cols; ++j) {
        __int128 acc = 0;
        for (int i = 0; i < a.rows; ++i) acc += static_cast<__int128>(x[i]) * a.at(i, j);
        r[j] = mod_reduce(static_cast<long long>(acc % col_moduli[j]), col_moduli[j]);
    }
    return r;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

long long lcm_ll(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

std::vector<long long> divisors_of(long long m) {
    std::vector<long long> out;
    for (long long d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        out.push_back(d);
        if (d != m / d) out.push_back(m / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Mat to_mat(const IntMatrix& a, long long m) {
    if (m < 2 || m >= (1ll << 31)) throw input_error("modulus out of module-layer range [2, 2^31)");
    return reduce_mpz_mat(a, m);
}

IntMatrix to_intmatrix(const Mat& a) { return ll_to_intmatrix(a); }

namespace {

std::optional<std::vector<mpz_class>> solve_exact_z(const IntMatrix& a,
                                                    const std::vector<mpz_class>& b) {
    if (static_cast<int>(b.size()) != a.cols) throw input_error("solve_linear: rhs length");
    SnfExtended f = smith_normal_form_ext(a);
    std::vector<mpz_class> w(a.cols);
    for (int j = 0; j < a.cols; ++j) {
        mpz_class acc = 0;
        for (int k = 0; k < a.cols; ++k) acc += b[k] * f.v.at(k, j);
        w[j] = acc;
    }
    int n = std::min(a.rows, a.cols);
    std::vector<mpz_class> z(a.rows);
    for (int j = 0; j < a.cols; ++j) {
        const mpz_class dj = j < n ? f.d.at(j, j) : mpz_class(0);
        if (sgn(dj) == 0) {
            if (sgn(w[j]) != 0) return std::nullopt;
        } else {
            if (!mpz_divisible_p(w[j].get_mpz_t(), dj.get_mpz_t())) return std::nullopt;
            z[j] = w[j] / dj;
        }
    }
    std::vector<mpz_class> x(a.rows);
    for (int i = 0; i < a.rows; ++i) {
        mpz_class acc = 0;
        for (int j = 0; j < a.rows; ++j) acc += z[j] * f.u.at(j, i);
        x[i] = acc;
    }
    return x;
}

}  // namespace

std::optional<std::vector<mpz_class>> solve_linear(
    const IntMatrix& a, const std::vector<mpz_class>& b, const Ring& ring,
    const std::optional<std::vector<mpz_class>>& row_moduli) {
    if (static_cast<int>(b.size()) != a.cols) throw input_error("solve_linear: rhs length");
    if (!ring.modular()) {
        if (row_moduli) throw input_error("solve_linear: row_moduli require a modular ring");
        auto x = solve_exact_z(a, b);
        if (x && self_check()) {
            for (int j = 0; j < a.cols; ++j) {
                mpz_class acc = 0;
                for (int i = 0; i < a.rows; ++i) acc += (*x)[i] * a.at(i, j);
                if (acc != b[j]) throw internal_error("solve_linear: witness check failed");
            }
        }
        return x;
    }

    const mpz_class& m = ring.modulus;
    std::vector<mpz_class> scale(a.rows, 1);
    if (row_moduli) {
        if (static_cast<int>(row_moduli->size()) != a.rows)
            throw input_error("solve_linear: row_moduli length");
        for (int i = 0; i < a.rows; ++i) {
            const mpz_class& s = (*row_moduli)[i];
            if (s < 1 || !mpz_divisible_p(m.get_mpz_t(), s.get_mpz_t()))
                throw input_error("solve_linear: each row modulus must divide the ring modulus");
            scale[i] = m / s;
        }
    }
    IntMatrix big(a.rows + a.cols, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) big.at(i, j) = scale[i] * a.at(i, j);
    for (int j = 0; j < a.cols; ++j) big.at(a.rows + j, j) = m;

    std::vector<mpz_class> bb = b;
    auto sol = solve_exact_z(big, bb);
    if (!sol) return std::nullopt;
    std::vector<mpz_class> x(a.rows);
    for (int i = 0; i < a.rows; ++i) {
        mpz_class val = scale[i] * (*sol)[i];
        mpz_mod(x[i].get_mpz_t(), val.get_mpz_t(), m.get_mpz_t());
    }
    /* witness check: x*a ≡ b (mod m) */
    for (int j = 0; j < a.cols; ++j) {
        mpz_class acc = 0;
        for (int i = 0; i < a.rows; ++i) acc += x[i] * a.at(i, j);
        acc -= b[j];
        if (!mpz_divisible_p(acc.get_mpz_t(), m.get_mpz_t()))
            throw internal_error("solve_linear: modular witness check failed");
    }
    return x;
}

}  // namespace modexact
