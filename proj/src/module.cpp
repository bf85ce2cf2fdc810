#include "modexact/module.hpp"

#include <climits>
#include <map>

namespace modexact {

long long FpModule::order() const {
    __int128 p = 1;
    for (long long d : inv) {
        p *= d;
        if (p > LLONG_MAX) return LLONG_MAX;
    }
    return static_cast<long long>(p);
}

namespace {

long long modulus_ll(const Ring& ring) {
    if (!ring.modular()) throw input_error("modules require a modular ring (m >= 2)");
    if (!ring.modulus.fits_slong_p()) throw input_error("modulus out of module-layer range");
    long long m = ring.modulus.get_si();
    if (m < 2 || m >= (1ll << 31)) throw input_error("modulus out of module-layer range [2, 2^31)");
    return m;
}

Mat reduce_cols(Mat a, const std::vector<long long>& moduli) {
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) a.at(i, j) = mod_reduce(a.at(i, j), moduli[j]);
    return a;
}

void check_well_defined(const FpModule& src, const FpModule& tgt, const Mat& a) {
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if ((src.inv[i] * a.at(i, j)) % tgt.inv[j] != 0)
                throw input_error("matrix does not define a morphism (well-definedness)");
}

}  // namespace

Morphism morphism_unchecked(const FpModule& src, const FpModule& tgt, Mat a) {
    if (a.rows != src.ngens() || a.cols != tgt.ngens())
        throw input_error("morphism matrix shape mismatch");
    a = reduce_cols(std::move(a), tgt.inv);
    if (self_check()) check_well_defined(src, tgt, a);
    return Morphism{src, tgt, std::move(a)};
}

Morphism morphism(const FpModule& src, const FpModule& tgt, const Mat& a) {
    if (a.rows != src.ngens() || a.cols != tgt.ngens())
        throw input_error("morphism matrix shape mismatch");
    Mat r = reduce_cols(a, tgt.inv);
    check_well_defined(src, tgt, r);
    return Morphism{src, tgt, std::move(r)};
}

Morphism morphism(const FpModule& src, const FpModule& tgt, const IntMatrix& a) {
    return morphism(src, tgt, to_mat(a, src.m));
}

Morphism identity_morphism(const FpModule& a) {
    return Morphism{a, a, Mat::identity(a.ngens())};
}

Morphism zero_morphism(const FpModule& src, const FpModule& tgt) {
    return Morphism{src, tgt, Mat(src.ngens(), tgt.ngens())};
}

Morphism compose(const Morphism& f, const Morphism& g) {
    if (!f.target.same_type(g.source)) throw input_error("compose: target/source mismatch");
    return Morphism{f.source, g.target, mat_mul_mod(f.a, g.a, g.target.inv)};
}

Morphism add(const Morphism& f, const Morphism& g) {
    if (!f.source.same_type(g.source) || !f.target.same_type(g.target))
        throw input_error("add: type mismatch");
    Mat r = f.a;
    for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j)
            r.at(i, j) = mod_reduce(r.at(i, j) + g.a.at(i, j), f.target.inv[j]);
    return Morphism{f.source, f.target, std::move(r)};
}

Morphism negate(const Morphism& f) {
    Mat r = f.a;
    for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j) r.at(i, j) = mod_reduce(-r.at(i, j), f.target.inv[j]);
    return Morphism{f.source, f.target, std::move(r)};
}

bool morphism_eq(const Morphism& f, const Morphism& g) {
    return f.source.same_type(g.source) && f.target.same_type(g.target) && f.a == g.a;
}

bool is_zero(const Morphism& f) {
    for (long long e : f.a.a)
        if (e != 0) return false;
    return true;
}

ModElement element(const FpModule& parent, const std::vector<long long>& coords) {
    if (static_cast<int>(coords.size()) != parent.ngens())
        throw input_error("element coordinate length mismatch");
    ModElement e{parent, coords};
    for (int i = 0; i < parent.ngens(); ++i) e.coords[i] = mod_reduce(e.coords[i], parent.inv[i]);
    return e;
}

ModElement zero_element(const FpModule& parent) {
    return ModElement{parent, std::vector<long long>(parent.ngens(), 0)};
}

std::vector<long long> apply_coords(const Morphism& f, const std::vector<long long>& coords) {
    return row_times_mat(coords, f.a, f.target.inv);
}

ModElement apply(const Morphism& f, const ModElement& x) {
    if (!x.parent.same_type(f.source)) throw input_error("apply: element not in the source");
    return ModElement{f.target, apply_coords(f, x.coords)};
}

bool element_is_zero(const ModElement& x) {
    for (long long c : x.coords)
        if (c != 0) return false;
    return true;
}

FpModule module_from_presentation(const Ring& ring, const IntMatrix& rel) {
    long long m = modulus_ll(ring);
    int g = rel.cols;
    Mat relm = to_mat(rel, m);
    Mat big = vstack(relm, Mat::diag(std::vector<long long>(g, m)));
    SnfMod f = snf_mod(big, m);

    FpModule out;
    out.ring = ring;
    out.m = m;
    std::vector<int> keep;
    for (int j = 0; j < g; ++j) {
        long long dj = f.d.at(j, j);
        if (dj <= 0 || m % dj != 0)
            throw internal_error("presentation: invariant factor must divide m");
        if (dj >= 2) {
            keep.push_back(j);
            out.inv.push_back(dj);
        }
    }
    int k = static_cast<int>(keep.size());
    Mat tc(g, k), fc(k, g);
    for (int c = 0; c < k; ++c) {
        for (int r = 0; r < g; ++r) tc.at(r, c) = mod_reduce(f.v.at(r, keep[c]), out.inv[c]);
        for (int r = 0; r < g; ++r) fc.at(c, r) = f.v_inv.at(keep[c], r);
    }
    out.original_presentation = rel;
    out.to_can = std::move(tc);
    out.from_can = std::move(fc);
    return out;
}

FpModule fp_module(const Ring& ring, const std::vector<long long>& factors) {
    long long m = modulus_ll(ring);
    for (long long d : factors) {
        if (d < 1) throw input_error("invariant factors must be positive");
        if (m % d != 0) throw input_error("each invariant factor must divide the modulus");
    }
    IntMatrix rel(static_cast<int>(factors.size()), static_cast<int>(factors.size()));
    for (size_t i = 0; i < factors.size(); ++i)
        rel.at(static_cast<int>(i), static_cast<int>(i)) = z_of(factors[i]);
    return module_from_presentation(ring, rel);
}

FpModule cyclic(const Ring& ring, long long d) { return fp_module(ring, {d}); }

FpModule zero_module(const Ring& ring) { return fp_module(ring, {}); }

DirectSum direct_sum(const FpModule& a, const FpModule& b) {
    if (!(a.ring == b.ring)) throw input_error("direct_sum: ring mismatch");
    std::vector<long long> merged = a.inv;
    merged.insert(merged.end(), b.inv.begin(), b.inv.end());
    IntMatrix rel(static_cast<int>(merged.size()), static_cast<int>(merged.size()));
    for (size_t i = 0; i < merged.size(); ++i)
        rel.at(static_cast<int>(i), static_cast<int>(i)) = z_of(merged[i]);
    FpModule s = module_from_presentation(a.ring, rel);

    int ka = a.ngens(), kb = b.ngens(), k = s.ngens();
    const Mat& tc = *s.to_can;
    const Mat& fc = *s.from_can;
    Mat ia(ka, k), ib(kb, k), pa(k, ka), pb(k, kb);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < ka; ++i) {
            ia.at(i, j) = tc.at(i, j);
            pa.at(j, i) = mod_reduce(fc.at(j, i), a.inv[i]);
        }
        for (int i = 0; i < kb; ++i) {
            ib.at(i, j) = tc.at(ka + i, j);
            pb.at(j, i) = mod_reduce(fc.at(j, ka + i), b.inv[i]);
        }
    }
    DirectSum out{s, morphism_unchecked(a, s, std::move(ia)),
                  morphism_unchecked(b, s, std::move(ib)),
                  morphism_unchecked(s, a, std::move(pa)),
                  morphism_unchecked(s, b, std::move(pb))};
    if (self_check()) {
        if (!morphism_eq(compose(out.inj_a, out.proj_a), identity_morphism(a)) ||
            !morphism_eq(compose(out.inj_b, out.proj_b), identity_morphism(b)) ||
            !is_zero(compose(out.inj_a, out.proj_b)) || !is_zero(compose(out.inj_b, out.proj_a)))
            throw internal_error("direct_sum: biproduct identities failed");
    }
    return out;
}

SubObject submodule(const FpModule& ambient, const Mat& gens) {
    if (gens.cols != ambient.ngens()) throw input_error("submodule: generator shape");
    Mat g = reduce_cols(gens, ambient.inv);
    Mat rel = left_kernel_mod(g, ambient.inv, ambient.m);
    FpModule sub = module_from_presentation(ambient.ring, to_intmatrix(rel));
    Mat incl = mat_mul_mod(*sub.from_can, g, ambient.inv);
    SubObject out{sub, morphism_unchecked(sub, ambient, std::move(incl)), *sub.to_can};
    if (self_check()) {
        if (!is_mono(out.incl)) throw internal_error("submodule: inclusion not mono");
        Mat back = mat_mul_mod(out.express, out.incl.a, ambient.inv);
        if (!(back == g)) throw internal_error("submodule: express does not recover generators");
    }
    return out;
}

SubObject kernel(const Morphism& f) {
    Mat lat = left_kernel_mod(f.a, f.target.inv, f.source.m);
    SubObject out = submodule(f.source, lat);
    if (self_check() && !is_zero(compose(out.incl, f)))
        throw internal_error("kernel: inclusion composed with f is nonzero");
    return out;
}

QuotObject cokernel(const Morphism& f) {
    Mat rel = vstack(f.a, Mat::diag(f.target.inv));
    FpModule q = module_from_presentation(f.target.ring, to_intmatrix(rel));
    QuotObject out{q, morphism_unchecked(f.target, q, *q.to_can)};
    if (self_check()) {
        if (!is_epi(out.proj)) throw internal_error("cokernel: projection not epi");
        if (!is_zero(compose(f, out.proj)))
            throw internal_error("cokernel: f composed with projection is nonzero");
    }
    return out;
}

ImageFact image(const Morphism& f) {
    SubObject s = submodule(f.target, f.a);
    Morphism core = morphism_unchecked(f.source, s.sub, s.express);
    ImageFact out{s.sub, s.incl, std::move(core)};
    if (self_check() && !morphism_eq(compose(out.corestriction, out.incl), f))
        throw internal_error("image: factorization does not recompose");
    return out;
}

bool is_mono(const Morphism& f) {
    /* trivial kernel iff the solution lattice of x*a = 0 is exactly the
       relation lattice of the source */
    Mat lat = left_kernel_mod(f.a, f.target.inv, f.source.m);
    for (int i = 0; i < lat.rows; ++i) {
        for (int j = 0; j < lat.cols; ++j)
            if (mod_reduce(lat.at(i, j), f.source.inv[j]) != 0) return false;
    }
    return true;
}

bool is_epi(const Morphism& f) {
    /* every target generator reachable: x*a = e_j solvable for each j */
    SolveModMany sys(f.a, f.target.inv, f.source.m);
    std::vector<long long> b(f.target.ngens(), 0);
    for (int j = 0; j < f.target.ngens(); ++j) {
        b[j] = 1;
        bool ok = sys.solvable(b);
        b[j] = 0;
        if (!ok) return false;
    }
    return true;
}

bool is_iso(const Morphism& f) {
    return f.source.inv == f.target.inv && is_mono(f) && is_epi(f);
}

std::optional<Morphism> subobject_leq(const Morphism& u, const Morphism& v) {
    if (!u.target.same_type(v.target)) throw input_error("subobject_leq: different ambients");
    if (!is_mono(u) || !is_mono(v)) throw input_error("subobject_leq requires monomorphisms");
    return solve_left(u, v);
}

std::optional<Morphism> solve_left(const Morphism& f, const Morphism& g) {
    if (!f.target.same_type(g.target)) throw input_error("solve_left: targets differ");
    const FpModule& x = f.source;
    const FpModule& y = g.source;
    const FpModule& t = f.target;
    int kx = x.ngens(), ky = y.ngens(), kt = t.ngens();
    Mat h(kx, ky);
    std::map<long long, SolveModMany> sys;
    for (int i = 0; i < kx; ++i) {
        long long dx = x.inv[i];
        auto it = sys.find(dx);
        if (it == sys.end()) {
            Mat scaled(ky, kt);
            for (int yy = 0; yy < ky; ++yy) {
                long long sc = y.inv[yy] / gcd_ll(dx, y.inv[yy]);
                for (int c = 0; c < kt; ++c)
                    scaled.at(yy, c) = mod_reduce(sc * g.a.at(yy, c), x.m);
            }
            it = sys.emplace(dx, SolveModMany(std::move(scaled), t.inv, x.m)).first;
        }
        std::vector<long long> b(kt);
        for (int c = 0; c < kt; ++c) b[c] = f.a.at(i, c);
        auto z = it->second.solve(b);
        if (!z) return std::nullopt;
        for (int yy = 0; yy < ky; ++yy) {
            long long sc = y.inv[yy] / gcd_ll(dx, y.inv[yy]);
            h.at(i, yy) = mod_reduce(sc * (*z)[yy], y.inv[yy]);
        }
    }
    Morphism out = morphism_unchecked(x, y, std::move(h));
    if (!morphism_eq(compose(out, g), f)) throw internal_error("solve_left: witness check failed");
    return out;
}

std::optional<Morphism> solve_right(const Morphism& f, const Morphism& g) {
    if (!f.source.same_type(g.source)) throw input_error("solve_right: sources differ");
    const FpModule& s = f.source;
    const FpModule& x = f.target;
    const FpModule& y = g.target;
    int ks = s.ngens(), kx = x.ngens(), ky = y.ngens();
    Mat h(ky, kx);
    std::map<long long, SolveModMany> sys;
    for (int c = 0; c < kx; ++c) {
        long long dx = x.inv[c];
        auto it = sys.find(dx);
        if (it == sys.end()) {
            Mat r(ky, ks);
            for (int yy = 0; yy < ky; ++yy) {
                long long sc = dx / gcd_ll(y.inv[yy], dx);
                for (int a = 0; a < ks; ++a) r.at(yy, a) = mod_reduce(sc * g.a.at(a, yy), x.m);
            }
            it = sys.emplace(dx, SolveModMany(std::move(r), std::vector<long long>(ks, dx), x.m))
                     .first;
        }
        std::vector<long long> b(ks);
        for (int a = 0; a < ks; ++a) b[a] = f.a.at(a, c);
        auto z = it->second.solve(b);
        if (!z) return std::nullopt;
        for (int yy = 0; yy < ky; ++yy) {
            long long sc = dx / gcd_ll(y.inv[yy], dx);
            h.at(yy, c) = mod_reduce(sc * (*z)[yy], dx);
        }
    }
    Morphism out = morphism_unchecked(y, x, std::move(h));
    if (!morphism_eq(compose(g, out), f)) throw internal_error("solve_right: witness check failed");
    return out;
}

bool in_multiple_submodule(const FpModule& mod, const std::vector<long long>& coords,
                          long long d) {
    for (int j = 0; j < mod.ngens(); ++j)
        if (coords[j] % gcd_ll(d, mod.inv[j]) != 0) return false;
    return true;
}

}  // namespace modexact
