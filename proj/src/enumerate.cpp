#include "modexact/enumerate.hpp"

#include <climits>

namespace modexact {

HomGroup hom_group(const FpModule& a, const FpModule& b) {
    if (!(a.ring == b.ring)) throw input_error("hom_group: ring mismatch");
    HomGroup h;
    h.source = a;
    h.target = b;
    h.orders.reserve(static_cast<size_t>(a.ngens()) * b.ngens());
    for (int i = 0; i < a.ngens(); ++i)
        for (int j = 0; j < b.ngens(); ++j) h.orders.push_back(gcd_ll(a.inv[i], b.inv[j]));
    return h;
}

long long HomGroup::count_saturated() const {
    __int128 p = 1;
    for (long long o : orders) {
        p *= o;
        if (p > LLONG_MAX) return LLONG_MAX;
    }
    return static_cast<long long>(p);
}

Mat HomGroup::matrix_from_coeffs(const std::vector<long long>& c) const {
    if (static_cast<int>(c.size()) != ncoeffs())
        throw input_error("hom coefficient length mismatch");
    int kb = target.ngens();
    Mat a(source.ngens(), kb);
    for (int idx = 0; idx < ncoeffs(); ++idx) {
        int i = idx / kb, j = idx % kb;
        long long step = target.inv[j] / orders[idx];
        a.at(i, j) = mod_reduce(c[idx] % orders[idx] * step, target.inv[j]);
    }
    return a;
}

std::vector<long long> HomGroup::coeffs_from_matrix(const Mat& a) const {
    if (a.rows != source.ngens() || a.cols != target.ngens())
        throw input_error("hom matrix shape mismatch");
    int kb = target.ngens();
    std::vector<long long> c(orders.size());
    for (int idx = 0; idx < ncoeffs(); ++idx) {
        int i = idx / kb, j = idx % kb;
        long long step = target.inv[j] / orders[idx];
        long long e = mod_reduce(a.at(i, j), target.inv[j]);
        if (e % step != 0)
            throw input_error("matrix entry incompatible with a well-defined morphism");
        c[idx] = e / step;
    }
    return c;
}

Morphism HomGroup::from_coeffs(const std::vector<long long>& c) const {
    return morphism_unchecked(source, target, matrix_from_coeffs(c));
}

std::vector<long long> HomGroup::to_coeffs(const Morphism& f) const {
    return coeffs_from_matrix(f.a);
}

Morphism HomGroup::generator(int idx) const {
    std::vector<long long> c(orders.size(), 0);
    c[idx] = 1;
    return from_coeffs(c);
}

namespace {

/* odometer over mixed radii; last position fastest (lexicographic order) */
bool advance(std::vector<long long>& digits, const std::vector<long long>& radii) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[i] < radii[i]) return true;
        digits[i] = 0;
    }
    return false;
}

}  // namespace

void for_each_element(const FpModule& mod,
                      const std::function<bool(const std::vector<long long>&)>& fn) {
    std::vector<long long> coords(mod.ngens(), 0);
    do {
        if (!fn(coords)) return;
    } while (advance(coords, mod.inv));
}

void for_each_hom_matrix(const HomGroup& h, const std::function<bool(const Mat&)>& fn) {
    int n = h.ncoeffs();
    int kb = h.target.ngens();
    Mat a(h.source.ngens(), kb);
    if (n == 0) {
        fn(a);
        return;
    }
    /* a.a[idx] is exactly entry idx in row-major order; update in place */
    std::vector<long long> c(n, 0), step(n);
    for (int idx = 0; idx < n; ++idx) step[idx] = h.target.inv[idx % kb] / h.orders[idx];
    while (true) {
        if (!fn(a)) return;
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++c[i] < h.orders[i]) {
                a.a[i] = c[i] * step[i];
                break;
            }
            c[i] = 0;
            a.a[i] = 0;
        }
        if (i < 0) return;
    }
}

std::vector<ModElement> enumerate_elements(const FpModule& mod) {
    long long n = mod.order();
    if (n > caps().hom)
        throw cap_error("element enumeration needs order " + std::to_string(n) +
                        " > cap " + std::to_string(caps().hom) + " (hom)");
    std::vector<ModElement> out;
    out.reserve(static_cast<size_t>(n));
    for_each_element(mod, [&](const std::vector<long long>& coords) {
        out.push_back(ModElement{mod, coords});
        return true;
    });
    return out;
}

std::vector<Morphism> enumerate_hom(const FpModule& a, const FpModule& b) {
    HomGroup h = hom_group(a, b);
    long long n = h.count_saturated();
    if (n > caps().hom)
        throw cap_error("hom enumeration needs " + std::to_string(n) + " > cap " +
                        std::to_string(caps().hom) + " (hom)");
    std::vector<Morphism> out;
    out.reserve(static_cast<size_t>(n));
    for_each_hom_matrix(h, [&](const Mat& mat) {
        out.push_back(morphism_unchecked(a, b, mat));
        return true;
    });
    return out;
}

long long element_index(const FpModule& mod, const std::vector<long long>& coords) {
    long long idx = 0;
    for (int i = 0; i < mod.ngens(); ++i)
        idx = idx * mod.inv[i] + mod_reduce(coords[i], mod.inv[i]);
    return idx;
}

std::vector<long long> element_coords(const FpModule& mod, long long index) {
    std::vector<long long> coords(mod.ngens(), 0);
    for (int i = mod.ngens() - 1; i >= 0; --i) {
        coords[i] = index % mod.inv[i];
        index /= mod.inv[i];
    }
    return coords;
}

}  // namespace modexact
