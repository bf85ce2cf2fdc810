#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "modexact/enumerate.hpp"
#include "modexact/module.hpp"
#include "modexact/subgroups.hpp"

using namespace modexact;

static const bool self_check_on = (self_check() = true);

/* ---- oracles ------------------------------------------------------------ */

/* all well-defined morphism matrices, by filtering every candidate matrix;
   independent of the HomGroup generator construction */
static std::vector<Mat> brute_hom(const FpModule& a, const FpModule& b) {
    int ka = a.ngens(), kb = b.ngens();
    std::vector<long long> radii(static_cast<size_t>(ka) * kb);
    for (int i = 0; i < ka; ++i)
        for (int j = 0; j < kb; ++j) radii[static_cast<size_t>(i) * kb + j] = b.inv[j];
    std::vector<long long> digits(radii.size(), 0);
    std::vector<Mat> out;
    while (true) {
        Mat m(ka, kb);
        for (size_t t = 0; t < digits.size(); ++t) m.a[t] = digits[t];
        bool ok = true;
        for (int i = 0; i < ka && ok; ++i)
            for (int j = 0; j < kb && ok; ++j)
                if ((a.inv[i] * m.at(i, j)) % b.inv[j] != 0) ok = false;
        if (ok) out.push_back(m);
        int i = static_cast<int>(digits.size()) - 1;
        for (; i >= 0; --i) {
            if (++digits[i] < radii[i]) break;
            digits[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

static long long hom_card_formula(const FpModule& a, const FpModule& b) {
    long long n = 1;
    for (long long da : a.inv)
        for (long long db : b.inv) n *= gcd_ll(da, db);
    return n;
}

static std::vector<long long> sorted_keys(const std::vector<Mat>& ms) {
    std::vector<long long> keys;
    for (const auto& m : ms) {
        long long k = 0;
        for (long long e : m.a) k = k * 97 + e;
        keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

/* ---- frozen cases ------------------------------------------------------- */

TEST_CASE("presentation canonicalization") {
    Ring r12 = Ring::mod(12), r4 = Ring::mod(4);
    IntMatrix rel(2, 2);
    rel.at(0, 0) = 2;
    rel.at(1, 1) = 4;
    CHECK(module_from_presentation(r12, rel).inv == std::vector<long long>{2, 4});
    CHECK(module_from_presentation(r4, IntMatrix::identity(2)).inv.empty());
    CHECK(module_from_presentation(r4, IntMatrix(0, 2)).inv == std::vector<long long>{4, 4});
}

TEST_CASE("fp_module validates factors") {
    Ring r4 = Ring::mod(4);
    CHECK(fp_module(r4, {1, 2}).inv == std::vector<long long>{2});
    CHECK(fp_module(r4, {}).is_zero());
    CHECK_THROWS_AS(fp_module(r4, {3}), input_error);
    CHECK_THROWS_AS(fp_module(r4, {0}), input_error);
    CHECK(fp_module(Ring::mod(12), {2, 3}).inv == std::vector<long long>{6});
    CHECK(fp_module(Ring::mod(12), {4, 2}).inv == std::vector<long long>{2, 4});
}

TEST_CASE("direct sums") {
    Ring r4 = Ring::mod(4), r12 = Ring::mod(12);
    FpModule z2 = cyclic(r4, 2), z4 = cyclic(r4, 4);
    CHECK(direct_sum(z2, z2).sum.inv == std::vector<long long>{2, 2});
    CHECK(direct_sum(z2, z4).sum.inv == std::vector<long long>{2, 4});
    CHECK(direct_sum(cyclic(r12, 2), cyclic(r12, 3)).sum.inv == std::vector<long long>{6});

    DirectSum ds = direct_sum(z2, z4);
    CHECK(morphism_eq(compose(ds.inj_a, ds.proj_a), identity_morphism(z2)));
    CHECK(morphism_eq(compose(ds.inj_b, ds.proj_b), identity_morphism(z4)));
    CHECK(is_zero(compose(ds.inj_a, ds.proj_b)));
    CHECK(is_mono(ds.inj_a));
    CHECK(is_epi(ds.proj_b));
    CHECK_THROWS_AS(direct_sum(z2, cyclic(r12, 2)), input_error);
}

TEST_CASE("kernel of multiplication by 2 on Z/4") {
    Ring r4 = Ring::mod(4);
    FpModule z4 = cyclic(r4, 4);
    Mat two(1, 1);
    two.at(0, 0) = 2;
    Morphism f = morphism(z4, z4, two);
    SubObject k = kernel(f);
    CHECK(k.sub.inv == std::vector<long long>{2});
    /* embedded as the multiples of 2 */
    std::set<long long> img;
    for (const auto& e : enumerate_elements(k.sub)) img.insert(apply(k.incl, e).coords[0]);
    CHECK(img == std::set<long long>{0, 2});
    CHECK(!is_mono(f));
    CHECK(!is_epi(f));
}

TEST_CASE("cokernel and image degenerate cases") {
    Ring r4 = Ring::mod(4);
    FpModule z4 = cyclic(r4, 4), z2 = cyclic(r4, 2);
    CHECK(cokernel(identity_morphism(z4)).quot.is_zero());
    CHECK(image(zero_morphism(z4, z2)).img.is_zero());
    CHECK(kernel(zero_morphism(z4, z2)).sub.inv == std::vector<long long>{4});
    CHECK(cokernel(zero_morphism(zero_module(r4), z4)).quot.inv == std::vector<long long>{4});
}

TEST_CASE("mono, epi, iso verdicts") {
    Ring r4 = Ring::mod(4);
    FpModule z4 = cyclic(r4, 4), z2 = cyclic(r4, 2);
    Mat m(1, 1);
    m.at(0, 0) = 2;
    Morphism emb = morphism(z2, z4, m); /* 1 -> 2 */
    CHECK(is_mono(emb));
    CHECK(!is_epi(emb));
    CHECK(!is_iso(emb));
    CHECK(is_iso(identity_morphism(z4)));
    CHECK(is_iso(zero_morphism(zero_module(r4), zero_module(r4))));
}

TEST_CASE("morphism validation") {
    Ring r4 = Ring::mod(4);
    FpModule z4 = cyclic(r4, 4), z2 = cyclic(r4, 2);
    Mat one(1, 1);
    one.at(0, 0) = 1;
    CHECK_THROWS_AS(morphism(z2, z4, one), input_error); /* 2*1 != 0 mod 4 */
    Morphism proj = morphism(z4, z2, one);               /* fine: 4*1 = 0 mod 2 */
    CHECK(is_epi(proj));
    CHECK_THROWS_AS(morphism(z4, z4, Mat(2, 1)), input_error);
}

TEST_CASE("enumerations: frozen counts") {
    Ring r4 = Ring::mod(4);
    FpModule z4 = cyclic(r4, 4), z2 = cyclic(r4, 2), z = zero_module(r4);
    auto homs = enumerate_hom(z2, z4);
    REQUIRE(homs.size() == 2);
    CHECK(is_zero(homs[0]));
    CHECK(homs[1].a.at(0, 0) == 2);
    CHECK(enumerate_hom(z, z4).size() == 1);
    CHECK(enumerate_hom(z4, z).size() == 1);
    CHECK(enumerate_elements(direct_sum(z2, z2).sum).size() == 4);
    CHECK(enumerate_elements(z).size() == 1);
}

TEST_CASE("enumeration caps trip with a named cap") {
    Ring r = Ring::mod(8191);
    FpModule big = fp_module(r, {8191});
    try {
        enumerate_elements(big);
        FAIL("expected cap_error");
    } catch (const cap_error& e) {
        CHECK(std::string(e.what()).find("hom") != std::string::npos);
    }
}

TEST_CASE("subobject_leq") {
    Ring r4 = Ring::mod(4);
    FpModule z4 = cyclic(r4, 4), z2 = cyclic(r4, 2);
    Mat two(1, 1);
    two.at(0, 0) = 2;
    Morphism u = morphism(z2, z4, two);
    Morphism idm = identity_morphism(z4);

    auto w1 = subobject_leq(u, u);
    REQUIRE(w1.has_value());
    CHECK(morphism_eq(*w1, identity_morphism(z2)));

    auto w2 = subobject_leq(u, idm);
    REQUIRE(w2.has_value());
    CHECK(morphism_eq(*w2, u));

    CHECK(!subobject_leq(idm, u).has_value());

    Mat twice(1, 1);
    twice.at(0, 0) = 2;
    CHECK_THROWS_AS(subobject_leq(morphism(z4, z4, twice), idm), input_error);
}

TEST_CASE("subgroup lattices of small groups") {
    Ring r12 = Ring::mod(12);
    CHECK(all_subgroups(cyclic(r12, 12)).size() == 6); /* one per divisor */
    CHECK(all_subgroups(cyclic(r12, 4)).size() == 3);
    CHECK(all_subgroups(fp_module(r12, {2, 2})).size() == 5);
    CHECK(all_subgroups(fp_module(Ring::mod(8), {2, 4})).size() == 8);
    CHECK(all_subgroups(zero_module(r12)).size() == 1);

    /* each reported subgroup is closed and matches its generators */
    FpModule g = fp_module(r12, {2, 4});
    for (const auto& s : all_subgroups(g)) {
        SubObject sub = submodule(g, s.gens);
        CHECK(sub.sub.order() == s.order());
        for (long long idx : s.elements) {
            auto c = element_coords(g, idx);
            /* element must be generated by s.gens */
            SolveModMany span(s.gens, g.inv, g.m);
            CHECK(span.solvable(c));
        }
    }
}

/* ---- randomized properties ---------------------------------------------- */

static FpModule random_module(std::mt19937_64& rng, const Ring& ring, long long m,
                              int max_gens) {
    auto divs = divisors_of(m);
    std::uniform_int_distribution<int> ngen(0, max_gens);
    std::uniform_int_distribution<size_t> dpick(0, divs.size() - 1);
    std::vector<long long> f;
    int n = ngen(rng);
    for (int i = 0; i < n; ++i) {
        long long d = divs[dpick(rng)];
        if (d >= 2) f.push_back(d);
    }
    return fp_module(ring, f);
}

static Morphism random_hom(std::mt19937_64& rng, const FpModule& a, const FpModule& b) {
    HomGroup h = hom_group(a, b);
    std::vector<long long> c(h.orders.size());
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = std::uniform_int_distribution<long long>(0, h.orders[i] - 1)(rng);
    return h.from_coeffs(c);
}

TEST_CASE("hom enumeration matches the brute-force filter and the gcd formula") {
    std::mt19937_64 rng(424201);
    const long long mods[] = {4, 8, 12};
    for (int trial = 0; trial < 60; ++trial) {
        long long m = mods[trial % 3];
        Ring ring = Ring::mod(m);
        FpModule a = random_module(rng, ring, m, 2);
        FpModule b = random_module(rng, ring, m, 2);
        if (hom_card_formula(a, b) > 256) continue;
        auto fast = enumerate_hom(a, b);
        auto slow = brute_hom(a, b);
        REQUIRE(static_cast<long long>(fast.size()) == hom_card_formula(a, b));
        REQUIRE(fast.size() == slow.size());
        std::vector<Mat> fast_mats;
        for (const auto& f : fast) fast_mats.push_back(f.a);
        CHECK(sorted_keys(fast_mats) == sorted_keys(slow));
        /* duplicate-free */
        auto keys = sorted_keys(fast_mats);
        CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    }
}

TEST_CASE("element enumeration is exhaustive and the index is a bijection") {
    Ring r12 = Ring::mod(12);
    FpModule g = fp_module(r12, {2, 6});
    auto elems = enumerate_elements(g);
    REQUIRE(static_cast<long long>(elems.size()) == g.order());
    std::set<long long> seen;
    for (long long i = 0; i < static_cast<long long>(elems.size()); ++i) {
        long long idx = element_index(g, elems[i].coords);
        CHECK(idx == i); /* lexicographic rank */
        CHECK(element_coords(g, idx) == elems[i].coords);
        seen.insert(idx);
    }
    CHECK(static_cast<long long>(seen.size()) == g.order());
}

TEST_CASE("kernel, cokernel, image: universal properties by enumeration") {
    std::mt19937_64 rng(98765);
    const long long mods[] = {4, 12};
    for (int trial = 0; trial < 40; ++trial) {
        long long m = mods[trial % 2];
        Ring ring = Ring::mod(m);
        FpModule a = random_module(rng, ring, m, 2);
        FpModule b = random_module(rng, ring, m, 2);
        Morphism f = random_hom(rng, a, b);

        SubObject k = kernel(f);
        CHECK(is_mono(k.incl));
        CHECK(is_zero(compose(k.incl, f)));

        QuotObject c = cokernel(f);
        CHECK(is_epi(c.proj));
        CHECK(is_zero(compose(f, c.proj)));

        ImageFact im = image(f);
        CHECK(is_mono(im.incl));
        CHECK(is_epi(im.corestriction));
        CHECK(morphism_eq(compose(im.corestriction, im.incl), f));

        /* probe the universal properties against small test objects */
        std::vector<FpModule> probes{zero_module(ring), cyclic(ring, 2), cyclic(ring, m)};
        for (const auto& t : probes) {
            if (hom_card_formula(t, a) <= 128) {
                for (const auto& phi : enumerate_hom(t, a)) {
                    bool killed = is_zero(compose(phi, f));
                    auto lift = solve_left(phi, k.incl);
                    CHECK(killed == lift.has_value());
                }
            }
            if (hom_card_formula(b, t) <= 128) {
                for (const auto& psi : enumerate_hom(b, t)) {
                    bool kills = is_zero(compose(f, psi));
                    auto drop = solve_right(psi, c.proj);
                    CHECK(kills == drop.has_value());
                }
            }
        }
    }
}

TEST_CASE("solve_left and solve_right agree with brute-force search") {
    std::mt19937_64 rng(192837);
    const long long mods[] = {4, 8, 12};
    for (int trial = 0; trial < 80; ++trial) {
        long long m = mods[trial % 3];
        Ring ring = Ring::mod(m);
        FpModule x = random_module(rng, ring, m, 2);
        FpModule y = random_module(rng, ring, m, 2);
        FpModule t = random_module(rng, ring, m, 2);
        if (hom_card_formula(x, y) > 512 || hom_card_formula(y, x) > 512) continue;

        Morphism f = random_hom(rng, x, t);
        Morphism g = random_hom(rng, y, t);
        bool brute = false;
        for (const auto& h : enumerate_hom(x, y))
            if (morphism_eq(compose(h, g), f)) brute = true;
        CHECK(solve_left(f, g).has_value() == brute);

        Morphism fr = random_hom(rng, t, x);
        Morphism gr = random_hom(rng, t, y);
        bool bruter = false;
        for (const auto& h : enumerate_hom(y, x))
            if (morphism_eq(compose(gr, h), fr)) bruter = true;
        CHECK(solve_right(fr, gr).has_value() == bruter);
    }
}

TEST_CASE("canonical idempotence and composition laws") {
    std::mt19937_64 rng(13579);
    Ring r12 = Ring::mod(12);
    for (int trial = 0; trial < 50; ++trial) {
        FpModule a = random_module(rng, r12, 12, 3);
        CHECK(fp_module(r12, a.inv).inv == a.inv);

        FpModule b = random_module(rng, r12, 12, 2);
        FpModule c = random_module(rng, r12, 12, 2);
        Morphism f = random_hom(rng, a, b);
        Morphism g = random_hom(rng, b, c);
        Morphism h = random_hom(rng, c, a);
        CHECK(morphism_eq(compose(compose(f, g), h), compose(f, compose(g, h))));
        CHECK(morphism_eq(compose(identity_morphism(a), f), f));
        CHECK(morphism_eq(compose(f, identity_morphism(b)), f));
        CHECK(is_zero(add(f, negate(f))));
    }
}

TEST_CASE("in_multiple_submodule matches elementwise search") {
    Ring r12 = Ring::mod(12);
    FpModule g = fp_module(r12, {2, 12});
    for (long long d : divisors_of(12)) {
        /* brute: the set d*G */
        std::set<std::vector<long long>> dg;
        for (const auto& e : enumerate_elements(g)) {
            std::vector<long long> s(e.coords.size());
            for (size_t i = 0; i < s.size(); ++i) s[i] = (d * e.coords[i]) % g.inv[i];
            dg.insert(s);
        }
        for (const auto& e : enumerate_elements(g))
            CHECK(in_multiple_submodule(g, e.coords, d) == (dg.count(e.coords) > 0));
    }
}
