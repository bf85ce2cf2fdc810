#include "modexact/corpus.hpp"

#include <random>

#include "modexact/enumerate.hpp"

namespace modexact {

std::vector<FpModule> corpus_modules(const Ring& ring, long long max_order) {
    if (!ring.modular()) throw input_error("corpus needs a modular ring");
    if (max_order < 1) throw input_error("corpus max_order must be >= 1");
    if (max_order > 4096) throw cap_error("corpus max_order cap is 4096");
    long long m = ring.modulus.get_si();
    std::vector<long long> divs;
    for (long long d : divisors_of(m))
        if (d >= 2 && d <= max_order) divs.push_back(d);

    /* grow chains by one factor per round; extending lexicographically
       sorted chains with ascending multiples keeps each round sorted */
    std::vector<std::vector<long long>> chains = {{}};
    std::vector<std::vector<long long>> current = {{}};
    while (!current.empty()) {
        std::vector<std::vector<long long>> next;
        for (const std::vector<long long>& c : current) {
            long long prod = 1;
            for (long long d : c) prod *= d;
            for (long long d : divs) {
                if (!c.empty() && d % c.back() != 0) continue;
                if (d > max_order / prod) continue;
                std::vector<long long> e = c;
                e.push_back(d);
                next.push_back(std::move(e));
            }
        }
        for (const std::vector<long long>& e : next) chains.push_back(e);
        current = std::move(next);
    }

    std::vector<FpModule> out;
    out.reserve(chains.size());
    for (const std::vector<long long>& c : chains) out.push_back(fp_module(ring, c));
    return out;
}

Workspace corpus_generate(const Ring& ring, long long max_order, unsigned long long seed) {
    std::vector<FpModule> mods = corpus_modules(ring, max_order);
    Workspace ws;
    ws.ring = ring;
    ws.meta = json{{"kind", "corpus"}, {"max_order", max_order}, {"seed", seed}};
    for (size_t i = 0; i < mods.size(); ++i)
        ws.modules.emplace("M" + std::to_string(i), mods[i]);

    /* all draws use explicit modulo reduction so the stream is pinned by
       the mt19937_64 specification alone */
    std::mt19937_64 rng(seed);
    auto draw = [&rng](long long bound) -> long long {
        return static_cast<long long>(rng() % static_cast<unsigned long long>(bound));
    };

    size_t n = mods.size();
    for (size_t i = 0; i < 3 * n; ++i) {
        const FpModule& src = mods[static_cast<size_t>(draw(static_cast<long long>(n)))];
        const FpModule& tgt = mods[static_cast<size_t>(draw(static_cast<long long>(n)))];
        HomGroup hg = hom_group(src, tgt);
        std::vector<long long> coeffs(static_cast<size_t>(hg.ncoeffs()));
        for (size_t c = 0; c < coeffs.size(); ++c) coeffs[c] = draw(hg.orders[c]);
        ws.morphisms.emplace("f" + std::to_string(i), hg.from_coeffs(coeffs));
    }

    std::vector<const FpModule*> nonzero;
    for (const FpModule& m : mods)
        if (!m.is_zero()) nonzero.push_back(&m);
    for (size_t i = 0; i < n && !nonzero.empty(); ++i) {
        const FpModule& x = *nonzero[static_cast<size_t>(
            draw(static_cast<long long>(nonzero.size())))];
        int rows = 1 + static_cast<int>(draw(x.ngens()));
        Mat gens(rows, x.ngens());
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < x.ngens(); ++c) gens.at(r, c) = draw(x.inv[c]);
        ws.morphisms.emplace("u" + std::to_string(i), submodule(x, gens).incl);
    }
    return ws;
}

}  // namespace modexact
