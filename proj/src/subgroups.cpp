#include "modexact/subgroups.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "modexact/enumerate.hpp"

namespace modexact {

namespace {

long long add_idx(const FpModule& mod, long long x, long long y) {
    auto cx = element_coords(mod, x);
    auto cy = element_coords(mod, y);
    for (int i = 0; i < mod.ngens(); ++i) cx[i] = (cx[i] + cy[i]) % mod.inv[i];
    return element_index(mod, cx);
}

/* smallest subgroup containing the subgroup `base` and the element `extra`:
   the union of cosets base + k*extra */
std::vector<long long> closure(const FpModule& mod, const std::vector<long long>& base,
                               long long extra) {
    std::set<long long> s(base.begin(), base.end());
    long long cur = extra;
    while (!s.count(cur)) {
        for (long long b : base) s.insert(add_idx(mod, b, cur));
        cur = add_idx(mod, cur, extra);
    }
    return std::vector<long long>(s.begin(), s.end());
}

Mat append_row(const Mat& gens, const std::vector<long long>& row) {
    Mat out(gens.rows + 1, gens.cols);
    for (int i = 0; i < gens.rows; ++i)
        for (int j = 0; j < gens.cols; ++j) out.at(i, j) = gens.at(i, j);
    for (int j = 0; j < gens.cols; ++j) out.at(gens.rows, j) = row[j];
    return out;
}

}  // namespace

std::vector<Subgroup> all_subgroups(const FpModule& mod) {
    long long n = mod.order();
    if (n > caps().hom)
        throw cap_error("subgroup search needs order " + std::to_string(n) + " > cap " +
                        std::to_string(caps().hom) + " (hom)");

    std::map<std::vector<long long>, Mat> seen;
    std::vector<long long> trivial{0};
    seen.emplace(trivial, Mat(0, mod.ngens()));
    std::vector<std::pair<std::vector<long long>, Mat>> frontier{{trivial, Mat(0, mod.ngens())}};

    while (!frontier.empty()) {
        std::vector<std::pair<std::vector<long long>, Mat>> next;
        for (const auto& [elems, gens] : frontier) {
            for (long long x = 1; x < n; ++x) {
                if (std::binary_search(elems.begin(), elems.end(), x)) continue;
                auto bigger = closure(mod, elems, x);
                if (seen.count(bigger)) continue;
                if (static_cast<long long>(seen.size()) >= caps().subgroups)
                    throw cap_error("subgroup enumeration exceeded cap " +
                                    std::to_string(caps().subgroups) + " (subgroups)");
                Mat g2 = append_row(gens, element_coords(mod, x));
                seen.emplace(bigger, g2);
                next.emplace_back(std::move(bigger), std::move(g2));
            }
        }
        frontier = std::move(next);
    }

    std::vector<Subgroup> out;
    out.reserve(seen.size());
    for (auto& [elems, gens] : seen) out.push_back(Subgroup{elems, gens});
    std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
        return a.elements < b.elements;
    });
    return out;
}

}  // namespace modexact
