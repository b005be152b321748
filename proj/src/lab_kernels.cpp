#include "fsi/lab_kernels.hpp"

#include <algorithm>
#include <bit>
#include <climits>

#include "fsi/error.hpp"

namespace fsi {

namespace {

long count_at(const FiniteTree& t, const MaskSet& atoms, NodeMask x, int node)
{
    const NodeMask sub = t.subtree_mask(node);
    if (static_cast<std::size_t>(std::popcount(sub)) > kSubtreeEnumerationCap)
        fail(Errc::SubtreeTooLarge, "subtree of " + t.node(node).str() + " has more than " +
                                        std::to_string(kSubtreeEnumerationCap) + " nodes");
    const NodeMask outside = x & ~sub;
    long count = 0;
    NodeMask y = 0;
    do {
        count += atoms.count(outside | y) != 0;
        y = (y - sub) & sub;
    } while (y != 0);
    return count;
}

long zone_excess(const Distribution& d, int k, bool strong, std::span<const int> excluded, NodeMask members)
{
    long cars = 0;
    for (NodeMask m = members; m; m &= m - 1)
        cars += d[static_cast<std::size_t>(std::countr_zero(m))];
    long bound = (strong ? 0 : std::popcount(members)) + static_cast<long>(k) * (static_cast<long>(excluded.size()) + 1);
    return cars - bound;
}

void check_zone_cap(const FiniteTree& t)
{
    if (t.size() > kZoneEnumerationCap)
        fail(Errc::TreeTooLarge, "zone enumeration capped at " + std::to_string(kZoneEnumerationCap) + " nodes");
}

} // namespace

std::vector<long> completion_counts_serial(const FiniteTree& t, const MaskSet& atoms, NodeMask x)
{
    std::vector<long> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out[i] = count_at(t, atoms, x, static_cast<int>(i));
    return out;
}

std::vector<long> completion_counts_parallel(const FiniteTree& t, const MaskSet& atoms, NodeMask x)
{
    const long n = static_cast<long>(t.size());
    for (long i = 0; i < n; ++i)
        if (static_cast<std::size_t>(std::popcount(t.subtree_mask(static_cast<int>(i)))) > kSubtreeEnumerationCap)
            return completion_counts_serial(t, atoms, x);
    std::vector<long> out(t.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = count_at(t, atoms, x, static_cast<int>(i));
    return out;
}

long worst_zone_excess_serial(const FiniteTree& t, const Distribution& d, int k, bool strong)
{
    long worst = LONG_MIN;
    for_each_zone(t, [&](int, std::span<const int> excluded, NodeMask members) {
        worst = std::max(worst, zone_excess(d, k, strong, excluded, members));
    });
    return worst;
}

long worst_zone_excess_parallel(const FiniteTree& t, const Distribution& d, int k, bool strong)
{
    check_zone_cap(t);
    const int n = static_cast<int>(t.size());
    long worst = LONG_MIN;
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
    for (int r = 0; r < n; ++r)
        for_each_zone_at(t, r, [&](int, std::span<const int> excluded, NodeMask members) {
            worst = std::max(worst, zone_excess(d, k, strong, excluded, members));
        });
    return worst;
}

} // namespace fsi
