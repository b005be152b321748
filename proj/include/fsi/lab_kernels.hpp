#pragma once

#include <unordered_set>
#include <vector>

#include "fsi/parking.hpp"
#include "fsi/trees.hpp"

namespace fsi {

using MaskSet = std::unordered_set<NodeMask>;

/// count[x] = |{Y ⊆ subtree(x) : (X - subtree(x)) ∪ Y ∈ atoms}| for each node.
std::vector<long> completion_counts_serial(const FiniteTree& t, const MaskSet& atoms, NodeMask x);
std::vector<long> completion_counts_parallel(const FiniteTree& t, const MaskSet& atoms, NodeMask x);

/// Largest D(Z) - |Z| - K|F| over all zones (strong: D(Z) - K|F|); the
/// distribution is K-sparse iff the result is ≤ 0.
long worst_zone_excess_serial(const FiniteTree& t, const Distribution& d, int k, bool strong = false);
long worst_zone_excess_parallel(const FiniteTree& t, const Distribution& d, int k, bool strong = false);

inline constexpr std::size_t kSubtreeEnumerationCap = 20;

} // namespace fsi
