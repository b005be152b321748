#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsi/formula.hpp"
#include "fsi/trees.hpp"

namespace fsi {

struct Assignment {
    std::map<std::string, NodeAddr> elements;
    std::map<std::string, std::vector<NodeAddr>> sets;
};

inline constexpr std::size_t kEvalSubsetCap = 16;

/// WMSO truth on a finite tree: quantifiers range over dom(t) and its
/// subsets; succ/s0 mean "left child", s1 "right child". Set quantifiers
/// need |t| ≤ cap.
bool eval_finite(const Formula& fm, const FiniteTree& t, const Assignment& a, std::size_t cap = kEvalSubsetCap);

/// Mask-level variant; every free variable must be bound in `env` (element
/// variables as one-bit masks).
bool eval_finite_masks(const Formula& fm, const FiniteTree& t, std::map<std::string, NodeMask> env,
                       std::size_t cap = kEvalSubsetCap);

NodeMask to_mask(const FiniteTree& t, const std::vector<NodeAddr>& set);
std::vector<NodeAddr> from_mask(const FiniteTree& t, NodeMask m);

} // namespace fsi
