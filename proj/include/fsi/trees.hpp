#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fsi {

/// A node of the infinite binary tree, i.e. a finite word over {0,1}.
/// The empty word is the root. Nodes of the unary tree are the all-zero
/// words and are identified with the naturals via their length.
///
/// Ordering is length-lex: shorter words first, equal lengths compared
/// bitwise with 0 < 1.
class NodeAddr {
public:
    NodeAddr() = default;

    /// Accepts "e" (or "ε") for the root, otherwise a string over {0,1}.
    static NodeAddr parse(std::string_view text);
    static NodeAddr from_bits(std::string bits);
    static NodeAddr natural(std::size_t n) { return NodeAddr(std::string(n, '0')); }

    std::size_t length() const noexcept { return bits_.size(); }
    bool is_root() const noexcept { return bits_.empty(); }
    bool is_delta1() const noexcept;
    /// Length of an all-zero address; throws TheoryMismatch otherwise.
    std::size_t as_natural() const;

    NodeAddr child(int bit) const;
    NodeAddr parent() const;
    int last_bit() const { return bits_.back() - '0'; }
    int bit(std::size_t i) const { return bits_[i] - '0'; }

    /// Reflexive prefix order.
    bool is_prefix_of(const NodeAddr& other) const noexcept;
    bool comparable(const NodeAddr& other) const noexcept
    {
        return is_prefix_of(other) || other.is_prefix_of(*this);
    }

    const std::string& bits() const noexcept { return bits_; }
    std::string str() const { return bits_.empty() ? std::string("e") : bits_; }

    friend bool operator==(const NodeAddr&, const NodeAddr&) = default;
    friend std::strong_ordering operator<=>(const NodeAddr& a, const NodeAddr& b) noexcept
    {
        if (a.bits_.size() != b.bits_.size())
            return a.bits_.size() <=> b.bits_.size();
        return a.bits_.compare(b.bits_) <=> 0;
    }

private:
    explicit NodeAddr(std::string bits) : bits_(std::move(bits)) {}
    std::string bits_;
};

struct NodeAddrHash {
    std::size_t operator()(const NodeAddr& a) const noexcept { return std::hash<std::string>{}(a.bits()); }
};

/// Bit i stands for the i-th node of a FiniteTree in length-lex order.
using NodeMask = std::uint64_t;

inline constexpr std::size_t kMaskCapacity = 64;

/// A finite tree domain: prefix closed, left-before-right and nonempty.
/// Nodes are indexed in length-lex order, so index 0 is the root and the
/// lowest set bit of a NodeMask is the length-lex smallest node.
class FiniteTree {
public:
    enum class Validation {
        /// Add all prefixes and missing left siblings.
        Close,
        /// Reject inputs that are not already valid tree domains.
        Strict,
    };

    FiniteTree() : FiniteTree(from_nodes({NodeAddr()})) {}

    static FiniteTree from_nodes(std::vector<NodeAddr> nodes, Validation mode = Validation::Close);
    /// Tree file: one address per line, "e" for the root, '#' comments.
    static FiniteTree parse(std::string_view text, Validation mode = Validation::Close);
    static FiniteTree complete(std::size_t depth);
    /// Unary tree {ε, 0, ..., 0^(n-1)}.
    static FiniteTree path(std::size_t n);

    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const NodeAddr> nodes() const noexcept { return nodes_; }
    const NodeAddr& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    std::optional<int> index_of(const NodeAddr& a) const;
    bool contains(const NodeAddr& a) const { return index_.count(a) != 0; }

    int parent(int i) const { return parent_[static_cast<std::size_t>(i)]; }
    int left(int i) const { return left_[static_cast<std::size_t>(i)]; }
    int right(int i) const { return right_[static_cast<std::size_t>(i)]; }
    bool is_leaf(int i) const { return left(i) < 0; }
    bool is_purely_binary() const;

    /// Nodes of the subtree rooted at i (including i), ascending indices.
    std::vector<int> subtree(int i) const;
    /// NodeMask helpers; throw TreeTooLarge beyond 64 nodes.
    NodeMask subtree_mask(int i) const;
    NodeMask all_mask() const;

    std::string serialize() const;

    friend bool operator==(const FiniteTree& a, const FiniteTree& b) { return a.nodes_ == b.nodes_; }

private:
    struct Raw {};
    explicit FiniteTree(Raw) {}

    std::vector<NodeAddr> nodes_;
    std::unordered_map<NodeAddr, int, NodeAddrHash> index_;
    std::vector<int> parent_, left_, right_;
};

/// Connected region of a tree: all y with root ⊑ y and no excluded x ⊑ y.
/// Excluded nodes form an antichain strictly below the root.
struct Zone {
    NodeAddr root;
    std::vector<NodeAddr> excluded;

    std::vector<NodeAddr> frontier() const;
    std::string str() const;

    friend bool operator==(const Zone&, const Zone&) = default;
};

/// Throws InvalidZone when the excluded set is not an antichain strictly
/// below the root.
void validate_zone(const Zone& z);

std::vector<NodeAddr> zone_members(const FiniteTree& t, const Zone& z);

inline constexpr std::size_t kZoneEnumerationCap = 16;

/// Every zone of t whose excluded nodes lie in t. Throws TreeTooLarge when
/// |t| exceeds the cap.
std::vector<Zone> enumerate_zones(const FiniteTree& t, std::size_t cap = kZoneEnumerationCap);

/// Index-level zone visitor used by the brute-force kernels: the callback
/// receives the root index, the excluded indices and the member mask.
void for_each_zone(const FiniteTree& t,
                   const std::function<void(int, std::span<const int>, NodeMask)>& visit,
                   std::size_t cap = kZoneEnumerationCap);

/// Zones rooted at `root` with excluded nodes inside t, visited as above.
void for_each_zone_at(const FiniteTree& t, int root,
                      const std::function<void(int, std::span<const int>, NodeMask)>& visit);

/// Random purely binary tree with the given number of leaves.
FiniteTree random_binary_tree(std::size_t leaves, std::mt19937_64& rng);
/// Random tree (nodes may have zero, one left, or two children).
FiniteTree random_tree(std::size_t max_nodes, std::mt19937_64& rng);

} // namespace fsi
