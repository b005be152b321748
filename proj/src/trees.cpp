#include "fsi/trees.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fsi/error.hpp"

namespace fsi {

// NodeAddr ---------------------------------------------------------------

NodeAddr NodeAddr::parse(std::string_view text)
{
    if (text == "e" || text == "\xCE\xB5")
        return NodeAddr();
    if (text.empty())
        fail(Errc::MalformedAddress, "empty address (use \"e\" for the root)");
    for (char c : text)
        if (c != '0' && c != '1')
            fail(Errc::MalformedAddress, "invalid character in address '" + std::string(text) + "'");
    return NodeAddr(std::string(text));
}

NodeAddr NodeAddr::from_bits(std::string bits)
{
    for (char c : bits)
        if (c != '0' && c != '1')
            fail(Errc::MalformedAddress, "invalid character in address '" + bits + "'");
    return NodeAddr(std::move(bits));
}

bool NodeAddr::is_delta1() const noexcept
{
    return std::all_of(bits_.begin(), bits_.end(), [](char c) { return c == '0'; });
}

std::size_t NodeAddr::as_natural() const
{
    if (!is_delta1())
        fail(Errc::TheoryMismatch, "address " + str() + " is not a node of the unary tree");
    return bits_.size();
}

NodeAddr NodeAddr::child(int bit) const
{
    return NodeAddr(bits_ + (bit ? '1' : '0'));
}

NodeAddr NodeAddr::parent() const
{
    if (bits_.empty())
        fail(Errc::InvalidInput, "the root has no parent");
    return NodeAddr(bits_.substr(0, bits_.size() - 1));
}

bool NodeAddr::is_prefix_of(const NodeAddr& other) const noexcept
{
    return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

// FiniteTree -------------------------------------------------------------

FiniteTree FiniteTree::from_nodes(std::vector<NodeAddr> nodes, Validation mode)
{
    std::set<NodeAddr> present(nodes.begin(), nodes.end());
    if (mode == Validation::Strict) {
        if (present.empty())
            fail(Errc::NotPrefixClosed, "empty tree");
        for (const auto& u : present)
            if (!u.is_root() && u.last_bit() == 1 && !present.count(u.parent().child(0)))
                fail(Errc::LeftSiblingMissing, u.str() + " present without " + u.parent().child(0).str());
        for (const auto& u : present)
            if (!u.is_root() && !present.count(u.parent()))
                fail(Errc::NotPrefixClosed, "prefix " + u.parent().str() + " of " + u.str() + " missing");
    } else {
        std::set<NodeAddr> closed;
        for (auto u : present) {
            while (true) {
                if (!closed.insert(u).second)
                    break;
                if (u.is_root())
                    break;
                if (u.last_bit() == 1)
                    closed.insert(u.parent().child(0));
                u = u.parent();
            }
        }
        closed.insert(NodeAddr());
        present = std::move(closed);
    }

    FiniteTree t{Raw{}};
    t.nodes_.assign(present.begin(), present.end());
    t.index_.clear();
    const std::size_t n = t.nodes_.size();
    t.parent_.assign(n, -1);
    t.left_.assign(n, -1);
    t.right_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        t.index_.emplace(t.nodes_[i], static_cast<int>(i));
    for (std::size_t i = 1; i < n; ++i) {
        const auto& u = t.nodes_[i];
        int p = t.index_.at(u.parent());
        t.parent_[i] = p;
        (u.last_bit() == 0 ? t.left_ : t.right_)[static_cast<std::size_t>(p)] = static_cast<int>(i);
    }
    return t;
}

FiniteTree FiniteTree::parse(std::string_view text, Validation mode)
{
    std::vector<NodeAddr> nodes;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string_view token(line.data() + first, last - first + 1);
        if (token.front() == '#')
            continue;
        nodes.push_back(NodeAddr::parse(token));
    }
    return from_nodes(std::move(nodes), mode);
}

FiniteTree FiniteTree::complete(std::size_t depth)
{
    std::vector<NodeAddr> nodes{NodeAddr()};
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].length() < depth) {
            nodes.push_back(nodes[i].child(0));
            nodes.push_back(nodes[i].child(1));
        }
    return from_nodes(std::move(nodes));
}

FiniteTree FiniteTree::path(std::size_t n)
{
    std::vector<NodeAddr> nodes;
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i)
        nodes.push_back(NodeAddr::natural(i));
    return from_nodes(std::move(nodes));
}

std::optional<int> FiniteTree::index_of(const NodeAddr& a) const
{
    auto it = index_.find(a);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

bool FiniteTree::is_purely_binary() const
{
    for (std::size_t i = 0; i < size(); ++i)
        if ((left_[i] < 0) != (right_[i] < 0))
            return false;
    return true;
}

std::vector<int> FiniteTree::subtree(int i) const
{
    std::vector<int> out{i};
    for (std::size_t k = 0; k < out.size(); ++k) {
        int v = out[k];
        if (left(v) >= 0)
            out.push_back(left(v));
        if (right(v) >= 0)
            out.push_back(right(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

NodeMask FiniteTree::subtree_mask(int i) const
{
    if (size() > kMaskCapacity)
        fail(Errc::TreeTooLarge, "node masks support at most 64 nodes");
    NodeMask m = 0;
    for (int v : subtree(i))
        m |= NodeMask{1} << v;
    return m;
}

NodeMask FiniteTree::all_mask() const
{
    if (size() > kMaskCapacity)
        fail(Errc::TreeTooLarge, "node masks support at most 64 nodes");
    return size() == 64 ? ~NodeMask{0} : (NodeMask{1} << size()) - 1;
}

std::string FiniteTree::serialize() const
{
    std::string out;
    for (const auto& u : nodes_) {
        out += u.str();
        out += '\n';
    }
    return out;
}

// Zones ------------------------------------------------------------------

std::vector<NodeAddr> Zone::frontier() const
{
    std::vector<NodeAddr> f{root};
    f.insert(f.end(), excluded.begin(), excluded.end());
    return f;
}

std::string Zone::str() const
{
    std::string out = "(" + root.str() + ", {";
    for (std::size_t i = 0; i < excluded.size(); ++i) {
        if (i)
            out += ",";
        out += excluded[i].str();
    }
    return out + "})";
}

void validate_zone(const Zone& z)
{
    for (std::size_t i = 0; i < z.excluded.size(); ++i) {
        const auto& x = z.excluded[i];
        if (!z.root.is_prefix_of(x) || x == z.root)
            fail(Errc::InvalidZone, "excluded node " + x.str() + " is not strictly below " + z.root.str());
        for (std::size_t j = i + 1; j < z.excluded.size(); ++j)
            if (x.comparable(z.excluded[j]))
                fail(Errc::InvalidZone, "excluded nodes " + x.str() + " and " + z.excluded[j].str()
                                            + " are comparable");
    }
}

std::vector<NodeAddr> zone_members(const FiniteTree& t, const Zone& z)
{
    if (!t.contains(z.root))
        fail(Errc::RootNotInTree, "zone root " + z.root.str() + " not in tree");
    validate_zone(z);
    std::vector<NodeAddr> out;
    for (const auto& y : t.nodes()) {
        if (!z.root.is_prefix_of(y))
            continue;
        bool cut = std::any_of(z.excluded.begin(), z.excluded.end(),
                               [&](const NodeAddr& x) { return x.is_prefix_of(y); });
        if (!cut)
            out.push_back(y);
    }
    return out;
}

namespace {

// All antichains inside the subtree of v (including the empty one).
std::vector<std::vector<int>> antichains(const FiniteTree& t, int v)
{
    std::vector<std::vector<int>> below{{}};
    for (int c : {t.left(v), t.right(v)}) {
        if (c < 0)
            continue;
        auto sub = antichains(t, c);
        std::vector<std::vector<int>> next;
        next.reserve(below.size() * sub.size());
        for (const auto& a : below)
            for (const auto& b : sub) {
                auto merged = a;
                merged.insert(merged.end(), b.begin(), b.end());
                next.push_back(std::move(merged));
            }
        below = std::move(next);
    }
    below.push_back({v});
    return below;
}

} // namespace

void for_each_zone_at(const FiniteTree& t, int root,
                      const std::function<void(int, std::span<const int>, NodeMask)>& visit)
{
    const NodeMask root_mask = t.subtree_mask(root);
    std::vector<std::vector<int>> choices{{}};
    for (int c : {t.left(root), t.right(root)}) {
        if (c < 0)
            continue;
        auto sub = antichains(t, c);
        std::vector<std::vector<int>> next;
        for (const auto& a : choices)
            for (const auto& b : sub) {
                auto merged = a;
                merged.insert(merged.end(), b.begin(), b.end());
                next.push_back(std::move(merged));
            }
        choices = std::move(next);
    }
    for (auto& excluded : choices) {
        std::sort(excluded.begin(), excluded.end());
        NodeMask members = root_mask;
        for (int x : excluded)
            members &= ~t.subtree_mask(x);
        visit(root, excluded, members);
    }
}

void for_each_zone(const FiniteTree& t,
                   const std::function<void(int, std::span<const int>, NodeMask)>& visit,
                   std::size_t cap)
{
    if (t.size() > cap)
        fail(Errc::TreeTooLarge, "zone enumeration capped at " + std::to_string(cap) + " nodes");
    for (int r = 0; r < static_cast<int>(t.size()); ++r)
        for_each_zone_at(t, r, visit);
}

std::vector<Zone> enumerate_zones(const FiniteTree& t, std::size_t cap)
{
    std::vector<Zone> out;
    for_each_zone(
        t,
        [&](int root, std::span<const int> excluded, NodeMask) {
            Zone z{t.node(root), {}};
            for (int x : excluded)
                z.excluded.push_back(t.node(x));
            out.push_back(std::move(z));
        },
        cap);
    return out;
}

// Random trees -----------------------------------------------------------

FiniteTree random_binary_tree(std::size_t leaves, std::mt19937_64& rng)
{
    std::vector<NodeAddr> nodes{NodeAddr()};
    std::vector<NodeAddr> frontier{NodeAddr()};
    while (frontier.size() < std::max<std::size_t>(leaves, 1)) {
        std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
        std::size_t k = pick(rng);
        NodeAddr u = frontier[k];
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(k));
        for (int b : {0, 1}) {
            nodes.push_back(u.child(b));
            frontier.push_back(u.child(b));
        }
    }
    return FiniteTree::from_nodes(std::move(nodes), FiniteTree::Validation::Strict);
}

FiniteTree random_tree(std::size_t max_nodes, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> size_dist(1, std::max<std::size_t>(max_nodes, 1));
    const std::size_t target = size_dist(rng);
    std::vector<NodeAddr> nodes{NodeAddr()};
    std::set<NodeAddr> present{NodeAddr()};
    while (nodes.size() < target) {
        // Candidates: a missing left child, or a missing right child next to a present left one.
        std::vector<NodeAddr> candidates;
        for (const auto& u : nodes) {
            if (!present.count(u.child(0)))
                candidates.push_back(u.child(0));
            else if (!present.count(u.child(1)))
                candidates.push_back(u.child(1));
        }
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        auto v = candidates[pick(rng)];
        nodes.push_back(v);
        present.insert(v);
    }
    return FiniteTree::from_nodes(std::move(nodes), FiniteTree::Validation::Strict);
}

} // namespace fsi
