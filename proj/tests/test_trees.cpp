#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "fsi/error.hpp"
#include "fsi/trees.hpp"

using namespace fsi;

namespace {

NodeAddr A(const char* s) { return NodeAddr::parse(s); }

template <class F>
Errc code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

// Zones of t correspond to nonempty node sets with a single minimal node
// whose other members all have their parent inside the set.
std::set<std::vector<NodeAddr>> connected_sets(const FiniteTree& t)
{
    std::set<std::vector<NodeAddr>> out;
    const std::size_t n = t.size();
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
        std::vector<NodeAddr> members;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1)
                members.push_back(t.node(static_cast<int>(i)));
        std::size_t roots = 0;
        for (const auto& u : members)
            if (u.is_root() || std::find(members.begin(), members.end(), u.parent()) == members.end())
                ++roots;
        if (roots == 1)
            out.insert(members);
    }
    return out;
}

} // namespace

TEST_CASE("addresses parse and print")
{
    CHECK(A("e").is_root());
    CHECK(A("ε").is_root());
    CHECK(A("0110").str() == "0110");
    CHECK(A("e").str() == "e");
    CHECK(code_of([] { NodeAddr::parse("012"); }) == Errc::MalformedAddress);
    CHECK(code_of([] { NodeAddr::parse(""); }) == Errc::MalformedAddress);
    CHECK(A("000").as_natural() == 3);
    CHECK(code_of([] { (void)A("01").as_natural(); }) == Errc::TheoryMismatch);
}

TEST_CASE("length-lex order puts shorter words first")
{
    std::vector<NodeAddr> v{A("10"), A("1"), A("e"), A("01"), A("0"), A("000")};
    std::sort(v.begin(), v.end());
    std::vector<std::string> s;
    for (const auto& a : v)
        s.push_back(a.str());
    CHECK(s == std::vector<std::string>{"e", "0", "1", "01", "10", "000"});
}

TEST_CASE("prefix relation")
{
    CHECK(A("e").is_prefix_of(A("101")));
    CHECK(A("10").is_prefix_of(A("101")));
    CHECK(A("101").is_prefix_of(A("101")));
    CHECK_FALSE(A("11").is_prefix_of(A("101")));
    CHECK_FALSE(A("0").comparable(A("1")));
}

TEST_CASE("tree files")
{
    CHECK(FiniteTree::parse("e").size() == 1);
    FiniteTree t = FiniteTree::parse("0\n1\n");
    CHECK(t.size() == 3);
    CHECK(t.node(0).is_root());
    CHECK(code_of([] { FiniteTree::parse("11", FiniteTree::Validation::Strict); }) == Errc::LeftSiblingMissing);
    CHECK(code_of([] { FiniteTree::parse("e\n0\n00\n01\n1\n10", FiniteTree::Validation::Strict); }) == Errc::Internal);
    CHECK(code_of([] { FiniteTree::parse("e\n00", FiniteTree::Validation::Strict); }) == Errc::NotPrefixClosed);
    FiniteTree closed = FiniteTree::parse("11");
    CHECK(closed.contains(A("10")));
    CHECK(closed.contains(A("0")));
    CHECK(FiniteTree::parse(closed.serialize()) == closed);
}

TEST_CASE("tree navigation")
{
    FiniteTree t = FiniteTree::complete(2);
    CHECK(t.size() == 7);
    CHECK(t.is_purely_binary());
    int x = *t.index_of(A("1"));
    CHECK(t.node(t.left(x)) == A("10"));
    CHECK(t.node(t.right(x)) == A("11"));
    CHECK(t.parent(x) == 0);
    CHECK(t.subtree(x).size() == 3);
    CHECK_FALSE(FiniteTree::path(3).is_purely_binary());
}

TEST_CASE("zone members")
{
    FiniteTree t = FiniteTree::parse("e\n0\n1");
    auto names = [&](const Zone& z) {
        std::vector<std::string> out;
        for (const auto& u : zone_members(t, z))
            out.push_back(u.str());
        return out;
    };
    CHECK(names({A("e"), {A("1")}}) == std::vector<std::string>{"e", "0"});
    CHECK(names({A("e"), {A("0"), A("1")}}) == std::vector<std::string>{"e"});
    CHECK(names({A("e"), {}}) == std::vector<std::string>{"e", "0", "1"});
    CHECK(code_of([] { validate_zone({A("0"), {A("1")}}); }) == Errc::InvalidZone);
    CHECK(code_of([] { validate_zone({A("e"), {A("0"), A("01")}}); }) == Errc::InvalidZone);
    CHECK(code_of([&] { zone_members(t, {A("00"), {}}); }) == Errc::RootNotInTree);
    Zone z{A("e"), {A("0"), A("1")}};
    CHECK(z.frontier().size() == 3);
}

TEST_CASE("zone enumeration on small trees")
{
    CHECK(enumerate_zones(FiniteTree()).size() == 1);
    CHECK(enumerate_zones(FiniteTree::parse("e\n0\n1")).size() == 6);
}

TEST_CASE("zone enumeration agrees with connected subsets")
{
    std::mt19937_64 rng(3);
    std::vector<FiniteTree> trees{FiniteTree::complete(2), FiniteTree::path(5)};
    for (int i = 0; i < 30; ++i)
        trees.push_back(random_tree(10, rng));
    for (const auto& t : trees) {
        auto expected = connected_sets(t);
        std::set<std::vector<NodeAddr>> got;
        for (const auto& z : enumerate_zones(t))
            got.insert(zone_members(t, z));
        CHECK(got == expected);
        CHECK(enumerate_zones(t).size() == expected.size());
    }
}

TEST_CASE("zone enumeration is capped")
{
    CHECK(code_of([] { enumerate_zones(FiniteTree::complete(4)); }) == Errc::TreeTooLarge);
}

TEST_CASE("random trees are valid domains")
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        FiniteTree b = random_binary_tree(1 + i % 8, rng);
        CHECK(b.is_purely_binary());
        CHECK(b.size() == 2 * (1 + i % 8) - 1);
        FiniteTree r = random_tree(12, rng);
        CHECK(r.size() <= 12);
        CHECK(FiniteTree::from_nodes({r.nodes().begin(), r.nodes().end()}, FiniteTree::Validation::Strict) == r);
    }
}

TEST_CASE("masks")
{
    FiniteTree t = FiniteTree::complete(1);
    CHECK(t.all_mask() == 7);
    CHECK(t.subtree_mask(1) == 2);
    CHECK(code_of([] { FiniteTree::complete(6).all_mask(); }) == Errc::TreeTooLarge);
}
