#include <catch_amalgamated.hpp>

#include <random>

#include "fsi/automaton.hpp"
#include "fsi/compile.hpp"
#include "fsi/error.hpp"

using namespace fsi;

namespace {

NodeAddr A(const char* s) { return NodeAddr::parse(s); }

std::vector<NodeAddr> bits_to_set(std::uint32_t m)
{
    std::vector<NodeAddr> out;
    for (std::size_t i = 0; i < 32; ++i)
        if (m >> i & 1)
            out.push_back(NodeAddr::natural(i));
    return out;
}

WordAutomaton random_word_automaton(std::mt19937_64& rng, Tracks tracks, std::size_t states)
{
    std::uniform_int_distribution<State> pick(0, static_cast<State>(states - 1));
    std::vector<State> delta(states << tracks.size());
    for (auto& d : delta)
        d = pick(rng);
    std::vector<bool> acc(states);
    for (std::size_t i = 0; i < states; ++i)
        acc[i] = rng() % 2;
    return WordAutomaton(std::move(tracks), states, 0, std::move(delta), std::move(acc));
}

// Letters of the convolution of bitmask sets, with `extra` zero letters appended.
std::vector<Letter> conv_word(const std::vector<std::uint32_t>& sets, std::size_t length)
{
    std::vector<Letter> w(length, 0);
    for (std::size_t k = 0; k < sets.size(); ++k)
        for (std::size_t i = 0; i < length; ++i)
            if (sets[k] >> i & 1)
                w[i] |= Letter{1} << k;
    return w;
}

std::size_t bit_length(std::uint32_t m) { return m ? 32 - static_cast<std::size_t>(__builtin_clz(m)) : 0; }

// Some zero-padded convolution is accepted by the raw automaton.
bool padded_accepts(const WordAutomaton& a, const std::vector<std::uint32_t>& sets, std::size_t extra)
{
    std::size_t len = 1;
    for (auto s : sets)
        len = std::max(len, bit_length(s));
    for (std::size_t j = 0; j <= extra; ++j)
        if (a.run(conv_word(sets, len + j)))
            return true;
    return false;
}

} // namespace

TEST_CASE("canonical codings")
{
    Coding one = encode_tuple({naturals({0, 2})}, Theory::Delta1);
    CHECK(one.serialize() == "101");
    Coding two = encode_tuple({naturals({0}), naturals({0, 1})}, Theory::Delta1);
    CHECK(two.serialize() == "(1,1)(⋄,1)");
    CHECK(two.letter(1) == 2);
    Coding tree = encode_tuple({{A("00")}}, Theory::Delta2);
    REQUIRE(tree.domain == std::vector<NodeAddr>{A("e"), A("0"), A("00")});
    CHECK(tree.serialize() == "e:0 0:0 00:1");
    CHECK(tree.decode() == SetTuple{{A("00")}});
    Coding sib = encode_tuple({{A("1")}}, Theory::Delta2);
    CHECK(sib.domain == std::vector<NodeAddr>{A("e"), A("0"), A("1")});
    CHECK_THROWS_AS(encode_tuple({{A("1")}}, Theory::Delta1), Error);
}

TEST_CASE("codings round-trip and order")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        SetTuple s{bits_to_set(rng() & 0x3f), bits_to_set(rng() & 0x3f)};
        CHECK(encode_tuple(s, Theory::Delta1).decode() == s);
    }
    CHECK(coding_less(encode_tuple({naturals({1})}, Theory::Delta1), encode_tuple({naturals({0, 1})}, Theory::Delta1)));
    CHECK(coding_less(encode_tuple({naturals({})}, Theory::Delta1), encode_tuple({naturals({0})}, Theory::Delta1)));
}

TEST_CASE("intersection")
{
    Automaton a = compile("(sing X)", Theory::Delta1);
    CHECK(language_equal(intersect(a, Automaton::universal(Theory::Delta1, {"X"})), a));
    CHECK(is_empty(intersect(a, complement(a))));
    Automaton both = intersect(a, compile("(in x X)", Theory::Delta1));
    REQUIRE(both.tracks() == Tracks{"X", "x"});
    for (std::uint32_t x = 0; x < 16; ++x)
        for (std::uint32_t y = 0; y < 16; ++y) {
            bool expected = std::popcount(x) == 1 && x == y;
            CHECK(accepts(both, SetTuple{bits_to_set(x), bits_to_set(y)}) == expected);
        }
}

TEST_CASE("complement")
{
    CHECK(language_equal(complement(Automaton::empty(Theory::Delta1, {"X"})),
                         Automaton::universal(Theory::Delta1, {"X"})));
    Automaton e = compile("(empty X)", Theory::Delta1);
    CHECK(language_equal(complement(complement(e)), e));
    for (std::uint32_t x = 0; x < 32; ++x)
        CHECK(accepts(complement(e), SetTuple{bits_to_set(x)}) == (x != 0));
}

TEST_CASE("projection")
{
    for (Theory th : {Theory::Delta1, Theory::Delta2}) {
        Automaton p = project_track(compile("(in x X)", th), "X");
        CHECK(language_equal(p, singleton_automaton(th, "x")));
    }
    Automaton only = project_track(compile("(sing X)", Theory::Delta1), "X");
    CHECK(only.tracks().empty());
    CHECK(is_universal(only));
    Automaton q = project_track(compile("(and (sing X) (sub X Y))", Theory::Delta1), "X");
    for (std::uint32_t y = 0; y < 32; ++y)
        CHECK(accepts(q, SetTuple{bits_to_set(y)}) == (y != 0));
}

TEST_CASE("padding saturation of words")
{
    // Only the word 10 over one track.
    WordAutomaton w({"X"}, 4, 0, {3, 1, 2, 3, 3, 3, 3, 3}, {false, false, true, false});
    Automaton a = pad_saturate(Automaton(w));
    for (std::size_t n : {2, 3, 4})
        CHECK(a.word().run(conv_word({1}, n)));
    CHECK(accepts(a, SetTuple{naturals({0})}));
    CHECK(language_equal(pad_saturate(a), a));
}

TEST_CASE("padding saturation of trees")
{
    // Accepts exactly the labeled tree e:1 0:0 1:0.
    Automaton fixed = build_tree_automaton<int>(
        {"X"}, [](Letter l) { return l == 0 ? 1 : 3; }, [](int, Letter) { return 3; },
        [](int p, int q, Letter l) { return p == 1 && q == 1 && l == 1 ? 2 : 3; }, [](int q) { return q == 2; });
    Automaton sat = pad_saturate(fixed);
    CHECK(accepts(sat, SetTuple{{A("e")}}));
    FiniteTree variants[] = {FiniteTree::parse("e\n0\n1"), FiniteTree::parse("e\n0\n1\n00"),
                             FiniteTree::parse("e\n0\n1\n10\n11"), FiniteTree::complete(2)};
    for (const auto& t : variants) {
        std::vector<Letter> labels(t.size(), 0);
        labels[0] = 1;
        CHECK(sat.tree().accepting(sat.tree().evaluate(t, labels)));
    }
    CHECK(language_equal(pad_saturate(sat), sat));
}

TEST_CASE("minimization")
{
    CHECK(minimize(Automaton::universal(Theory::Delta1, {"X"})).num_states() == 1);
    Automaton s = compile("(sing X)", Theory::Delta1);
    CHECK(minimize(intersect(s, s)) == minimize(s));
    CHECK(minimize(s).num_states() <= 3);
    Automaton t = compile("(sing X)", Theory::Delta2);
    CHECK(minimize(intersect(t, t)) == minimize(t));
}

TEST_CASE("membership")
{
    CHECK(accepts(Automaton::universal(Theory::Delta1, {"X"}), SetTuple{naturals({4, 7})}));
    Automaton succ = compile("(succ x y)", Theory::Delta1);
    CHECK(accepts(succ, SetTuple{naturals({2}), naturals({3})}));
    CHECK_FALSE(accepts(succ, SetTuple{naturals({2}), naturals({4})}));
    Automaton s1 = compile("(s1 x y)", Theory::Delta2);
    CHECK(accepts(s1, SetTuple{{A("0")}, {A("01")}}));
    CHECK_FALSE(accepts(s1, SetTuple{{A("0")}, {A("00")}}));
}

TEST_CASE("emptiness")
{
    CHECK(is_empty(Automaton::empty(Theory::Delta2, {"X"})));
    Automaton a = compile("(sub X Y)", Theory::Delta2);
    CHECK(is_empty(intersect(a, complement(a))));
    CHECK(is_empty(compile("(and (sing X) (empty X))", Theory::Delta1)));
    CHECK(is_universal(compile("(ex2 X (sub Y X))", Theory::Delta1)));
}

TEST_CASE("enumeration")
{
    auto u = enumerate_accepted(Automaton::universal(Theory::Delta1, {"X"}), 1);
    REQUIRE(u.size() == 2);
    CHECK(u[0].decode() == SetTuple{{}});
    CHECK(u[1].decode() == SetTuple{naturals({0})});
    auto s = enumerate_accepted(compile("(sing X)", Theory::Delta1), 3);
    REQUIRE(s.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(s[i].decode() == SetTuple{naturals({i})});
    CHECK(enumerate_accepted(Automaton::empty(Theory::Delta1, {"X"}), 4).empty());
    // Δ2: all subsets of the domains with at most three nodes.
    auto all = enumerate_accepted(Automaton::universal(Theory::Delta2, {"X"}), 3);
    std::set<std::vector<NodeAddr>> sets;
    for (const auto& c : all)
        sets.insert(c.decode()[0]);
    // {ε,0,1,00} restricted to minimal domains of ≤ 3 nodes: ∅,{e},{0},{1},{00},
    // {e,0},{e,1},{0,1},{e,0,1},{e,00},{0,00},{e,0,00}
    CHECK(sets.size() == 12);
    CHECK(all.size() == sets.size());
}

TEST_CASE("language equality")
{
    Automaton a = compile("(sing X)", Theory::Delta1);
    CHECK(language_equal(a, a));
    CHECK_FALSE(language_equal(a, complement(a)));
    for (Theory th : {Theory::Delta1, Theory::Delta2})
        CHECK(language_equal(compile("(sub X Y)", th), compile("(all1 x (-> (in x X) (in x Y)))", th)));
}

TEST_CASE("tree domain enumeration")
{
    // Counts of binary tree domains with n nodes (left-before-right): the
    // Motzkin numbers 1, 1, 2, 4, 9.
    for (std::size_t n = 1; n <= 5; ++n) {
        static const std::size_t motzkin[] = {0, 1, 1, 2, 4, 9};
        std::size_t count = 0;
        for (const auto& t : tree_domains(Theory::Delta2, 5))
            count += t.size() == n;
        CHECK(count == motzkin[n]);
    }
    CHECK(tree_domains(Theory::Delta1, 4).size() == 4);
}

TEST_CASE("random word automata: complement and product against runs")
{
    std::mt19937_64 rng(21);
    for (int round = 0; round < 40; ++round) {
        Automaton a(random_word_automaton(rng, {"X", "Y"}, 1 + rng() % 4));
        Automaton b(random_word_automaton(rng, {"X", "Y"}, 1 + rng() % 4));
        Automaton c = complement(a), i = intersect(a, b), u = unite(a, b);
        for (std::uint32_t x = 0; x < 16; ++x)
            for (std::uint32_t y = 0; y < 16; ++y) {
                std::size_t len = std::max<std::size_t>({1, bit_length(x), bit_length(y)});
                auto w = conv_word({x, y}, len);
                bool ra = a.word().run(w), rb = b.word().run(w);
                CHECK(c.word().run(w) == !ra);
                CHECK(i.word().run(w) == (ra && rb));
                CHECK(u.word().run(w) == (ra || rb));
            }
    }
}

TEST_CASE("random word automata: saturation and projection against padded runs")
{
    std::mt19937_64 rng(22);
    for (int round = 0; round < 40; ++round) {
        const std::size_t n = 1 + rng() % 3;
        WordAutomaton raw = random_word_automaton(rng, {"X", "Y"}, n);
        Automaton sat = pad_saturate(Automaton(raw));
        Automaton proj = project_track(Automaton(raw), "X");
        for (std::uint32_t y = 0; y < 16; ++y) {
            for (std::uint32_t x = 0; x < 16; ++x) {
                INFO("x=" << x << " y=" << y << " init accepting " << raw.accepting(0));
                CHECK(accepts(sat, SetTuple{bits_to_set(x), bits_to_set(y)}) == padded_accepts(raw, {x, y}, n));
            }
            // Witness sets need at most 2^n positions past y.
            bool exists = false;
            const std::size_t room = bit_length(y) + (std::size_t{1} << n);
            for (std::uint32_t x = 0; x < (1u << room) && !exists; ++x)
                exists = padded_accepts(raw, {x, y}, n);
            CHECK(accepts(proj, SetTuple{bits_to_set(y)}) == exists);
        }
    }
}

TEST_CASE("random tree automata: complement and product against evaluation")
{
    std::mt19937_64 rng(23);
    auto random_tree_automaton = [&](std::size_t n) {
        std::uniform_int_distribution<State> pick(0, static_cast<State>(n - 1));
        std::vector<State> leaf(2), unary(n * 2), binary(n * n * 2);
        for (auto* v : {&leaf, &unary, &binary})
            for (auto& q : *v)
                q = pick(rng);
        std::vector<bool> acc(n);
        for (std::size_t i = 0; i < n; ++i)
            acc[i] = rng() % 2;
        return TreeAutomaton({"X"}, n, leaf, unary, binary, acc);
    };
    auto domains = tree_domains(Theory::Delta2, 4);
    for (int round = 0; round < 30; ++round) {
        Automaton a(random_tree_automaton(1 + rng() % 3)), b(random_tree_automaton(1 + rng() % 3));
        Automaton c = complement(a), i = intersect(a, b);
        for (const auto& t : domains)
            for (std::uint32_t m = 0; m < (1u << t.size()); ++m) {
                std::vector<Letter> labels(t.size());
                for (std::size_t k = 0; k < t.size(); ++k)
                    labels[k] = m >> k & 1;
                bool ra = a.tree().accepting(a.tree().evaluate(t, labels));
                bool rb = b.tree().accepting(b.tree().evaluate(t, labels));
                CHECK(c.tree().accepting(c.tree().evaluate(t, labels)) == !ra);
                CHECK(i.tree().accepting(i.tree().evaluate(t, labels)) == (ra && rb));
            }
    }
}

TEST_CASE("track alignment")
{
    Automaton a = compile("(sub X Y)", Theory::Delta1);
    Automaton r = rename_tracks(a, {{"X", "B"}, {"Y", "A"}});
    CHECK(r.tracks() == Tracks{"A", "B"});
    CHECK(accepts(r, SetTuple{naturals({1, 2}), naturals({2})}));
    CHECK_FALSE(accepts(r, SetTuple{naturals({2}), naturals({1, 2})}));
    Automaton merged = rename_tracks(a, {{"X", "Z"}, {"Y", "Z"}});
    CHECK(is_universal(merged));
    Automaton c = cylindrify(compile("(sing X)", Theory::Delta1), {"W", "X"});
    CHECK(accepts(c, SetTuple{naturals({0, 5}), naturals({3})}));
    CHECK_THROWS_AS(intersect(compile("(sing X)", Theory::Delta1), compile("(sing X)", Theory::Delta2)), Error);
}

TEST_CASE("dump format")
{
    Automaton a = minimize(compile("(sing X)", Theory::Delta1));
    std::string d = a.dump();
    CHECK(d.rfind("kind word", 0) == 0);
    CHECK(d.find("tracks X") != std::string::npos);
    CHECK(d.find("states 3") != std::string::npos);
    CHECK(minimize(compile("(sing X)", Theory::Delta2)).dump().rfind("kind tree", 0) == 0);
    CHECK(a.dot().rfind("digraph", 0) == 0);
}
