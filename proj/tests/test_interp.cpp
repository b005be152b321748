#include <catch_amalgamated.hpp>

#include "fsi/compile.hpp"
#include "fsi/error.hpp"
#include "fsi/io.hpp"

using namespace fsi;

namespace {

std::string data(const char* name) { return std::string(FSI_DATA_DIR) + "/" + name; }

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

Formula fo(const char* text) { return parse_formula(text, FormulaMode::FirstOrder); }

// Node of the binary tree coded by a nonempty set of naturals.
std::string decode_node(const std::vector<NodeAddr>& set)
{
    auto n = as_naturals(set);
    std::size_t len = n.back();
    std::string u(len, '0');
    for (std::size_t i : n)
        if (i < len)
            u[i] = '1';
    return u;
}

const Presentation& eltree()
{
    static const Presentation p = apply_interpretation(load_sets_interpretation(data("eltree.interp")));
    return p;
}

FiniteStructure successor_structure(std::size_t n, bool bottom)
{
    FiniteStructure s;
    s.elements.resize(n + bottom);
    auto& rel = s.relations["R"];
    rel.first = 2;
    for (std::size_t i = 0; i + 1 < n; ++i)
        rel.second.insert({static_cast<int>(i + bottom), static_cast<int>(i + 1 + bottom)});
    return s;
}

} // namespace

TEST_CASE("element tree codes")
{
    const Presentation& p = eltree();
    CHECK(accepts(p.universe, SetTuple{naturals({0, 3})}));
    CHECK(decode_node(naturals({0, 3})) == "100");
    CHECK_FALSE(accepts(p.universe, SetTuple{{}}));
    auto e = enumerate_elements(p, 2);
    REQUIRE(e.size() == 3);
    std::set<std::vector<NodeAddr>> got(e.begin(), e.end());
    CHECK(got == std::set<std::vector<NodeAddr>>{naturals({0}), naturals({1}), naturals({0, 1})});
}

TEST_CASE("element tree relations match string semantics")
{
    const Presentation& p = eltree();
    auto elems = enumerate_elements(p, 4);
    CHECK(elems.size() == 15);
    for (const auto& a : elems)
        for (const auto& b : elems) {
            std::string u = decode_node(a), v = decode_node(b);
            SetTuple t{a, b};
            CHECK(accepts(p.find("S0")->automaton, t) == (v == u + "0"));
            CHECK(accepts(p.find("S1")->automaton, t) == (v == u + "1"));
            CHECK(accepts(p.find("Prefix")->automaton, t) == (u.size() < v.size() && v.compare(0, u.size(), u) == 0));
            CHECK(accepts(p.find("el")->automaton, t) == (u.size() == v.size()));
        }
}

TEST_CASE("presentation invariants")
{
    const Presentation& p = eltree();
    for (const auto& r : p.relations) {
        CHECK(r.automaton.tracks() == Tracks{"X1", "X2"});
        for (const auto& c : enumerate_accepted(r.automaton, 4))
            for (const auto& s : c.decode())
                CHECK(accepts(p.universe, SetTuple{s}));
        CHECK(minimize(r.automaton) == r.automaton);
    }
}

TEST_CASE("singleton interpretation is the successor structure")
{
    Interpretation i;
    i.theory = Theory::Delta1;
    i.universe = parse_formula("(sing X)");
    i.relations.push_back({"R", 2, parse_formula("(ex1 x (ex1 y (and (in x X1) (in y X2) (succ x y))))")});
    FiniteStructure s = fragment(apply_interpretation(i), 5);
    CHECK(s.elements.size() == 5);
    CHECK(find_isomorphism(s, successor_structure(5, false)).has_value());
}

TEST_CASE("contradictory universe")
{
    Interpretation i{Theory::Delta1, parse_formula("(and (sing X) (empty X))"), {}};
    Presentation p = apply_interpretation(i);
    CHECK(is_empty(p.universe));
    CHECK(enumerate_elements(p, 4).empty());
    CHECK_FALSE(fo_sentence(p, fo("(ex1 x true)")));
    CHECK(fo_sentence(p, fo("(all1 x false)")));
}

TEST_CASE("weak powerset presentations")
{
    Presentation p1 = powerset_presentation(Theory::Delta1);
    CHECK(accepts(p1.find("pre")->automaton, SetTuple{naturals({1}), naturals({0, 1, 2})}));
    CHECK(accepts(p1.find("succ")->automaton, SetTuple{naturals({2}), naturals({3})}));
    CHECK_FALSE(accepts(p1.find("succ")->automaton, SetTuple{naturals({2}), naturals({2, 3})}));
    auto e = enumerate_elements(p1, 1);
    REQUIRE(e.size() == 2);
    CHECK(e[0].empty());
    Presentation p2 = powerset_presentation(Theory::Delta2);
    CHECK_FALSE(accepts(p2.find("pre")->automaton, SetTuple{{NodeAddr::parse("0")}, {NodeAddr::parse("1")}}));
    CHECK(base_relation_names(Theory::Delta2) == std::vector<std::string>{"s0", "s1", "prefix"});
}

TEST_CASE("first-order queries on the element tree")
{
    const Presentation& p = eltree();
    CHECK(fo_sentence(p, fo("(all1 x (ex1 y (S0 x y)))")));
    CHECK(fo_sentence(p, fo("(ex1 x (el x x))")));
    CHECK_FALSE(fo_sentence(p, fo("(all1 x (all1 y (el x y)))")));
    Automaton roots = fo_query(p, fo("(not (ex1 y (S0 y x)))"));
    CHECK(roots.tracks() == Tracks{"x"});
    auto r = enumerate_accepted(roots, 4);
    // Nodes without a 0-parent: the root and every node ending in 1.
    for (const auto& c : r) {
        std::string u = decode_node(c.decode()[0]);
        CHECK((u.empty() || u.back() == '1'));
    }
    CHECK(r.size() == 8);
    CHECK(code_of([&] { fo_sentence(p, fo("(ex1 x (Q x))")); }) == Errc::SignatureMismatch);
    CHECK(code_of([&] { fo_sentence(p, fo("(ex1 x (S0 x))")); }) == Errc::SignatureMismatch);
    CHECK(code_of([&] { fo_sentence(p, fo("(S0 x y)")); }) == Errc::InvalidInput);
}

TEST_CASE("composition with a first-order interpretation")
{
    Interpretation i = load_sets_interpretation(data("eltree.interp"));
    Presentation base = apply_interpretation(i);

    FOInterpretation identity{fo("true"), {}};
    for (const auto& r : i.relations)
        identity.relations.push_back(
            {r.name, 2, fo(("(" + r.name + " x1 x2)").c_str())});
    Presentation same = apply_interpretation(compose_fo_after(identity, i));
    CHECK(language_equal(same.universe, base.universe));
    for (const auto& r : base.relations)
        CHECK(language_equal(same.find(r.name)->automaton, r.automaton));

    FOInterpretation unary{fo("true"), {{"refl", 1, fo("(el x1 x1)")}}};
    Presentation u = apply_interpretation(compose_fo_after(unary, i));
    CHECK(language_equal(u.find("refl")->automaton, rename_tracks(base.universe, {{"X", "X1"}})));

    FOInterpretation edge{fo("true"), {{"edge", 2, fo("(or (S0 x1 x2) (S1 x1 x2))")}}};
    Presentation e = apply_interpretation(compose_fo_after(edge, i));
    CHECK(language_equal(e.find("edge")->automaton, unite(base.find("S0")->automaton, base.find("S1")->automaton)));

    FOInterpretation bad{fo("true"), {{"r", 1, fo("(Missing x1)")}}};
    CHECK(code_of([&] { compose_fo_after(bad, i); }) == Errc::SignatureMismatch);
}

TEST_CASE("composition coherence on a sentence battery")
{
    Interpretation i = load_sets_interpretation(data("eltree.interp"));
    auto left = std::get<FOInterpretation>(load_interpretation(data("leftbranch.fo")));
    Presentation direct = apply_fo_interpretation(left, apply_interpretation(i));
    Presentation composed = apply_interpretation(compose_fo_after(left, i));
    for (const char* q : {"(ex1 x true)", "(all1 x (ex1 y (succ x y)))", "(ex1 x (not (ex1 y (succ y x))))",
                          "(all1 x (all1 y (all1 z (-> (and (succ x y) (succ x z)) (eq1 y z)))))",
                          "(ex1 x (succ x x))"})
        CHECK(fo_sentence(direct, fo(q)) == fo_sentence(composed, fo(q)));
    auto a = fragment(direct, 4), b = fragment(composed, 4);
    CHECK(find_isomorphism(a, b).has_value());
    CHECK(fragment(direct, 4).elements.size() == 4);
}

TEST_CASE("composition with a WMSO interpretation")
{
    Interpretation pw = powerset_interpretation(Theory::Delta1);
    WmsoInterpretation identity{Theory::Delta1, parse_formula("true"), {{"succ", parse_formula("(succ x y)")}}};
    Presentation same = apply_interpretation(compose_wmso_before(pw, identity));
    Presentation base = apply_interpretation(pw);
    CHECK(language_equal(same.universe, base.universe));
    for (const auto& r : base.relations)
        CHECK(language_equal(same.find(r.name)->automaton, r.automaton));

    auto evens = std::get<WmsoInterpretation>(load_interpretation(data("evens.wmso")));
    Presentation ev = apply_interpretation(compose_wmso_before(pw, evens));
    for (const auto& e : enumerate_elements(ev, 5))
        for (std::size_t n : as_naturals(e))
            CHECK(n % 2 == 0);
    CHECK(enumerate_elements(ev, 5).size() == 8);
    const Automaton& succ = ev.find("succ")->automaton;
    CHECK(accepts(succ, SetTuple{naturals({2}), naturals({4})}));
    CHECK_FALSE(accepts(succ, SetTuple{naturals({2}), naturals({3})}));

    WmsoInterpretation none{Theory::Delta1, parse_formula("false"), {{"succ", parse_formula("(succ x y)")}}};
    Interpretation el = load_sets_interpretation(data("eltree.interp"));
    CHECK(is_empty(apply_interpretation(compose_wmso_before(el, none)).universe));
    WmsoInterpretation partial{Theory::Delta1, parse_formula("true"), {}};
    CHECK(code_of([&] { compose_wmso_before(el, partial); }) == Errc::SignatureMismatch);
    WmsoInterpretation other{Theory::Delta2, parse_formula("true"), {}};
    CHECK(code_of([&] { compose_wmso_before(el, other); }) == Errc::TheoryMismatch);
}

TEST_CASE("factorization through the weak powerset")
{
    for (const char* name : {"powerset-d1.interp", "eltree.interp", "nodes-d2.interp", "powerset-d2.interp"}) {
        Interpretation i = load_sets_interpretation(data(name));
        FOInterpretation j = factor_through_powerset(i);
        Presentation via = apply_fo_interpretation(j, powerset_presentation(i.theory));
        Presentation direct = apply_interpretation(i);
        auto a = fragment(via, 3), b = fragment(direct, 3);
        INFO(name);
        CHECK(a.elements.size() == b.elements.size());
        CHECK(find_isomorphism(a, b).has_value());
    }
    Interpretation none{Theory::Delta1, parse_formula("false"), {}};
    FOInterpretation j = factor_through_powerset(none);
    CHECK(is_empty(apply_fo_interpretation(j, powerset_presentation(Theory::Delta1)).universe));
}

TEST_CASE("atom formula on the powerset")
{
    Presentation p = powerset_presentation(Theory::Delta1);
    Automaton atoms = fo_query(p, atom_formula("x"));
    auto found = enumerate_accepted(atoms, 4);
    REQUIRE(found.size() == 4);
    for (const auto& c : found)
        CHECK(c.decode()[0].size() == 1);
    Presentation p2 = powerset_presentation(Theory::Delta2);
    Automaton atoms2 = fo_query(p2, atom_formula("x"));
    for (std::size_t n = 0; n < 7; ++n)
        CHECK(accepts(atoms2, SetTuple{{FiniteTree::complete(2).node(static_cast<int>(n))}}));
    CHECK_FALSE(accepts(atoms2, SetTuple{{}}));
    CHECK_FALSE(accepts(atoms2, SetTuple{{NodeAddr(), NodeAddr::parse("1")}}));
}

TEST_CASE("isomorphism search")
{
    CHECK(find_isomorphism(successor_structure(4, false), successor_structure(4, false)).has_value());
    CHECK_FALSE(find_isomorphism(successor_structure(4, false), successor_structure(3, true)).has_value());
    FiniteStructure cycle = successor_structure(4, false);
    cycle.relations["R"].second.insert({3, 0});
    FiniteStructure path = successor_structure(4, false);
    CHECK_FALSE(find_isomorphism(cycle, path).has_value());
    FiniteStructure shifted = successor_structure(4, false);
    shifted.relations["R"].second = {{1, 3}, {3, 0}, {0, 2}};
    auto m = find_isomorphism(path, shifted);
    REQUIRE(m.has_value());
    for (const auto& t : path.relations["R"].second)
        CHECK(shifted.relations["R"].second.count({(*m)[t[0]], (*m)[t[1]]}));
}

TEST_CASE("quotient by the same maximum")
{
    Presentation p = apply_interpretation(load_sets_interpretation(data("maxquotient.interp")));
    QuotientResult q = quotient_word_presentation(p, "sim", 4);
    CHECK(q.injective);
    CHECK(q.surjective);
    auto reps = enumerate_elements(q.presentation, 4);
    REQUIRE(reps.size() == 5);
    CHECK(reps[0].empty());
    for (std::size_t n = 0; n < 4; ++n)
        CHECK(reps[n + 1] == naturals({n}));
    FiniteStructure frag = fragment(q.presentation, 4);
    frag.relations.erase("sim");
    CHECK(find_isomorphism(frag, successor_structure(4, true)).has_value());
}

TEST_CASE("quotient by equality changes nothing")
{
    Interpretation i = powerset_interpretation(Theory::Delta1);
    i.relations.push_back({"same", 2, parse_formula("(eq2 X1 X2)")});
    Presentation p = apply_interpretation(i);
    QuotientResult q = quotient_word_presentation(p, "same", 3);
    CHECK(language_equal(q.presentation.universe, p.universe));
    CHECK(q.injective);
}

TEST_CASE("quotient errors")
{
    Interpretation i = powerset_interpretation(Theory::Delta1);
    i.relations.push_back({"near", 2, parse_formula("(or (sub X1 X2) (sub X2 X1))")});
    Presentation p = apply_interpretation(i);
    CHECK(code_of([&] { quotient_word_presentation(p, "near", 3); }) == Errc::BoundedCongruenceCheckFailed);
    CHECK(code_of([&] { quotient_word_presentation(powerset_presentation(Theory::Delta2), "pre", 2); }) ==
          Errc::NotDelta1);
    CHECK(code_of([&] { quotient_word_presentation(p, "nothing", 2); }) == Errc::InvalidInput);
}

TEST_CASE("length-lex automaton")
{
    Automaton lt = llex_less("X", "Y");
    std::vector<std::vector<NodeAddr>> sets;
    for (std::uint32_t m = 0; m < 32; ++m) {
        std::vector<NodeAddr> s;
        for (std::size_t b = 0; b < 5; ++b)
            if (m >> b & 1)
                s.push_back(NodeAddr::natural(b));
        sets.push_back(s);
    }
    for (const auto& a : sets)
        for (const auto& b : sets) {
            Coding ca = encode_tuple({a}, Theory::Delta1), cb = encode_tuple({b}, Theory::Delta1);
            std::string wa = ca.serialize(), wb = cb.serialize();
            bool expected = wa.size() != wb.size() ? wa.size() < wb.size() : wa < wb;
            CHECK(accepts(lt, SetTuple{a, b}) == expected);
        }
}

TEST_CASE("interpretation files")
{
    const std::string bad_var = R"J({"theory":"delta1","universe":"(sing Y)"})J";
    const std::string bad_rel =
        R"J({"theory":"delta1","universe":"true","relations":[{"name":"r","arity":1,"formula":"(sing X2)"}]})J";
    const std::string good =
        R"J({"theory":"delta2","universe":["(ex1 x", "(in x X))"],"relations":[{"name":"r","arity":1,"formula":"(sing X1)"}]})J";
    CHECK(code_of([] { parse_interpretation("{"); }) == Errc::InvalidInput);
    CHECK(code_of([&] { parse_interpretation(bad_var); }) == Errc::InvalidInput);
    CHECK(code_of([&] { parse_interpretation(bad_rel); }) == Errc::InvalidInput);
    auto any = parse_interpretation(good);
    const auto& i = std::get<Interpretation>(any);
    CHECK(i.theory == Theory::Delta2);
    auto again = std::get<Interpretation>(parse_interpretation(interpretation_json(i)));
    CHECK(same_formula(again.universe, i.universe));
    CHECK(again.relations.size() == 1);
    auto w = std::get<WmsoInterpretation>(load_interpretation(data("evens.wmso")));
    CHECK(w.atoms.count("succ"));
}
