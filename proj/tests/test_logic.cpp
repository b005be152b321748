#include <catch_amalgamated.hpp>

#include <bit>

#include "formula_gen.hpp"
#include "fsi/compile.hpp"
#include "fsi/error.hpp"
#include "fsi/eval_finite.hpp"

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

std::vector<NodeAddr> set_of(const FiniteTree& t, NodeMask m)
{
    std::vector<NodeAddr> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (m >> i & 1)
            out.push_back(t.node(static_cast<int>(i)));
    return out;
}

// Direct evaluation of quantifier-free set formulas on bitmasks.
bool direct(const Formula& fm, const std::map<std::string, std::uint32_t>& v)
{
    auto s = [&](std::size_t k) { return v.at(fm->args[k]); };
    switch (fm->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !direct(fm->kids[0], v);
    case Op::And: return direct(fm->kids[0], v) && direct(fm->kids[1], v);
    case Op::Or: return direct(fm->kids[0], v) || direct(fm->kids[1], v);
    case Op::Implies: return !direct(fm->kids[0], v) || direct(fm->kids[1], v);
    case Op::Iff: return direct(fm->kids[0], v) == direct(fm->kids[1], v);
    case Op::Sub: return (s(0) & ~s(1)) == 0;
    case Op::Eq2: return s(0) == s(1);
    case Op::Empty: return s(0) == 0;
    case Op::Sing: return std::popcount(s(0)) == 1;
    default: FAIL("unexpected operator"); return false;
    }
}

} // namespace

TEST_CASE("parser")
{
    Formula fm = parse_formula("(ex2 X (in x X))");
    CHECK(free_vars(fm) == std::set<std::string>{"x"});
    CHECK(code_of([] { parse_formula("(in X x)"); }) == Errc::SortError);
    CHECK(code_of([] { parse_formula("(and (sing X)"); }) == Errc::SyntaxError);
    CHECK(code_of([] { parse_formula("(frob x)"); }) == Errc::UnknownAtom);
    CHECK(code_of([] { parse_formula("(ex2 x (sing X))"); }) == Errc::SortError);
    CHECK(code_of([] { parse_formula("(sing X) (sing Y)"); }) == Errc::SyntaxError);
    try {
        parse_formula("(and (sing X) (in X y))");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
    Formula multi = parse_formula("(and (sing X) (sing Y) (sing Z))");
    CHECK(free_vars(multi).size() == 3);
}

TEST_CASE("first-order mode")
{
    Formula fm = parse_formula("(all1 x (ex1 y (S0 x y)))", FormulaMode::FirstOrder);
    CHECK(contains_rel(fm));
    CHECK(code_of([] { parse_formula("(ex2 X (R x))", FormulaMode::FirstOrder); }) == Errc::SortError);
    Formula eq = parse_formula("(eq1 x y)", FormulaMode::FirstOrder);
    CHECK(eq->op == Op::Eq1);
    Formula kw = parse_formula("(succ x y)", FormulaMode::FirstOrder);
    CHECK(kw->op == Op::Rel);
    CHECK(kw->name == "succ");
}

TEST_CASE("printing round-trips")
{
    testing::FormulaGen gen(1, Theory::Delta2);
    for (int i = 0; i < 100; ++i) {
        Formula fm = gen.formula(4);
        CHECK(same_formula(parse_formula(to_string(fm)), fm));
    }
}

TEST_CASE("renaming avoids capture")
{
    Formula fm = parse_formula("(ex1 y (and (in y X) (in x X)))");
    Formula r = rename_free(fm, {{"x", "y"}});
    CHECK(free_vars(r) == std::set<std::string>{"X", "y"});
    FiniteTree t = FiniteTree::complete(1);
    // y=0, X={0}: the renamed formula says "some member of X and y in X".
    CHECK(eval_finite(r, t, {{{"y", A("0")}}, {{"X", {A("0")}}}}));
    CHECK_FALSE(eval_finite(r, t, {{{"y", A("1")}}, {{"X", {A("0")}}}}));
    CHECK(fresh_name("x", {"x", "x_1"}) == "x_2");
}

TEST_CASE("compile examples")
{
    Automaton e = compile("(empty X)", Theory::Delta1);
    auto all = enumerate_accepted(e, 4);
    REQUIRE(all.size() == 1);
    CHECK(all[0].decode() == SetTuple{{}});
    Automaton el = compile("(ex1 m (and (in m X1) (all1 z (-> (in z X1) (not (ex1 w (and (in w X1) (succ m w)))))) "
                           "(in m X2)))",
                           Theory::Delta1);
    CHECK(accepts(el, SetTuple{naturals({1}), naturals({0, 1})}));
    Automaton succ = compile("(ex1 x (succ x y))", Theory::Delta1);
    for (std::size_t n = 0; n <= 5; ++n)
        CHECK(accepts(succ, SetTuple{naturals({n})}) == (n >= 1));
    CHECK(code_of([] { compile("(succ x y)", Theory::Delta2); }) == Errc::TheoryMismatch);
    CHECK(code_of([] { compile("(s0 x y)", Theory::Delta1); }) == Errc::TheoryMismatch);
    CHECK(code_of([] { compile("(prefix x y)", Theory::Delta1); }) == Errc::TheoryMismatch);
}

TEST_CASE("compiled automata carry one track per free variable")
{
    Automaton a = compile("(ex1 x (and (in x X) (in y Y)))", Theory::Delta2);
    CHECK(a.tracks() == Tracks{"X", "Y", "y"});
    Automaton s = compile("(all1 x (ex1 y (s0 x y)))", Theory::Delta2);
    CHECK(s.tracks().empty());
    CHECK(is_universal(s));
}

TEST_CASE("eval_finite examples")
{
    FiniteTree t = FiniteTree::parse("e\n0\n1");
    CHECK(eval_finite(parse_formula("(sub X Y)"), t, {{}, {{"X", {A("0")}}, {"Y", {A("0"), A("1")}}}}));
    for (const auto& tree : {t, FiniteTree::complete(2), FiniteTree()})
        CHECK(eval_finite(parse_formula("(ex2 X (and (sing X) (in x X)))"), tree, {{{"x", A("e")}}, {}}));
    CHECK_FALSE(eval_finite(parse_formula("(all1 x (ex1 y (s0 x y)))"), t, {}));
    CHECK(code_of([&] { eval_finite(parse_formula("(sing X)"), t, {{}, {{"X", {A("00")}}}}); }) ==
          Errc::AssignmentOutOfDomain);
    CHECK(code_of([] {
              eval_finite(parse_formula("(ex2 X (sing X))"), FiniteTree::complete(4), {});
          }) == Errc::TreeTooLarge);
    CHECK(eval_finite(parse_formula("(prefix x y)"), t, {{{"x", A("e")}, {"y", A("1")}}, {}}));
    CHECK(eval_finite(parse_formula("(s1 x y)"), t, {{{"x", A("e")}, {"y", A("1")}}, {}}));
    CHECK_FALSE(eval_finite(parse_formula("(s0 x y)"), t, {{{"x", A("e")}, {"y", A("1")}}, {}}));
}

TEST_CASE("quantifier-free formulas agree with direct evaluation")
{
    for (Theory th : {Theory::Delta1, Theory::Delta2}) {
        testing::FormulaGen gen(7, th);
        for (int i = 0; i < 30; ++i) {
            Formula fm = gen.quantifier_free(3);
            Automaton a = compile(fm, th);
            auto fv = free_vars(fm);
            std::vector<std::string> names(fv.begin(), fv.end());
            for (std::uint32_t m = 0; m < (1u << (4 * names.size())); ++m) {
                std::map<std::string, std::uint32_t> v{{"X", 0}, {"Y", 0}, {"Z", 0}};
                SetTuple sets;
                for (std::size_t k = 0; k < names.size(); ++k) {
                    v[names[k]] = m >> (4 * k) & 15;
                    std::vector<NodeAddr> s;
                    for (std::size_t b = 0; b < 4; ++b)
                        if (v[names[k]] >> b & 1)
                            s.push_back(th == Theory::Delta1 ? NodeAddr::natural(b)
                                                             : FiniteTree::complete(2).node(static_cast<int>(b)));
                    sets.push_back(s);
                }
                CHECK(accepts(a, sets) == direct(fm, v));
            }
        }
    }
}

TEST_CASE("relativized compilation agrees with eval_finite")
{
    // φ holds on the finite tree t iff the compiled relativization accepts
    // (T = dom(t), assignment).
    for (Theory th : {Theory::Delta1, Theory::Delta2}) {
        testing::FormulaGen gen(th == Theory::Delta1 ? 11 : 12, th);
        std::vector<FiniteTree> trees =
            th == Theory::Delta1 ? std::vector<FiniteTree>{FiniteTree::path(1), FiniteTree::path(3), FiniteTree::path(4)}
                                 : std::vector<FiniteTree>{FiniteTree(), FiniteTree::parse("e\n0\n1"),
                                                           FiniteTree::parse("e\n0\n00\n1"), FiniteTree::path(3)};
        for (int i = 0; i < 40; ++i) {
            Formula fm = gen.formula(3);
            std::vector<Formula> parts{relativize(fm, "T")};
            for (const auto& v : free_vars(fm))
                parts.push_back(f::atom(Op::Sub, {v, "T"}));
            Automaton a = compile(f::conj(parts), th);
            auto fv = free_vars(fm);
            std::vector<std::string> names(fv.begin(), fv.end());
            for (const auto& t : trees) {
                const std::size_t n = t.size();
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n * names.size())); ++m) {
                    std::map<std::string, NodeMask> env;
                    SetTuple sets;
                    for (std::size_t k = 0; k < names.size(); ++k) {
                        NodeMask s = (m >> (n * k)) & ((NodeMask{1} << n) - 1);
                        env[names[k]] = s;
                        sets.push_back(set_of(t, s));
                    }
                    // Track order: T first only if it sorts first; build by name.
                    std::map<std::string, std::vector<NodeAddr>> by_name;
                    for (std::size_t k = 0; k < names.size(); ++k)
                        by_name[names[k]] = sets[k];
                    by_name["T"] = set_of(t, t.all_mask());
                    SetTuple ordered;
                    for (const auto& tr : a.tracks())
                        ordered.push_back(by_name.at(tr));
                    if (a.tracks().size() != by_name.size()) {
                        // Some variable vanished from the automaton: evaluate
                        // the cylindrified language instead.
                        Tracks full;
                        for (const auto& [name, s] : by_name)
                            full.push_back(name);
                        Automaton c = cylindrify(a, full);
                        ordered.clear();
                        for (const auto& [name, s] : by_name)
                            ordered.push_back(s);
                        INFO(to_string(fm));
                        CHECK(accepts(c, ordered) == eval_finite_masks(fm, t, env));
                    } else {
                        INFO(to_string(fm));
                        CHECK(accepts(a, ordered) == eval_finite_masks(fm, t, env));
                    }
                }
            }
        }
    }
}

TEST_CASE("desugaring preserves truth on finite trees")
{
    testing::FormulaGen gen(13, Theory::Delta2);
    FiniteTree t = FiniteTree::parse("e\n0\n1\n10");
    for (int i = 0; i < 60; ++i) {
        Formula fm = gen.formula(3);
        Formula d = desugar(fm);
        for (NodeMask x = 0; x < 16; x += 3)
            for (NodeMask y = 0; y < 16; y += 5)
                CHECK(eval_finite_masks(fm, t, {{"X", x}, {"Y", y}, {"Z", x ^ y}}) ==
                      eval_finite_masks(d, t, {{"X", x}, {"Y", y}, {"Z", x ^ y}}));
    }
}

TEST_CASE("compiler known answers")
{
    CHECK(is_empty(compile("(and (sing X) (empty X))", Theory::Delta1)));
    CHECK(is_universal(compile("(ex2 X (sub Y X))", Theory::Delta1)));
    CHECK(is_universal(compile("(ex2 X (sub Y X))", Theory::Delta2)));
    CHECK(is_universal(compile("(all1 x (ex1 y (succ x y)))", Theory::Delta1)));
    CHECK(is_empty(compile("(ex1 x (succ x x))", Theory::Delta1)));
    CHECK(is_universal(compile("(all1 x (prefix x x))", Theory::Delta2)));
    CHECK(is_universal(compile("(all1 x (all1 y (-> (s0 x y) (prefix x y))))", Theory::Delta2)));
    CHECK(is_empty(compile("(ex1 x (ex1 y (and (s0 x y) (s1 x y))))", Theory::Delta2)));
    CHECK(is_universal(compile("true", Theory::Delta1)));
    CHECK(is_empty(compile("false", Theory::Delta2)));
}
