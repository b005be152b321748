#include "fsi/compile.hpp"

#include <algorithm>
#include <bit>

#include "fsi/error.hpp"

namespace fsi {

namespace {

const Tracks& slots(std::size_t n)
{
    static const Tracks one{"#0"}, two{"#0", "#1"};
    return n == 1 ? one : two;
}

bool bit(Letter l, int i) { return (l >> i & 1) != 0; }

/// Holds iff every position satisfies the letter predicate.
template <class Pred>
Automaton pointwise(Theory th, std::size_t arity, Pred pred)
{
    const Tracks& tr = slots(arity);
    if (th == Theory::Delta1)
        return build_word_automaton<int>(
            tr, 0, [&](int q, Letter l) { return q == 0 && pred(l) ? 0 : 1; }, [](int q) { return q == 0; });
    return build_tree_automaton<int>(
        tr, [&](Letter l) { return pred(l) ? 0 : 1; },
        [&](int q, Letter l) { return q == 0 && pred(l) ? 0 : 1; },
        [&](int p, int q, Letter l) { return p == 0 && q == 0 && pred(l) ? 0 : 1; }, [](int q) { return q == 0; });
}

Automaton singleton_slot(Theory th)
{
    const Tracks& tr = slots(1);
    auto add = [](int a, int b) { return std::min(2, a + b); };
    if (th == Theory::Delta1)
        return build_word_automaton<int>(
            tr, 0, [&](int q, Letter l) { return add(q, static_cast<int>(l)); }, [](int q) { return q == 1; });
    return build_tree_automaton<int>(
        tr, [&](Letter l) { return static_cast<int>(l); },
        [&](int q, Letter l) { return add(q, static_cast<int>(l)); },
        [&](int p, int q, Letter l) { return add(add(p, q), static_cast<int>(l)); }, [](int q) { return q == 1; });
}

// Δ1 successor with x on slot 0 and y on slot 1: y sits right after x.
Automaton succ_word()
{
    constexpr int Start = 0, SawX = 1, Done = 2, Sink = 3;
    return build_word_automaton<int>(
        slots(2), Start,
        [](int q, Letter l) {
            bool x = bit(l, 0), y = bit(l, 1);
            switch (q) {
            case Start: return !x && !y ? Start : (x && !y ? SawX : Sink);
            case SawX: return !x && y ? Done : Sink;
            case Done: return !x && !y ? Done : Sink;
            default: return Sink;
            }
        },
        [](int q) { return q == Done; });
}

constexpr int Z = 0, Mark = 1, Done = 2, Sink = 3;

// s0/s1 with x on slot 0 and y on slot 1. Mark: the subtree root is y and
// nothing else is marked below.
Automaton child_tree(int side)
{
    auto at_node = [](Letter l, int left, int right) -> int {
        bool x = bit(l, 0), y = bit(l, 1);
        if (left == Sink || right == Sink || (x && y))
            return Sink;
        if (!x && !y) {
            if (left == Z && right == Z)
                return Z;
            if ((left == Done && right == Z) || (left == Z && right == Done))
                return Done;
            return Sink;
        }
        if (y)
            return left == Z && right == Z ? Mark : Sink;
        return -1; // x here; decided by the caller
    };
    return build_tree_automaton<int>(
        slots(2),
        [=](Letter l) {
            int r = at_node(l, Z, Z);
            return r == -1 ? Sink : r;
        },
        [=](int q, Letter l) {
            int r = at_node(l, q, Z);
            if (r != -1)
                return r;
            return side == 0 && q == Mark ? Done : Sink;
        },
        [=](int p, int q, Letter l) {
            int r = at_node(l, p, q);
            if (r != -1)
                return r;
            if (side == 0)
                return p == Mark && q == Z ? Done : Sink;
            return p == Z && q == Mark ? Done : Sink;
        },
        [](int q) { return q == Done; });
}

// Reflexive prefix x ⊑ y. Mark: y lies in the subtree, x not yet seen.
Automaton prefix_tree()
{
    auto combine = [](Letter l, std::vector<int> kids) -> int {
        bool x = bit(l, 0), y = bit(l, 1);
        int marks = 0, dones = 0;
        for (int k : kids) {
            if (k == Sink)
                return Sink;
            marks += k == Mark;
            dones += k == Done;
        }
        if (marks + dones > 1)
            return Sink;
        if (marks == 0 && dones == 0) {
            if (x && y)
                return Done;
            if (y)
                return Mark;
            return x ? Sink : Z;
        }
        if (marks == 1) {
            if (y)
                return Sink;
            return x ? Done : Mark;
        }
        return !x && !y ? Done : Sink;
    };
    return build_tree_automaton<int>(
        slots(2), [=](Letter l) { return combine(l, {}); }, [=](int q, Letter l) { return combine(l, {q}); },
        [=](int p, int q, Letter l) { return combine(l, {p, q}); }, [](int q) { return q == Done; });
}

Automaton raw_atom(Op op, Theory th)
{
    switch (op) {
    case Op::In:
    case Op::Sub: return pointwise(th, 2, [](Letter l) { return !(bit(l, 0) && !bit(l, 1)); });
    case Op::Eq1:
    case Op::Eq2: return pointwise(th, 2, [](Letter l) { return bit(l, 0) == bit(l, 1); });
    case Op::Empty: return pointwise(th, 1, [](Letter l) { return l == 0; });
    case Op::Sing: return singleton_slot(th);
    case Op::Succ:
        if (th != Theory::Delta1)
            fail(Errc::TheoryMismatch, "succ is an atom of delta1 only");
        return succ_word();
    case Op::S0:
    case Op::S1:
        if (th != Theory::Delta2)
            fail(Errc::TheoryMismatch, std::string(op_name(op)) + " is an atom of delta2 only");
        return child_tree(op == Op::S0 ? 0 : 1);
    case Op::Prefix:
        if (th != Theory::Delta2)
            fail(Errc::TheoryMismatch, "prefix is an atom of delta2 only");
        return prefix_tree();
    default: fail(Errc::Internal, "not a built-in atom");
    }
}

} // namespace

Automaton singleton_automaton(Theory th, const std::string& var)
{
    return rename_tracks(singleton_slot(th), {{"#0", var}});
}

Automaton atom_automaton(Op op, const std::vector<std::string>& args, Theory th)
{
    Automaton raw = raw_atom(op, th);
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < args.size(); ++i)
        names["#" + std::to_string(i)] = args[i];
    Automaton out = rename_tracks(raw, names);
    std::vector<std::string> elems;
    for (const auto& a : args)
        if (sort_of(a) == Sort::Element && std::find(elems.begin(), elems.end(), a) == elems.end())
            elems.push_back(a);
    for (const auto& v : elems)
        out = intersect(out, singleton_automaton(th, v));
    return out;
}

Automaton compile_core(const Formula& fm, const CompileEnv& env)
{
    switch (fm->op) {
    case Op::True: return Automaton::universal(env.theory);
    case Op::False: return Automaton::empty(env.theory);
    case Op::And: return intersect(compile_core(fm->kids[0], env), compile_core(fm->kids[1], env));
    case Op::Not: {
        Automaton out = complement(compile_core(fm->kids[0], env));
        const Tracks tracks = out.tracks();
        for (const auto& v : tracks)
            if (sort_of(v) == Sort::Element)
                out = intersect(out, env.guard(v));
        return out;
    }
    case Op::Ex1: {
        Automaton body = compile_core(fm->kids[0], env);
        const auto& tr = body.tracks();
        if (!std::binary_search(tr.begin(), tr.end(), fm->name))
            return env.domain_nonempty ? body : Automaton::empty(env.theory, tr);
        return project_track(intersect(body, env.guard(fm->name)), fm->name);
    }
    case Op::Ex2: {
        Automaton body = compile_core(fm->kids[0], env);
        const auto& tr = body.tracks();
        if (!std::binary_search(tr.begin(), tr.end(), fm->name))
            return body;
        return project_track(body, fm->name);
    }
    default: break;
    }
    if (is_atom(fm->op))
        return env.atom(*fm);
    fail(Errc::Internal, "formula is not in the desugared core: " + to_string(fm));
}

Automaton compile(const Formula& fm, Theory th)
{
    if (contains_rel(fm))
        fail(Errc::UnknownAtom, "relation symbols are not WMSO atoms");
    CompileEnv env;
    env.theory = th;
    env.atom = [th](const FormulaNode& n) { return atom_automaton(n.op, n.args, th); };
    env.guard = [th](const std::string& v) { return singleton_automaton(th, v); };
    return compile_core(desugar(fm), env);
}

Automaton compile(std::string_view text, Theory th)
{
    return compile(parse_formula(text), th);
}

} // namespace fsi
