#include "fsi/eval_finite.hpp"

#include <bit>

#include "fsi/error.hpp"

namespace fsi {

NodeMask to_mask(const FiniteTree& t, const std::vector<NodeAddr>& set)
{
    if (t.size() > kMaskCapacity)
        fail(Errc::TreeTooLarge, "tree has more than 64 nodes");
    NodeMask m = 0;
    for (const auto& u : set) {
        auto i = t.index_of(u);
        if (!i)
            fail(Errc::AssignmentOutOfDomain, "node " + u.str() + " is not in the tree");
        m |= NodeMask{1} << *i;
    }
    return m;
}

std::vector<NodeAddr> from_mask(const FiniteTree& t, NodeMask m)
{
    std::vector<NodeAddr> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (m >> i & 1)
            out.push_back(t.node(static_cast<int>(i)));
    return out;
}

namespace {

struct Evaluator {
    const FiniteTree& t;
    std::size_t cap;
    NodeMask all;
    std::vector<NodeMask> ancestors; // reflexive

    NodeMask lookup(const std::map<std::string, NodeMask>& env, const std::string& v) const
    {
        auto it = env.find(v);
        if (it == env.end())
            fail(Errc::InvalidInput, "unassigned variable '" + v + "'");
        return it->second;
    }

    static int index(NodeMask single) { return std::countr_zero(single); }

    bool child_of(NodeMask x, NodeMask y, int side) const
    {
        int c = side == 0 ? t.left(index(x)) : t.right(index(x));
        return c >= 0 && y == NodeMask{1} << c;
    }

    bool eval(const Formula& fm, std::map<std::string, NodeMask>& env) const
    {
        auto arg = [&](std::size_t i) { return lookup(env, fm->args[i]); };
        switch (fm->op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::And: return eval(fm->kids[0], env) && eval(fm->kids[1], env);
        case Op::Or: return eval(fm->kids[0], env) || eval(fm->kids[1], env);
        case Op::Not: return !eval(fm->kids[0], env);
        case Op::Implies: return !eval(fm->kids[0], env) || eval(fm->kids[1], env);
        case Op::Iff: return eval(fm->kids[0], env) == eval(fm->kids[1], env);
        case Op::In: return (arg(0) & arg(1)) != 0;
        case Op::Sub: return (arg(0) & ~arg(1)) == 0;
        case Op::Eq1:
        case Op::Eq2: return arg(0) == arg(1);
        case Op::Empty: return arg(0) == 0;
        case Op::Sing: return std::popcount(arg(0)) == 1;
        case Op::Succ:
        case Op::S0: return child_of(arg(0), arg(1), 0);
        case Op::S1: return child_of(arg(0), arg(1), 1);
        case Op::Prefix: return (ancestors[static_cast<std::size_t>(index(arg(1)))] & arg(0)) != 0;
        case Op::Rel: fail(Errc::UnknownAtom, "relation symbol '" + fm->name + "' cannot be evaluated on a tree");
        default: break;
        }
        const bool exists = fm->op == Op::Ex1 || fm->op == Op::Ex2;
        auto saved = env.find(fm->name) == env.end() ? std::optional<NodeMask>() : env[fm->name];
        bool result = !exists;
        auto visit = [&](NodeMask value) {
            env[fm->name] = value;
            bool v = eval(fm->kids[0], env);
            if (v == exists) {
                result = exists;
                return true;
            }
            return false;
        };
        if (fm->op == Op::Ex1 || fm->op == Op::All1) {
            for (std::size_t i = 0; i < t.size(); ++i)
                if (visit(NodeMask{1} << i))
                    break;
        } else {
            if (t.size() > cap)
                fail(Errc::TreeTooLarge, "set quantification over a tree with " + std::to_string(t.size()) +
                                             " nodes exceeds the cap of " + std::to_string(cap));
            NodeMask s = 0;
            while (true) {
                if (visit(s))
                    break;
                if (s == all)
                    break;
                s = (s - all) & all; // next submask in increasing order
            }
        }
        if (saved)
            env[fm->name] = *saved;
        else
            env.erase(fm->name);
        return result;
    }
};

} // namespace

bool eval_finite_masks(const Formula& fm, const FiniteTree& t, std::map<std::string, NodeMask> env, std::size_t cap)
{
    Evaluator ev{t, cap, t.all_mask(), {}};
    ev.ancestors.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        int p = t.parent(static_cast<int>(i));
        ev.ancestors[i] = (NodeMask{1} << i) | (p >= 0 ? ev.ancestors[static_cast<std::size_t>(p)] : 0);
    }
    for (const auto& v : free_vars(fm)) {
        auto it = env.find(v);
        if (it == env.end())
            fail(Errc::InvalidInput, "free variable '" + v + "' has no value");
        if (it->second & ~ev.all)
            fail(Errc::AssignmentOutOfDomain, "value of '" + v + "' lies outside the tree");
        if (sort_of(v) == Sort::Element && std::popcount(it->second) != 1)
            fail(Errc::InvalidInput, "element variable '" + v + "' needs exactly one node");
    }
    return ev.eval(fm, env);
}

bool eval_finite(const Formula& fm, const FiniteTree& t, const Assignment& a, std::size_t cap)
{
    std::map<std::string, NodeMask> env;
    for (const auto& [v, u] : a.elements)
        env[v] = to_mask(t, {u});
    for (const auto& [v, s] : a.sets)
        env[v] = to_mask(t, s);
    return eval_finite_masks(fm, t, std::move(env), cap);
}

} // namespace fsi
