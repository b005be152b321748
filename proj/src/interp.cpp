#include "fsi/interp.hpp"

#include <algorithm>

#include "fsi/compile.hpp"
#include "fsi/error.hpp"

namespace fsi {

std::vector<std::string> arg_vars(std::size_t n, const std::string& base)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back(base + std::to_string(i));
    return out;
}

const RelationDef* Interpretation::find(const std::string& name) const
{
    for (const auto& r : relations)
        if (r.name == name)
            return &r;
    return nullptr;
}

const RelationAutomaton* Presentation::find(const std::string& name) const
{
    for (const auto& r : relations)
        if (r.name == name)
            return &r;
    return nullptr;
}

namespace {

void check_free(const Formula& fm, const std::vector<std::string>& allowed, const std::string& what)
{
    for (const auto& v : free_vars(fm))
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            fail(Errc::InvalidInput, what + " has unexpected free variable '" + v + "'");
}

void check_relations(const std::vector<RelationDef>& rels, const std::string& base)
{
    std::set<std::string> names;
    for (const auto& r : rels) {
        if (!names.insert(r.name).second)
            fail(Errc::InvalidInput, "duplicate relation name '" + r.name + "'");
        check_free(r.formula, arg_vars(r.arity, base), "relation " + r.name);
    }
}

} // namespace

void validate(const Interpretation& i)
{
    check_free(i.universe, {"X"}, "universe formula");
    check_relations(i.relations, "X");
    if (contains_rel(i.universe))
        fail(Errc::InvalidInput, "universe formula uses relation symbols");
    for (const auto& r : i.relations)
        if (contains_rel(r.formula))
            fail(Errc::InvalidInput, "relation " + r.name + " uses relation symbols");
}

void validate(const FOInterpretation& i)
{
    check_free(i.universe, {"x"}, "universe formula");
    check_relations(i.relations, "x");
}

void validate(const WmsoInterpretation& w)
{
    check_free(w.domain, {"x"}, "domain formula");
    auto base = base_relation_names(w.theory);
    for (const auto& [name, fm] : w.atoms) {
        if (std::find(base.begin(), base.end(), name) == base.end())
            fail(Errc::InvalidInput, "'" + name + "' is not an atom of " + std::string(theory_name(w.theory)));
        check_free(fm, {"x", "y"}, "atom " + name);
    }
}

namespace {

Automaton on_tracks(Automaton a, const Tracks& tracks)
{
    return a.tracks() == tracks ? a : cylindrify(a, tracks);
}

Automaton universe_on(const Automaton& u, const std::string& var)
{
    return rename_tracks(u, {{"X", var}});
}

Automaton restrict_to_universe(Automaton rel, const Automaton& u, const std::vector<std::string>& vars)
{
    for (const auto& v : vars)
        rel = intersect(rel, universe_on(u, v));
    return rel;
}

} // namespace

Presentation apply_interpretation(const Interpretation& i)
{
    validate(i);
    Presentation p;
    p.theory = i.theory;
    p.universe = on_tracks(compile(i.universe, i.theory), {"X"});
    for (const auto& r : i.relations) {
        auto vars = arg_vars(r.arity);
        Automaton a = on_tracks(compile(r.formula, i.theory), make_tracks(vars));
        p.relations.push_back({r.name, r.arity, restrict_to_universe(a, p.universe, vars)});
    }
    return p;
}

std::vector<std::string> base_relation_names(Theory th)
{
    if (th == Theory::Delta1)
        return {"succ"};
    return {"s0", "s1", "prefix"};
}

Interpretation powerset_interpretation(Theory th)
{
    Interpretation i;
    i.theory = th;
    i.universe = f::tru();
    i.relations.push_back({"pre", 2, parse_formula("(sub X1 X2)")});
    for (const auto& name : base_relation_names(th))
        i.relations.push_back(
            {name, 2,
             parse_formula("(and (sing X1) (sing X2) (ex1 x (ex1 y (and (in x X1) (in y X2) (" + name + " x y)))))")});
    return i;
}

Presentation powerset_presentation(Theory th)
{
    return apply_interpretation(powerset_interpretation(th));
}

Automaton fo_query(const Presentation& p, const Formula& q)
{
    const Automaton& u = p.universe;
    CompileEnv env;
    env.theory = p.theory;
    env.guard = [&](const std::string& v) { return universe_on(u, v); };
    env.domain_nonempty = !is_empty(u);
    env.atom = [&](const FormulaNode& n) -> Automaton {
        if (n.op == Op::Eq1) {
            Automaton eq = rename_tracks(atom_automaton(Op::Eq2, {"A", "B"}, p.theory), {{"A", n.args[0]}, {"B", n.args[1]}});
            return restrict_to_universe(eq, u, n.args);
        }
        if (n.op != Op::Rel)
            fail(Errc::SignatureMismatch, "'" + std::string(op_name(n.op)) + "' is not a first-order atom");
        const RelationAutomaton* r = p.find(n.name);
        if (!r)
            fail(Errc::SignatureMismatch, "presentation has no relation '" + n.name + "'");
        if (r->arity != n.args.size())
            fail(Errc::SignatureMismatch, "relation '" + n.name + "' has arity " + std::to_string(r->arity) +
                                              ", used with " + std::to_string(n.args.size()) + " arguments");
        std::map<std::string, std::string> names;
        auto vars = arg_vars(r->arity);
        for (std::size_t k = 0; k < vars.size(); ++k)
            names[vars[k]] = n.args[k];
        if (r->arity == 0)
            return r->automaton;
        return rename_tracks(r->automaton, names);
    };
    for (const auto& v : all_vars(q))
        if (sort_of(v) != Sort::Element)
            fail(Errc::SortError, "first-order queries use lower-case element variables");
    Automaton a = compile_core(desugar(q), env);
    auto fset = free_vars(q);
    std::vector<std::string> fv(fset.begin(), fset.end());
    a = on_tracks(a, merge_tracks(a.tracks(), make_tracks(fv)));
    return restrict_to_universe(a, u, fv);
}

bool fo_sentence(const Presentation& p, const Formula& q)
{
    if (!free_vars(q).empty())
        fail(Errc::InvalidInput, "query has free variables; it is not a sentence");
    return !is_empty(fo_query(p, q));
}

std::vector<std::vector<NodeAddr>> enumerate_elements(const Presentation& p, std::size_t bound)
{
    std::vector<std::vector<NodeAddr>> out;
    for (const auto& c : enumerate_accepted(p.universe, bound))
        out.push_back(c.decode()[0]);
    return out;
}

Presentation apply_fo_interpretation(const FOInterpretation& fo, const Presentation& p)
{
    validate(fo);
    Presentation out;
    out.theory = p.theory;
    Automaton u = on_tracks(fo_query(p, fo.universe), {"x"});
    u = intersect(u, universe_on(p.universe, "x"));
    out.universe = rename_tracks(u, {{"x", "X"}});
    for (const auto& r : fo.relations) {
        auto from = arg_vars(r.arity, "x");
        auto to = arg_vars(r.arity);
        Automaton a = on_tracks(fo_query(p, r.formula), make_tracks(from));
        std::map<std::string, std::string> names;
        for (std::size_t k = 0; k < from.size(); ++k)
            names[from[k]] = to[k];
        a = r.arity == 0 ? a : rename_tracks(a, names);
        out.relations.push_back({r.name, r.arity, restrict_to_universe(a, out.universe, to)});
    }
    return out;
}

namespace {

std::set<std::string> used_names(const Interpretation& i)
{
    std::set<std::string> used = all_vars(i.universe);
    for (const auto& r : i.relations) {
        auto v = all_vars(r.formula);
        used.insert(v.begin(), v.end());
    }
    return used;
}

struct FoTranslator {
    const Interpretation& i;
    std::set<std::string> used;

    Formula delta(const std::string& v) const { return rename_free(i.universe, {{"X", v}}); }

    std::string fresh(const std::string& base)
    {
        std::string v = fresh_name(base, used);
        used.insert(v);
        return v;
    }

    Formula tr(const Formula& fm, std::map<std::string, std::string> names)
    {
        switch (fm->op) {
        case Op::True:
        case Op::False: return fm;
        case Op::Rel: {
            const RelationDef* r = i.find(fm->name);
            if (!r || r->arity != fm->args.size())
                fail(Errc::SignatureMismatch, "interpretation has no relation " + fm->name + "/" +
                                                  std::to_string(fm->args.size()));
            std::map<std::string, std::string> sub;
            auto vars = arg_vars(r->arity);
            for (std::size_t k = 0; k < vars.size(); ++k)
                sub[vars[k]] = names.at(fm->args[k]);
            return rename_free(r->formula, sub);
        }
        case Op::Eq1: return f::atom(Op::Eq2, {names.at(fm->args[0]), names.at(fm->args[1])});
        case Op::Ex1:
        case Op::All1: {
            std::string v = fresh("Y_" + fm->name);
            names[fm->name] = v;
            Formula body = tr(fm->kids[0], names);
            if (fm->op == Op::Ex1)
                return f::ex2(v, f::conj(delta(v), body));
            return f::all2(v, f::implies(delta(v), body));
        }
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: {
            auto n = std::make_shared<FormulaNode>(*fm);
            for (auto& k : n->kids)
                k = tr(k, names);
            return n;
        }
        case Op::Not: return f::neg(tr(fm->kids[0], names));
        default: fail(Errc::SignatureMismatch, "unexpected atom in a first-order formula: " + to_string(fm));
        }
    }
};

} // namespace

Interpretation compose_fo_after(const FOInterpretation& fo, const Interpretation& i)
{
    validate(fo);
    validate(i);
    FoTranslator t{i, used_names(i)};
    t.used.insert("X");
    Interpretation out;
    out.theory = i.theory;
    out.universe = f::conj(i.universe, t.tr(fo.universe, {{"x", "X"}}));
    for (const auto& r : fo.relations) {
        std::map<std::string, std::string> names;
        auto from = arg_vars(r.arity, "x");
        auto to = arg_vars(r.arity);
        for (std::size_t k = 0; k < from.size(); ++k) {
            names[from[k]] = to[k];
            t.used.insert(to[k]);
        }
        out.relations.push_back({r.name, r.arity, t.tr(r.formula, names)});
    }
    return out;
}

namespace {

struct WmsoTranslator {
    const WmsoInterpretation& w;
    std::set<std::string> used;

    std::string fresh(const std::string& base)
    {
        std::string v = fresh_name(base, used);
        used.insert(v);
        return v;
    }

    Formula in_domain(const std::string& v) const { return rename_free(w.domain, {{"x", v}}); }

    Formula only_domain(const std::string& set)
    {
        std::string z = fresh("z");
        return f::all1(z, f::implies(f::atom(Op::In, {z, set}), in_domain(z)));
    }

    Formula tr(const Formula& fm)
    {
        switch (fm->op) {
        case Op::Succ:
        case Op::S0:
        case Op::S1:
        case Op::Prefix: {
            auto it = w.atoms.find(std::string(op_name(fm->op)));
            if (it == w.atoms.end())
                fail(Errc::SignatureMismatch, "inner interpretation does not define '" +
                                                  std::string(op_name(fm->op)) + "'");
            return rename_free(it->second, {{"x", fm->args[0]}, {"y", fm->args[1]}});
        }
        case Op::Ex1: return f::ex1(fm->name, f::conj(in_domain(fm->name), tr(fm->kids[0])));
        case Op::All1: return f::all1(fm->name, f::implies(in_domain(fm->name), tr(fm->kids[0])));
        case Op::Ex2: return f::ex2(fm->name, f::conj(only_domain(fm->name), tr(fm->kids[0])));
        case Op::All2: return f::all2(fm->name, f::implies(only_domain(fm->name), tr(fm->kids[0])));
        default: break;
        }
        if (fm->kids.empty())
            return fm;
        auto n = std::make_shared<FormulaNode>(*fm);
        for (auto& k : n->kids)
            k = tr(k);
        return n;
    }
};

} // namespace

Interpretation compose_wmso_before(const Interpretation& i, const WmsoInterpretation& w)
{
    validate(i);
    validate(w);
    if (i.theory != w.theory)
        fail(Errc::TheoryMismatch, "interpretations are over different theories");
    WmsoTranslator t{w, used_names(i)};
    for (const auto& [name, fm] : w.atoms) {
        auto v = all_vars(fm);
        t.used.insert(v.begin(), v.end());
    }
    auto dv = all_vars(w.domain);
    t.used.insert(dv.begin(), dv.end());
    Interpretation out;
    out.theory = i.theory;
    out.universe = f::conj(t.only_domain("X"), t.tr(i.universe));
    for (const auto& r : i.relations)
        out.relations.push_back({r.name, r.arity, t.tr(r.formula)});
    return out;
}

Formula atom_formula(const std::string& x, const std::string& pre)
{
    std::set<std::string> used{x};
    std::string b = fresh_name("a_b", used);
    used.insert(b);
    std::string c = fresh_name("a_c", used);
    auto strictly_below = [&](const std::string& v) {
        return f::conj(f::rel(pre, {v, x}), f::neg(f::atom(Op::Eq1, {v, x})));
    };
    return f::ex1(b, f::conj(strictly_below(b),
                             f::all1(c, f::implies(strictly_below(c), f::atom(Op::Eq1, {c, b})))));
}

namespace {

std::string fo_name(const std::string& v)
{
    return (sort_of(v) == Sort::Set ? "s_" : "e_") + v;
}

struct PowersetTranslator {
    std::set<std::string> used;

    std::string fresh(const std::string& base)
    {
        std::string v = fresh_name(base, used);
        used.insert(v);
        return v;
    }

    Formula tr(const Formula& fm)
    {
        auto a = [&](std::size_t k) { return fo_name(fm->args[k]); };
        switch (fm->op) {
        case Op::True:
        case Op::False: return fm;
        case Op::In: return f::conj(atom_formula(a(0)), f::rel("pre", {a(0), a(1)}));
        case Op::Sub: return f::rel("pre", {a(0), a(1)});
        case Op::Eq1:
        case Op::Eq2: return f::atom(Op::Eq1, {a(0), a(1)});
        case Op::Empty: {
            std::string y = fresh("e_bot");
            return f::all1(y, f::rel("pre", {a(0), y}));
        }
        case Op::Sing: return atom_formula(a(0));
        case Op::Succ:
        case Op::S0:
        case Op::S1:
        case Op::Prefix: return f::rel(std::string(op_name(fm->op)), {a(0), a(1)});
        case Op::Ex1: return f::ex1(fo_name(fm->name), f::conj(atom_formula(fo_name(fm->name)), tr(fm->kids[0])));
        case Op::All1:
            return f::all1(fo_name(fm->name), f::implies(atom_formula(fo_name(fm->name)), tr(fm->kids[0])));
        case Op::Ex2: return f::ex1(fo_name(fm->name), tr(fm->kids[0]));
        case Op::All2: return f::all1(fo_name(fm->name), tr(fm->kids[0]));
        case Op::Rel: fail(Errc::InvalidInput, "relation symbols cannot be factored");
        default: break;
        }
        auto n = std::make_shared<FormulaNode>(*fm);
        for (auto& k : n->kids)
            k = tr(k);
        return n;
    }
};

} // namespace

FOInterpretation factor_through_powerset(const Interpretation& i)
{
    validate(i);
    PowersetTranslator t;
    for (const auto& v : used_names(i))
        t.used.insert(fo_name(v));
    FOInterpretation out;
    out.universe = rename_free(t.tr(i.universe), {{fo_name("X"), "x"}});
    for (const auto& r : i.relations) {
        std::map<std::string, std::string> names;
        auto from = arg_vars(r.arity);
        auto to = arg_vars(r.arity, "x");
        for (std::size_t k = 0; k < from.size(); ++k)
            names[fo_name(from[k])] = to[k];
        out.relations.push_back({r.name, r.arity, rename_free(t.tr(r.formula), names)});
    }
    return out;
}

FiniteStructure fragment_on(const Presentation& p, std::vector<std::vector<NodeAddr>> elements)
{
    FiniteStructure s;
    s.elements = std::move(elements);
    const int n = static_cast<int>(s.elements.size());
    for (const auto& r : p.relations) {
        auto& [arity, tuples] = s.relations[r.name];
        arity = r.arity;
        std::vector<int> idx(r.arity, 0);
        if (r.arity == 0) {
            if (accepts(r.automaton, SetTuple{}))
                tuples.insert({});
            continue;
        }
        if (n == 0)
            continue;
        while (true) {
            SetTuple sets;
            for (int k : idx)
                sets.push_back(s.elements[static_cast<std::size_t>(k)]);
            if (accepts(r.automaton, sets))
                tuples.insert(idx);
            std::size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == n)
                idx[pos++] = 0;
            if (pos == idx.size())
                break;
        }
    }
    return s;
}

FiniteStructure fragment(const Presentation& p, std::size_t bound)
{
    return fragment_on(p, enumerate_elements(p, bound));
}

namespace {

class IsoSearch {
public:
    IsoSearch(const FiniteStructure& a, const FiniteStructure& b) : a_(a), b_(b), n_(a.elements.size())
    {
        for (const auto& [name, rel] : a.relations) {
            rels_.push_back(name);
            a_by_elem_.emplace_back(n_);
            b_by_elem_.emplace_back(n_);
            for (const auto& t : rel.second)
                for (int e : std::set<int>(t.begin(), t.end()))
                    a_by_elem_.back()[static_cast<std::size_t>(e)].push_back(t);
            for (const auto& t : b.relations.at(name).second)
                for (int e : std::set<int>(t.begin(), t.end()))
                    b_by_elem_.back()[static_cast<std::size_t>(e)].push_back(t);
        }
        sig_a_ = signatures(a);
        sig_b_ = signatures(b);
    }

    std::optional<std::vector<int>> run()
    {
        order_ = search_order();
        map_.assign(n_, -1);
        inv_.assign(n_, -1);
        if (extend(0))
            return map_;
        return std::nullopt;
    }

private:
    using Sig = std::vector<long>;

    std::vector<Sig> signatures(const FiniteStructure& s) const
    {
        std::vector<Sig> sig(n_);
        for (const auto& name : rels_) {
            const auto& [arity, tuples] = s.relations.at(name);
            std::vector<std::vector<long>> count(n_, std::vector<long>(arity + 1, 0));
            for (const auto& t : tuples) {
                for (std::size_t k = 0; k < t.size(); ++k)
                    ++count[static_cast<std::size_t>(t[k])][k];
                if (std::all_of(t.begin(), t.end(), [&](int e) { return e == t[0]; }) && !t.empty())
                    ++count[static_cast<std::size_t>(t[0])][arity];
            }
            for (std::size_t e = 0; e < n_; ++e)
                sig[e].insert(sig[e].end(), count[e].begin(), count[e].end());
        }
        return sig;
    }

    std::vector<int> search_order() const
    {
        // Breadth-first over the Gaifman graph so that constraints bind early.
        std::vector<std::vector<int>> adj(n_);
        for (std::size_t r = 0; r < rels_.size(); ++r)
            for (std::size_t e = 0; e < n_; ++e)
                for (const auto& t : a_by_elem_[r][e])
                    for (int o : t)
                        if (o != static_cast<int>(e))
                            adj[e].push_back(o);
        std::vector<int> order;
        std::vector<bool> seen(n_, false);
        for (std::size_t s = 0; s < n_; ++s) {
            if (seen[s])
                continue;
            seen[s] = true;
            std::vector<int> queue{static_cast<int>(s)};
            for (std::size_t h = 0; h < queue.size(); ++h) {
                int e = queue[h];
                order.push_back(e);
                for (int o : adj[static_cast<std::size_t>(e)])
                    if (!seen[static_cast<std::size_t>(o)]) {
                        seen[static_cast<std::size_t>(o)] = true;
                        queue.push_back(o);
                    }
            }
        }
        return order;
    }

    bool consistent(int x, int y) const
    {
        for (std::size_t r = 0; r < rels_.size(); ++r) {
            const auto& tb = b_.relations.at(rels_[r]).second;
            const auto& ta = a_.relations.at(rels_[r]).second;
            for (const auto& t : a_by_elem_[r][static_cast<std::size_t>(x)]) {
                std::vector<int> img;
                bool complete = true;
                for (int e : t) {
                    int m = map_[static_cast<std::size_t>(e)];
                    if (m < 0) {
                        complete = false;
                        break;
                    }
                    img.push_back(m);
                }
                if (complete && !tb.count(img))
                    return false;
            }
            for (const auto& t : b_by_elem_[r][static_cast<std::size_t>(y)]) {
                std::vector<int> pre;
                bool complete = true;
                for (int e : t) {
                    int m = inv_[static_cast<std::size_t>(e)];
                    if (m < 0) {
                        complete = false;
                        break;
                    }
                    pre.push_back(m);
                }
                if (complete && !ta.count(pre))
                    return false;
            }
        }
        return true;
    }

    bool extend(std::size_t k)
    {
        if (k == n_)
            return true;
        int x = order_[k];
        for (std::size_t y = 0; y < n_; ++y) {
            if (inv_[y] >= 0 || sig_a_[static_cast<std::size_t>(x)] != sig_b_[y])
                continue;
            map_[static_cast<std::size_t>(x)] = static_cast<int>(y);
            inv_[y] = x;
            if (consistent(x, static_cast<int>(y)) && extend(k + 1))
                return true;
            map_[static_cast<std::size_t>(x)] = -1;
            inv_[y] = -1;
        }
        return false;
    }

    const FiniteStructure& a_;
    const FiniteStructure& b_;
    std::size_t n_;
    std::vector<std::string> rels_;
    std::vector<std::vector<std::vector<std::vector<int>>>> a_by_elem_, b_by_elem_;
    std::vector<Sig> sig_a_, sig_b_;
    std::vector<int> order_, map_, inv_;
};

} // namespace

std::optional<std::vector<int>> find_isomorphism(const FiniteStructure& a, const FiniteStructure& b)
{
    if (a.elements.size() != b.elements.size() || a.relations.size() != b.relations.size())
        return std::nullopt;
    for (const auto& [name, rel] : a.relations) {
        auto it = b.relations.find(name);
        if (it == b.relations.end() || it->second.first != rel.first ||
            it->second.second.size() != rel.second.size())
            return std::nullopt;
    }
    return IsoSearch(a, b).run();
}

Automaton llex_less(const std::string& x, const std::string& y)
{
    // State: (at first position, first difference, which code is longer).
    // Codes have length max(1, max+1), so position 0 never decides length.
    enum { Eq = 0, Less = 1, Greater = 2 };
    struct S {
        int first, cmp, len;
        bool operator==(const S&) const = default;
    };
    struct H {
        std::size_t operator()(const S& s) const noexcept
        {
            return static_cast<std::size_t>(s.first * 9 + s.cmp * 3 + s.len);
        }
    };
    // Slot #0 is x, slot #1 is y; accepts x < y.
    auto a = build_word_automaton<S, H>(
        {"#0", "#1"}, S{1, Eq, Eq},
        [](const S& s, Letter l) {
            bool bx = l & 1, by = l >> 1 & 1;
            S n{0, s.cmp, s.len};
            if (s.cmp == Eq && bx != by)
                n.cmp = bx ? Greater : Less;
            if (!s.first) {
                if (bx && by)
                    n.len = Eq;
                else if (bx)
                    n.len = Greater;
                else if (by)
                    n.len = Less;
            }
            return n;
        },
        [](const S& s) { return s.len == Less || (s.len == Eq && s.cmp == Less); });
    return rename_tracks(Automaton(a), {{"#0", x}, {"#1", y}});
}

QuotientResult quotient_word_presentation(const Presentation& p, const std::string& congruence, std::size_t bound)
{
    if (p.theory != Theory::Delta1)
        fail(Errc::NotDelta1, "quotients are supported for delta1 presentations only");
    const RelationAutomaton* sim = p.find(congruence);
    if (!sim || sim->arity != 2)
        fail(Errc::InvalidInput, "no binary relation named '" + congruence + "'");

    FiniteStructure frag = fragment(p, bound);
    const auto& eq = frag.relations.at(congruence).second;
    const int n = static_cast<int>(frag.elements.size());
    auto name_of = [&](int e) { return set_str(frag.elements[static_cast<std::size_t>(e)], Theory::Delta1); };
    auto violation = [&](const std::string& what) {
        fail(Errc::BoundedCongruenceCheckFailed, what);
    };
    for (int a = 0; a < n; ++a) {
        if (!eq.count({a, a}))
            violation("not reflexive at " + name_of(a));
        for (int b = 0; b < n; ++b) {
            if (eq.count({a, b}) && !eq.count({b, a}))
                violation("not symmetric at (" + name_of(a) + ", " + name_of(b) + ")");
            if (!eq.count({a, b}))
                continue;
            for (int c = 0; c < n; ++c)
                if (eq.count({b, c}) && !eq.count({a, c}))
                    violation("not transitive at (" + name_of(a) + ", " + name_of(b) + ", " + name_of(c) + ")");
        }
    }
    for (const auto& [name, rel] : frag.relations) {
        if (name == congruence)
            continue;
        const auto& [arity, tuples] = rel;
        std::vector<int> idx(arity, 0);
        if (arity == 0 || n == 0)
            continue;
        while (true) {
            bool holds = tuples.count(idx) != 0;
            for (std::size_t k = 0; k < arity; ++k)
                for (int b = 0; b < n; ++b) {
                    if (!eq.count({idx[k], b}))
                        continue;
                    auto moved = idx;
                    moved[k] = b;
                    if ((tuples.count(moved) != 0) != holds)
                        violation("relation " + name + " is not compatible: position " + std::to_string(k + 1) +
                                  " changed from " + name_of(idx[k]) + " to " + name_of(b));
                }
            std::size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == n)
                idx[pos++] = 0;
            if (pos == idx.size())
                break;
        }
    }

    const Automaton& u = p.universe;
    Automaton sim_xy = rename_tracks(sim->automaton, {{"X1", "X"}, {"X2", "Y"}});
    Automaton smaller = intersect(intersect(sim_xy, universe_on(u, "Y")), llex_less("Y", "X"));
    Automaton reps = intersect(u, complement(project_track(smaller, "Y")));

    QuotientResult out;
    out.checked_elements = frag.elements.size();
    out.presentation.theory = p.theory;
    out.presentation.universe = reps;
    for (const auto& r : p.relations) {
        auto vars = arg_vars(r.arity);
        out.presentation.relations.push_back({r.name, r.arity, restrict_to_universe(r.automaton, reps, vars)});
    }
    const Automaton& sim_new = out.presentation.find(congruence)->automaton;
    Automaton equal = restrict_to_universe(
        rename_tracks(atom_automaton(Op::Eq2, {"A", "B"}, p.theory), {{"A", "X1"}, {"B", "X2"}}), reps, {"X1", "X2"});
    out.injective = language_equal(sim_new, equal);

    auto kept = enumerate_elements(out.presentation, bound);
    out.surjective = true;
    for (const auto& e : frag.elements) {
        bool found = false;
        for (const auto& r : kept)
            if (accepts(sim->automaton, SetTuple{e, r})) {
                found = true;
                break;
            }
        out.surjective = out.surjective && found;
    }
    return out;
}

} // namespace fsi
