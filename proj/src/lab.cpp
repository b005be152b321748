#include "fsi/lab.hpp"

#include <algorithm>
#include <bit>
#include <climits>

#include "fsi/compile.hpp"
#include "fsi/error.hpp"
#include "fsi/eval_finite.hpp"
#include "fsi/lab_kernels.hpp"

namespace fsi {

namespace {

const RelationDef& order_relation(const Interpretation& i)
{
    if (const RelationDef* r = i.find("pre"); r && r->arity == 2)
        return *r;
    for (const auto& r : i.relations)
        if (r.arity == 2)
            return r;
    fail(Errc::InvalidInput, "interpretation has no binary order relation");
}

MaskSet atom_mask_set(const LatticeReport& report)
{
    auto sets = report.atom_sets();
    return MaskSet(sets.begin(), sets.end());
}

} // namespace

std::vector<NodeMask> LatticeReport::atom_sets() const
{
    std::vector<NodeMask> out;
    for (std::size_t a : atoms)
        out.push_back(universe[a]);
    return out;
}

LatticeReport check_powerset_lattice(const LatticeInstance& inst)
{
    const FiniteTree& t = inst.t;
    if (t.size() > kLabTreeCap)
        fail(Errc::TreeTooLarge, "lattice checks enumerate all subsets; at most " + std::to_string(kLabTreeCap) +
                                     " nodes");
    const Formula& delta = inst.interp.universe;
    const Formula& pre = order_relation(inst.interp).formula;

    const long subsets = 1L << t.size();
    std::vector<char> member(static_cast<std::size_t>(subsets), 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (long x = 0; x < subsets; ++x)
        member[static_cast<std::size_t>(x)] = eval_finite_masks(delta, t, {{"X", static_cast<NodeMask>(x)}});

    LatticeReport r;
    for (long x = 0; x < subsets; ++x)
        if (member[static_cast<std::size_t>(x)])
            r.universe.push_back(static_cast<NodeMask>(x));
    const std::size_t n = r.universe.size();
    if (n == 0)
        fail(Errc::NotALattice, "the universe is empty");

    std::vector<char> leq(n * n, 0);
    const long pairs = static_cast<long>(n * n);
#pragma omp parallel for schedule(dynamic, 64)
    for (long p = 0; p < pairs; ++p) {
        std::size_t a = static_cast<std::size_t>(p) / n, b = static_cast<std::size_t>(p) % n;
        leq[static_cast<std::size_t>(p)] = eval_finite_masks(pre, t, {{"X1", r.universe[a]}, {"X2", r.universe[b]}});
    }
    auto le = [&](std::size_t a, std::size_t b) { return leq[a * n + b] != 0; };
    auto name = [&](std::size_t a) { return set_str(from_mask(t, r.universe[a]), Theory::Delta2); };

    for (std::size_t a = 0; a < n; ++a) {
        if (!le(a, a))
            fail(Errc::NotALattice, "order is not reflexive at " + name(a));
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b && le(a, b) && le(b, a))
                fail(Errc::NotALattice, "order is not antisymmetric at " + name(a) + ", " + name(b));
            if (!le(a, b))
                continue;
            for (std::size_t c = 0; c < n; ++c)
                if (le(b, c) && !le(a, c))
                    fail(Errc::NotALattice,
                         "order is not transitive at " + name(a) + ", " + name(b) + ", " + name(c));
        }
    }
    bool found = false;
    for (std::size_t a = 0; a < n && !found; ++a) {
        bool bottom = true;
        for (std::size_t b = 0; b < n && bottom; ++b)
            bottom = le(a, b);
        if (bottom) {
            r.bottom = a;
            found = true;
        }
    }
    if (!found)
        fail(Errc::NotALattice, "there is no least element");

    for (std::size_t a = 0; a < n; ++a) {
        std::size_t below = 0;
        for (std::size_t b = 0; b < n; ++b)
            below += b != a && le(b, a);
        if (below == 1)
            r.atoms.push_back(a);
    }
    if (r.atoms.size() > 31)
        fail(Errc::TooManyAtoms, std::to_string(r.atoms.size()) + " atoms");
    if (n != (std::size_t{1} << r.atoms.size()))
        fail(Errc::NotALattice, std::to_string(n) + " elements but " + std::to_string(r.atoms.size()) +
                                    " atoms; a finite powerset lattice has 2^atoms elements");

    r.iso.assign(n, 0);
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t k = 0; k < r.atoms.size(); ++k)
            if (le(r.atoms[k], e))
                r.iso[e] |= 1u << k;
    std::vector<char> hit(n, 0);
    for (std::size_t e = 0; e < n; ++e) {
        if (hit[r.iso[e]])
            fail(Errc::NotALattice, name(e) + " is not the join of the atoms below it");
        hit[r.iso[e]] = 1;
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (le(a, b) != ((r.iso[a] & ~r.iso[b]) == 0))
                fail(Errc::NotALattice, "atom map does not preserve the order at " + name(a) + ", " + name(b));
    return r;
}

std::set<std::pair<NodeMask, NodeMask>> mem_relation(const LatticeReport& report)
{
    std::set<std::pair<NodeMask, NodeMask>> out;
    for (std::size_t e = 0; e < report.universe.size(); ++e)
        for (std::size_t k = 0; k < report.atoms.size(); ++k)
            if (report.iso[e] >> k & 1)
                out.insert({report.universe[report.atoms[k]], report.universe[e]});
    return out;
}

Constants constants_from_sizes(std::size_t q_atoms, std::size_t q_mem)
{
    Constants c;
    c.q_atoms = q_atoms;
    c.q_mem = q_mem;
    c.k_c = 2 * static_cast<long>(q_mem) + 1;
    c.k_im = c.k_c * static_cast<long>(q_atoms);
    c.m = c.k_im * static_cast<long>(q_atoms);
    c.k_s = static_cast<long>(q_mem) * c.m;
    return c;
}

namespace {

struct LatticeFormulas {
    const Interpretation& i;
    Formula pre;

    explicit LatticeFormulas(const Interpretation& in) : i(in), pre(order_relation(in).formula) {}

    Formula delta(const std::string& v) const { return rename_free(i.universe, {{"X", v}}); }
    Formula le(const std::string& a, const std::string& b) const
    {
        return rename_free(pre, {{"X1", a}, {"X2", b}});
    }
    Formula lt(const std::string& a, const std::string& b) const
    {
        return f::conj(le(a, b), f::neg(f::atom(Op::Eq2, {a, b})));
    }
    Formula atom(const std::string& x) const
    {
        return f::conj(delta(x), f::ex2("Y", f::conj({delta("Y"), lt("Y", x),
                                                       f::all2("Z", f::implies(f::conj(delta("Z"), lt("Z", x)),
                                                                               f::atom(Op::Eq2, {"Z", "Y"})))})));
    }
    Formula inside(Formula fm, const std::vector<std::string>& vars) const
    {
        std::vector<Formula> parts;
        for (const auto& v : vars)
            parts.push_back(f::atom(Op::Sub, {v, "T"}));
        parts.push_back(relativize(fm, "T"));
        return f::conj(parts);
    }
};

} // namespace

Formula atoms_formula(const Interpretation& i)
{
    LatticeFormulas lf(i);
    return lf.inside(lf.atom("X"), {"X"});
}

Formula mem_formula(const Interpretation& i)
{
    LatticeFormulas lf(i);
    return lf.inside(f::conj({lf.atom("X"), lf.delta("Y"), lf.le("X", "Y")}), {"X", "Y"});
}

Constants derive_constants(const LatticeInstance& inst)
{
    for (const auto& v : all_vars(inst.interp.universe))
        if (v == "T")
            fail(Errc::CompileError, "the variable name T is reserved for the tree domain");
    Constants c;
    try {
        Automaton atoms = minimize(compile(atoms_formula(inst.interp), Theory::Delta2));
        Automaton mem = minimize(compile(mem_formula(inst.interp), Theory::Delta2));
        c = constants_from_sizes(atoms.num_states(), mem.num_states());
    } catch (const Error& e) {
        if (e.code() == Errc::Internal)
            throw;
        fail(Errc::CompileError, std::string("cannot compile Atoms/Mem: ") + e.what());
    }
    if (inst.kim) {
        c.k_im = *inst.kim;
        c.overridden = true;
    }
    return c;
}

std::vector<NodeAddr> important_nodes(const FiniteTree& t, const LatticeReport& report, NodeMask atom, long kim)
{
    MaskSet atoms = atom_mask_set(report);
    if (!atoms.count(atom))
        fail(Errc::NotAnAtom, set_str(from_mask(t, atom), Theory::Delta2) + " is not an atom");
    auto counts = completion_counts_parallel(t, atoms, atom);
    std::vector<bool> in(t.size());
    std::vector<NodeAddr> out;
    for (std::size_t x = 0; x < t.size(); ++x) {
        in[x] = counts[x] > kim;
        if (!in[x])
            continue;
        int p = t.parent(static_cast<int>(x));
        if (p >= 0 && !in[static_cast<std::size_t>(p)])
            fail(Errc::Internal, "important nodes are not prefix closed at " + t.node(static_cast<int>(x)).str());
        out.push_back(t.node(static_cast<int>(x)));
    }
    return out;
}

SIndex sindex(const std::vector<NodeAddr>& important)
{
    SIndex s;
    if (important.empty()) {
        s.degenerate = true;
        return s;
    }
    for (const auto& x : important) {
        bool all = std::all_of(important.begin(), important.end(), [&](const NodeAddr& y) { return x.comparable(y); });
        if (all && x.length() >= s.node.length())
            s.node = x;
    }
    return s;
}

std::vector<AtomIndex> index_atoms(const FiniteTree& t, const LatticeReport& report, long kim)
{
    std::vector<AtomIndex> out;
    for (NodeMask a : report.atom_sets()) {
        AtomIndex ai{a, important_nodes(t, report, a, kim), {}};
        ai.index = sindex(ai.important);
        out.push_back(std::move(ai));
    }
    return out;
}

Distribution index_distribution(const FiniteTree& t, const std::vector<AtomIndex>& indices)
{
    Distribution d(t.size(), 0);
    for (const auto& ai : indices)
        ++d[static_cast<std::size_t>(*t.index_of(ai.index.node))];
    return d;
}

LemmaReport check_lemma_bounds(const FiniteTree& t, const LatticeReport& report, const Constants& c)
{
    if (t.size() > kZoneEnumerationCap)
        fail(Errc::TreeTooLarge, "lemma checks enumerate zones; at most " + std::to_string(kZoneEnumerationCap) +
                                     " nodes");
    LemmaReport out;
    out.overridden = c.overridden;
    auto indices = index_atoms(t, report, c.k_im);
    for (std::size_t x = 0; x < t.size(); ++x) {
        const NodeMask sub = t.subtree_mask(static_cast<int>(x));
        std::set<NodeMask> traces;
        for (const auto& ai : indices)
            if (std::find(ai.important.begin(), ai.important.end(), t.node(static_cast<int>(x))) !=
                ai.important.end())
                traces.insert(ai.atom & ~sub);
        if (static_cast<long>(traces.size()) >= c.k_im) {
            out.bound_a = false;
            out.detail += "node " + t.node(static_cast<int>(x)).str() + ": " + std::to_string(traces.size()) +
                          " outside traces, K_im = " + std::to_string(c.k_im) + "\n";
        }
    }
    Distribution d = index_distribution(t, indices);
    int ks = static_cast<int>(std::min<long>(c.k_s, INT_MAX / 64));
    long excess = worst_zone_excess_parallel(t, d, ks);
    if (excess > 0) {
        out.bound_b = false;
        out.detail += "a zone holds " + std::to_string(excess) + " indices more than |Z| + K_s|F|\n";
    }
    return out;
}

bool atom_before(NodeMask x, NodeMask y)
{
    NodeMask diff = x ^ y;
    if (diff == 0)
        return false;
    return (x & (diff & (~diff + 1))) != 0;
}

CodeInjection build_code_injection(const FiniteTree& t, const LatticeReport& report, long kim)
{
    if (report.atoms.size() > t.size())
        fail(Errc::TooManyAtoms, std::to_string(report.atoms.size()) + " atoms exceed " + std::to_string(t.size()) +
                                     " nodes");
    if (!t.is_purely_binary())
        fail(Errc::NotPurelyBinary, "code injection needs a tree where every node has zero or two children");
    CodeInjection out;
    out.indices = index_atoms(t, report, kim);
    out.distribution = index_distribution(t, out.indices);
    auto k = minimal_sparse_k(t, out.distribution);
    if (!k)
        fail(Errc::Internal, "index distribution is not sparse for any K up to |t|");
    out.k_star = *k;
    out.parking = compute_placement(t, out.distribution, out.k_star);

    std::map<int, std::vector<NodeMask>> by_index;
    for (const auto& ai : out.indices)
        by_index[*t.index_of(ai.index.node)].push_back(ai.atom);
    for (auto& [node, atoms] : by_index) {
        std::sort(atoms.begin(), atoms.end(), atom_before);
        for (std::size_t r = 0; r < atoms.size(); ++r)
            out.code[atoms[r]] = t.node(out.parking.placement.at(Car{node, static_cast<int>(r) + 1}));
    }
    return out;
}

bool verify_code_injective(const LatticeReport& report, const std::map<NodeMask, NodeAddr>& code)
{
    auto atoms = report.atom_sets();
    if (code.size() != atoms.size())
        return false;
    std::set<NodeAddr> images;
    for (NodeMask a : atoms) {
        auto it = code.find(a);
        if (it == code.end() || !images.insert(it->second).second)
            return false;
    }
    return true;
}

Interpretation lab_interpretation(LabFamily family)
{
    const char* leaf = "(not (ex1 y (s0 x y)))";
    std::string delta;
    std::string pre = "(sub X1 X2)";
    switch (family) {
    case LabFamily::Leaves: delta = std::string("(all1 x (-> (in x X) ") + leaf + "))"; break;
    case LabFamily::Inner: delta = "(all1 x (-> (in x X) (ex1 y (s0 x y))))"; break;
    case LabFamily::RootAndLeaves:
        delta = std::string("(all1 x (-> (in x X) (or ") + leaf + " (all1 y (-> (prefix y x) (eq1 y x))))))";
        break;
    case LabFamily::ReversedLeaves:
        delta = std::string("(all1 x (-> (in x X) ") + leaf + "))";
        pre = "(sub X2 X1)";
        break;
    }
    Interpretation i;
    i.theory = Theory::Delta2;
    i.universe = parse_formula(delta);
    i.relations.push_back({"pre", 2, parse_formula(pre)});
    return i;
}

LatticeInstance random_lab_instance(std::mt19937_64& rng, std::size_t max_nodes)
{
    std::uniform_int_distribution<int> fam(0, 3);
    std::uniform_int_distribution<std::size_t> leaves(1, (max_nodes + 1) / 2);
    LatticeInstance inst;
    inst.interp = lab_interpretation(static_cast<LabFamily>(fam(rng)));
    inst.t = random_binary_tree(leaves(rng), rng);
    return inst;
}

LabRun run_lab(const LatticeInstance& inst, const Constants& constants)
{
    LabRun run;
    run.lattice = check_powerset_lattice(inst);
    run.constants = constants;
    run.injection = build_code_injection(inst.t, run.lattice, constants.k_im);
    run.lemmas = check_lemma_bounds(inst.t, run.lattice, constants);
    run.injective = verify_code_injective(run.lattice, run.injection.code);
    for (const auto& ai : run.injection.indices)
        for (const auto& x : ai.important)
            if (!x.is_root() && std::find(ai.important.begin(), ai.important.end(), x.parent()) == ai.important.end())
                run.prefix_closed = false;
    return run;
}

LabRun run_lab(const LatticeInstance& inst)
{
    return run_lab(inst, derive_constants(inst));
}

} // namespace fsi
