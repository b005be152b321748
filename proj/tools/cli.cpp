#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <sstream>

#include "fsi/compile.hpp"
#include "fsi/error.hpp"
#include "fsi/eval_finite.hpp"
#include "fsi/io.hpp"
#include "fsi/lab.hpp"

namespace fsi::cli {

namespace {

using nlohmann::json;

enum class Format { Text, Json };

struct Globals {
    Format format = Format::Text;
    std::uint64_t seed = 1;
    std::size_t bound = 4;
    bool strict = false;
};

struct Context {
    Globals g;
    std::ostream& out;
    std::ostream& err;

    bool json_out() const { return g.format == Format::Json; }
    void emit(const json& j) const { out << j.dump(2) << "\n"; }
};

FiniteTree load_tree(const Context& ctx, const std::string& path)
{
    return FiniteTree::parse(read_file(path),
                             ctx.g.strict ? FiniteTree::Validation::Strict : FiniteTree::Validation::Close);
}

json coding_json(const Coding& c, const Tracks& tracks)
{
    json sets = json::object();
    auto decoded = c.decode();
    for (std::size_t k = 0; k < tracks.size(); ++k)
        sets[tracks[k]] = set_str(decoded[k], c.kind);
    return {{"coding", c.serialize()}, {"sets", sets}};
}

std::string coding_text(const Coding& c, const Tracks& tracks)
{
    auto decoded = c.decode();
    std::string s;
    for (std::size_t k = 0; k < tracks.size(); ++k)
        s += (k ? " " : "") + tracks[k] + "=" + set_str(decoded[k], c.kind);
    return s.empty() ? "(no free variables)" : s;
}

Presentation presentation_for(const std::string& path)
{
    auto any = load_interpretation(path);
    if (auto* i = std::get_if<Interpretation>(&any))
        return apply_interpretation(*i);
    fail(Errc::InvalidInput, path + " must hold a finite sets interpretation");
}

int cmd_compile(const Context& ctx, Theory th, const std::string& formula, const std::string& dump,
                const std::string& dot)
{
    Automaton a = minimize(compile(formula, th));
    if (!dump.empty())
        write_file(dump, a.dump());
    if (!dot.empty())
        write_file(dot, a.dot());
    if (ctx.json_out())
        ctx.emit({{"theory", theory_name(th)},
                  {"tracks", a.tracks()},
                  {"states", a.num_states()},
                  {"empty", is_empty(a)},
                  {"universal", is_universal(a)}});
    else {
        ctx.out << "theory    " << theory_name(th) << "\n";
        ctx.out << "tracks    ";
        for (const auto& t : a.tracks())
            ctx.out << t << " ";
        ctx.out << "\nstates    " << a.num_states() << "\n";
        if (dump.empty() && dot.empty())
            ctx.out << a.dump();
    }
    return 0;
}

int cmd_sat(const Context& ctx, Theory th, const std::string& formula)
{
    Automaton a = minimize(compile(formula, th));
    bool sat = !is_empty(a);
    std::optional<Coding> witness;
    if (sat) {
        auto found = enumerate_accepted(a, std::max<std::size_t>(ctx.g.bound, 1));
        if (!found.empty())
            witness = found.front();
    }
    if (ctx.json_out()) {
        json j{{"satisfiable", sat}};
        if (witness)
            j["witness"] = coding_json(*witness, a.tracks());
        ctx.emit(j);
    } else {
        ctx.out << (sat ? "satisfiable" : "unsatisfiable") << "\n";
        if (witness)
            ctx.out << "witness   " << coding_text(*witness, a.tracks()) << "\n";
        else if (sat)
            ctx.out << "no witness within bound " << ctx.g.bound << "\n";
    }
    return sat ? 0 : 1;
}

int cmd_query(const Context& ctx, const std::string& interp, const std::string& sentence, const std::string& formula)
{
    Presentation p = presentation_for(interp);
    if (!sentence.empty()) {
        bool v = fo_sentence(p, parse_formula(sentence, FormulaMode::FirstOrder));
        if (ctx.json_out())
            ctx.emit({{"sentence", sentence}, {"value", v}});
        else
            ctx.out << (v ? "true" : "false") << "\n";
        return v ? 0 : 1;
    }
    if (formula.empty())
        fail(Errc::InvalidInput, "query needs --sentence or --formula");
    Automaton a = fo_query(p, parse_formula(formula, FormulaMode::FirstOrder));
    auto found = enumerate_accepted(a, ctx.g.bound);
    if (ctx.json_out()) {
        json rows = json::array();
        for (const auto& c : found)
            rows.push_back(coding_json(c, a.tracks())["sets"]);
        ctx.emit({{"formula", formula}, {"bound", ctx.g.bound}, {"answers", rows}});
    } else {
        for (const auto& c : found)
            ctx.out << coding_text(c, a.tracks()) << "\n";
        ctx.out << found.size() << " answers within bound " << ctx.g.bound << "\n";
    }
    return found.empty() && is_empty(a) ? 1 : 0;
}

void print_structure(const Context& ctx, const FiniteStructure& s, Theory th)
{
    if (ctx.json_out()) {
        json elems = json::array();
        for (const auto& e : s.elements)
            elems.push_back(set_str(e, th));
        json rels = json::object();
        for (const auto& [name, rel] : s.relations) {
            json tuples = json::array();
            for (const auto& t : rel.second) {
                json tuple = json::array();
                for (int k : t)
                    tuple.push_back(set_str(s.elements[static_cast<std::size_t>(k)], th));
                tuples.push_back(tuple);
            }
            rels[name] = {{"arity", rel.first}, {"tuples", tuples}};
        }
        ctx.emit({{"elements", elems}, {"relations", rels}});
        return;
    }
    ctx.out << "elements  " << s.elements.size() << "\n";
    for (const auto& e : s.elements)
        ctx.out << "  " << set_str(e, th) << "\n";
    for (const auto& [name, rel] : s.relations) {
        ctx.out << name << "/" << rel.first << "  " << rel.second.size() << " tuples\n";
        for (const auto& t : rel.second) {
            ctx.out << " ";
            for (int k : t)
                ctx.out << " " << set_str(s.elements[static_cast<std::size_t>(k)], th);
            ctx.out << "\n";
        }
    }
}

int cmd_interpret(const Context& ctx, const std::string& interp, const std::string& base)
{
    auto any = load_interpretation(interp);
    Presentation p = [&] {
        if (auto* i = std::get_if<Interpretation>(&any))
            return apply_interpretation(*i);
        if (auto* fo = std::get_if<FOInterpretation>(&any)) {
            if (base.empty())
                fail(Errc::InvalidInput, "a first-order interpretation needs --base");
            return apply_fo_interpretation(*fo, presentation_for(base));
        }
        fail(Errc::InvalidInput, "interpret takes a finite sets or first-order interpretation");
    }();
    print_structure(ctx, fragment(p, ctx.g.bound), p.theory);
    return 0;
}

int cmd_powerset(const Context& ctx, Theory th, const std::string& out)
{
    std::string text = interpretation_json(powerset_interpretation(th));
    if (!out.empty())
        write_file(out, text);
    else
        ctx.out << text;
    return 0;
}

int cmd_compose(const Context& ctx, const std::string& outer, const std::string& inner, const std::string& out)
{
    auto a = load_interpretation(outer);
    auto b = load_interpretation(inner);
    Interpretation result;
    if (auto* fo = std::get_if<FOInterpretation>(&a)) {
        auto* i = std::get_if<Interpretation>(&b);
        if (!i)
            fail(Errc::InvalidInput, "the inner interpretation must be a finite sets interpretation");
        result = compose_fo_after(*fo, *i);
    } else if (auto* i = std::get_if<Interpretation>(&a)) {
        auto* w = std::get_if<WmsoInterpretation>(&b);
        if (!w)
            fail(Errc::InvalidInput, "a finite sets interpretation composes with an inner WMSO interpretation");
        result = compose_wmso_before(*i, *w);
    } else
        fail(Errc::InvalidInput, "the outer interpretation must be first-order or finite sets");
    std::string text = interpretation_json(result);
    if (!out.empty())
        write_file(out, text);
    else
        ctx.out << text;
    return 0;
}

int cmd_factor(const Context& ctx, const std::string& interp, const std::string& out)
{
    std::string text = interpretation_json(factor_through_powerset(load_sets_interpretation(interp)));
    if (!out.empty())
        write_file(out, text);
    else
        ctx.out << text;
    return 0;
}

int cmd_quotient(const Context& ctx, const std::string& interp, const std::string& congruence)
{
    auto q = quotient_word_presentation(presentation_for(interp), congruence, ctx.g.bound);
    auto reps = enumerate_elements(q.presentation, ctx.g.bound);
    if (ctx.json_out()) {
        json r = json::array();
        for (const auto& e : reps)
            r.push_back(set_str(e, Theory::Delta1));
        ctx.emit({{"injective", q.injective},
                  {"surjective", q.surjective},
                  {"checked_elements", q.checked_elements},
                  {"universe_states", q.presentation.universe.num_states()},
                  {"representatives", r}});
    } else {
        ctx.out << "injective         " << (q.injective ? "yes" : "no") << "\n";
        ctx.out << "surjective        " << (q.surjective ? "yes" : "no") << "\n";
        ctx.out << "checked elements  " << q.checked_elements << "\n";
        ctx.out << "representatives  ";
        for (const auto& e : reps)
            ctx.out << " " << set_str(e, Theory::Delta1);
        ctx.out << "\n";
    }
    return q.injective && q.surjective ? 0 : 1;
}

int cmd_park(const Context& ctx, const std::string& tree, const std::string& dist, int k, bool trace, bool strong)
{
    FiniteTree t = load_tree(ctx, tree);
    Distribution d = parse_distribution(t, read_file(dist));
    auto sparse = is_k_sparse(t, d, k, strong);
    if (!sparse.sparse) {
        if (ctx.json_out())
            ctx.emit({{"sparse", false}, {"witness", sparse.witness->str()}, {"slack", sparse.slack}});
        else
            ctx.out << "not " << k << "-sparse; witness zone " << sparse.witness->str() << " (slack "
                    << sparse.slack << ")\n";
        return 1;
    }
    if (strong) {
        if (ctx.json_out())
            ctx.emit({{"sparse", true}, {"strong", true}});
        else
            ctx.out << "strongly " << k << "-sparse\n";
        return 0;
    }
    auto r = compute_placement(t, d, k);
    if (!verify_placement(t, d, r.placement))
        fail(Errc::Internal, "placement failed verification");
    if (ctx.json_out()) {
        json flow = json::object(), placement = json::array(), traces = json::array();
        for (std::size_t x = 0; x < t.size(); ++x)
            flow[t.node(static_cast<int>(x)).str()] = r.flow[x];
        for (const auto& [car, node] : r.placement)
            placement.push_back({{"node", t.node(car.node).str()}, {"slot", car.slot}, {"parks", t.node(node).str()}});
        for (const auto& tr : r.routing.traces) {
            json path = json::array();
            for (int x : tr.path)
                path.push_back(t.node(x).str());
            traces.push_back({{"node", t.node(tr.car.node).str()}, {"slot", tr.car.slot}, {"path", path},
                              {"stuck", tr.stuck}});
        }
        json j{{"sparse", true}, {"flow", flow}, {"placement", placement}};
        if (trace)
            j["traces"] = traces;
        ctx.emit(j);
    } else {
        ctx.out << "# flow\n" << format_flow(t, r.flow) << "# placement\n" << format_placement(t, r.placement);
        if (trace) {
            ctx.out << "# traces\n";
            for (const auto& tr : r.routing.traces) {
                ctx.out << t.node(tr.car.node).str() << " " << tr.car.slot << ":";
                for (int x : tr.path)
                    ctx.out << " " << t.node(x).str();
                if (tr.stuck)
                    ctx.out << " (stuck, re-parked)";
                ctx.out << "\n";
            }
        }
    }
    return 0;
}

json lab_report(const FiniteTree& t, const LabRun& run)
{
    auto sets = [&](NodeMask m) { return set_str(from_mask(t, m), Theory::Delta2); };
    json universe = json::array(), atoms = json::array(), iso = json::object(), per_atom = json::array(),
         code = json::object(), dist = json::object();
    for (std::size_t e = 0; e < run.lattice.universe.size(); ++e) {
        universe.push_back(sets(run.lattice.universe[e]));
        json img = json::array();
        for (std::size_t k = 0; k < run.lattice.atoms.size(); ++k)
            if (run.lattice.iso[e] >> k & 1)
                img.push_back("a" + std::to_string(k));
        iso[sets(run.lattice.universe[e])] = img;
    }
    json base = json::array();
    for (std::size_t k = 0; k < run.lattice.atoms.size(); ++k) {
        atoms.push_back(sets(run.lattice.universe[run.lattice.atoms[k]]));
        base.push_back("a" + std::to_string(k));
    }
    for (const auto& ai : run.injection.indices) {
        json imp = json::array();
        for (const auto& x : ai.important)
            imp.push_back(x.str());
        per_atom.push_back(json{{"atom", sets(ai.atom)},
                                {"important", imp},
                                {"sindex", ai.index.node.str()},
                                {"degenerate", ai.index.degenerate}});
    }
    for (const auto& [a, x] : run.injection.code)
        code[sets(a)] = x.str();
    for (std::size_t x = 0; x < t.size(); ++x)
        if (run.injection.distribution[x])
            dist[t.node(static_cast<int>(x)).str()] = run.injection.distribution[x];
    const Constants& c = run.constants;
    return json{{"universe", universe},
            {"bottom", sets(run.lattice.universe[run.lattice.bottom])},
            {"atoms", atoms},
            {"E", base},
            {"iso", iso},
            {"indices", per_atom},
            {"distribution", dist},
            {"k_star", run.injection.k_star},
            {"constants",
             {{"q_atoms", c.q_atoms}, {"q_mem", c.q_mem}, {"K_c", c.k_c}, {"K_im", c.k_im}, {"M", c.m},
              {"K_s", c.k_s}, {"overridden", c.overridden}}},
            {"code", code},
            {"checks",
             {{"injective", run.injective}, {"prefix_closed", run.prefix_closed}, {"bound_a", run.lemmas.bound_a},
              {"bound_b", run.lemmas.bound_b}}}};
}

int cmd_lab(const Context& ctx, const std::string& tree, const std::string& interp, std::optional<int> kim,
            const std::string& report)
{
    LatticeInstance inst{load_tree(ctx, tree), load_sets_interpretation(interp), kim};
    LabRun run = run_lab(inst);
    json j = lab_report(inst.t, run);
    if (!report.empty())
        write_file(report, j.dump(2) + "\n");
    bool ok = run.injective && run.prefix_closed && (run.lemmas.passed() || run.constants.overridden);
    if (ctx.json_out())
        ctx.emit(j);
    else {
        ctx.out << "elements      " << run.lattice.universe.size() << "\n";
        ctx.out << "atoms         " << run.lattice.atoms.size() << "\n";
        ctx.out << "K_im          " << run.constants.k_im << (run.constants.overridden ? " (override)" : "") << "\n";
        ctx.out << "K*            " << run.injection.k_star << "\n";
        ctx.out << "injective     " << (run.injective ? "yes" : "no") << "\n";
        ctx.out << "lemma bounds  " << (run.lemmas.passed() ? "pass" : "fail")
                << (run.constants.overridden ? " (override regime)" : "") << "\n";
        for (const auto& [a, x] : run.injection.code)
            ctx.out << "  " << set_str(from_mask(inst.t, a), Theory::Delta2) << " -> " << x.str() << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_selftest(const Context& ctx)
{
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        ctx.out << (ok ? "ok   " : "FAIL ") << name << "\n";
        failures += !ok;
    };
    Automaton sing = compile("(sing X)", Theory::Delta1);
    check("singletons are accepted", accepts(sing, SetTuple{naturals({3})}) && !accepts(sing, SetTuple{naturals({1, 2})}));
    check("ex1 over succ", is_universal(compile("(all1 x (ex1 y (succ x y)))", Theory::Delta1)));
    check("s0 and s1 differ", is_empty(compile("(ex1 x (ex1 y (and (s0 x y) (s1 x y))))", Theory::Delta2)));
    {
        FiniteTree t = FiniteTree::from_nodes({NodeAddr(), NodeAddr::parse("0"), NodeAddr::parse("1")});
        Distribution d{3, 0, 0};
        check("three cars at the root are not 0-sparse", !is_k_sparse(t, d, 0).sparse);
        auto r = compute_placement(t, d, 1);
        check("three cars at the root park", verify_placement(t, d, r.placement));
    }
    {
        LatticeInstance inst{FiniteTree::complete(1), lab_interpretation(LabFamily::Leaves), 1};
        LabRun run = run_lab(inst);
        check("two-atom lab instance", run.injective && run.lattice.atoms.size() == 2);
    }
    return failures ? 3 : 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"finite sets interpretations: automata, queries, parking and the lattice lab"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Globals g;
    std::string format = "text";
    app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--bound", g.bound, "enumeration bound (coding domain size)");
    app.add_flag("--strict", g.strict, "reject trees that are not already valid domains");

    std::string theory = "delta1", formula, dump, dot, interp, sentence, outer, inner, outpath, congruence, tree,
                dist, report, base;
    int k = 0;
    bool trace = false, strong = false;
    std::optional<int> kim;

    auto* c_compile = app.add_subcommand("compile", "compile a WMSO formula");
    c_compile->add_option("--theory", theory)->check(CLI::IsMember({"delta1", "delta2"}));
    c_compile->add_option("--formula", formula)->required();
    c_compile->add_option("--dump", dump, "write the automaton dump");
    c_compile->add_option("--dot", dot, "write a DOT graph");

    auto* c_sat = app.add_subcommand("sat", "satisfiability with a witness");
    c_sat->add_option("--theory", theory)->check(CLI::IsMember({"delta1", "delta2"}));
    c_sat->add_option("--formula", formula)->required();

    auto* c_query = app.add_subcommand("query", "first-order query over an interpreted structure");
    c_query->add_option("--interp", interp)->required();
    c_query->add_option("--sentence", sentence);
    c_query->add_option("--formula", formula);

    auto* c_interp = app.add_subcommand("interpret", "apply an interpretation and enumerate a fragment");
    c_interp->add_option("--interp", interp)->required();
    c_interp->add_option("--base", base, "finite sets interpretation a first-order one is applied to");

    auto* c_power = app.add_subcommand("powerset", "emit the weak powerset interpretation");
    c_power->add_option("--theory", theory)->check(CLI::IsMember({"delta1", "delta2"}));
    c_power->add_option("--out", outpath);

    auto* c_compose = app.add_subcommand("compose", "compose two interpretations");
    c_compose->add_option("--outer", outer)->required();
    c_compose->add_option("--inner", inner)->required();
    c_compose->add_option("--out", outpath);

    auto* c_factor = app.add_subcommand("factor", "factor through the weak powerset");
    c_factor->add_option("--interp", interp)->required();
    c_factor->add_option("--out", outpath);

    auto* c_quot = app.add_subcommand("quotient", "quotient a delta1 presentation");
    c_quot->add_option("--interp", interp)->required();
    c_quot->add_option("--congruence", congruence)->required();

    auto* c_park = app.add_subcommand("park", "sparsity, flow and car parking");
    c_park->add_option("--tree", tree)->required();
    c_park->add_option("--dist", dist)->required();
    c_park->add_option("-K", k)->required()->check(CLI::NonNegativeNumber);
    c_park->add_flag("--trace", trace);
    c_park->add_flag("--strong", strong, "test strong sparsity only");

    auto* c_lab = app.add_subcommand("lab", "powerset lattice pipeline on a finite tree");
    c_lab->add_option("--tree", tree)->required();
    c_lab->add_option("--interp", interp)->required();
    c_lab->add_option("--kim", kim)->check(CLI::NonNegativeNumber);
    c_lab->add_option("--report", report);

    auto* c_self = app.add_subcommand("selftest", "built-in smoke checks");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }
    g.format = format == "json" ? Format::Json : Format::Text;
    Context ctx{g, out, err};
    try {
        if (c_compile->parsed())
            return cmd_compile(ctx, parse_theory(theory), formula, dump, dot);
        if (c_sat->parsed())
            return cmd_sat(ctx, parse_theory(theory), formula);
        if (c_query->parsed())
            return cmd_query(ctx, interp, sentence, formula);
        if (c_interp->parsed())
            return cmd_interpret(ctx, interp, base);
        if (c_power->parsed())
            return cmd_powerset(ctx, parse_theory(theory), outpath);
        if (c_compose->parsed())
            return cmd_compose(ctx, outer, inner, outpath);
        if (c_factor->parsed())
            return cmd_factor(ctx, interp, outpath);
        if (c_quot->parsed())
            return cmd_quotient(ctx, interp, congruence);
        if (c_park->parsed())
            return cmd_park(ctx, tree, dist, k, trace, strong);
        if (c_lab->parsed())
            return cmd_lab(ctx, tree, interp, kim, report);
        if (c_self->parsed())
            return cmd_selftest(ctx);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.code() == Errc::Internal ? 3 : 2;
    } catch (const std::exception& e) {
        err << "internal: " << e.what() << "\n";
        return 3;
    }
    err << "no subcommand\n";
    return 2;
}

} // namespace fsi::cli
