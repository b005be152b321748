#include "fsi/io.hpp"

#include <fstream>
#include <sstream>

#include "fsi/error.hpp"
#include "json.hpp"

namespace fsi {

using nlohmann::json;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::InvalidInput, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::InvalidInput, "cannot write " + path);
    out << text;
}

Distribution parse_distribution(const FiniteTree& t, std::string_view text)
{
    Distribution d(t.size(), 0);
    std::vector<bool> seen(t.size(), false);
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find('#'); c != std::string::npos)
            line.resize(c);
        std::istringstream ls(line);
        std::string addr;
        if (!(ls >> addr))
            continue;
        long count;
        std::string rest;
        if (!(ls >> count) || (ls >> rest))
            fail(Errc::InvalidInput, "line " + std::to_string(lineno) + ": expected '<node> <count>'");
        if (count < 0)
            fail(Errc::InvalidInput, "line " + std::to_string(lineno) + ": negative count");
        auto idx = t.index_of(NodeAddr::parse(addr));
        if (!idx)
            fail(Errc::InvalidInput, "line " + std::to_string(lineno) + ": node " + addr + " is not in the tree");
        if (seen[static_cast<std::size_t>(*idx)])
            fail(Errc::InvalidInput, "line " + std::to_string(lineno) + ": node " + addr + " listed twice");
        seen[static_cast<std::size_t>(*idx)] = true;
        d[static_cast<std::size_t>(*idx)] = static_cast<int>(count);
    }
    return d;
}

std::string format_distribution(const FiniteTree& t, const Distribution& d)
{
    std::string out;
    for (std::size_t x = 0; x < t.size(); ++x)
        if (d[x] != 0)
            out += t.node(static_cast<int>(x)).str() + " " + std::to_string(d[x]) + "\n";
    return out;
}

std::string format_flow(const FiniteTree& t, const Flow& f)
{
    std::string out;
    for (std::size_t x = 0; x < t.size(); ++x)
        out += t.node(static_cast<int>(x)).str() + " " + std::to_string(f[x]) + "\n";
    return out;
}

std::string format_placement(const FiniteTree& t, const Placement& p)
{
    std::string out;
    for (const auto& [car, node] : p)
        out += t.node(car.node).str() + " " + std::to_string(car.slot) + " -> " + t.node(node).str() + "\n";
    return out;
}

namespace {

Formula formula_field(const json& j, const char* key, FormulaMode mode)
{
    if (!j.contains(key))
        fail(Errc::InvalidInput, std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    std::string text;
    if (v.is_string())
        text = v.get<std::string>();
    else if (v.is_array()) {
        for (const auto& part : v) {
            if (!part.is_string())
                fail(Errc::InvalidInput, std::string("field '") + key + "' must hold strings");
            text += part.get<std::string>() + " ";
        }
    } else
        fail(Errc::InvalidInput, std::string("field '") + key + "' must be a formula string");
    return parse_formula(text, mode);
}

std::vector<RelationDef> relations_field(const json& j, FormulaMode mode)
{
    std::vector<RelationDef> out;
    if (!j.contains("relations"))
        return out;
    if (!j.at("relations").is_array())
        fail(Errc::InvalidInput, "'relations' must be an array");
    for (const auto& r : j.at("relations")) {
        if (!r.contains("name") || !r.at("name").is_string() || !r.contains("arity") ||
            !r.at("arity").is_number_unsigned())
            fail(Errc::InvalidInput, "each relation needs a string 'name' and a non-negative 'arity'");
        out.push_back({r.at("name").get<std::string>(), r.at("arity").get<std::size_t>(),
                       formula_field(r, "formula", mode)});
    }
    return out;
}

Theory theory_field(const json& j)
{
    if (!j.contains("theory") || !j.at("theory").is_string())
        fail(Errc::InvalidInput, "missing field 'theory'");
    return parse_theory(j.at("theory").get<std::string>());
}

json relations_json(const std::vector<RelationDef>& rels)
{
    json out = json::array();
    for (const auto& r : rels)
        out.push_back({{"name", r.name}, {"arity", r.arity}, {"formula", to_string(r.formula)}});
    return out;
}

} // namespace

AnyInterpretation parse_interpretation(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        fail(Errc::InvalidInput, "interpretation file must hold a JSON object");
    std::string kind = j.value("kind", "sets");
    if (kind == "sets") {
        Interpretation i;
        i.theory = theory_field(j);
        i.universe = formula_field(j, "universe", FormulaMode::Wmso);
        i.relations = relations_field(j, FormulaMode::Wmso);
        validate(i);
        return i;
    }
    if (kind == "fo") {
        FOInterpretation i;
        i.universe = formula_field(j, "universe", FormulaMode::FirstOrder);
        i.relations = relations_field(j, FormulaMode::FirstOrder);
        validate(i);
        return i;
    }
    if (kind == "wmso") {
        WmsoInterpretation w;
        w.theory = theory_field(j);
        w.domain = formula_field(j, "domain", FormulaMode::Wmso);
        if (j.contains("atoms")) {
            if (!j.at("atoms").is_object())
                fail(Errc::InvalidInput, "'atoms' must be an object");
            for (const auto& [name, v] : j.at("atoms").items())
                w.atoms[name] = formula_field(j.at("atoms"), name.c_str(), FormulaMode::Wmso);
        }
        validate(w);
        return w;
    }
    fail(Errc::InvalidInput, "unknown interpretation kind '" + kind + "'");
}

AnyInterpretation load_interpretation(const std::string& path)
{
    return parse_interpretation(read_file(path));
}

Interpretation load_sets_interpretation(const std::string& path)
{
    auto any = load_interpretation(path);
    if (!std::holds_alternative<Interpretation>(any))
        fail(Errc::InvalidInput, path + " is not a finite sets interpretation");
    return std::get<Interpretation>(any);
}

std::string interpretation_json(const Interpretation& i)
{
    json j{{"theory", theory_name(i.theory)},
           {"universe", to_string(i.universe)},
           {"relations", relations_json(i.relations)}};
    return j.dump(2) + "\n";
}

std::string interpretation_json(const FOInterpretation& i)
{
    json j{{"kind", "fo"}, {"universe", to_string(i.universe)}, {"relations", relations_json(i.relations)}};
    return j.dump(2) + "\n";
}

std::string interpretation_json(const WmsoInterpretation& w)
{
    json atoms = json::object();
    for (const auto& [name, fm] : w.atoms)
        atoms[name] = to_string(fm);
    json j{{"kind", "wmso"}, {"theory", theory_name(w.theory)}, {"domain", to_string(w.domain)}, {"atoms", atoms}};
    return j.dump(2) + "\n";
}

} // namespace fsi
