#include "fsi/formula.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>

#include "fsi/error.hpp"

namespace fsi {

Sort sort_of(std::string_view var)
{
    return !var.empty() && std::isupper(static_cast<unsigned char>(var[0])) ? Sort::Set : Sort::Element;
}

namespace {

struct OpInfo {
    Op op;
    std::string_view name;
};

constexpr OpInfo kOps[] = {
    {Op::True, "true"},   {Op::False, "false"}, {Op::Ex1, "ex1"},   {Op::All1, "all1"},     {Op::Ex2, "ex2"},
    {Op::All2, "all2"},   {Op::And, "and"},     {Op::Or, "or"},     {Op::Not, "not"},       {Op::Implies, "->"},
    {Op::Iff, "<->"},     {Op::In, "in"},       {Op::Sub, "sub"},   {Op::Eq1, "eq1"},       {Op::Eq2, "eq2"},
    {Op::Empty, "empty"}, {Op::Sing, "sing"},   {Op::Succ, "succ"}, {Op::S0, "s0"},         {Op::S1, "s1"},
    {Op::Prefix, "prefix"},
};

std::shared_ptr<FormulaNode> node(Op op)
{
    auto n = std::make_shared<FormulaNode>();
    n->op = op;
    return n;
}

} // namespace

std::string_view op_name(Op op)
{
    for (const auto& info : kOps)
        if (info.op == op)
            return info.name;
    return "rel";
}

bool is_quantifier(Op op)
{
    return op == Op::Ex1 || op == Op::All1 || op == Op::Ex2 || op == Op::All2;
}

bool is_atom(Op op)
{
    switch (op) {
    case Op::In:
    case Op::Sub:
    case Op::Eq1:
    case Op::Eq2:
    case Op::Empty:
    case Op::Sing:
    case Op::Succ:
    case Op::S0:
    case Op::S1:
    case Op::Prefix:
    case Op::Rel: return true;
    default: return false;
    }
}

namespace f {

Formula tru() { return node(Op::True); }
Formula fls() { return node(Op::False); }

Formula quant(Op op, std::string v, Formula body)
{
    auto n = node(op);
    n->name = std::move(v);
    n->kids = {std::move(body)};
    return n;
}

Formula ex1(std::string v, Formula body) { return quant(Op::Ex1, std::move(v), std::move(body)); }
Formula all1(std::string v, Formula body) { return quant(Op::All1, std::move(v), std::move(body)); }
Formula ex2(std::string v, Formula body) { return quant(Op::Ex2, std::move(v), std::move(body)); }
Formula all2(std::string v, Formula body) { return quant(Op::All2, std::move(v), std::move(body)); }

namespace {

Formula binary(Op op, Formula a, Formula b)
{
    auto n = node(op);
    n->kids = {std::move(a), std::move(b)};
    return n;
}

} // namespace

Formula conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return binary(Op::Implies, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return binary(Op::Iff, std::move(a), std::move(b)); }

Formula conj(std::vector<Formula> parts)
{
    if (parts.empty())
        return tru();
    Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
        acc = conj(parts[i], acc);
    return acc;
}

Formula disj(std::vector<Formula> parts)
{
    if (parts.empty())
        return fls();
    Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
        acc = disj(parts[i], acc);
    return acc;
}

Formula neg(Formula a)
{
    auto n = node(Op::Not);
    n->kids = {std::move(a)};
    return n;
}

Formula atom(Op op, std::vector<std::string> args)
{
    auto n = node(op);
    n->args = std::move(args);
    return n;
}

Formula rel(std::string name, std::vector<std::string> args)
{
    auto n = node(Op::Rel);
    n->name = std::move(name);
    n->args = std::move(args);
    return n;
}

} // namespace f

namespace {

struct Token {
    enum Kind { Open, Close, Word, End } kind;
    std::string text;
    std::size_t pos;
};

class Parser {
public:
    Parser(std::string_view text, FormulaMode mode) : text_(text), mode_(mode) { advance(); }

    Formula parse_all()
    {
        Formula fm = parse();
        if (tok_.kind != Token::End)
            error("unexpected trailing input");
        return fm;
    }

private:
    [[noreturn]] void error(const std::string& msg, Errc code = Errc::SyntaxError) const
    {
        fail(code, msg + " at offset " + std::to_string(tok_.pos));
    }

    void advance()
    {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
            ++i_;
        if (i_ >= text_.size()) {
            tok_ = {Token::End, "", i_};
            return;
        }
        char c = text_[i_];
        if (c == '(' || c == ')') {
            tok_ = {c == '(' ? Token::Open : Token::Close, std::string(1, c), i_};
            ++i_;
            return;
        }
        std::size_t start = i_;
        while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_])) && text_[i_] != '(' &&
               text_[i_] != ')')
            ++i_;
        tok_ = {Token::Word, std::string(text_.substr(start, i_ - start)), start};
    }

    static bool is_keyword(const std::string& w)
    {
        for (const auto& info : kOps)
            if (info.name == w)
                return true;
        return false;
    }

    std::string variable(std::optional<Sort> want)
    {
        if (tok_.kind != Token::Word)
            error(tok_.kind == Token::End ? "unbalanced parentheses: expected a variable" : "expected a variable");
        const std::string& w = tok_.text;
        bool ok = std::isalpha(static_cast<unsigned char>(w[0])) != 0;
        for (char c : w)
            ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'');
        if (!ok || is_keyword(w))
            error("invalid variable name '" + w + "'");
        if (want && sort_of(w) != *want)
            error(std::string("variable '") + w + "' must be " +
                      (*want == Sort::Element ? "first-order (lower-case)" : "a set variable (upper-case)"),
                  Errc::SortError);
        std::string out = w;
        advance();
        return out;
    }

    Formula parse()
    {
        if (tok_.kind == Token::Word) {
            if (tok_.text == "true" || tok_.text == "false") {
                Formula fm = tok_.text == "true" ? f::tru() : f::fls();
                advance();
                return fm;
            }
            error("expected '(' or a boolean constant");
        }
        if (tok_.kind != Token::Open)
            error(tok_.kind == Token::End ? "unbalanced parentheses: unexpected end of input" : "expected '('");
        advance();
        if (tok_.kind != Token::Word)
            error("expected an operator");
        std::string head = tok_.text;
        std::size_t head_pos = tok_.pos;
        advance();
        Formula out = parse_body(head, head_pos);
        if (tok_.kind != Token::Close)
            error(tok_.kind == Token::End ? "unbalanced parentheses: missing ')'" : "expected ')'");
        advance();
        return out;
    }

    Formula parse_body(const std::string& head, std::size_t head_pos)
    {
        const bool fo = mode_ == FormulaMode::FirstOrder;
        std::optional<Op> op;
        for (const auto& info : kOps)
            if (info.name == head)
                op = info.op;
        if (!op) {
            if (!fo)
                fail(Errc::UnknownAtom, "unknown atom '" + head + "' at offset " + std::to_string(head_pos));
            std::vector<std::string> args;
            while (tok_.kind == Token::Word)
                args.push_back(variable(Sort::Element));
            return f::rel(head, std::move(args));
        }
        auto elem = [&] { return variable(Sort::Element); };
        switch (*op) {
        case Op::True: return f::tru();
        case Op::False: return f::fls();
        case Op::Ex1:
        case Op::All1: {
            std::string v = variable(Sort::Element);
            return f::quant(*op, v, parse());
        }
        case Op::Ex2:
        case Op::All2: {
            if (fo)
                error("set quantifier in a first-order formula", Errc::SortError);
            std::string v = variable(Sort::Set);
            return f::quant(*op, v, parse());
        }
        case Op::And:
        case Op::Or: {
            std::vector<Formula> parts;
            while (tok_.kind == Token::Open || tok_.kind == Token::Word)
                parts.push_back(parse());
            if (parts.size() < 2)
                error(std::string(head) + " needs at least two operands");
            return *op == Op::And ? f::conj(parts) : f::disj(parts);
        }
        case Op::Not: return f::neg(parse());
        case Op::Implies:
        case Op::Iff: {
            Formula a = parse();
            Formula b = parse();
            return *op == Op::Implies ? f::implies(a, b) : f::iff(a, b);
        }
        case Op::Eq1: {
            std::string a = elem();
            std::string b = elem();
            return f::atom(Op::Eq1, {a, b});
        }
        default: break;
        }
        if (fo) {
            // Base relation names (succ, s0, ...) are ordinary symbols of a
            // first-order signature.
            std::vector<std::string> args;
            while (tok_.kind == Token::Word)
                args.push_back(variable(Sort::Element));
            return f::rel(head, std::move(args));
        }
        switch (*op) {
        case Op::In: {
            std::string a = variable(Sort::Element);
            std::string b = variable(Sort::Set);
            return f::atom(Op::In, {a, b});
        }
        case Op::Sub:
        case Op::Eq2: {
            std::string a = variable(Sort::Set);
            std::string b = variable(Sort::Set);
            return f::atom(*op, {a, b});
        }
        case Op::Empty:
        case Op::Sing: return f::atom(*op, {variable(Sort::Set)});
        default: {
            std::string a = variable(Sort::Element);
            std::string b = variable(Sort::Element);
            return f::atom(*op, {a, b});
        }
        }
    }

    std::string_view text_;
    FormulaMode mode_;
    std::size_t i_ = 0;
    Token tok_{Token::End, "", 0};
};

} // namespace

Formula parse_formula(std::string_view text, FormulaMode mode)
{
    return Parser(text, mode).parse_all();
}

std::string to_string(const Formula& fm)
{
    switch (fm->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    default: break;
    }
    std::string out = "(";
    out += fm->op == Op::Rel ? fm->name : std::string(op_name(fm->op));
    if (is_quantifier(fm->op))
        out += " " + fm->name;
    for (const auto& a : fm->args)
        out += " " + a;
    for (const auto& k : fm->kids)
        out += " " + to_string(k);
    return out + ")";
}

namespace {

void collect_free(const Formula& fm, std::set<std::string>& bound, std::set<std::string>& out)
{
    for (const auto& a : fm->args)
        if (!bound.count(a))
            out.insert(a);
    if (is_quantifier(fm->op)) {
        bool fresh = bound.insert(fm->name).second;
        collect_free(fm->kids[0], bound, out);
        if (fresh)
            bound.erase(fm->name);
        return;
    }
    for (const auto& k : fm->kids)
        collect_free(k, bound, out);
}

void collect_all(const Formula& fm, std::set<std::string>& out)
{
    for (const auto& a : fm->args)
        out.insert(a);
    if (is_quantifier(fm->op))
        out.insert(fm->name);
    for (const auto& k : fm->kids)
        collect_all(k, out);
}

} // namespace

std::set<std::string> free_vars(const Formula& fm)
{
    std::set<std::string> bound, out;
    collect_free(fm, bound, out);
    return out;
}

std::set<std::string> all_vars(const Formula& fm)
{
    std::set<std::string> out;
    collect_all(fm, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used)
{
    if (!used.count(base))
        return base;
    for (std::size_t i = 1;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!used.count(candidate))
            return candidate;
    }
}

Formula rename_free(const Formula& fm, const std::map<std::string, std::string>& names)
{
    if (names.empty())
        return fm;
    if (is_quantifier(fm->op)) {
        std::map<std::string, std::string> inner = names;
        inner.erase(fm->name);
        std::set<std::string> body_free = free_vars(fm->kids[0]);
        bool captures = false;
        for (const auto& [from, to] : inner)
            if (to == fm->name && body_free.count(from))
                captures = true;
        std::string v = fm->name;
        if (captures) {
            std::set<std::string> used = all_vars(fm->kids[0]);
            for (const auto& [from, to] : inner) {
                used.insert(from);
                used.insert(to);
            }
            v = fresh_name(fm->name, used);
            inner[fm->name] = v;
        }
        return f::quant(fm->op, v, rename_free(fm->kids[0], inner));
    }
    auto n = std::make_shared<FormulaNode>(*fm);
    for (auto& a : n->args) {
        auto it = names.find(a);
        if (it != names.end())
            a = it->second;
    }
    for (auto& k : n->kids)
        k = rename_free(k, names);
    return n;
}

Formula desugar(const Formula& fm)
{
    switch (fm->op) {
    case Op::Ex1:
    case Op::Ex2: return f::quant(fm->op, fm->name, desugar(fm->kids[0]));
    case Op::All1: return f::neg(f::ex1(fm->name, f::neg(desugar(fm->kids[0]))));
    case Op::All2: return f::neg(f::ex2(fm->name, f::neg(desugar(fm->kids[0]))));
    case Op::And: return f::conj(desugar(fm->kids[0]), desugar(fm->kids[1]));
    case Op::Or: return f::neg(f::conj(f::neg(desugar(fm->kids[0])), f::neg(desugar(fm->kids[1]))));
    case Op::Not: {
        Formula inner = desugar(fm->kids[0]);
        if (inner->op == Op::Not)
            return inner->kids[0];
        return f::neg(inner);
    }
    case Op::Implies: return f::neg(f::conj(desugar(fm->kids[0]), f::neg(desugar(fm->kids[1]))));
    case Op::Iff: {
        Formula a = desugar(fm->kids[0]), b = desugar(fm->kids[1]);
        return f::conj(f::neg(f::conj(a, f::neg(b))), f::neg(f::conj(b, f::neg(a))));
    }
    default: return fm;
    }
}

Formula relativize(const Formula& fm, const std::string& dom)
{
    switch (fm->op) {
    case Op::Ex1: return f::ex1(fm->name, f::conj(f::atom(Op::In, {fm->name, dom}), relativize(fm->kids[0], dom)));
    case Op::All1:
        return f::all1(fm->name, f::implies(f::atom(Op::In, {fm->name, dom}), relativize(fm->kids[0], dom)));
    case Op::Ex2:
        return f::ex2(fm->name, f::conj(f::atom(Op::Sub, {fm->name, dom}), relativize(fm->kids[0], dom)));
    case Op::All2:
        return f::all2(fm->name, f::implies(f::atom(Op::Sub, {fm->name, dom}), relativize(fm->kids[0], dom)));
    default: break;
    }
    if (fm->kids.empty())
        return fm;
    auto n = std::make_shared<FormulaNode>(*fm);
    for (auto& k : n->kids)
        k = relativize(k, dom);
    return n;
}

bool contains_rel(const Formula& fm)
{
    if (fm->op == Op::Rel)
        return true;
    for (const auto& k : fm->kids)
        if (contains_rel(k))
            return true;
    return false;
}

bool same_formula(const Formula& a, const Formula& b)
{
    if (a->op != b->op || a->name != b->name || a->args != b->args || a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!same_formula(a->kids[i], b->kids[i]))
            return false;
    return true;
}

} // namespace fsi
