#include "obsv/expr.hpp"

#include "obsv/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace obsv {

struct Expr::Node {
    NodeKind kind = NodeKind::Const;
    Rational value;
    Symbol symbol;
    std::vector<Expr> children;
    long exponent = 0;
};

namespace {

const std::vector<Expr>& no_children()
{
    static const std::vector<Expr> empty;
    return empty;
}

Rational rational_pow(const Rational& base, long k)
{
    const unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    Rational r = k < 0 ? Rational(den, num) : Rational(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

bool is_valid_identifier(std::string_view name)
{
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
        return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return name != "ln" && name != "exp";
}

SymbolTable::SymbolTable(std::vector<Symbol> symbols)
{
    for (auto& s : symbols)
        add(std::move(s));
}

void SymbolTable::add(Symbol symbol)
{
    if (!is_valid_identifier(symbol.name))
        throw Error(ErrorKind::InvalidArgument, "invalid identifier '" + symbol.name + "'");
    if (index_.count(symbol.name))
        throw Error(ErrorKind::InvalidArgument, "duplicate symbol '" + symbol.name + "'");
    index_.emplace(symbol.name, symbols_.size());
    symbols_.push_back(std::move(symbol));
}

const Symbol* SymbolTable::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &symbols_[it->second];
}

std::optional<std::size_t> SymbolTable::index_of(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Node access

Expr::Expr() : Expr(constant(Rational(0))) {}

Expr Expr::constant(const Rational& value)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Const;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::symbol(const Symbol& sym)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Sym;
    n->symbol = sym;
    return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }

bool Expr::is_const(long v) const { return is_const() && node_->value == v; }

const Rational& Expr::value() const
{
    if (!is_const())
        throw Error(ErrorKind::InvalidArgument, "value() on non-constant node");
    return node_->value;
}

const Symbol& Expr::symbol() const
{
    if (kind() != NodeKind::Sym)
        throw Error(ErrorKind::InvalidArgument, "symbol() on non-symbol node");
    return node_->symbol;
}

const std::vector<Expr>& Expr::children() const
{
    return node_ ? node_->children : no_children();
}

long Expr::exponent() const { return node_->exponent; }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind)
        return false;
    switch (x.kind) {
    case NodeKind::Const: return x.value == y.value;
    case NodeKind::Sym: return x.symbol.name == y.symbol.name;
    case NodeKind::Pow:
        if (x.exponent != y.exponent)
            return false;
        break;
    default: break;
    }
    return x.children == y.children;
}

Expr make_node(NodeKind kind, std::vector<Expr> children, long exponent)
{
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->children = std::move(children);
    n->exponent = exponent;
    return Expr(std::move(n));
}

// ---------------------------------------------------------------------------
// Builders

Expr add(std::vector<Expr> terms)
{
    Rational c = 0;
    std::vector<Expr> rest;
    rest.reserve(terms.size());
    for (auto& t : terms) {
        if (t.is_const()) {
            c += t.value();
        } else if (t.kind() == NodeKind::Add) {
            for (const auto& child : t.children()) {
                if (child.is_const())
                    c += child.value();
                else
                    rest.push_back(child);
            }
        } else {
            rest.push_back(std::move(t));
        }
    }
    if (c != 0)
        rest.push_back(Expr::constant(c));
    if (rest.empty())
        return Expr::constant(0);
    if (rest.size() == 1)
        return rest.front();
    return make_node(NodeKind::Add, std::move(rest), 0);
}

namespace {

void collect_factors(const Expr& f, Rational& c, bool& negate, std::vector<Expr>& rest,
                     std::vector<Expr>& dens)
{
    switch (f.kind()) {
    case NodeKind::Const: c *= f.value(); break;
    case NodeKind::Mul:
        for (const auto& child : f.children())
            collect_factors(child, c, negate, rest, dens);
        break;
    case NodeKind::Neg:
        negate = !negate;
        collect_factors(f.arg(), c, negate, rest, dens);
        break;
    case NodeKind::Div:
        if (f.arg(0).is_const(1)) {
            dens.push_back(f.arg(1));
            break;
        }
        rest.push_back(f);
        break;
    default: rest.push_back(f); break;
    }
}

}  // namespace

Expr mul(std::vector<Expr> factors)
{
    Rational c = 1;
    bool negate = false;
    std::vector<Expr> rest;
    std::vector<Expr> dens;
    for (const auto& f : factors)
        collect_factors(f, c, negate, rest, dens);
    if (c == 0)
        return Expr::constant(0);
    if (c < 0) {
        c = -c;
        negate = !negate;
    }
    Expr core;
    if (rest.empty()) {
        core = Expr::constant(c);
    } else if (rest.size() == 1 && c == 1) {
        core = rest.front();
    } else {
        if (c != 1)
            rest.insert(rest.begin(), Expr::constant(c));
        core = make_node(NodeKind::Mul, std::move(rest), 0);
    }
    if (!dens.empty())
        core = div(core, dens.size() == 1 ? dens.front() : mul(std::move(dens)));
    return negate ? neg(core) : core;
}

Expr neg(const Expr& e)
{
    if (e.is_const())
        return Expr::constant(-e.value());
    if (e.kind() == NodeKind::Neg)
        return e.arg();
    return make_node(NodeKind::Neg, {e}, 0);
}

Expr sub(const Expr& a, const Expr& b) { return add({a, neg(b)}); }

Expr div(const Expr& num, const Expr& den)
{
    if (den.is_const()) {
        if (den.value() == 1)
            return num;
        if (den.value() == -1)
            return neg(num);
        if (num.is_const() && den.value() != 0)
            return Expr::constant(num.value() / den.value());
    }
    if (num.is_const(0) && !den.is_const(0))
        return Expr::constant(0);
    return make_node(NodeKind::Div, {num, den}, 0);
}

Expr pow(const Expr& base, long exponent)
{
    if (exponent == 0)
        return Expr::constant(1);
    if (exponent == 1)
        return base;
    if (base.is_const() && !(base.value() == 0 && exponent < 0))
        return Expr::constant(rational_pow(base.value(), exponent));
    return make_node(NodeKind::Pow, {base}, exponent);
}

Expr ln(const Expr& arg)
{
    if (arg.is_const(1))
        return Expr::constant(0);
    return make_node(NodeKind::Ln, {arg}, 0);
}

Expr exp(const Expr& arg)
{
    if (arg.is_const(0))
        return Expr::constant(1);
    return make_node(NodeKind::Exp, {arg}, 0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool plain_const(const Expr& e) { return e.is_const() && e.value() >= 0 && is_integer(e.value()); }

std::string print(const Expr& e);

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string print_operand(const Expr& e, std::initializer_list<NodeKind> wrap_kinds)
{
    if (e.is_const())
        return plain_const(e) ? print(e) : paren(print(e));
    for (auto k : wrap_kinds)
        if (e.kind() == k)
            return paren(print(e));
    return print(e);
}

std::string print(const Expr& e)
{
    switch (e.kind()) {
    case NodeKind::Const: return to_string(e.value());
    case NodeKind::Sym: return e.symbol().name;
    case NodeKind::Add: {
        std::string out = print(e.arg(0));
        for (std::size_t i = 1; i < e.children().size(); ++i) {
            const Expr& t = e.arg(i);
            if (t.kind() == NodeKind::Neg) {
                out += " - " + print_operand(t.arg(), {NodeKind::Add});
            } else if (t.is_const() && t.value() < 0) {
                out += " - " + to_string(Rational(-t.value()));
            } else {
                out += " + " + print(t);
            }
        }
        return out;
    }
    case NodeKind::Mul: {
        std::string out;
        for (const auto& f : e.children()) {
            if (!out.empty())
                out += "*";
            out += print_operand(f, {NodeKind::Add, NodeKind::Div, NodeKind::Neg});
        }
        return out;
    }
    case NodeKind::Neg: return "-" + print_operand(e.arg(), {NodeKind::Add, NodeKind::Div});
    case NodeKind::Div:
        return print_operand(e.arg(0), {NodeKind::Add}) + "/" +
               print_operand(e.arg(1), {NodeKind::Add, NodeKind::Mul, NodeKind::Div,
                                        NodeKind::Neg});
    case NodeKind::Pow:
        return print_operand(e.arg(), {NodeKind::Add, NodeKind::Mul, NodeKind::Div,
                                       NodeKind::Neg, NodeKind::Pow}) +
               "^" + std::to_string(e.exponent());
    case NodeKind::Ln: return "ln(" + print(e.arg()) + ")";
    case NodeKind::Exp: return "exp(" + print(e.arg()) + ")";
    }
    return {};
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, const SymbolTable& table) : s_(text), table_(table) {}

    Expr run()
    {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what, ErrorKind kind = ErrorKind::SyntaxError)
    {
        throw Error(kind, what + " at position " + std::to_string(pos_), pos_);
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Expr expr()
    {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+'))
                terms.push_back(term());
            else if (accept('-'))
                terms.push_back(neg(term()));
            else
                break;
        }
        return add(std::move(terms));
    }

    Expr term()
    {
        Expr acc = factor();
        for (;;) {
            if (accept('*'))
                acc = mul({acc, factor()});
            else if (accept('/'))
                acc = div(acc, factor());
            else
                break;
        }
        // Anything that can start a factor here is an implicit product.
        char c = peek();
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '(')
            fail("implicit multiplication is not allowed");
        return acc;
    }

    Expr factor()
    {
        if (accept('-'))
            return neg(factor());
        Expr base = atom();
        if (accept('^'))
            return pow(base, integer_exponent());
        return base;
    }

    long integer_exponent()
    {
        skip_ws();
        bool parens = accept('(');
        skip_ws();
        bool negative = false;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_ || (pos_ < s_.size() && s_[pos_] == '.'))
            fail("exponent must be an integer literal", ErrorKind::NonIntegerExponent);
        std::string digits(s_.substr(start, pos_ - start));
        if (digits.size() > 9)
            fail("exponent too large");
        if (parens && !accept(')'))
            fail("expected ')'");
        long k = std::stol(digits);
        return negative ? -k : k;
    }

    Expr atom()
    {
        skip_ws();
        if (pos_ >= s_.size())
            fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (!accept(')'))
                fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Expr number()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            std::size_t frac = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (frac == pos_)
                fail("malformed number");
        }
        Rational q;
        if (!parse_rational(s_.substr(start, pos_ - start), q))
            fail("malformed number");
        return Expr::constant(q);
    }

    Expr identifier()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name(s_.substr(start, pos_ - start));
        std::size_t after = pos_;
        if (accept('(')) {
            Expr arg = expr();
            if (!accept(')'))
                fail("expected ')'");
            if (name == "ln")
                return ln(arg);
            if (name == "exp")
                return exp(arg);
            pos_ = start;
            fail("unsupported function '" + name + "'");
        }
        pos_ = after;
        if (name == "ln" || name == "exp") {
            pos_ = start;
            fail("function '" + name + "' requires an argument");
        }
        const Symbol* sym = table_.find(name);
        if (!sym) {
            pos_ = start;
            throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + name + "'", start);
        }
        return Expr::symbol(*sym);
    }

    std::string_view s_;
    const SymbolTable& table_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const SymbolTable& symbols)
{
    return Parser(text, symbols).run();
}

// ---------------------------------------------------------------------------
// Calculus and substitution

Expr diff(const Expr& e, const std::string& var)
{
    switch (e.kind()) {
    case NodeKind::Const: return Expr::constant(0);
    case NodeKind::Sym: return Expr::constant(e.symbol().name == var ? 1 : 0);
    case NodeKind::Add: {
        std::vector<Expr> terms;
        for (const auto& t : e.children())
            terms.push_back(diff(t, var));
        return add(std::move(terms));
    }
    case NodeKind::Mul: {
        std::vector<Expr> terms;
        const auto& fs = e.children();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Expr d = diff(fs[i], var);
            if (d.is_const(0))
                continue;
            std::vector<Expr> prod = fs;
            prod[i] = d;
            terms.push_back(mul(std::move(prod)));
        }
        return add(std::move(terms));
    }
    case NodeKind::Neg: return neg(diff(e.arg(), var));
    case NodeKind::Div: {
        const Expr& n = e.arg(0);
        const Expr& d = e.arg(1);
        Expr dn = diff(n, var);
        Expr dd = diff(d, var);
        if (dd.is_const(0))
            return div(dn, d);
        if (dn.is_const(0))
            return neg(div(mul({n, dd}), pow(d, 2)));
        return div(sub(mul({dn, d}), mul({n, dd})), pow(d, 2));
    }
    case NodeKind::Pow: {
        Expr db = diff(e.arg(), var);
        if (db.is_const(0))
            return Expr::constant(0);
        return mul({Expr::constant(e.exponent()), pow(e.arg(), e.exponent() - 1), db});
    }
    case NodeKind::Ln: return div(diff(e.arg(), var), e.arg());
    case NodeKind::Exp: return mul({e, diff(e.arg(), var)});
    }
    return Expr::constant(0);
}

Expr diff(const Expr& e, const Symbol& var) { return diff(e, var.name); }

Expr substitute(const Expr& e, const Bindings& bindings)
{
    if (bindings.empty())
        return e;
    switch (e.kind()) {
    case NodeKind::Const: return e;
    case NodeKind::Sym: {
        auto it = bindings.find(e.symbol().name);
        return it == bindings.end() ? e : it->second;
    }
    case NodeKind::Add: {
        std::vector<Expr> terms;
        for (const auto& t : e.children())
            terms.push_back(substitute(t, bindings));
        return add(std::move(terms));
    }
    case NodeKind::Mul: {
        std::vector<Expr> fs;
        for (const auto& f : e.children())
            fs.push_back(substitute(f, bindings));
        return mul(std::move(fs));
    }
    case NodeKind::Neg: return neg(substitute(e.arg(), bindings));
    case NodeKind::Div: return div(substitute(e.arg(0), bindings), substitute(e.arg(1), bindings));
    case NodeKind::Pow: return pow(substitute(e.arg(), bindings), e.exponent());
    case NodeKind::Ln: return ln(substitute(e.arg(), bindings));
    case NodeKind::Exp: return exp(substitute(e.arg(), bindings));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation

Rational eval_exact(const Expr& e, const ExactPoint& point)
{
    switch (e.kind()) {
    case NodeKind::Const: return e.value();
    case NodeKind::Sym: {
        auto it = point.find(e.symbol().name);
        if (it == point.end())
            throw Error(ErrorKind::EvaluationError, "unbound symbol '" + e.symbol().name + "'");
        return it->second;
    }
    case NodeKind::Add: {
        Rational s = 0;
        for (const auto& t : e.children())
            s += eval_exact(t, point);
        return s;
    }
    case NodeKind::Mul: {
        Rational p = 1;
        for (const auto& f : e.children())
            p *= eval_exact(f, point);
        return p;
    }
    case NodeKind::Neg: return -eval_exact(e.arg(), point);
    case NodeKind::Div: {
        Rational n = eval_exact(e.arg(0), point);
        Rational d = eval_exact(e.arg(1), point);
        if (d == 0)
            throw Error(ErrorKind::DivisionByZero, "division by zero in '" + to_string(e) + "'");
        return Rational(n / d);
    }
    case NodeKind::Pow: {
        Rational b = eval_exact(e.arg(), point);
        if (b == 0 && e.exponent() < 0)
            throw Error(ErrorKind::DivisionByZero, "division by zero in '" + to_string(e) + "'");
        return rational_pow(b, e.exponent());
    }
    case NodeKind::Ln:
    case NodeKind::Exp:
        throw Error(ErrorKind::TranscendentalNode,
                    "cannot evaluate '" + to_string(e) + "' exactly");
    }
    return 0;
}

double eval_float(const Expr& e, const FloatPoint& point)
{
    switch (e.kind()) {
    case NodeKind::Const: return to_double(e.value());
    case NodeKind::Sym: {
        auto it = point.find(e.symbol().name);
        if (it == point.end())
            throw Error(ErrorKind::EvaluationError, "unbound symbol '" + e.symbol().name + "'");
        return it->second;
    }
    case NodeKind::Add: {
        double s = 0;
        for (const auto& t : e.children())
            s += eval_float(t, point);
        return s;
    }
    case NodeKind::Mul: {
        double p = 1;
        for (const auto& f : e.children())
            p *= eval_float(f, point);
        return p;
    }
    case NodeKind::Neg: return -eval_float(e.arg(), point);
    case NodeKind::Div: {
        double n = eval_float(e.arg(0), point);
        double d = eval_float(e.arg(1), point);
        if (d == 0.0)
            throw Error(ErrorKind::DivisionByZero, "division by zero in '" + to_string(e) + "'");
        return n / d;
    }
    case NodeKind::Pow: {
        double b = eval_float(e.arg(), point);
        if (b == 0.0 && e.exponent() < 0)
            throw Error(ErrorKind::DivisionByZero, "division by zero in '" + to_string(e) + "'");
        return std::pow(b, static_cast<double>(e.exponent()));
    }
    case NodeKind::Ln: {
        double a = eval_float(e.arg(), point);
        if (!(a > 0.0))
            throw Error(ErrorKind::DomainError, "ln of non-positive value in '" + to_string(e) + "'");
        return std::log(a);
    }
    case NodeKind::Exp: return std::exp(eval_float(e.arg(), point));
    }
    return 0;
}

bool has_transcendental(const Expr& e)
{
    if (e.kind() == NodeKind::Ln || e.kind() == NodeKind::Exp)
        return true;
    return std::any_of(e.children().begin(), e.children().end(), has_transcendental);
}

bool depends_on(const Expr& e, const std::string& name)
{
    if (e.kind() == NodeKind::Sym)
        return e.symbol().name == name;
    return std::any_of(e.children().begin(), e.children().end(),
                       [&](const Expr& c) { return depends_on(c, name); });
}

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out)
{
    if (e.kind() == NodeKind::Sym)
        out.insert(e.symbol().name);
    for (const auto& c : e.children())
        collect_symbols(c, out);
}
}  // namespace

std::set<std::string> free_symbols(const Expr& e)
{
    std::set<std::string> out;
    collect_symbols(e, out);
    return out;
}

double max_term_magnitude(const Expr& e, const FloatPoint& point)
{
    if (e.kind() != NodeKind::Add)
        return std::fabs(eval_float(e, point));
    double m = 0;
    for (const auto& t : e.children())
        m = std::max(m, std::fabs(eval_float(t, point)));
    return m;
}

}  // namespace obsv
