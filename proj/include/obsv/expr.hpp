#pragma once

#include "obsv/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace obsv {

enum class SymbolKind { State, Parameter };

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::State;

    friend bool operator==(const Symbol& a, const Symbol& b) { return a.name == b.name; }
};

/// `[A-Za-z][A-Za-z0-9_]*`, excluding the function names `ln` and `exp`.
bool is_valid_identifier(std::string_view name);

/// Ordered set of declared symbols. The declaration order is the variable
/// order used for canonical polynomial forms.
class SymbolTable {
public:
    SymbolTable() = default;
    explicit SymbolTable(std::vector<Symbol> symbols);

    /// Throws Error(InvalidArgument) on a bad or duplicate name.
    void add(Symbol symbol);

    const Symbol* find(std::string_view name) const;
    std::optional<std::size_t> index_of(std::string_view name) const;
    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }

private:
    std::vector<Symbol> symbols_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class NodeKind { Const, Sym, Add, Mul, Neg, Div, Pow, Ln, Exp };

/// Immutable expression tree over exact rationals and symbols.
///
/// Nodes are only created through the builder functions below, which apply
/// structural simplification: constants are folded, neutral elements removed,
/// nested sums and products flattened, and negation is hoisted out of
/// products. No other rewriting happens; semantic comparison goes through
/// normalize_rational (see poly.hpp).
///
/// Shape invariants: Add/Mul have at least two children, Mul carries at most
/// one constant (first) and it is positive and != 1, Add carries at most one
/// constant (last) and it is != 0, Pow exponent is not 0 or 1, and Div never
/// has the constant 1 as denominator.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr constant(const Rational& value);
    static Expr constant(long value) { return constant(Rational(value)); }
    static Expr symbol(const Symbol& sym);

    NodeKind kind() const;
    bool is_const() const { return kind() == NodeKind::Const; }
    bool is_const(long v) const;

    const Rational& value() const;
    const Symbol& symbol() const;
    const std::vector<Expr>& children() const;
    const Expr& arg(std::size_t i = 0) const { return children().at(i); }
    long exponent() const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend Expr make_node(NodeKind, std::vector<Expr>, long);
};

// Builders. All of them simplify structurally.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr neg(const Expr& e);
Expr sub(const Expr& a, const Expr& b);
Expr div(const Expr& num, const Expr& den);
Expr pow(const Expr& base, long exponent);
Expr ln(const Expr& arg);
Expr exp(const Expr& arg);

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }

using Bindings = std::map<std::string, Expr>;
using ExactPoint = std::map<std::string, Rational>;
using FloatPoint = std::map<std::string, double>;

/// Parses `text` under the expression grammar; every identifier must be in
/// `symbols`. Throws Error(SyntaxError | UnknownSymbol | NonIntegerExponent).
Expr parse_expr(std::string_view text, const SymbolTable& symbols);

/// Text that parse_expr maps back to a structurally equal tree.
std::string to_string(const Expr& e);

/// Partial derivative with respect to `var`.
Expr diff(const Expr& e, const Symbol& var);
Expr diff(const Expr& e, const std::string& var);

/// Simultaneous substitution (bound values are not themselves rewritten).
Expr substitute(const Expr& e, const Bindings& bindings);

/// Throws Error(DivisionByZero | TranscendentalNode | EvaluationError).
Rational eval_exact(const Expr& e, const ExactPoint& point);

/// Throws Error(DivisionByZero | DomainError | EvaluationError).
double eval_float(const Expr& e, const FloatPoint& point);

bool has_transcendental(const Expr& e);
bool depends_on(const Expr& e, const std::string& name);
std::set<std::string> free_symbols(const Expr& e);

/// Maximum over top-level summands of |value|; used to scale float zero tests.
double max_term_magnitude(const Expr& e, const FloatPoint& point);

}  // namespace obsv
