#pragma once

#include "obsv/expr.hpp"
#include "obsv/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace obsv {

using Monomial = std::vector<unsigned>;

/// Strict "a comes before b" in graded lexicographic order: higher total
/// degree first, ties broken by the earlier variable having the larger exponent.
struct GrlexBefore {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with rational coefficients over a fixed
/// number of variables. Terms are kept in grlex order, leading term first.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, GrlexBefore>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Requires !is_zero().
    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    const Rational& leading_coefficient() const { return terms_.begin()->second; }
    unsigned degree_in(std::size_t var) const;
    unsigned total_degree() const;

    /// Divides by the leading coefficient; zero stays zero.
    Polynomial monic() const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& c, const Polynomial& p);
    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    Polynomial pow(unsigned k) const;

    Rational eval(const std::vector<Rational>& values) const;
    std::string to_string(const std::vector<std::string>& names) const;

    void add_term(const Monomial& m, const Rational& c);

private:
    std::size_t nvars_;
    Terms terms_;
};

/// Exact quotient a / b. Throws Error(InvalidArgument) if b does not divide a.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

/// Monic greatest common divisor in Q[x1..xn]; gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Canonical numerator/denominator pair: gcd-reduced, denominator monic.
struct RationalForm {
    std::vector<std::string> variables;
    Polynomial numerator;
    Polynomial denominator;

    /// "(num, den)"
    std::string to_string() const;
    Polynomial polynomial(const std::string& text) const;
};

/// Variable order: symbols of `order` first (declaration order), then any
/// remaining symbols in order of first appearance.
/// Throws Error(TranscendentalNode | DivisionByZero).
RationalForm normalize_rational(const Expr& e, const SymbolTable& order = {});

/// Expanded expression for p; names[i] is variable i.
Expr to_expr(const Polynomial& p, const std::vector<std::string>& names);
Expr to_expr(const RationalForm& f);

/// Expanded canonical form of a rational expression, or e unchanged when it
/// contains ln/exp.
Expr canonical(const Expr& e, const SymbolTable& order = {});

enum class ZeroVerdict { Zero, NonZero, ProbablyZero, ProbablyNonZero };

const char* to_string(ZeroVerdict v);

struct ZeroTest {
    ZeroVerdict verdict = ZeroVerdict::Zero;
    int trials = 0;
    /// Point at which the expression evaluated to a nonzero value.
    std::optional<ExactPoint> witness;

    bool exact() const { return verdict == ZeroVerdict::Zero || verdict == ZeroVerdict::NonZero; }
    bool zero() const { return verdict == ZeroVerdict::Zero || verdict == ZeroVerdict::ProbablyZero; }
};

struct ZeroTestOptions {
    int trials = 32;
    std::uint64_t seed = 0;
    long range = 1000000;
};

/// Decides e == 0 identically. Rational expressions are decided exactly via
/// normalize_rational; otherwise `trials` float evaluations at random points
/// are used with threshold |v| <= 1e-9 * (1 + max |summand|).
ZeroTest is_zero(const Expr& e, const ZeroTestOptions& options = {});

}  // namespace obsv
