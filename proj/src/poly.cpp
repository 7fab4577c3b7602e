#include "obsv/poly.hpp"

#include "obsv/error.hpp"
#include "obsv/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace obsv {

bool GrlexBefore::operator()(const Monomial& a, const Monomial& b) const
{
    const unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    const unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db)
        return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c)
{
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index)
{
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m.at(index) = 1;
    p.add_term(m, Rational(1));
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

bool Polynomial::is_constant() const
{
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                        [](unsigned e) { return e == 0; }));
}

unsigned Polynomial::degree_in(std::size_t var) const
{
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max(d, m[var]);
    return d;
}

unsigned Polynomial::total_degree() const
{
    return terms_.empty() ? 0 : std::accumulate(leading_monomial().begin(), leading_monomial().end(), 0u);
}

Polynomial Polynomial::monic() const
{
    if (is_zero())
        return *this;
    Rational inv = 1 / leading_coefficient();
    return inv * *this;
}

Polynomial Polynomial::operator-() const
{
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_)
        c = -c;
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_)
        r.add_term(m, c);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b)
{
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_)
        r.add_term(m, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    Polynomial r(a.nvars_);
    Monomial m(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i)
                m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial operator*(const Rational& c, const Polynomial& p)
{
    Polynomial r(p.nvars_);
    if (c == 0)
        return r;
    for (const auto& [m, v] : p.terms_)
        r.terms_.emplace_hint(r.terms_.end(), m, c * v);
    return r;
}

Polynomial Polynomial::pow(unsigned k) const
{
    Polynomial result = constant(nvars_, Rational(1));
    Polynomial base = *this;
    while (k) {
        if (k & 1u)
            result = result * base;
        k >>= 1u;
        if (k)
            base = base * base;
    }
    return result;
}

Rational Polynomial::eval(const std::vector<Rational>& values) const
{
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned k = 0; k < m[i]; ++k)
                t *= values[i];
        sum += t;
    }
    return sum;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const
{
    if (terms_.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational mag = abs(c);
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        std::string vars;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (!vars.empty())
                vars += "*";
            vars += names.at(i);
            if (m[i] > 1)
                vars += "^" + std::to_string(m[i]);
        }
        if (vars.empty())
            out += obsv::to_string(mag);
        else if (mag == 1)
            out += vars;
        else if (is_integer(mag))
            out += obsv::to_string(mag) + "*" + vars;
        else
            out += "(" + obsv::to_string(mag) + ")*" + vars;
    }
    return out;
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero())
        throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    Polynomial q(a.nvars());
    Polynomial r = a;
    const Monomial& lb = b.leading_monomial();
    const Rational& cb = b.leading_coefficient();
    Monomial t(a.nvars());
    while (!r.is_zero()) {
        const Monomial& lr = r.leading_monomial();
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (lr[i] < lb[i])
                throw Error(ErrorKind::InvalidArgument, "polynomial division is not exact");
            t[i] = lr[i] - lb[i];
        }
        Rational coef = r.leading_coefficient() / cb;
        Polynomial term(a.nvars());
        term.add_term(t, coef);
        q.add_term(t, coef);
        r = r - term * b;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Multivariate gcd by recursive primitive pseudo-remainder sequences.

namespace {

/// Coefficient of var^d, as a polynomial with the var exponent cleared.
Polynomial coeff_in(const Polynomial& p, std::size_t var, unsigned d)
{
    Polynomial r(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        if (m[var] != d)
            continue;
        Monomial mm = m;
        mm[var] = 0;
        r.add_term(mm, c);
    }
    return r;
}

Polynomial times_var_pow(const Polynomial& p, std::size_t var, unsigned k)
{
    Polynomial r(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        Monomial mm = m;
        mm[var] += k;
        r.add_term(mm, c);
    }
    return r;
}

Polynomial content_in(const Polynomial& p, std::size_t var)
{
    Polynomial g(p.nvars());
    const unsigned d = p.degree_in(var);
    for (unsigned i = 0; i <= d; ++i) {
        Polynomial c = coeff_in(p, var, i);
        if (c.is_zero())
            continue;
        g = gcd(g, c);
        if (g.is_constant())
            break;
    }
    return g;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var)
{
    const unsigned db = b.degree_in(var);
    const Polynomial lcb = coeff_in(b, var, db);
    Polynomial r = a;
    while (!r.is_zero() && r.degree_in(var) >= db) {
        const unsigned dr = r.degree_in(var);
        Polynomial lcr = coeff_in(r, var, dr);
        r = lcb * r - times_var_pow(lcr, var, dr - db) * b;
    }
    return r;
}

std::optional<std::size_t> main_variable(const Polynomial& a, const Polynomial& b)
{
    for (std::size_t v = 0; v < a.nvars(); ++v)
        if (a.degree_in(v) > 0 || b.degree_in(v) > 0)
            return v;
    return std::nullopt;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero())
        return b.monic();
    if (b.is_zero())
        return a.monic();
    const Polynomial one = Polynomial::constant(a.nvars(), Rational(1));
    if (a.is_constant() || b.is_constant())
        return one;
    const std::size_t v = *main_variable(a, b);
    if (a.degree_in(v) == 0)
        return gcd(a, content_in(b, v));
    if (b.degree_in(v) == 0)
        return gcd(content_in(a, v), b);

    const Polynomial ca = content_in(a, v);
    const Polynomial cb = content_in(b, v);
    Polynomial pa = exact_divide(a, ca);
    Polynomial pb = exact_divide(b, cb);
    const Polynomial c = gcd(ca, cb);
    if (pa.degree_in(v) < pb.degree_in(v))
        std::swap(pa, pb);
    for (;;) {
        Polynomial r = pseudo_remainder(pa, pb, v);
        if (r.is_zero())
            break;
        if (r.degree_in(v) == 0) {
            pb = one;
            break;
        }
        pa = std::move(pb);
        pb = exact_divide(r, content_in(r, v));
    }
    return (c * pb).monic();
}

// ---------------------------------------------------------------------------
// Canonical rational forms

namespace {

struct Fraction {
    Polynomial num;
    Polynomial den;
};

class Normalizer {
public:
    explicit Normalizer(const std::vector<std::string>& vars) : nvars_(vars.size())
    {
        for (std::size_t i = 0; i < vars.size(); ++i)
            index_.emplace(vars[i], i);
    }

    Fraction run(const Expr& e)
    {
        switch (e.kind()) {
        case NodeKind::Const: return {Polynomial::constant(nvars_, e.value()), one()};
        case NodeKind::Sym:
            return {Polynomial::variable(nvars_, index_.at(e.symbol().name)), one()};
        case NodeKind::Add: {
            Fraction acc{Polynomial(nvars_), one()};
            for (const auto& t : e.children()) {
                Fraction f = run(t);
                if (f.den == acc.den) {
                    acc.num = acc.num + f.num;
                } else {
                    acc.num = acc.num * f.den + f.num * acc.den;
                    acc.den = acc.den * f.den;
                }
            }
            return acc;
        }
        case NodeKind::Mul: {
            Fraction acc{one(), one()};
            for (const auto& t : e.children()) {
                Fraction f = run(t);
                acc.num = acc.num * f.num;
                acc.den = acc.den * f.den;
            }
            return acc;
        }
        case NodeKind::Neg: {
            Fraction f = run(e.arg());
            return {-f.num, f.den};
        }
        case NodeKind::Div: {
            Fraction n = run(e.arg(0));
            Fraction d = run(e.arg(1));
            if (d.num.is_zero())
                throw Error(ErrorKind::DivisionByZero,
                            "denominator of '" + to_string(e) + "' is identically zero");
            return reduce({n.num * d.den, n.den * d.num});
        }
        case NodeKind::Pow: {
            Fraction b = run(e.arg());
            const long k = e.exponent();
            const unsigned mag = static_cast<unsigned>(k < 0 ? -k : k);
            if (k > 0)
                return {b.num.pow(mag), b.den.pow(mag)};
            if (b.num.is_zero())
                throw Error(ErrorKind::DivisionByZero,
                            "base of '" + to_string(e) + "' is identically zero");
            return {b.den.pow(mag), b.num.pow(mag)};
        }
        case NodeKind::Ln:
        case NodeKind::Exp:
            throw Error(ErrorKind::TranscendentalNode,
                        "'" + to_string(e) + "' is not a rational function");
        }
        return {Polynomial(nvars_), one()};
    }

    static Fraction reduce(Fraction f)
    {
        if (f.num.is_zero())
            return {Polynomial(f.num.nvars()), Polynomial::constant(f.num.nvars(), Rational(1))};
        Polynomial g = gcd(f.num, f.den);
        if (!g.is_constant()) {
            f.num = exact_divide(f.num, g);
            f.den = exact_divide(f.den, g);
        }
        Rational lc = f.den.leading_coefficient();
        if (lc != 1) {
            Rational inv = 1 / lc;
            f.num = inv * f.num;
            f.den = inv * f.den;
        }
        return f;
    }

private:
    Polynomial one() const { return Polynomial::constant(nvars_, Rational(1)); }

    std::size_t nvars_;
    std::map<std::string, std::size_t> index_;
};

void appearance_order(const Expr& e, std::vector<std::string>& out)
{
    if (e.kind() == NodeKind::Sym) {
        if (std::find(out.begin(), out.end(), e.symbol().name) == out.end())
            out.push_back(e.symbol().name);
        return;
    }
    for (const auto& c : e.children())
        appearance_order(c, out);
}

}  // namespace

RationalForm normalize_rational(const Expr& e, const SymbolTable& order)
{
    std::vector<std::string> vars;
    for (const auto& s : order.symbols())
        vars.push_back(s.name);
    appearance_order(e, vars);
    Normalizer n(vars);
    Fraction f = Normalizer::reduce(n.run(e));
    return RationalForm{std::move(vars), std::move(f.num), std::move(f.den)};
}

std::string RationalForm::to_string() const
{
    return "(" + numerator.to_string(variables) + ", " + denominator.to_string(variables) + ")";
}

Polynomial RationalForm::polynomial(const std::string& text) const
{
    SymbolTable table;
    for (const auto& v : variables)
        table.add(Symbol{v, SymbolKind::State});
    RationalForm f = normalize_rational(parse_expr(text, table), table);
    if (!f.denominator.is_constant())
        throw Error(ErrorKind::InvalidArgument, "'" + text + "' is not a polynomial");
    return f.numerator;
}

// ---------------------------------------------------------------------------
// Zero testing

Expr to_expr(const Polynomial& p, const std::vector<std::string>& names)
{
    std::vector<Expr> terms;
    for (const auto& [m, c] : p.terms()) {
        std::vector<Expr> factors{Expr::constant(abs(c))};
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i])
                factors.push_back(pow(Expr::symbol({names[i], SymbolKind::State}), m[i]));
        Expr t = mul(std::move(factors));
        terms.push_back(c < 0 ? neg(t) : t);
    }
    return add(std::move(terms));
}

Expr to_expr(const RationalForm& f)
{
    return div(to_expr(f.numerator, f.variables), to_expr(f.denominator, f.variables));
}

Expr canonical(const Expr& e, const SymbolTable& order)
{
    if (has_transcendental(e))
        return e;
    return to_expr(normalize_rational(e, order));
}

const char* to_string(ZeroVerdict v)
{
    switch (v) {
    case ZeroVerdict::Zero: return "zero";
    case ZeroVerdict::NonZero: return "nonzero";
    case ZeroVerdict::ProbablyZero: return "probably_zero";
    case ZeroVerdict::ProbablyNonZero: return "probably_nonzero";
    }
    return "?";
}

namespace {

ExactPoint draw_point(const std::set<std::string>& names, Sampler& rng, long lo, long hi)
{
    ExactPoint p;
    for (const auto& n : names)
        p.emplace(n, Rational(rng.uniform(lo, hi)));
    return p;
}

FloatPoint to_float(const ExactPoint& p)
{
    FloatPoint f;
    for (const auto& [k, v] : p)
        f.emplace(k, to_double(v));
    return f;
}

}  // namespace

ZeroTest is_zero(const Expr& e, const ZeroTestOptions& options)
{
    const auto names = free_symbols(e);
    Sampler rng(options.seed);

    if (!has_transcendental(e)) {
        RationalForm form = normalize_rational(e);
        if (form.numerator.is_zero())
            return {ZeroVerdict::Zero, 0, std::nullopt};
        // Nonzero numerator: find a point where the original expression is
        // defined and nonzero to serve as witness.
        ZeroTest result{ZeroVerdict::NonZero, 0, std::nullopt};
        for (int attempt = 0; attempt < 4 * std::max(options.trials, 1); ++attempt) {
            ExactPoint p = draw_point(names, rng, -options.range, options.range);
            ++result.trials;
            try {
                if (eval_exact(e, p) != 0) {
                    result.witness = std::move(p);
                    break;
                }
            } catch (const Error&) {
            }
        }
        return result;
    }

    ZeroTest result{ZeroVerdict::ProbablyZero, 0, std::nullopt};
    int evaluated = 0;
    for (int attempt = 0; evaluated < options.trials && attempt < 8 * options.trials; ++attempt) {
        // Odd attempts sample the positive orthant so that logarithms of
        // plain symbols are defined.
        const long lo = attempt % 2 == 0 ? -options.range : 1;
        ExactPoint p = draw_point(names, rng, lo, options.range);
        FloatPoint fp = to_float(p);
        double v, scale;
        try {
            v = eval_float(e, fp);
            scale = 1.0 + max_term_magnitude(e, fp);
        } catch (const Error&) {
            continue;
        }
        if (!std::isfinite(v) || !std::isfinite(scale))
            continue;
        ++evaluated;
        ++result.trials;
        if (std::fabs(v) > 1e-9 * scale) {
            result.verdict = ZeroVerdict::ProbablyNonZero;
            result.witness = std::move(p);
            return result;
        }
    }
    if (evaluated == 0)
        result.verdict = ZeroVerdict::ProbablyNonZero;
    return result;
}

}  // namespace obsv
