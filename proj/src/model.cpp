#include "obsv/model.hpp"

#include "obsv/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace obsv {

const char* to_string(Verification v)
{
    switch (v) {
    case Verification::Unchecked: return "unchecked";
    case Verification::Exact: return "exact";
    case Verification::Probabilistic: return "probabilistic";
    }
    return "?";
}

const char* to_string(ConservedVerdict v)
{
    switch (v) {
    case ConservedVerdict::Exact: return "exact";
    case ConservedVerdict::Probabilistic: return "probabilistic";
    case ConservedVerdict::Refuted: return "refuted";
    }
    return "?";
}

ObservationSet observe_states(const std::vector<std::string>& states)
{
    ObservationSet obs;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i)
            obs.label += ",";
        obs.label += states[i];
        obs.outputs.push_back(Expr::symbol({states[i], SymbolKind::State}));
    }
    return obs;
}

SymbolTable OdeSystem::symbols() const
{
    std::vector<Symbol> all = params;
    all.insert(all.end(), states.begin(), states.end());
    return SymbolTable(std::move(all));
}

std::optional<std::size_t> OdeSystem::state_index(std::string_view n) const
{
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].name == n)
            return i;
    return std::nullopt;
}

const ConservedQuantity* OdeSystem::find_conserved(std::string_view level) const
{
    for (const auto& q : conserved)
        if (q.level == level)
            return &q;
    return nullptr;
}

bool OdeSystem::is_eliminated(std::string_view state) const
{
    return std::any_of(eliminations.begin(), eliminations.end(),
                       [&](const Elimination& e) { return e.var == state; });
}

std::vector<std::string> OdeSystem::equations() const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        std::string line = "d" + states[i].name + "/dt = ";
        const auto& refs = derivative_refs.size() > i ? derivative_refs[i] : std::vector<DerivativeTerm>{};
        if (refs.empty()) {
            line += to_string(rhs[i]);
        } else {
            for (std::size_t j = 0; j < refs.size(); ++j) {
                Rational c = refs[j].coefficient;
                if (j == 0 && c < 0)
                    line += "-";
                else if (j > 0)
                    line += c < 0 ? " - " : " + ";
                Rational a = abs(c);
                if (a != 1)
                    line += obsv::to_string(a) + "*";
                line += "d" + refs[j].state + "/dt";
            }
        }
        out.push_back(std::move(line));
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(ErrorKind kind, std::size_t line, const std::string& msg)
{
    throw Error(kind, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ids(std::string_view list, std::size_t line)
{
    std::vector<std::string> ids;
    list = trim(list);
    if (list.empty())
        return ids;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = list.find(',', start);
        auto id = trim(list.substr(start, comma == std::string_view::npos ? list.npos : comma - start));
        if (!is_valid_identifier(id))
            fail(ErrorKind::SyntaxError, line, "invalid identifier '" + std::string(id) + "'");
        ids.emplace_back(id);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return ids;
}

enum class Section { Start, Model, Params, States, Equations, Conserved, Observe };

}  // namespace

OdeSystem parse_model(std::string_view text)
{
    OdeSystem sys;
    Section at = Section::Start;
    SymbolTable table;
    std::vector<std::optional<Expr>> rhs;
    std::size_t lineno = 0;

    auto advance = [&](Section next, const char* what) {
        if (next < at || (next == at && next <= Section::States))
            fail(ErrorKind::SyntaxError, lineno, std::string("unexpected '") + what + "' directive");
        if (next > Section::Model && at < Section::Model)
            fail(ErrorKind::SyntaxError, lineno, "missing 'model:' line");
        if (next > Section::States && at < Section::States)
            fail(ErrorKind::SyntaxError, lineno, "missing 'states:' line");
        if (next == Section::States && at < Section::Params)
            fail(ErrorKind::SyntaxError, lineno, "missing 'params:' line");
        at = next;
    };
    auto expr = [&](std::string_view src) {
        try {
            return parse_expr(src, table);
        } catch (const Error& e) {
            fail(e.kind(), lineno, e.what());
        }
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        std::string_view line = trim(raw);
        if (line.empty())
            continue;

        auto colon = line.find(':');
        auto head = trim(line.substr(0, colon == std::string_view::npos ? 0 : colon));
        auto body = colon == std::string_view::npos ? std::string_view{} : trim(line.substr(colon + 1));

        if (head == "model") {
            advance(Section::Model, "model");
            if (body.empty())
                fail(ErrorKind::SyntaxError, lineno, "empty model name");
            sys.name = std::string(body);
        } else if (head == "params") {
            advance(Section::Params, "params");
            for (auto& id : split_ids(body, lineno)) {
                if (table.find(id))
                    fail(ErrorKind::InvalidArgument, lineno, "duplicate symbol '" + id + "'");
                sys.params.push_back({id, SymbolKind::Parameter});
                table.add(sys.params.back());
            }
        } else if (head == "states") {
            advance(Section::States, "states");
            for (auto& id : split_ids(body, lineno)) {
                if (table.find(id))
                    fail(ErrorKind::InvalidArgument, lineno, "duplicate symbol '" + id + "'");
                sys.states.push_back({id, SymbolKind::State});
                table.add(sys.states.back());
            }
            if (sys.states.empty())
                fail(ErrorKind::SyntaxError, lineno, "no states declared");
            rhs.assign(sys.states.size(), std::nullopt);
        } else if (line.front() == 'd' && line.find('=') != std::string_view::npos &&
                   trim(line.substr(0, line.find('='))).ends_with("/dt")) {
            advance(Section::Equations, "d/dt");
            auto lhs = trim(line.substr(0, line.find('=')));
            auto id = lhs.substr(1, lhs.size() - 4);
            auto idx = sys.state_index(id);
            if (!idx) {
                if (table.find(id))
                    fail(ErrorKind::SyntaxError, lineno, "'" + std::string(id) + "' is not a state");
                fail(ErrorKind::UnknownSymbol, lineno, "unknown state '" + std::string(id) + "'");
            }
            if (rhs[*idx])
                fail(ErrorKind::DuplicateEquation, lineno, "duplicate equation for '" + std::string(id) + "'");
            rhs[*idx] = expr(line.substr(line.find('=') + 1));
        } else if (head.starts_with("conserved ") || head.starts_with("conserved\t")) {
            advance(Section::Conserved, "conserved");
            std::string level(trim(head.substr(9)));
            if (!is_valid_identifier(level))
                fail(ErrorKind::SyntaxError, lineno, "invalid level name '" + level + "'");
            if (table.find(level) || sys.find_conserved(level))
                fail(ErrorKind::InvalidArgument, lineno, "level name '" + level + "' already in use");
            ConservedQuantity q{level, expr(body), Verification::Unchecked};
            bool has_state = std::any_of(sys.states.begin(), sys.states.end(),
                                         [&](const Symbol& s) { return depends_on(q.expr, s.name); });
            if (!has_state)
                fail(ErrorKind::InvalidArgument, lineno, "conserved quantity involves no state");
            sys.conserved.push_back(std::move(q));
        } else if (head.starts_with("observe ") || head.starts_with("observe\t")) {
            advance(Section::Observe, "observe");
            ObservationSet obs;
            obs.label = std::string(trim(head.substr(7)));
            if (obs.label.empty())
                fail(ErrorKind::SyntaxError, lineno, "empty observation label");
            for (auto& id : split_ids(body, lineno)) {
                if (!sys.state_index(id))
                    fail(ErrorKind::UnknownSymbol, lineno, "unknown state '" + id + "'");
                obs.outputs.push_back(Expr::symbol({id, SymbolKind::State}));
            }
            if (obs.outputs.empty())
                fail(ErrorKind::SyntaxError, lineno, "observation '" + obs.label + "' is empty");
            sys.observations.push_back(std::move(obs));
        } else {
            fail(ErrorKind::SyntaxError, lineno, "unknown directive '" + std::string(line) + "'");
        }
    }

    if (at < Section::States)
        throw Error(ErrorKind::SyntaxError, "model must declare 'model:', 'params:' and 'states:'");
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (!rhs[i])
            throw Error(ErrorKind::MissingEquation, "missing equation for '" + sys.states[i].name + "'");
        sys.rhs.push_back(*rhs[i]);
    }
    sys.original_rhs = sys.rhs;
    sys.derivative_refs.assign(sys.states.size(), {});
    return sys;
}

OdeSystem load_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::InvalidArgument, "cannot read model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

ConservedCheck verify_conserved(const OdeSystem& sys, const ConservedQuantity& H, std::uint64_t seed)
{
    ConservedCheck check;
    check.derivative = lie_derivative(sys, H.expr);
    ZeroTest z = is_zero(check.derivative, {.trials = 32, .seed = seed, .range = 1000000});
    check.trials = z.trials;
    check.witness = z.witness;
    if (!z.zero())
        check.verdict = ConservedVerdict::Refuted;
    else
        check.verdict = z.exact() ? ConservedVerdict::Exact : ConservedVerdict::Probabilistic;
    return check;
}

OdeSystem verify_all(const OdeSystem& sys, std::vector<ConservedCheck>* checks, std::uint64_t seed)
{
    OdeSystem out = sys;
    for (auto& q : out.conserved) {
        ConservedCheck c = verify_conserved(sys, q, seed);
        switch (c.verdict) {
        case ConservedVerdict::Exact: q.verified = Verification::Exact; break;
        case ConservedVerdict::Probabilistic: q.verified = Verification::Probabilistic; break;
        case ConservedVerdict::Refuted: q.verified = Verification::Unchecked; break;
        }
        if (checks)
            checks->push_back(std::move(c));
    }
    return out;
}

Expr lie_derivative(const OdeSystem& sys, const Expr& y)
{
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < sys.states.size(); ++i) {
        Expr d = diff(y, sys.states[i]);
        if (!d.is_const(0))
            terms.push_back(mul({d, sys.rhs[i]}));
    }
    return add(std::move(terms));
}

std::optional<Expr> affine_coefficient(const Expr& e, const std::string& var,
                                       const std::vector<Symbol>& states)
{
    Expr a = diff(e, var);
    for (const auto& s : states)
        if (depends_on(a, s.name) && !is_zero(diff(a, s)).zero())
            return std::nullopt;
    return a;
}

namespace {

// -(terms of e), distributing over a top-level sum.
Expr negate_terms(const Expr& e)
{
    if (e.kind() != NodeKind::Add)
        return neg(e);
    std::vector<Expr> terms;
    for (const auto& t : e.children())
        terms.push_back(neg(t));
    return add(std::move(terms));
}

}  // namespace

OdeSystem reduce_by_conserved(const OdeSystem& sys, const ConservedQuantity& H, const std::string& solve_for)
{
    auto idx = sys.state_index(solve_for);
    if (!idx)
        throw Error(ErrorKind::InvalidArgument, "'" + solve_for + "' is not a state");
    if (sys.is_eliminated(solve_for))
        throw Error(ErrorKind::InvalidArgument, "'" + solve_for + "' is already eliminated");
    if (std::any_of(sys.eliminations.begin(), sys.eliminations.end(),
                    [&](const Elimination& e) { return e.level == H.level; }))
        throw Error(ErrorKind::InvalidArgument, "quantity '" + H.level + "' was already used");

    Bindings previous;
    for (const auto& e : sys.eliminations)
        previous.emplace(e.var, e.value);
    Expr h = substitute(H.expr, previous);

    if (!depends_on(h, solve_for) || is_zero(diff(h, solve_for)).zero())
        throw Error(ErrorKind::ZeroCoefficient, "'" + H.level + "' does not involve '" + solve_for + "'");
    auto a = affine_coefficient(h, solve_for, sys.states);
    if (!a)
        throw Error(ErrorKind::NotAffineIn, "'" + H.level + "' is not affine in '" + solve_for + "'");

    Symbol level{H.level, SymbolKind::Parameter};
    Expr rest = substitute(h, {{solve_for, Expr::constant(0)}});
    Expr value = add({Expr::symbol(level), negate_terms(rest)});
    if (!a->is_const(1))
        value = div(value, *a);

    OdeSystem out = sys;
    if (std::none_of(out.params.begin(), out.params.end(), [&](const Symbol& p) { return p.name == level.name; }))
        out.params.push_back(level);

    for (auto& e : out.eliminations)
        e.value = substitute(e.value, {{solve_for, value}});
    out.eliminations.push_back({solve_for, H.level, value});

    Bindings all;
    for (const auto& e : out.eliminations)
        all.emplace(e.var, e.value);

    const std::size_t n = out.states.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!out.is_eliminated(out.states[i].name))
            out.rhs[i] = substitute(out.original_rhs[i], all);

    out.derivative_refs.assign(n, {});
    for (const auto& e : out.eliminations) {
        std::size_t ei = *out.state_index(e.var);
        std::vector<Expr> terms;
        std::vector<DerivativeTerm> refs;
        bool constant = true;
        for (std::size_t b = 0; b < n; ++b) {
            if (out.is_eliminated(out.states[b].name))
                continue;
            Expr c = diff(e.value, out.states[b]);
            if (c.is_const(0))
                continue;
            terms.push_back(mul({c, out.rhs[b]}));
            if (c.is_const())
                refs.push_back({c.value(), out.states[b].name});
            else
                constant = false;
        }
        out.rhs[ei] = add(std::move(terms));
        if (constant)
            out.derivative_refs[ei] = std::move(refs);
    }
    return out;
}

}  // namespace obsv
