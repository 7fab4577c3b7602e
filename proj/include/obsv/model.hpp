#pragma once

#include "obsv/expr.hpp"
#include "obsv/poly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace obsv {

enum class Verification { Unchecked, Exact, Probabilistic };

const char* to_string(Verification v);

struct ConservedQuantity {
    std::string level;  // name of the constant value, e.g. "N"
    Expr expr;
    Verification verified = Verification::Unchecked;
};

struct ObservationSet {
    std::string label;
    std::vector<Expr> outputs;
};

/// Observation of raw state variables, labelled by their names joined with ','.
ObservationSet observe_states(const std::vector<std::string>& states);

/// A state eliminated through a conserved quantity: var = value, where value
/// only involves base states and parameters.
struct Elimination {
    std::string var;
    std::string level;
    Expr value;
};

/// One term c * d(state)/dt of a derivative reference.
struct DerivativeTerm {
    Rational coefficient;
    std::string state;
};

class OdeSystem {
public:
    std::string name;
    std::vector<Symbol> params;
    std::vector<Symbol> states;
    /// rhs[i] is the right-hand side of states[i], always fully expanded
    /// into base-state expressions.
    std::vector<Expr> rhs;
    std::vector<ConservedQuantity> conserved;
    std::vector<ObservationSet> observations;

    /// Right-hand sides as declared, before any reduction.
    std::vector<Expr> original_rhs;
    std::vector<Elimination> eliminations;
    /// For eliminated states whose rhs is a constant combination of other
    /// derivatives, that combination (as in "dI/dt = -dS/dt - dR/dt").
    std::vector<std::vector<DerivativeTerm>> derivative_refs;

    std::size_t size() const { return states.size(); }
    /// Parameters first, then states, in declaration order.
    SymbolTable symbols() const;
    std::optional<std::size_t> state_index(std::string_view name) const;
    const ConservedQuantity* find_conserved(std::string_view level) const;
    bool is_eliminated(std::string_view state) const;

    /// "dS/dt = ..." lines, using derivative references where present.
    std::vector<std::string> equations() const;
};

/// Line-oriented model format:
///   model: <name>
///   params: <id>, ...
///   states: <id>, ...
///   d<id>/dt = <expr>          one per state
///   conserved <LEVEL>: <expr>  zero or more
///   observe <label>: <id>, ... zero or more
/// '#' starts a comment. Sections appear in this order.
/// Throws Error(SyntaxError | UnknownSymbol | MissingEquation |
/// DuplicateEquation | NonIntegerExponent | InvalidArgument).
OdeSystem parse_model(std::string_view text);

/// Reads and parses a model file. Throws Error(InvalidArgument) if unreadable.
OdeSystem load_model(const std::string& path);

enum class ConservedVerdict { Exact, Probabilistic, Refuted };

const char* to_string(ConservedVerdict v);

struct ConservedCheck {
    ConservedVerdict verdict = ConservedVerdict::Exact;
    Expr derivative;  // sum_i dH/dx_i * f_i
    std::optional<ExactPoint> witness;
    int trials = 0;
};

ConservedCheck verify_conserved(const OdeSystem& sys, const ConservedQuantity& H,
                                std::uint64_t seed = 0);

/// Verifies every declared quantity and returns the system with updated
/// verification flags (refuted quantities stay Unchecked).
OdeSystem verify_all(const OdeSystem& sys, std::vector<ConservedCheck>* checks = nullptr,
                     std::uint64_t seed = 0);

/// sum_i f_i * dy/dx_i over the states of `sys`.
Expr lie_derivative(const OdeSystem& sys, const Expr& y);

/// Eliminates `solve_for` using H = level. H must be affine in solve_for with
/// a coefficient free of states. Other states get the substituted right-hand
/// sides, the level becomes a parameter, and solve_for's rhs becomes the
/// matching combination of the remaining derivatives.
/// Throws Error(NotAffineIn | ZeroCoefficient | InvalidArgument).
OdeSystem reduce_by_conserved(const OdeSystem& sys, const ConservedQuantity& H,
                              const std::string& solve_for);

/// Coefficient a when e = a*var + rest with a free of states and rest free of
/// var; nullopt when e has another shape.
std::optional<Expr> affine_coefficient(const Expr& e, const std::string& var,
                                       const std::vector<Symbol>& states);

}  // namespace obsv
