#pragma once

#include "obsv/embedding.hpp"
#include "obsv/graph.hpp"
#include "obsv/model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace obsv {

/// x = (r, s); both lists follow the system's state order.
struct Partition {
    std::vector<std::string> r_vars;
    std::vector<std::string> s_vars;
};

/// Partition with the given s_vars; r_vars are the remaining states.
Partition make_partition(const OdeSystem& sys, const std::vector<std::string>& s_vars);

struct PartitionJacobians {
    ExprMatrix dG_dr;  // l x (n - m)
    ExprMatrix dG_ds;  // l x m
};

PartitionJacobians partition_jacobians(const std::vector<ConservedQuantity>& G, const Partition& p);

struct RankCondition {
    bool holds = false;
    std::size_t rank = 0;
    std::size_t required = 0;
    Confidence confidence = Confidence::Probabilistic;
};

struct TransformConditions {
    RankCondition ds_invertible;
    RankCondition dr_full_rank;
    bool both() const { return ds_invertible.holds && dr_full_rank.holds; }
};

/// dG/ds must have generic rank m and dG/dr generic rank min(l, n - m).
/// Throws Error(NotSquare) when l != m.
TransformConditions transform_conditions(const PartitionJacobians& pj, const SymbolTable& symbols,
                                       const RankOptions& options = {});

using Substitution = std::vector<std::pair<std::string, Expr>>;

/// Solves G = levels for s_vars when G is affine in s_vars with state-free
/// coefficients. Throws Error(NotAffine | SingularSystem | InvalidArgument).
Substitution solve_affine_psi(const std::vector<ConservedQuantity>& G, const std::vector<std::string>& levels,
                              const OdeSystem& sys, const Partition& p);

/// True when every H in G is affine in `vars` with state-free coefficients.
bool is_affine_in(const std::vector<ConservedQuantity>& G, const std::vector<std::string>& vars,
                  const OdeSystem& sys);

struct CandidateResult {
    /// r-side variables the transformed system is solved for.
    std::vector<std::string> solved_for;
    /// States observed on the transformed system.
    std::vector<std::string> observe;
    std::optional<OdeSystem> transformed;
    std::optional<GraphVerdict> graph;
    std::optional<ObservabilityResult> rank;
    bool sufficient = false;
    std::string note;
};

enum class AlternativeStatus {
    Ok,
    NoSharedVariable,   // no known-sufficient state appears in G
    DimensionMismatch,  // fewer shared states than quantities
    ConditionsFail,
    NotAffine,          // conditions hold but psi has no closed form here
    Singular,
};

const char* to_string(AlternativeStatus s);

struct AlternativeSensorResult {
    Partition partition;
    std::optional<TransformConditions> conditions;
    std::optional<Substitution> psi;
    std::vector<CandidateResult> candidates;
    AlternativeStatus status = AlternativeStatus::Ok;
};

struct AlternativeOptions {
    RankOptions rank;
    int k = kAutoOrder;
    std::size_t partition_cap = 1000;
};

struct AlternativeReport {
    std::vector<AlternativeSensorResult> results;
    bool truncated = false;

    /// Observed sets with a positive rank verdict, in result order.
    std::vector<std::vector<std::string>> sufficient_sets() const;
};

/// For s = known_sufficient restricted to the states G involves, checks the
/// Jacobian conditions and, when G is affine, builds psi and tries every
/// size-l set C of r-side variables: the system is solved for C and
/// (known \ s) + C is re-verified by the graph and rank tests.
AlternativeReport alternative_observables(const OdeSystem& sys, const std::vector<ConservedQuantity>& G,
                                          const std::vector<std::string>& known_sufficient,
                                          const AlternativeOptions& options = {});

}  // namespace obsv
