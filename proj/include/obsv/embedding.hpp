#pragma once

#include "obsv/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace obsv {

/// Dense row-major matrix of expressions.
struct ExprMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Expr> entries;

    ExprMatrix() = default;
    ExprMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    Expr& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Expr& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

/// Matrix of d e_i / d v_j.
ExprMatrix jacobian_of(const std::vector<Expr>& exprs, const std::vector<Symbol>& vars);

constexpr int kAutoOrder = -1;

/// Components (g_1, L g_1, ..., L^k g_1, g_2, ...): component j*(k+1)+i is
/// L^i applied to output j.
struct EmbeddingMap {
    std::vector<Expr> components;
    std::size_t outputs = 0;
    int k = 0;
};

/// Iterated Lie derivatives of each output. k = kAutoOrder means n - 1.
/// Rational components are kept in expanded canonical form.
EmbeddingMap build_embedding(const OdeSystem& sys, const ObservationSet& obs, int k = kAutoOrder);

struct EmbeddingJacobian {
    ExprMatrix entries;  // columns follow sys.states
    std::vector<std::string> columns;
};

EmbeddingJacobian jacobian(const EmbeddingMap& phi, const OdeSystem& sys);

enum class Confidence { Exact, Probabilistic };

const char* to_string(Confidence c);

struct RankVerdict {
    std::size_t generic_rank = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<ExactPoint> sample_points;
    std::vector<std::size_t> point_ranks;
    /// Draws rejected because an entry had a pole there.
    int rejected_draws = 0;
    Confidence confidence = Confidence::Probabilistic;

    bool full_column_rank() const { return generic_rank == cols; }
};

struct RankOptions {
    std::uint64_t seed = 0;
    int trials = 8;
    long range = 1000;
    int redraws = 16;
};

/// Maximum rank of M over `trials` random integer points with every symbol
/// of `symbols` drawn from [-range, range] (positive range for matrices with
/// ln/exp). Throws Error(AllPointsDegenerate) when every draw hits a pole.
RankVerdict generic_rank(const ExprMatrix& m, const SymbolTable& symbols, const RankOptions& options = {});

/// Exact rank at a point. Throws Error(DivisionByZero | TranscendentalNode |
/// EvaluationError).
std::size_t rank_at_point(const ExprMatrix& m, const ExactPoint& point);

/// Rank of a rational matrix by fraction-free (Bareiss) elimination.
std::size_t exact_rank(std::vector<std::vector<Rational>> rows);

/// Rank of a float matrix by partial pivoting with a relative tolerance.
std::size_t float_rank(std::vector<std::vector<double>> rows, double rel_tol = 1e-9);

struct ProbeResult {
    ExactPoint fixed;
    /// Maximum rank over random completions of `fixed`; nullopt when every
    /// completion hit a pole.
    std::optional<std::size_t> rank;
    int completions = 0;
};

/// Rank of m on the locus given by `fixed`, maximised over random values for
/// the remaining symbols.
ProbeResult probe_rank(const ExprMatrix& m, const SymbolTable& symbols, const ExactPoint& fixed,
                       std::uint64_t seed, int completions = 4);

struct ObservabilityResult {
    EmbeddingMap embedding;
    EmbeddingJacobian jacobian;
    RankVerdict rank;
    bool observable = false;
    /// The order-(k+1) embedding has larger generic rank.
    bool rank_still_growing = false;
    std::vector<ProbeResult> probes;
};

ObservabilityResult observability_verdict(const OdeSystem& sys, const ObservationSet& obs, int k = kAutoOrder,
                                          const RankOptions& options = {},
                                          const std::vector<ExactPoint>& probes = {});

}  // namespace obsv
