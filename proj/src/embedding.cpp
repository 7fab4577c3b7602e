#include "obsv/embedding.hpp"

#include "obsv/error.hpp"
#include "obsv/random.hpp"

#include <algorithm>
#include <cmath>

namespace obsv {

const char* to_string(Confidence c) { return c == Confidence::Exact ? "exact" : "probabilistic"; }

ExprMatrix jacobian_of(const std::vector<Expr>& exprs, const std::vector<Symbol>& vars)
{
    ExprMatrix m(exprs.size(), vars.size());
    for (std::size_t i = 0; i < exprs.size(); ++i)
        for (std::size_t j = 0; j < vars.size(); ++j)
            m.at(i, j) = diff(exprs[i], vars[j]);
    return m;
}

EmbeddingMap build_embedding(const OdeSystem& sys, const ObservationSet& obs, int k)
{
    if (k == kAutoOrder)
        k = sys.size() == 0 ? 0 : static_cast<int>(sys.size()) - 1;
    if (k < 0)
        throw Error(ErrorKind::InvalidArgument, "embedding order must be >= 0");
    const SymbolTable order = sys.symbols();
    EmbeddingMap phi;
    phi.k = k;
    phi.outputs = obs.outputs.size();
    for (const auto& g : obs.outputs) {
        Expr y = g;
        phi.components.push_back(y);
        for (int i = 0; i < k; ++i) {
            y = canonical(lie_derivative(sys, y), order);
            phi.components.push_back(y);
        }
    }
    return phi;
}

EmbeddingJacobian jacobian(const EmbeddingMap& phi, const OdeSystem& sys)
{
    EmbeddingJacobian j;
    j.entries = jacobian_of(phi.components, sys.states);
    for (const auto& s : sys.states)
        j.columns.push_back(s.name);
    return j;
}

std::size_t exact_rank(std::vector<std::vector<Rational>> rows)
{
    if (rows.empty())
        return 0;
    const std::size_t m = rows.size();
    const std::size_t n = rows.front().size();
    // Scale each row to integers.
    std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < m; ++i) {
        BigInt l = 1;
        for (const auto& q : rows[i])
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = rows[i][j].get_num() * (l / rows[i][j].get_den());
    }
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && a[p][c] == 0)
            ++p;
        if (p == m)
            continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < m; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                BigInt v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

std::size_t float_rank(std::vector<std::vector<double>> a, double rel_tol)
{
    if (a.empty())
        return 0;
    const std::size_t m = a.size();
    const std::size_t n = a.front().size();
    double scale = 0;
    for (const auto& row : a)
        for (double v : row)
            scale = std::max(scale, std::abs(v));
    const double tol = rel_tol * std::max(scale, 1.0);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        for (std::size_t i = r + 1; i < m; ++i)
            if (std::abs(a[i][c]) > std::abs(a[p][c]))
                p = i;
        if (std::abs(a[p][c]) <= tol)
            continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < m; ++i) {
            double f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < n; ++j)
                a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

namespace {

bool matrix_is_rational(const ExprMatrix& m)
{
    return std::none_of(m.entries.begin(), m.entries.end(), [](const Expr& e) { return has_transcendental(e); });
}

// Rank at p; nullopt on a pole or a domain error.
std::optional<std::size_t> try_rank(const ExprMatrix& m, const ExactPoint& p, bool rational)
{
    try {
        if (rational) {
            std::vector<std::vector<Rational>> rows(m.rows, std::vector<Rational>(m.cols));
            for (std::size_t i = 0; i < m.rows; ++i)
                for (std::size_t j = 0; j < m.cols; ++j)
                    rows[i][j] = eval_exact(m.at(i, j), p);
            return exact_rank(std::move(rows));
        }
        FloatPoint fp;
        for (const auto& [k, v] : p)
            fp[k] = to_double(v);
        std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) {
                double v = eval_float(m.at(i, j), fp);
                if (!std::isfinite(v))
                    return std::nullopt;
                rows[i][j] = v;
            }
        return float_rank(std::move(rows));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::DivisionByZero || e.kind() == ErrorKind::DomainError)
            return std::nullopt;
        throw;
    }
}

ExactPoint draw(const SymbolTable& symbols, const ExactPoint& fixed, Sampler& rng, long lo, long hi)
{
    ExactPoint p = fixed;
    for (const auto& s : symbols.symbols()) {
        long v = rng.uniform(lo, hi);
        if (!p.count(s.name))
            p.emplace(s.name, Rational(v));
    }
    return p;
}

}  // namespace

RankVerdict generic_rank(const ExprMatrix& m, const SymbolTable& symbols, const RankOptions& options)
{
    if (options.trials < 1)
        throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    RankVerdict v;
    v.rows = m.rows;
    v.cols = m.cols;
    v.seed = options.seed;
    const bool rational = matrix_is_rational(m);
    const long lo = rational ? -options.range : 1;
    Sampler rng(options.seed);
    for (int t = 0; t < options.trials; ++t) {
        for (int attempt = 0; attempt < options.redraws; ++attempt) {
            ExactPoint p = draw(symbols, {}, rng, lo, options.range);
            auto r = try_rank(m, p, rational);
            if (!r) {
                ++v.rejected_draws;
                continue;
            }
            v.sample_points.push_back(std::move(p));
            v.point_ranks.push_back(*r);
            v.generic_rank = std::max(v.generic_rank, *r);
            ++v.trials;
            break;
        }
    }
    if (v.trials == 0)
        throw Error(ErrorKind::AllPointsDegenerate, "every sample point hit a pole");
    v.confidence = rational && v.generic_rank == std::min(m.rows, m.cols) ? Confidence::Exact
                                                                           : Confidence::Probabilistic;
    return v;
}

std::size_t rank_at_point(const ExprMatrix& m, const ExactPoint& point)
{
    std::vector<std::vector<Rational>> rows(m.rows, std::vector<Rational>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            rows[i][j] = eval_exact(m.at(i, j), point);
    return exact_rank(std::move(rows));
}

ProbeResult probe_rank(const ExprMatrix& m, const SymbolTable& symbols, const ExactPoint& fixed,
                       std::uint64_t seed, int completions)
{
    ProbeResult out;
    out.fixed = fixed;
    const bool rational = matrix_is_rational(m);
    Sampler rng(seed);
    for (int i = 0; i < completions * 4 && out.completions < completions; ++i) {
        ExactPoint p = draw(symbols, fixed, rng, rational ? -1000 : 1, 1000);
        auto r = try_rank(m, p, rational);
        if (!r)
            continue;
        ++out.completions;
        out.rank = std::max(out.rank.value_or(0), *r);
    }
    return out;
}

ObservabilityResult observability_verdict(const OdeSystem& sys, const ObservationSet& obs, int k,
                                          const RankOptions& options, const std::vector<ExactPoint>& probes)
{
    ObservabilityResult out;
    const SymbolTable symbols = sys.symbols();
    out.embedding = build_embedding(sys, obs, k);
    out.jacobian = jacobian(out.embedding, sys);
    out.rank = generic_rank(out.jacobian.entries, symbols, options);
    out.observable = out.rank.generic_rank == sys.size();
    if (!out.observable) {
        EmbeddingMap next = build_embedding(sys, obs, out.embedding.k + 1);
        RankVerdict r = generic_rank(jacobian(next, sys).entries, symbols, options);
        out.rank_still_growing = r.generic_rank > out.rank.generic_rank;
    }
    for (const auto& p : probes)
        out.probes.push_back(probe_rank(out.jacobian.entries, symbols, p, options.seed));
    return out;
}

}  // namespace obsv
