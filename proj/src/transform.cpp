#include "obsv/transform.hpp"

#include "obsv/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace obsv {

const char* to_string(AlternativeStatus s)
{
    switch (s) {
    case AlternativeStatus::Ok: return "ok";
    case AlternativeStatus::NoSharedVariable: return "no_shared_variable";
    case AlternativeStatus::DimensionMismatch: return "dimension_mismatch";
    case AlternativeStatus::ConditionsFail: return "conditions_fail";
    case AlternativeStatus::NotAffine: return "not_affine";
    case AlternativeStatus::Singular: return "singular";
    }
    return "?";
}

namespace {

std::vector<Symbol> state_symbols(const std::vector<std::string>& names)
{
    std::vector<Symbol> out;
    for (const auto& n : names)
        out.push_back({n, SymbolKind::State});
    return out;
}

std::vector<Expr> exprs_of(const std::vector<ConservedQuantity>& G)
{
    std::vector<Expr> out;
    for (const auto& H : G)
        out.push_back(H.expr);
    return out;
}

bool involves(const Expr& e, const Symbol& s) { return depends_on(e, s.name) && !is_zero(diff(e, s)).zero(); }

// Laplace expansion along the first row.
Expr determinant(const std::vector<std::vector<Expr>>& a)
{
    const std::size_t n = a.size();
    if (n == 0)
        return Expr::constant(1);
    if (n == 1)
        return a[0][0];
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].is_const(0))
            continue;
        std::vector<std::vector<Expr>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Expr> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j)
                    row.push_back(a[i][c]);
            minor.push_back(std::move(row));
        }
        Expr t = mul({a[0][j], determinant(minor)});
        terms.push_back(j % 2 ? neg(t) : t);
    }
    return add(std::move(terms));
}

// Size-k subsets of {0..n-1} in lexicographic order, at most cap of them.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k, std::size_t cap, bool* truncated)
{
    std::vector<std::vector<std::size_t>> out;
    if (k > n)
        return out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (out.size() == cap) {
            if (truncated)
                *truncated = true;
            break;
        }
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<std::string> in_state_order(const OdeSystem& sys, const std::set<std::string>& names)
{
    std::vector<std::string> out;
    for (const auto& s : sys.states)
        if (names.count(s.name))
            out.push_back(s.name);
    return out;
}

// Eliminates C[perm[i]] through G[i]; tries every assignment.
std::optional<OdeSystem> solve_for_set(const OdeSystem& sys, const std::vector<ConservedQuantity>& G,
                                       const std::vector<std::string>& C)
{
    std::vector<std::size_t> perm(C.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        try {
            OdeSystem t = sys;
            for (std::size_t i = 0; i < G.size(); ++i)
                t = reduce_by_conserved(t, G[i], C[perm[i]]);
            return t;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotAffineIn && e.kind() != ErrorKind::ZeroCoefficient)
                throw;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

}  // namespace

Partition make_partition(const OdeSystem& sys, const std::vector<std::string>& s_vars)
{
    std::set<std::string> s(s_vars.begin(), s_vars.end());
    if (s.size() != s_vars.size())
        throw Error(ErrorKind::InvalidArgument, "duplicate variable in partition");
    for (const auto& v : s)
        if (!sys.state_index(v))
            throw Error(ErrorKind::InvalidArgument, "'" + v + "' is not a state");
    Partition p;
    for (const auto& st : sys.states)
        (s.count(st.name) ? p.s_vars : p.r_vars).push_back(st.name);
    return p;
}

PartitionJacobians partition_jacobians(const std::vector<ConservedQuantity>& G, const Partition& p)
{
    const auto exprs = exprs_of(G);
    return {jacobian_of(exprs, state_symbols(p.r_vars)), jacobian_of(exprs, state_symbols(p.s_vars))};
}

TransformConditions transform_conditions(const PartitionJacobians& pj, const SymbolTable& symbols,
                                       const RankOptions& options)
{
    const std::size_t l = pj.dG_ds.rows;
    const std::size_t m = pj.dG_ds.cols;
    if (l != m)
        throw Error(ErrorKind::NotSquare, "dG/ds is " + std::to_string(l) + "x" + std::to_string(m));
    auto check = [&](const ExprMatrix& a, std::size_t required) {
        RankCondition c;
        c.required = required;
        if (a.rows == 0 || a.cols == 0) {
            c.holds = required == 0;
            c.confidence = Confidence::Exact;
            return c;
        }
        RankVerdict v = generic_rank(a, symbols, options);
        c.rank = v.generic_rank;
        c.holds = v.generic_rank == required;
        c.confidence = v.confidence;
        return c;
    };
    TransformConditions out;
    out.ds_invertible = check(pj.dG_ds, m);
    out.dr_full_rank = check(pj.dG_dr, std::min(l, pj.dG_dr.cols));
    return out;
}

bool is_affine_in(const std::vector<ConservedQuantity>& G, const std::vector<std::string>& vars,
                  const OdeSystem& sys)
{
    for (const auto& H : G)
        for (const auto& v : vars)
            if (!affine_coefficient(H.expr, v, sys.states))
                return false;
    return true;
}

Substitution solve_affine_psi(const std::vector<ConservedQuantity>& G, const std::vector<std::string>& levels,
                              const OdeSystem& sys, const Partition& p)
{
    const std::size_t l = G.size();
    if (levels.size() != l)
        throw Error(ErrorKind::InvalidArgument, "one level per quantity is required");
    if (p.s_vars.size() != l)
        throw Error(ErrorKind::NotSquare, "need as many solved variables as quantities");

    std::vector<std::vector<Expr>> a(l, std::vector<Expr>(l));
    std::vector<Expr> b(l);
    Bindings zero;
    for (const auto& v : p.s_vars)
        zero.emplace(v, Expr::constant(0));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            auto c = affine_coefficient(G[i].expr, p.s_vars[j], sys.states);
            if (!c)
                throw Error(ErrorKind::NotAffine,
                            "'" + G[i].level + "' is not affine in '" + p.s_vars[j] + "'");
            a[i][j] = *c;
        }
        b[i] = sub(Expr::symbol({levels[i], SymbolKind::Parameter}), substitute(G[i].expr, zero));
    }

    SymbolTable order = sys.symbols();
    for (const auto& lv : levels)
        if (!order.find(lv))
            order.add({lv, SymbolKind::Parameter});

    Substitution psi;
    if (l == 1) {
        if (is_zero(a[0][0]).zero())
            throw Error(ErrorKind::SingularSystem, "dG/ds is singular");
        Expr rest = substitute(G[0].expr, zero);
        std::vector<Expr> terms{Expr::symbol({levels[0], SymbolKind::Parameter})};
        if (rest.kind() == NodeKind::Add)
            for (const auto& t : rest.children())
                terms.push_back(neg(t));
        else
            terms.push_back(neg(rest));
        Expr v = add(std::move(terms));
        if (!a[0][0].is_const(1))
            v = div(v, a[0][0]);
        psi.emplace_back(p.s_vars[0], v);
        return psi;
    }

    Expr det = determinant(a);
    if (is_zero(det).zero())
        throw Error(ErrorKind::SingularSystem, "dG/ds is singular");
    for (std::size_t j = 0; j < l; ++j) {
        auto aj = a;
        for (std::size_t i = 0; i < l; ++i)
            aj[i][j] = b[i];
        psi.emplace_back(p.s_vars[j], canonical(div(determinant(aj), det), order));
    }
    return psi;
}

std::vector<std::vector<std::string>> AlternativeReport::sufficient_sets() const
{
    std::vector<std::vector<std::string>> out;
    for (const auto& r : results)
        for (const auto& c : r.candidates)
            if (c.sufficient && std::find(out.begin(), out.end(), c.observe) == out.end())
                out.push_back(c.observe);
    return out;
}

AlternativeReport alternative_observables(const OdeSystem& sys, const std::vector<ConservedQuantity>& G,
                                          const std::vector<std::string>& known_sufficient,
                                          const AlternativeOptions& options)
{
    for (const auto& v : known_sufficient)
        if (!sys.state_index(v))
            throw Error(ErrorKind::InvalidArgument, "'" + v + "' is not a state");
    if (G.empty())
        throw Error(ErrorKind::InvalidArgument, "no conserved quantities given");

    const SymbolTable symbols = sys.symbols();
    const std::set<std::string> known(known_sufficient.begin(), known_sufficient.end());
    std::set<std::string> in_g;
    for (const auto& H : G)
        for (const auto& s : sys.states)
            if (involves(H.expr, s))
                in_g.insert(s.name);
    std::set<std::string> shared_set;
    for (const auto& v : known)
        if (in_g.count(v))
            shared_set.insert(v);
    const auto shared = in_state_order(sys, shared_set);

    AlternativeReport report;
    const std::size_t l = G.size();
    if (shared.empty() || shared.size() < l) {
        AlternativeSensorResult r;
        r.partition = make_partition(sys, shared);
        r.status = shared.empty() ? AlternativeStatus::NoSharedVariable : AlternativeStatus::DimensionMismatch;
        report.results.push_back(std::move(r));
        return report;
    }

    std::vector<std::string> levels;
    for (const auto& H : G)
        levels.push_back(H.level);

    for (const auto& pick : subsets(shared.size(), l, options.partition_cap, &report.truncated)) {
        std::vector<std::string> s_vars;
        for (auto i : pick)
            s_vars.push_back(shared[i]);
        AlternativeSensorResult res;
        res.partition = make_partition(sys, s_vars);
        const auto pj = partition_jacobians(G, res.partition);
        res.conditions = transform_conditions(pj, symbols, options.rank);
        if (!res.conditions->both()) {
            res.status = AlternativeStatus::ConditionsFail;
            report.results.push_back(std::move(res));
            continue;
        }
        if (!is_affine_in(G, s_vars, sys)) {
            res.status = AlternativeStatus::NotAffine;
            report.results.push_back(std::move(res));
            continue;
        }
        try {
            res.psi = solve_affine_psi(G, levels, sys, res.partition);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularSystem)
                throw;
            res.status = AlternativeStatus::Singular;
            report.results.push_back(std::move(res));
            continue;
        }

        std::set<std::string> kept;
        for (const auto& v : known)
            if (std::find(s_vars.begin(), s_vars.end(), v) == s_vars.end())
                kept.insert(v);
        const auto& r_vars = res.partition.r_vars;
        for (const auto& cpick : subsets(r_vars.size(), l, options.partition_cap, &report.truncated)) {
            ExprMatrix sub_dr(l, l);
            std::vector<std::string> C;
            for (std::size_t j = 0; j < l; ++j) {
                C.push_back(r_vars[cpick[j]]);
                for (std::size_t i = 0; i < l; ++i)
                    sub_dr.at(i, j) = pj.dG_dr.at(i, cpick[j]);
            }
            if (generic_rank(sub_dr, symbols, options.rank).generic_rank < l)
                continue;
            CandidateResult cand;
            cand.solved_for = C;
            std::set<std::string> obs_set = kept;
            obs_set.insert(C.begin(), C.end());
            cand.observe = in_state_order(sys, obs_set);
            if (!is_affine_in(G, C, sys)) {
                cand.note = "not affine in the candidate variables";
                res.candidates.push_back(std::move(cand));
                continue;
            }
            cand.transformed = solve_for_set(sys, G, C);
            if (!cand.transformed) {
                cand.note = "no elimination order succeeded";
                res.candidates.push_back(std::move(cand));
                continue;
            }
            const OdeSystem& t = *cand.transformed;
            InferenceGraph g = build_graph(t);
            Condensation cond = scc_condensation(g);
            cand.graph = graphical_observable(g, cond, obs_set);
            cand.rank = observability_verdict(t, observe_states(cand.observe), options.k, options.rank);
            cand.sufficient = cand.rank->observable;
            res.candidates.push_back(std::move(cand));
        }
        report.results.push_back(std::move(res));
    }
    return report;
}

}  // namespace obsv
