#include "obsv/numeric.hpp"

#include "obsv/error.hpp"
#include "obsv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace obsv {

FloatPoint Trajectory::point(std::size_t i) const
{
    FloatPoint p = params;
    for (std::size_t j = 0; j < states.size(); ++j)
        p[states[j]] = values[i][j];
    return p;
}

namespace {

bool all_finite(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Trajectory integrate_rk4(const OdeSystem& sys, const std::vector<double>& x0, const FloatPoint& params,
                         double dt, double T)
{
    if (!(dt > 0) || !std::isfinite(dt))
        throw Error(ErrorKind::InvalidArgument, "dt must be positive");
    if (!(T >= dt) || !std::isfinite(T))
        throw Error(ErrorKind::InvalidArgument, "T must be at least dt");
    const std::size_t n = sys.size();
    if (x0.size() != n)
        throw Error(ErrorKind::InvalidArgument,
                    "expected " + std::to_string(n) + " initial values, got " + std::to_string(x0.size()));
    for (const auto& p : sys.params)
        if (!params.count(p.name))
            throw Error(ErrorKind::InvalidArgument, "no value for parameter '" + p.name + "'");

    Trajectory traj;
    traj.dt = dt;
    traj.params = params;
    for (const auto& s : sys.states)
        traj.states.push_back(s.name);

    FloatPoint point = params;
    double t = 0;
    auto f = [&](const std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i)
            point[sys.states[i].name] = x[i];
        std::vector<double> out(n);
        try {
            for (std::size_t i = 0; i < n; ++i)
                out[i] = eval_float(sys.rhs[i], point);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::EvaluationError)
                throw;
            throw Error(ErrorKind::EvaluationError, "at t=" + fmt(t) + ": " + e.what());
        }
        return out;
    };

    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    traj.times.push_back(0);
    traj.values.push_back(x0);
    if (!all_finite(x0)) {
        traj.diverged = true;
        return traj;
    }
    std::vector<double> x = x0, tmp(n);
    for (std::size_t step = 1; step <= steps; ++step) {
        auto k1 = f(x);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        auto k2 = f(tmp);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        auto k3 = f(tmp);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + dt * k3[i];
        auto k4 = f(tmp);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (!all_finite(x)) {
            traj.diverged = true;
            break;
        }
        t = static_cast<double>(step) * dt;
        traj.times.push_back(t);
        traj.values.push_back(x);
    }
    return traj;
}

double conserved_drift(const Trajectory& traj, const Expr& H)
{
    if (traj.values.empty())
        return 0;
    const double h0 = eval_float(H, traj.point(0));
    double drift = 0;
    for (std::size_t i = 1; i < traj.values.size(); ++i)
        drift = std::max(drift, std::abs(eval_float(H, traj.point(i)) - h0));
    return drift;
}

std::vector<std::vector<double>> output_series(const Trajectory& traj, const ObservationSet& obs)
{
    std::vector<std::vector<double>> out(obs.outputs.size());
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        FloatPoint p = traj.point(i);
        for (std::size_t j = 0; j < obs.outputs.size(); ++j)
            out[j].push_back(eval_float(obs.outputs[j], p));
    }
    return out;
}

WitnessPair distinguishability(const OdeSystem& sys, const ObservationSet& obs, const std::vector<double>& x0_a,
                               const std::vector<double>& x0_b, const FloatPoint& params, double dt, double T)
{
    Trajectory a = integrate_rk4(sys, x0_a, params, dt, T);
    Trajectory b = integrate_rk4(sys, x0_b, params, dt, T);
    auto ya = output_series(a, obs);
    auto yb = output_series(b, obs);
    const std::size_t len = std::min(a.times.size(), b.times.size());
    WitnessPair w;
    w.x0_a = x0_a;
    w.x0_b = x0_b;
    w.horizon = a.times[len - 1];
    for (std::size_t j = 0; j < ya.size(); ++j)
        for (std::size_t i = 0; i < len; ++i)
            w.output_distance = std::max(w.output_distance, std::abs(ya[j][i] - yb[j][i]));
    return w;
}

std::optional<WitnessPair> unobservability_witness(const OdeSystem& sys, const ObservationSet& obs,
                                                   const std::vector<double>& base, const FloatPoint& params,
                                                   double dt, double T, double delta, double threshold)
{
    if (!(delta > 0))
        throw Error(ErrorKind::InvalidArgument, "delta must be positive");
    std::set<std::string> observed;
    for (const auto& g : obs.outputs)
        for (const auto& s : sys.states)
            if (depends_on(g, s.name))
                observed.insert(s.name);
    const auto seen = reachable_from(build_graph(sys), observed);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (seen[i])
            continue;
        for (double sign : {1.0, -1.0}) {
            std::vector<double> x = base;
            x[i] += sign * delta;
            WitnessPair w = distinguishability(sys, obs, base, x, params, dt, T);
            if (w.output_distance < threshold) {
                w.direction = sys.states[i].name;
                return w;
            }
        }
    }
    return std::nullopt;
}

void write_csv(std::ostream& out, const Trajectory& traj)
{
    out << "t";
    for (const auto& s : traj.states)
        out << ',' << s;
    out << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << fmt(traj.times[i]);
        for (double v : traj.values[i])
            out << ',' << fmt(v);
        out << '\n';
    }
}

}  // namespace obsv
