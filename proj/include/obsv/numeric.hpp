#pragma once

#include "obsv/model.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace obsv {

struct Trajectory {
    std::vector<std::string> states;
    double dt = 0;
    /// times[i] = i * dt
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    FloatPoint params;
    /// Integration stopped early on a NaN or Inf.
    bool diverged = false;

    FloatPoint point(std::size_t i) const;
};

/// Fixed-step classical RK4 over round(T / dt) steps.
/// Throws Error(InvalidArgument) on bad dt, T or x0 arity and
/// Error(EvaluationError) when a right-hand side cannot be evaluated.
Trajectory integrate_rk4(const OdeSystem& sys, const std::vector<double>& x0, const FloatPoint& params,
                         double dt, double T);

/// max_i |H(x(t_i)) - H(x(0))|.
double conserved_drift(const Trajectory& traj, const Expr& H);

/// Output values along the trajectory, one vector per output.
std::vector<std::vector<double>> output_series(const Trajectory& traj, const ObservationSet& obs);

struct WitnessPair {
    std::vector<double> x0_a;
    std::vector<double> x0_b;
    double output_distance = 0;
    double horizon = 0;
    /// State perturbed to obtain x0_b, when found by the witness search.
    std::string direction;
};

/// Sup-norm distance between the observed outputs of two trajectories on the
/// shared grid.
WitnessPair distinguishability(const OdeSystem& sys, const ObservationSet& obs, const std::vector<double>& x0_a,
                               const std::vector<double>& x0_b, const FloatPoint& params, double dt, double T);

constexpr double kWitnessThreshold = 1e-12;

/// Perturbs `base` by +delta then -delta along every state that cannot reach
/// an observed state in the inference graph, and returns the first pair
/// whose output distance is below `threshold`.
std::optional<WitnessPair> unobservability_witness(const OdeSystem& sys, const ObservationSet& obs,
                                                   const std::vector<double>& base, const FloatPoint& params,
                                                   double dt, double T, double delta,
                                                   double threshold = kWitnessThreshold);

/// "t,<state>,..." header then one row per grid point, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace obsv
