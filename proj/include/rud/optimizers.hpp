#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rud/errors.hpp"

namespace rud {

using Vector = Eigen::VectorXd;

/// First-order update rules implemented by this library.
enum class Method { GD, MOM, NAG, NAG_ORIGINAL, NAG_TWO_STAGE, RUD };

/// Command-line spelling: gd, mom, nag, nag-original, nag-two-stage, rud.
std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// A differentiable scalar function of a parameter vector. Both callbacks
/// must be pure; the object is an immutable value and may be shared across
/// threads.
class Objective {
public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;

    Objective(Eigen::Index dim, ValueFn value, GradientFn gradient);

    Eigen::Index dim() const noexcept { return dim_; }
    double value(const Vector& theta) const;
    Vector gradient(const Vector& theta) const;

private:
    Eigen::Index dim_;
    ValueFn value_;
    GradientFn gradient_;
};

enum class ScheduleKind { constant, nesterov };

/// Per-iteration learning rate and momentum. Iterations are numbered from 1;
/// the step taking theta_t to theta_{t+1} uses alpha(t) and mu(t).
class Schedule {
public:
    ScheduleKind kind() const noexcept { return kind_; }
    double alpha(long t) const;
    double mu(long t) const;
    /// Regularisation weight implied by mu = 1 - alpha * gamma.
    double gamma(long t) const { return (1.0 - mu(t)) / alpha(t); }

private:
    friend Schedule make_schedule(ScheduleKind, double, double);
    Schedule(ScheduleKind kind, double alpha0, double mu0)
        : kind_(kind), alpha0_(alpha0), mu0_(mu0) {}

    ScheduleKind kind_;
    double alpha0_;
    double mu0_;
};

/// `mu0` is ignored for the nesterov kind, whose momentum is 1 - 3/(5+t).
/// Throws std::invalid_argument for alpha0 <= 0 or mu0 outside [0, 1].
Schedule make_schedule(ScheduleKind kind, double alpha0, double mu0 = 0.0);
/// Same, with the kind spelled "constant" or "nesterov".
Schedule make_schedule(std::string_view kind, double alpha0, double mu0 = 0.0);

struct OptimizerState {
    Vector theta;
    Vector velocity;
    long iteration = 1;

    /// State at t = 1 with zero velocity.
    static OptimizerState initial(const Vector& theta1);
};

// Single steps. Each throws NumericalError (tagged with state.iteration)
// when the gradient it evaluates has a non-finite component.

/// theta' = theta - alpha * grad(theta).
OptimizerState step_gd(const OptimizerState& state, const Objective& f, double alpha);

/// Classical momentum: v' = mu v - alpha grad(theta), theta' = theta + v'.
OptimizerState step_mom(const OptimizerState& state, const Objective& f, double alpha, double mu);

/// Nesterov, velocity form: gradient taken at theta + mu v.
OptimizerState step_nag(const OptimizerState& state, const Objective& f, double alpha, double mu);

/// Nesterov, original two-point form. Returns theta_{t+1} from theta_t and
/// theta_{t-1}; pass theta_prev = theta_t on the first step.
Vector step_nag_original(const Vector& theta_t, const Vector& theta_prev, const Objective& f,
                         double alpha, double mu, long iteration = -1);

/// Nesterov as a descent step on the regulariser followed by a descent
/// step on the look-ahead objective. Requires alpha * gamma <= 1.
OptimizerState step_nag_two_stage(const OptimizerState& state, const Objective& f, double alpha,
                                  double gamma);

/// Regularised update descent: gradient taken at the full look-ahead theta + v.
OptimizerState step_rud(const OptimizerState& state, const Objective& f, double alpha, double mu);

/// One step of `method` with alpha and mu taken from `schedule` at
/// state.iteration (gamma derived for NAG_TWO_STAGE). NAG_ORIGINAL recovers
/// theta_{t-1} as theta - velocity.
OptimizerState step(Method method, const OptimizerState& state, const Objective& f,
                    const Schedule& schedule);

struct TraceRecord {
    long t;
    Vector theta;
    Vector velocity;
    double objective_value;
};

struct Trace {
    std::vector<TraceRecord> records;
};

/// Run aborted because the iterates left the finite range or |J| exceeded
/// the divergence bound. Carries every record produced before the failure.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, long iteration, Trace partial)
        : NumericalError(what, iteration), partial_(std::move(partial)) {}

    const Trace& partial_trace() const noexcept { return partial_; }

private:
    Trace partial_;
};

/// |J| above this bound is treated as divergence.
inline constexpr double kDivergenceBound = 1e100;

/// Runs `method` for T records starting from theta1 with v_1 = 0. For
/// NAG_ORIGINAL the recorded velocity is theta_{t+1} - theta_t.
/// Throws DivergenceError on any non-finite value or |J| > kDivergenceBound.
Trace run(Method method, const Objective& f, const Vector& theta1, const Schedule& schedule, long T);

}  // namespace rud
