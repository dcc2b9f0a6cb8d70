#include "rud/optimizers.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace rud {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames{{
    {Method::GD, "gd"},
    {Method::MOM, "mom"},
    {Method::NAG, "nag"},
    {Method::NAG_ORIGINAL, "nag-original"},
    {Method::NAG_TWO_STAGE, "nag-two-stage"},
    {Method::RUD, "rud"},
}};

Vector checked_gradient(const Objective& f, const Vector& at, long iteration) {
    Vector g = f.gradient(at);
    if (!g.allFinite()) {
        throw NumericalError("non-finite gradient at iteration " + std::to_string(iteration),
                             iteration);
    }
    return g;
}

void require_same_dim(const OptimizerState& state, const Objective& f) {
    if (state.theta.size() != f.dim() || state.velocity.size() != f.dim()) {
        throw std::invalid_argument("optimizer state dimension does not match objective");
    }
}

void require_momentum(double alpha, double mu) {
    if (!(alpha > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("momentum must lie in [0, 1]");
}

// theta' = theta + v', iteration advanced.
OptimizerState advance(const OptimizerState& state, Vector velocity) {
    OptimizerState next;
    next.theta = state.theta + velocity;
    next.velocity = std::move(velocity);
    next.iteration = state.iteration + 1;
    return next;
}

}  // namespace

std::string_view method_name(Method m) {
    for (const auto& [method, name] : kMethodNames) {
        if (method == m) return name;
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (const auto& [method, spelled] : kMethodNames) {
        if (spelled == name) return method;
    }
    return std::nullopt;
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods{Method::GD,           Method::MOM,
                                             Method::NAG,          Method::NAG_ORIGINAL,
                                             Method::NAG_TWO_STAGE, Method::RUD};
    return methods;
}

Objective::Objective(Eigen::Index dim, ValueFn value, GradientFn gradient)
    : dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)) {
    if (dim_ < 1) throw std::invalid_argument("objective dimension must be positive");
    if (!value_ || !gradient_) throw std::invalid_argument("objective callbacks must be set");
}

double Objective::value(const Vector& theta) const {
    if (theta.size() != dim_) throw std::invalid_argument("objective: dimension mismatch");
    return value_(theta);
}

Vector Objective::gradient(const Vector& theta) const {
    if (theta.size() != dim_) throw std::invalid_argument("objective: dimension mismatch");
    Vector g = gradient_(theta);
    if (g.size() != dim_) throw std::logic_error("objective: gradient has wrong length");
    return g;
}

double Schedule::alpha(long /*t*/) const { return alpha0_; }

double Schedule::mu(long t) const {
    switch (kind_) {
        case ScheduleKind::constant:
            return mu0_;
        case ScheduleKind::nesterov:
            return 1.0 - 3.0 / (5.0 + static_cast<double>(t));
    }
    return mu0_;
}

Schedule make_schedule(ScheduleKind kind, double alpha0, double mu0) {
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
        throw std::invalid_argument("schedule: alpha0 must be a positive finite number");
    }
    if (kind == ScheduleKind::constant && !(mu0 >= 0.0 && mu0 <= 1.0)) {
        throw std::invalid_argument("schedule: mu0 must lie in [0, 1]");
    }
    return Schedule(kind, alpha0, mu0);
}

Schedule make_schedule(std::string_view kind, double alpha0, double mu0) {
    if (kind == "constant") return make_schedule(ScheduleKind::constant, alpha0, mu0);
    if (kind == "nesterov") return make_schedule(ScheduleKind::nesterov, alpha0, mu0);
    throw std::invalid_argument("schedule: unknown kind '" + std::string(kind) + "'");
}

OptimizerState OptimizerState::initial(const Vector& theta1) {
    return OptimizerState{theta1, Vector::Zero(theta1.size()), 1};
}

OptimizerState step_gd(const OptimizerState& state, const Objective& f, double alpha) {
    require_same_dim(state, f);
    if (!(alpha > 0.0)) throw std::invalid_argument("learning rate must be positive");
    const Vector g = checked_gradient(f, state.theta, state.iteration);
    return advance(state, -alpha * g);
}

OptimizerState step_mom(const OptimizerState& state, const Objective& f, double alpha, double mu) {
    require_same_dim(state, f);
    require_momentum(alpha, mu);
    const Vector g = checked_gradient(f, state.theta, state.iteration);
    return advance(state, mu * state.velocity - alpha * g);
}

OptimizerState step_nag(const OptimizerState& state, const Objective& f, double alpha, double mu) {
    require_same_dim(state, f);
    require_momentum(alpha, mu);
    const Vector lookahead = state.theta + mu * state.velocity;
    const Vector g = checked_gradient(f, lookahead, state.iteration);
    return advance(state, mu * state.velocity - alpha * g);
}

Vector step_nag_original(const Vector& theta_t, const Vector& theta_prev, const Objective& f,
                         double alpha, double mu, long iteration) {
    if (theta_t.size() != f.dim() || theta_prev.size() != f.dim()) {
        throw std::invalid_argument("parameter vectors do not match objective dimension");
    }
    require_momentum(alpha, mu);
    const Vector smoothed = (1.0 + mu) * theta_t - mu * theta_prev;
    const Vector g = checked_gradient(f, smoothed, iteration);
    return smoothed - alpha * g;
}

OptimizerState step_nag_two_stage(const OptimizerState& state, const Objective& f, double alpha,
                                  double gamma) {
    require_same_dim(state, f);
    if (!(alpha > 0.0)) throw std::invalid_argument("learning rate must be positive");
    // Rounding slack: gamma is usually derived as (1 - mu) / alpha.
    if (!(gamma >= 0.0) || alpha * gamma > 1.0 + 4.0 * std::numeric_limits<double>::epsilon()) {
        throw std::invalid_argument("two-stage step needs gamma >= 0 and alpha * gamma <= 1");
    }
    // Descent on the regulariser alone, then on J at the shifted point.
    const Vector shrunk = (1.0 - alpha * gamma) * state.velocity;
    const Vector g = checked_gradient(f, state.theta + shrunk, state.iteration);
    return advance(state, shrunk - alpha * g);
}

OptimizerState step_rud(const OptimizerState& state, const Objective& f, double alpha, double mu) {
    require_same_dim(state, f);
    require_momentum(alpha, mu);
    const Vector lookahead = state.theta + state.velocity;
    const Vector g = checked_gradient(f, lookahead, state.iteration);
    return advance(state, mu * state.velocity - alpha * g);
}

OptimizerState step(Method method, const OptimizerState& state, const Objective& f,
                    const Schedule& schedule) {
    const long t = state.iteration;
    const double alpha = schedule.alpha(t);
    const double mu = schedule.mu(t);
    switch (method) {
        case Method::GD:
            return step_gd(state, f, alpha);
        case Method::MOM:
            return step_mom(state, f, alpha, mu);
        case Method::NAG:
            return step_nag(state, f, alpha, mu);
        case Method::NAG_ORIGINAL: {
            // v_1 = 0 gives theta_0 = theta_1.
            const Vector theta_prev = state.theta - state.velocity;
            OptimizerState next;
            next.theta = step_nag_original(state.theta, theta_prev, f, alpha, mu, t);
            next.velocity = next.theta - state.theta;
            next.iteration = t + 1;
            return next;
        }
        case Method::NAG_TWO_STAGE:
            return step_nag_two_stage(state, f, alpha, schedule.gamma(t));
        case Method::RUD:
            return step_rud(state, f, alpha, mu);
    }
    throw std::invalid_argument("step: unknown method");
}

namespace {

TraceRecord make_record(const OptimizerState& state, double value) {
    return TraceRecord{state.iteration, state.theta, state.velocity, value};
}

double guarded_value(const Objective& f, const OptimizerState& state, Trace& trace) {
    const long t = state.iteration;
    if (!state.theta.allFinite() || !state.velocity.allFinite()) {
        throw DivergenceError("non-finite iterate at iteration " + std::to_string(t), t,
                              std::move(trace));
    }
    const double value = f.value(state.theta);
    if (!std::isfinite(value) || std::abs(value) > kDivergenceBound) {
        throw DivergenceError("objective diverged at iteration " + std::to_string(t) +
                                  " (J = " + std::to_string(value) + ")",
                              t, std::move(trace));
    }
    return value;
}

}  // namespace

Trace run(Method method, const Objective& f, const Vector& theta1, const Schedule& schedule, long T) {
    if (T < 1) throw std::invalid_argument("run: T must be at least 1");
    if (theta1.size() != f.dim()) throw std::invalid_argument("run: theta1 has wrong dimension");
    if (!theta1.allFinite()) throw std::invalid_argument("run: theta1 must be finite");

    Trace trace;
    trace.records.reserve(static_cast<std::size_t>(T));

    OptimizerState state = OptimizerState::initial(theta1);
    trace.records.push_back(make_record(state, guarded_value(f, state, trace)));

    for (long t = 1; t < T; ++t) {
        OptimizerState next;
        try {
            next = step(method, state, f, schedule);
        } catch (const NumericalError& e) {
            throw DivergenceError(e.what(), t, std::move(trace));
        }
        const double value = guarded_value(f, next, trace);
        state = std::move(next);
        trace.records.push_back(make_record(state, value));
    }
    return trace;
}

}  // namespace rud
