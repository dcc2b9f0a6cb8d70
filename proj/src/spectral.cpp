#include "rud/spectral.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace rud::spectral {

namespace {

constexpr std::array<std::pair<RegionPredicate, std::string_view>, 4> kPredicateNames{{
    {RegionPredicate::RUD_CONVERGES, "RUD_CONVERGES"},
    {RegionPredicate::RUD_BEATS_NAG, "RUD_BEATS_NAG"},
    {RegionPredicate::MOM_BEATS_NAG, "MOM_BEATS_NAG"},
    {RegionPredicate::MOM_BEATS_RUD, "MOM_BEATS_RUD"},
}};

double radius_of(const RootPair& r) { return std::max(std::abs(r.w_plus), std::abs(r.w_minus)); }

Method analysed(Method m) {
    if (m == Method::NAG_ORIGINAL || m == Method::NAG_TWO_STAGE) return Method::NAG;
    return m;
}

}  // namespace

CharacteristicCoefficients coefficients(Method method, double alpha, double mu) {
    switch (method) {
        case Method::GD:
            return {-1.0 + alpha, 0.0};
        case Method::MOM:
            return {-1.0 - mu + alpha, mu};
        case Method::NAG:
            return {-1.0 - mu + alpha + alpha * mu, mu - alpha * mu};
        case Method::RUD:
            return {-1.0 - mu + 2.0 * alpha, mu - alpha};
        case Method::NAG_ORIGINAL:
        case Method::NAG_TWO_STAGE:
            break;
    }
    throw std::invalid_argument("coefficients: " + std::string(method_name(method)) +
                                " has no separate characteristic equation; use NAG");
}

RootPair roots(const CharacteristicCoefficients& k) {
    const double disc = k.b * k.b - 4.0 * k.c;
    if (disc < 0.0) {
        const double re = -0.5 * k.b;
        const double im = 0.5 * std::sqrt(-disc);
        return {Complex(re, im), Complex(re, -im)};
    }
    const double s = std::sqrt(disc);
    // Take the large-magnitude root without cancellation, the other by Vieta.
    if (k.b <= 0.0) {
        const double large = 0.5 * (-k.b + s);
        const double small = large != 0.0 ? k.c / large : 0.0;
        return {Complex(large, 0.0), Complex(small, 0.0)};
    }
    const double large = 0.5 * (-k.b - s);
    return {Complex(k.c / large, 0.0), Complex(large, 0.0)};
}

StabilityResult assess(const CharacteristicCoefficients& k) {
    const double radius = radius_of(roots(k));
    const bool boundary = std::abs(radius - 1.0) <= kBoundaryTolerance;
    const bool convergent = radius < 1.0 && !boundary;
    const bool conditions = std::abs(k.b) < 1.0 + k.c && k.c < 1.0;
    if (!boundary && conditions != convergent) {
        throw ConsistencyError("stability: root radius " + std::to_string(radius) +
                               " disagrees with |b| < 1 + c, c < 1 at b = " +
                               std::to_string(k.b) + ", c = " + std::to_string(k.c));
    }
    return {radius, convergent, boundary};
}

StabilityResult stability(Method method, double alpha, double mu) {
    if (!(alpha > 0.0)) throw std::invalid_argument("stability: alpha must be positive");
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("stability: mu must lie in [0, 1]");
    return assess(coefficients(method, alpha, mu));
}

bool rud_region_closed_form(double alpha, double mu) { return 1.0 + mu > 1.5 * alpha; }

TrajectoryCoefficients trajectory_coefficients(const RootPair& r, double theta1, double theta2) {
    const Complex wp = r.w_plus;
    const Complex wm = r.w_minus;
    // |w+ - w-|^2 = |b^2 - 4c|
    const double spread = std::abs(wp - wm);
    if (spread * spread < kRepeatedRootTolerance) {
        // theta_t = (A + B t) w^t
        const Complex w = 0.5 * (wp + wm);
        if (w == Complex(0.0)) return {Complex(0.0), Complex(0.0), true};
        const Complex B = theta2 / (w * w) - theta1 / w;
        const Complex A = theta1 / w - B;
        return {A, B, true};
    }

    // A zero root contributes nothing for t >= 1; the other root alone must
    // reproduce both initial values.
    if (wp == Complex(0.0) || wm == Complex(0.0)) {
        const Complex w = wp == Complex(0.0) ? wm : wp;
        const Complex amp = theta1 / w;
        if (std::abs(amp * w * w - theta2) > 1e-10 * std::max(1.0, std::abs(theta2))) {
            throw NumericalError("closed form: singular system with inconsistent initial values");
        }
        return wp == Complex(0.0) ? TrajectoryCoefficients{Complex(0.0), amp, false}
                                  : TrajectoryCoefficients{amp, Complex(0.0), false};
    }

    const Complex det = wp * wm * (wm - wp);
    if (det == Complex(0.0)) throw NumericalError("closed form: singular amplitude system");
    const Complex A = (theta1 * wm * wm - theta2 * wm) / det;
    const Complex B = (theta2 * wp - theta1 * wp * wp) / det;
    return {A, B, false};
}

std::vector<double> closed_form_trajectory(Method method, double alpha, double mu, double theta1,
                                           long T) {
    return closed_form_trajectory(coefficients(analysed(method), alpha, mu), alpha, theta1, T);
}

std::vector<double> closed_form_trajectory(const CharacteristicCoefficients& k, double alpha,
                                           double theta1, long T) {
    if (T < 1) throw std::invalid_argument("closed form: T must be at least 1");
    const RootPair r = roots(k);
    const double theta2 = (1.0 - alpha) * theta1;

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(T));
    out.push_back(theta1);
    if (T == 1) return out;

    const TrajectoryCoefficients amp = trajectory_coefficients(r, theta1, theta2);
    if (amp.repeated_root) {
        const Complex w = 0.5 * (r.w_plus + r.w_minus);
        if (w == Complex(0.0)) {
            // Nilpotent recurrence: theta_3 onward vanish.
            out.push_back(theta2);
            out.resize(static_cast<std::size_t>(T), 0.0);
            return out;
        }
        Complex power = w;
        for (long t = 2; t <= T; ++t) {
            power *= w;
            out.push_back(((amp.A + amp.B * static_cast<double>(t)) * power).real());
        }
        return out;
    }

    Complex pp = r.w_plus;
    Complex pm = r.w_minus;
    for (long t = 2; t <= T; ++t) {
        pp *= r.w_plus;
        pm *= r.w_minus;
        out.push_back((amp.A * pp + amp.B * pm).real());
    }
    return out;
}

RateOrder rate_compare(Method a, Method b, double alpha, double mu) {
    const double ra = radius_of(roots(coefficients(analysed(a), alpha, mu)));
    const double rb = radius_of(roots(coefficients(analysed(b), alpha, mu)));
    if (std::abs(ra - rb) <= kTieTolerance) return RateOrder::TIE;
    return ra < rb ? RateOrder::A_FASTER : RateOrder::B_FASTER;
}

std::string_view predicate_name(RegionPredicate p) {
    for (const auto& [pred, name] : kPredicateNames) {
        if (pred == p) return name;
    }
    return "unknown";
}

std::optional<RegionPredicate> parse_predicate(std::string_view name) {
    std::string norm(name);
    for (char& ch : norm) {
        ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    for (const auto& [pred, spelled] : kPredicateNames) {
        if (spelled == norm) return pred;
    }
    return std::nullopt;
}

std::size_t RegionGrid::shaded_count() const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), 1));
}

namespace {

bool beats(Method winner, Method loser, double alpha, double mu) {
    return rate_compare(winner, loser, alpha, mu) == RateOrder::A_FASTER &&
           stability(winner, alpha, mu).convergent;
}

bool evaluate(RegionPredicate p, double alpha, double mu) {
    switch (p) {
        case RegionPredicate::RUD_CONVERGES:
            return stability(Method::RUD, alpha, mu).convergent;
        case RegionPredicate::RUD_BEATS_NAG:
            return beats(Method::RUD, Method::NAG, alpha, mu);
        case RegionPredicate::MOM_BEATS_NAG:
            return beats(Method::MOM, Method::NAG, alpha, mu);
        case RegionPredicate::MOM_BEATS_RUD:
            return beats(Method::MOM, Method::RUD, alpha, mu);
    }
    return false;
}

std::vector<double> uniform_axis(double lo, double hi, std::size_t n) {
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) {
        axis[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    axis.back() = hi;
    return axis;
}

}  // namespace

RegionGrid rasterize_region(RegionPredicate predicate, std::size_t mu_resolution,
                            std::size_t alpha_resolution) {
    if (mu_resolution < 2 || alpha_resolution < 2) {
        throw std::invalid_argument("rasterize_region: resolutions must be at least 2");
    }
    RegionGrid grid;
    grid.mu_axis = uniform_axis(0.0, 1.0, mu_resolution);
    grid.alpha_axis = uniform_axis(kAlphaAxisMin, 1.0, alpha_resolution);
    grid.cells.resize(mu_resolution * alpha_resolution);
    for (std::size_t i = 0; i < mu_resolution; ++i) {
        for (std::size_t j = 0; j < alpha_resolution; ++j) {
            grid.cells[i * alpha_resolution + j] =
                evaluate(predicate, grid.alpha_axis[j], grid.mu_axis[i]) ? 1 : 0;
        }
    }
    return grid;
}

}  // namespace rud::spectral
