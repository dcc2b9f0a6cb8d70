#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rud/optimizers.hpp"

// Closed-form convergence analysis of the first-order methods on the scalar
// quadratic J(theta) = theta^2 / 2, where every method with constant
// (alpha, mu) reduces to the recurrence
//
//     theta_{t+1} + b theta_t + c theta_{t-1} = 0
//
// and converges iff both roots of w^2 + b w + c = 0 lie inside the unit disc.

namespace rud::spectral {

using Complex = std::complex<double>;

struct CharacteristicCoefficients {
    double b;
    double c;
};

struct RootPair {
    Complex w_plus;
    Complex w_minus;
};

struct StabilityResult {
    double spectral_radius;
    bool convergent;
    /// Radius within kBoundaryTolerance of 1; the verdict there is not decidable.
    bool boundary;
};

/// A complex amplitude pair with theta_t = Re(A w+^t + B w-^t), or, for a
/// repeated root w, theta_t = Re((A + B t) w^t).
struct TrajectoryCoefficients {
    Complex A;
    Complex B;
    bool repeated_root;
};

inline constexpr double kBoundaryTolerance = 1e-9;
inline constexpr double kRepeatedRootTolerance = 1e-12;
inline constexpr double kTieTolerance = 1e-12;

/// (b, c) for MOM, NAG and RUD. GD is MOM with mu = 0 (mu is ignored).
/// NAG_ORIGINAL and NAG_TWO_STAGE are rejected; alias them to NAG.
CharacteristicCoefficients coefficients(Method method, double alpha, double mu);

/// Roots of w^2 + b w + c. Real roots are computed with the cancellation-free
/// form of the quadratic formula; w_plus is the (-b + sqrt) branch.
RootPair roots(const CharacteristicCoefficients& coeffs);

/// Stability verdict from the roots, cross-checked against the algebraic
/// conditions |b| < 1 + c and c < 1. Throws ConsistencyError if the two
/// disagree away from the boundary band.
StabilityResult assess(const CharacteristicCoefficients& coeffs);
StabilityResult stability(Method method, double alpha, double mu);

/// Closed-form RUD convergence region: 1 + mu > 1.5 alpha.
bool rud_region_closed_form(double alpha, double mu);

/// Solves for the amplitudes given theta_1 and theta_2.
TrajectoryCoefficients trajectory_coefficients(const RootPair& roots, double theta1, double theta2);

/// theta_1 .. theta_T from the closed-form solution, seeded with
/// theta_2 = (1 - alpha) theta_1 (the first step of every method from v_1 = 0).
std::vector<double> closed_form_trajectory(Method method, double alpha, double mu, double theta1,
                                           long T);
/// Same, for explicitly supplied recurrence coefficients.
std::vector<double> closed_form_trajectory(const CharacteristicCoefficients& coeffs, double alpha,
                                           double theta1, long T);

enum class RateOrder { A_FASTER, B_FASTER, TIE };

RateOrder rate_compare(Method a, Method b, double alpha, double mu);

enum class RegionPredicate { RUD_CONVERGES, RUD_BEATS_NAG, MOM_BEATS_NAG, MOM_BEATS_RUD };

std::string_view predicate_name(RegionPredicate p);
std::optional<RegionPredicate> parse_predicate(std::string_view name);

struct RegionGrid {
    std::vector<double> mu_axis;
    std::vector<double> alpha_axis;
    /// Row-major: cells[i * alpha_axis.size() + j] is the verdict at
    /// (mu_axis[i], alpha_axis[j]).
    std::vector<unsigned char> cells;

    bool at(std::size_t mu_index, std::size_t alpha_index) const {
        return cells[mu_index * alpha_axis.size() + alpha_index] != 0;
    }
    std::size_t shaded_count() const;
};

/// Lower end of the learning-rate axis of a rasterized region.
inline constexpr double kAlphaAxisMin = 0.005;

/// Uniform axes mu in [0, 1], alpha in [kAlphaAxisMin, 1]. Both resolutions
/// must be at least 2. Comparison predicates shade a cell only if the faster
/// method converges there.
RegionGrid rasterize_region(RegionPredicate predicate, std::size_t mu_resolution,
                            std::size_t alpha_resolution);

/// Coefficient source, replaceable so the verification suites can be run
/// against a perturbed model.
using CoefficientFn = std::function<CharacteristicCoefficients(Method, double, double)>;

}  // namespace rud::spectral
