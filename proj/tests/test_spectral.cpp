#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <tuple>

#include "rud/objectives.hpp"
#include "rud/spectral.hpp"

using namespace rud;
using namespace rud::spectral;

namespace {

void check_vieta(const CharacteristicCoefficients& k) {
    const RootPair r = roots(k);
    CHECK(std::abs(r.w_plus + r.w_minus + k.b) <= 1e-12);
    CHECK(std::abs(r.w_plus * r.w_minus - k.c) <= 1e-12);
}

// Direct iteration of theta_{t+1} = -b theta_t - c theta_{t-1}.
std::vector<double> recurrence(const CharacteristicCoefficients& k, double theta1, double theta2,
                               long T) {
    std::vector<double> out{theta1, theta2};
    while (static_cast<long>(out.size()) < T) {
        const std::size_t n = out.size();
        out.push_back(-k.b * out[n - 1] - k.c * out[n - 2]);
    }
    out.resize(static_cast<std::size_t>(T));
    return out;
}

}  // namespace

TEST_CASE("coefficients") {
    auto k = coefficients(Method::NAG, 0.2, 0.9);
    CHECK(k.b == doctest::Approx(-1.52).epsilon(1e-15));
    CHECK(k.c == doctest::Approx(0.72).epsilon(1e-15));
    k = coefficients(Method::MOM, 0.2, 0.0);
    CHECK(k.b == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(k.c == 0.0);
    k = coefficients(Method::RUD, 0.2, 0.9);
    CHECK(k.b == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(k.c == doctest::Approx(0.7).epsilon(1e-15));
    k = coefficients(Method::GD, 0.3, 0.77);
    CHECK(k.b == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(k.c == 0.0);
    CHECK_THROWS_AS(coefficients(Method::NAG_ORIGINAL, 0.2, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(coefficients(Method::NAG_TWO_STAGE, 0.2, 0.9), std::invalid_argument);
}

TEST_CASE("coefficients match the iterated scalar recurrence") {
    // theta_3 from one more step must equal -b theta_2 - c theta_1.
    const Objective f = scalar_quadratic();
    for (Method m : {Method::MOM, Method::NAG, Method::RUD}) {
        for (double alpha : {0.1, 0.45, 0.9}) {
            for (double mu : {0.0, 0.3, 0.95}) {
                const Trace tr = run(m, f, Vector::Constant(1, 1.3), make_schedule(ScheduleKind::constant, alpha, mu), 3);
                const auto k = coefficients(m, alpha, mu);
                const double t1 = tr.records[0].theta[0], t2 = tr.records[1].theta[0];
                CHECK(tr.records[2].theta[0] == doctest::Approx(-k.b * t2 - k.c * t1).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("roots") {
    SUBCASE("degenerate") {
        const RootPair r = roots({0.0, 0.0});
        CHECK(r.w_plus == Complex(0.0));
        CHECK(r.w_minus == Complex(0.0));
    }
    SUBCASE("NAG example") {
        const RootPair r = roots({-1.52, 0.72});
        CHECK(r.w_plus == std::conj(r.w_minus));
        CHECK(r.w_plus.imag() != 0.0);
        CHECK(std::abs(r.w_plus) == doctest::Approx(std::sqrt(0.72)).epsilon(1e-14));
        CHECK(std::abs(r.w_plus) == doctest::Approx(0.84853).epsilon(1e-5));
    }
    SUBCASE("RUD example") {
        const RootPair r = roots({-1.5, 0.7});
        CHECK(std::abs(r.w_minus) == doctest::Approx(0.83666).epsilon(1e-5));
        CHECK(std::abs(std::abs(r.w_minus) - std::sqrt(0.7)) <= 1e-12);
    }
    SUBCASE("real roots, both signs of b") {
        const auto sorted = [](const RootPair& r) {
            CHECK(r.w_plus.imag() == 0.0);
            CHECK(r.w_minus.imag() == 0.0);
            return std::pair{std::min(r.w_plus.real(), r.w_minus.real()), std::max(r.w_plus.real(), r.w_minus.real())};
        };
        const auto [lo, hi] = sorted(roots({-3.0, 2.0}));  // (w - 1)(w - 2)
        CHECK(lo == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(hi == doctest::Approx(2.0).epsilon(1e-15));
        const auto [nlo, nhi] = sorted(roots({3.0, 2.0}));  // (w + 1)(w + 2)
        CHECK(nlo == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(nhi == doctest::Approx(-1.0).epsilon(1e-15));
        // stable formula keeps the small root accurate
        const auto [tiny, big] = sorted(roots({-1e8, 1.0}));
        CHECK(tiny == doctest::Approx(1e-8).epsilon(1e-14));
        CHECK(big == doctest::Approx(1e8).epsilon(1e-14));
    }
    SUBCASE("Vieta and complex-pair magnitude, random coefficients") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int k = 0; k < 2000; ++k) {
            const CharacteristicCoefficients c{u(rng), u(rng)};
            check_vieta(c);
            if (c.b * c.b - 4 * c.c < 0) {
                CHECK(std::abs(assess(c).spectral_radius - std::sqrt(c.c)) <= 1e-12);
            }
        }
        check_vieta({-2.0, 1.0});
        check_vieta({1e-8, 1e-17});
    }
}

TEST_CASE("stability") {
    auto s = stability(Method::NAG, 0.2, 0.9);
    CHECK(s.spectral_radius == doctest::Approx(0.84853).epsilon(1e-5));
    CHECK(s.convergent);
    CHECK_FALSE(s.boundary);

    s = stability(Method::RUD, 0.9, 0.2);
    CHECK_FALSE(s.convergent);
    CHECK(s.spectral_radius > 1.0);

    s = stability(Method::MOM, 0.2, 0.9);
    CHECK(std::abs(s.spectral_radius - std::sqrt(0.9)) <= 1e-12);
    CHECK(s.convergent);

    s = stability(Method::MOM, 0.5, 1.0);  // c = 1
    CHECK(s.boundary);
    CHECK_FALSE(s.convergent);

    CHECK_THROWS_AS(stability(Method::NAG, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(stability(Method::NAG, 0.2, 1.5), std::invalid_argument);
}

TEST_CASE("assess cross-checks the algebraic conditions") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 5000; ++k) {
        const CharacteristicCoefficients c{u(rng), u(rng)};
        const auto r = assess(c);
        if (!r.boundary) {
            CHECK(r.convergent == (std::abs(c.b) < 1.0 + c.c && c.c < 1.0));
        }
    }
}

TEST_CASE("rud_region_closed_form") {
    CHECK(rud_region_closed_form(0.2, 0.9));
    CHECK_FALSE(rud_region_closed_form(0.8, 0.2));  // 1.2 = 1.2
    CHECK_FALSE(rud_region_closed_form(0.9, 0.2));
}

TEST_CASE("closed_form_trajectory") {
    SUBCASE("zero start") {
        for (Method m : {Method::MOM, Method::NAG, Method::RUD, Method::GD}) {
            for (double v : closed_form_trajectory(m, 0.3, 0.6, 0.0, 10)) CHECK(v == 0.0);
        }
    }
    SUBCASE("worked examples") {
        auto rud = closed_form_trajectory(Method::RUD, 0.2, 0.9, 1.0, 3);
        CHECK(rud[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(rud[1] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(rud[2] == doctest::Approx(0.5).epsilon(1e-13));
        auto nag = closed_form_trajectory(Method::NAG, 0.2, 0.9, 1.0, 3);
        CHECK(nag[1] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(nag[2] == doctest::Approx(0.496).epsilon(1e-13));
        CHECK(closed_form_trajectory(Method::NAG_ORIGINAL, 0.2, 0.9, 1.0, 3)[2] ==
              doctest::Approx(0.496).epsilon(1e-13));
    }
    SUBCASE("amplitudes reproduce the initial values") {
        for (const CharacteristicCoefficients k :
             {CharacteristicCoefficients{-1.52, 0.72}, {-1.5, 0.7}, {-0.5, -0.3}, {0.4, 0.01}}) {
            const RootPair r = roots(k);
            const auto amp = trajectory_coefficients(r, 1.7, -0.4);
            REQUIRE_FALSE(amp.repeated_root);
            CHECK(std::abs(amp.A * r.w_plus + amp.B * r.w_minus - 1.7) <= 1e-10);
            CHECK(std::abs(amp.A * r.w_plus * r.w_plus + amp.B * r.w_minus * r.w_minus + 0.4) <= 1e-10);
        }
    }
    SUBCASE("repeated root uses the confluent form") {
        const CharacteristicCoefficients k{-1.2, 0.36};  // double root 0.6
        const auto amp = trajectory_coefficients(roots(k), 1.0, 0.8);
        CHECK(amp.repeated_root);
        const auto closed = closed_form_trajectory(k, 0.2, 1.0, 40);
        const auto direct = recurrence(k, 1.0, 0.8, 40);
        for (std::size_t t = 0; t < closed.size(); ++t) CHECK(std::abs(closed[t] - direct[t]) < 1e-12);
    }
    SUBCASE("zero root (c = 0)") {
        // GD and RUD with mu = alpha both have c = 0.
        for (auto [m, alpha, mu] : {std::tuple{Method::GD, 0.3, 0.0}, std::tuple{Method::RUD, 0.4, 0.4},
                                    std::tuple{Method::NAG, 0.25, 0.0}}) {
            const auto closed = closed_form_trajectory(m, alpha, mu, 2.0, 30);
            const Trace it = run(m, scalar_quadratic(), Vector::Constant(1, 2.0),
                                 make_schedule(ScheduleKind::constant, alpha, mu), 30);
            for (std::size_t t = 0; t < closed.size(); ++t) {
                CHECK(std::abs(closed[t] - it.records[t].theta[0]) < 1e-12);
            }
        }
    }
    SUBCASE("nilpotent recurrence, b = c = 0") {
        const auto closed = closed_form_trajectory(Method::GD, 1.0, 0.0, 3.0, 5);
        CHECK(closed == std::vector<double>{3.0, 0.0, 0.0, 0.0, 0.0});
    }
    SUBCASE("matches the direct recurrence on random convergent cases") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> a(0.01, 1.0), m(0.0, 0.99);
        for (int n = 0; n < 300; ++n) {
            const double alpha = a(rng), mu = m(rng);
            for (Method meth : {Method::MOM, Method::NAG, Method::RUD}) {
                const auto k = coefficients(meth, alpha, mu);
                if (assess(k).spectral_radius >= 0.999) continue;
                const auto closed = closed_form_trajectory(meth, alpha, mu, 1.0, 100);
                const auto direct = recurrence(k, 1.0, 1.0 - alpha, 100);
                double worst = 0.0;
                for (std::size_t t = 0; t < 100; ++t) worst = std::max(worst, std::abs(closed[t] - direct[t]));
                CHECK(worst < 1e-8);
            }
        }
    }
}

TEST_CASE("rate_compare") {
    CHECK(rate_compare(Method::RUD, Method::NAG, 0.2, 0.9) == RateOrder::A_FASTER);
    CHECK(rate_compare(Method::MOM, Method::NAG, 0.2, 0.9) == RateOrder::B_FASTER);
    CHECK(rate_compare(Method::NAG, Method::NAG, 0.37, 0.41) == RateOrder::TIE);
    CHECK(rate_compare(Method::NAG_TWO_STAGE, Method::NAG, 0.37, 0.41) == RateOrder::TIE);
}

TEST_CASE("predicate names") {
    for (auto p : {RegionPredicate::RUD_CONVERGES, RegionPredicate::RUD_BEATS_NAG,
                   RegionPredicate::MOM_BEATS_NAG, RegionPredicate::MOM_BEATS_RUD}) {
        CHECK(parse_predicate(predicate_name(p)) == p);
    }
    CHECK(parse_predicate("rud-beats-nag") == RegionPredicate::RUD_BEATS_NAG);
    CHECK_FALSE(parse_predicate("NAG_CONVERGES").has_value());
}

TEST_CASE("rasterize_region") {
    SUBCASE("axes") {
        const auto g = rasterize_region(RegionPredicate::RUD_CONVERGES, 200, 200);
        CHECK(g.mu_axis.front() == 0.0);
        CHECK(g.mu_axis.back() == 1.0);
        CHECK(g.alpha_axis.front() == kAlphaAxisMin);
        CHECK(g.alpha_axis.back() == 1.0);
        CHECK(g.cells.size() == 40000);
        for (std::size_t i = 1; i < 200; ++i) {
            CHECK(g.mu_axis[i] > g.mu_axis[i - 1]);
            CHECK(g.alpha_axis[i] > g.alpha_axis[i - 1]);
        }
    }
    SUBCASE("RUD_CONVERGES cells") {
        const auto g = rasterize_region(RegionPredicate::RUD_CONVERGES, 11, 11);
        // mu_axis[9] = 0.9, alpha index 2 ~ 0.204
        CHECK(g.at(9, 2));
        CHECK(stability(Method::RUD, 0.2, 0.9).convergent);
        CHECK_FALSE(stability(Method::RUD, 0.9, 0.2).convergent);
        CHECK_FALSE(g.at(2, 9));  // mu = 0.2, alpha ~ 0.9
    }
    SUBCASE("MOM_BEATS_NAG is off at high momentum") {
        CHECK_FALSE(rate_compare(Method::MOM, Method::NAG, 0.2, 0.9) == RateOrder::A_FASTER);
        const auto g = rasterize_region(RegionPredicate::MOM_BEATS_NAG, 11, 11);
        CHECK_FALSE(g.at(9, 2));
    }
    SUBCASE("comparison predicates require the winner to converge") {
        const auto g = rasterize_region(RegionPredicate::RUD_BEATS_NAG, 60, 60);
        for (std::size_t i = 0; i < 60; ++i) {
            for (std::size_t j = 0; j < 60; ++j) {
                if (g.at(i, j)) CHECK(stability(Method::RUD, g.alpha_axis[j], g.mu_axis[i]).convergent);
            }
        }
    }
    SUBCASE("RUD beats NAG at high momentum") {
        const auto g = rasterize_region(RegionPredicate::RUD_BEATS_NAG, 101, 101);
        std::size_t high = 0, shaded_high = 0;
        for (std::size_t i = 90; i < 100; ++i) {
            for (std::size_t j = 0; j < 100; ++j) {
                ++high;
                shaded_high += g.at(i, j) ? 1 : 0;
            }
        }
        CHECK(shaded_high > high / 2);
    }
    CHECK_THROWS_AS(rasterize_region(RegionPredicate::RUD_CONVERGES, 1, 10), std::invalid_argument);
}
