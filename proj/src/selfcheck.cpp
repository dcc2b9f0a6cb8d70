#include "rud/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rud/autoencoder.hpp"
#include "rud/objectives.hpp"

namespace rud {

namespace {

using spectral::CharacteristicCoefficients;

class Suite {
public:
    explicit Suite(std::string name) { result_.name = std::move(name); }

    void check(bool ok, const std::string& what) {
        ++result_.checked;
        if (!ok) {
            if (result_.failed == 0) result_.first_failure = what;
            ++result_.failed;
        }
    }

    SuiteResult done() { return std::move(result_); }

private:
    SuiteResult result_;
};

std::string where(Method m, double alpha, double mu) {
    std::ostringstream s;
    s << method_name(m) << " alpha=" << alpha << " mu=" << mu;
    return s.str();
}

double max_abs_diff(const Trace& a, const Trace& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.records.size(), b.records.size()); ++i) {
        worst = std::max(worst, (a.records[i].theta - b.records[i].theta).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

Vector random_point(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
    return v;
}

Vector theta_of(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

SuiteResult first_step_universality() {
    Suite suite("first-step-universality");
    const MatrixQuadratic q = make_random_spd(8, 11);
    const std::vector<std::pair<Objective, Vector>> cases{
        {scalar_quadratic(), theta_of({1.0})},
        {scalar_quadratic(), theta_of({-3.25})},
        {as_objective(q), random_point(8, 21)},
    };
    for (const auto& [f, theta1] : cases) {
        for (int i = 1; i <= 9; ++i) {
            for (int j = 0; j <= 10; ++j) {
                const double alpha = 0.1 * i, mu = 0.1 * j;
                const Schedule s = make_schedule(ScheduleKind::constant, alpha, mu);
                const Vector expected = theta1 - alpha * f.gradient(theta1);
                for (Method m : all_methods()) {
                    const OptimizerState next = step(m, OptimizerState::initial(theta1), f, s);
                    const double err = (next.theta - expected).lpNorm<Eigen::Infinity>();
                    suite.check(err <= 1e-15 * std::max(1.0, theta1.lpNorm<Eigen::Infinity>()),
                                where(m, alpha, mu));
                }
            }
        }
    }
    return suite.done();
}

SuiteResult two_stage_identity() {
    Suite suite("two-stage-identity");
    const Objective f = scalar_quadratic();
    const Objective g = as_objective(make_random_spd(12, 5));
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double alpha = 0.05 + 0.09 * i, mu = 0.05 + 0.1 * j;
            const Schedule s = make_schedule(ScheduleKind::constant, alpha, mu);
            const double d1 = max_abs_diff(run(Method::NAG, f, theta_of({1.0}), s, 200),
                                           run(Method::NAG_TWO_STAGE, f, theta_of({1.0}), s, 200));
            suite.check(d1 <= 1e-12, where(Method::NAG_TWO_STAGE, alpha, mu));
            const Vector start = Vector::Ones(12);
            const double d2 = max_abs_diff(run(Method::NAG, g, start, s, 50),
                                           run(Method::NAG_TWO_STAGE, g, start, s, 50));
            suite.check(d2 <= 1e-12, where(Method::NAG_TWO_STAGE, alpha, mu) + " (matrix)");
        }
    }
    return suite.done();
}

SuiteResult nag_form_equivalence() {
    Suite suite("nag-form-equivalence");
    const Objective f = scalar_quadratic();
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double alpha = 0.05 + 0.09 * i, mu = 0.05 + 0.1 * j;
            const Schedule s = make_schedule(ScheduleKind::constant, alpha, mu);
            const double d = max_abs_diff(run(Method::NAG, f, theta_of({1.0}), s, 200),
                                          run(Method::NAG_ORIGINAL, f, theta_of({1.0}), s, 200));
            suite.check(d <= 1e-10, where(Method::NAG_ORIGINAL, alpha, mu));
        }
    }
    return suite.done();
}

SuiteResult closed_form_vs_iterated(const spectral::CoefficientFn& coefficients) {
    Suite suite("closed-form-vs-iterated");
    const Objective f = scalar_quadratic();
    constexpr long T = 100;
    for (Method m : {Method::MOM, Method::NAG, Method::RUD}) {
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const double alpha = (i + 1) / 51.0, mu = j / 49.0;
                const CharacteristicCoefficients k = coefficients(m, alpha, mu);
                if (spectral::assess(k).spectral_radius >= 0.999) continue;
                const auto closed = spectral::closed_form_trajectory(k, alpha, 1.0, T);
                const Trace iter =
                    run(m, f, theta_of({1.0}), make_schedule(ScheduleKind::constant, alpha, mu), T);
                double worst = 0.0;
                for (long t = 0; t < T; ++t) {
                    worst = std::max(worst, std::abs(closed[static_cast<std::size_t>(t)] -
                                                     iter.records[static_cast<std::size_t>(t)].theta[0]));
                }
                suite.check(worst < 1e-8, where(m, alpha, mu));
            }
        }
    }
    return suite.done();
}

SuiteResult universal_convergence(const spectral::CoefficientFn& coefficients) {
    Suite suite("nag-mom-universal-convergence");
    for (Method m : {Method::NAG, Method::MOM}) {
        for (int i = 1; i <= 99; ++i) {
            for (int j = 1; j <= 99; ++j) {
                const double alpha = i / 100.0, mu = j / 100.0;
                suite.check(spectral::assess(coefficients(m, alpha, mu)).spectral_radius < 1.0,
                            where(m, alpha, mu));
            }
        }
    }
    return suite.done();
}

// Closed-form convergence regions from |b| < 1 + c, c < 1 solved for each
// method's (b, c). MOM: mu < 1 and alpha < 2 + 2 mu. NAG: mu (1 - alpha) < 1
// and alpha (1 + 2 mu) < 2 + 2 mu. RUD: 1 + mu > 1.5 alpha.
bool closed_form_region(Method m, double alpha, double mu) {
    switch (m) {
        case Method::MOM:
            return mu < 1.0 && alpha < 2.0 + 2.0 * mu;
        case Method::NAG:
            return mu * (1.0 - alpha) < 1.0 && alpha * (1.0 + 2.0 * mu) < 2.0 + 2.0 * mu;
        case Method::RUD:
            return spectral::rud_region_closed_form(alpha, mu);
        default:
            return false;
    }
}

SuiteResult region_exactness(const spectral::CoefficientFn& coefficients) {
    Suite suite("region-exactness");
    constexpr int n = 200;
    for (Method m : {Method::RUD, Method::NAG, Method::MOM}) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double mu = i / double(n - 1);
                const double alpha = j == n - 1 ? 1.0 : spectral::kAlphaAxisMin +
                                                            (1.0 - spectral::kAlphaAxisMin) * j / double(n - 1);
                if (m == Method::RUD && std::abs(1.0 + mu - 1.5 * alpha) / std::sqrt(3.25) <= 1e-6) {
                    continue;
                }
                const auto verdict = spectral::assess(coefficients(m, alpha, mu));
                if (verdict.boundary) continue;
                suite.check(verdict.convergent == closed_form_region(m, alpha, mu), where(m, alpha, mu));
            }
        }
    }
    return suite.done();
}

SuiteResult gradient_checks() {
    Suite suite("gradient-checks");

    const MatrixQuadratic q = make_random_spd(30, 3);
    const Objective fq = as_objective(q);
    const Vector theta = random_point(30, 4);
    const Vector g = fq.gradient(theta);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Vector e = Vector::Zero(theta.size());
        const double h = 1e-6 * std::max(1.0, std::abs(theta[i]));
        e[i] = h;
        const double fd = (fq.value(theta + e) - fq.value(theta - e)) / (2.0 * h);
        suite.check(relative_error(g[i], fd) < 1e-6, "quadratic coordinate " + std::to_string(i));
    }

    const MlpAutoencoder model({16, 8, 4, 8, 16});
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd batch(16, 6);
    for (Eigen::Index k = 0; k < batch.size(); ++k) batch.data()[k] = unit(rng);
    const Objective fm = as_objective(model, batch);
    const Vector w = model.initial_parameters(9);
    const Vector gm = fm.gradient(w);
    std::uniform_int_distribution<Eigen::Index> pick(0, w.size() - 1);
    for (int k = 0; k < 20; ++k) {
        const Eigen::Index i = pick(rng);
        Vector e = Vector::Zero(w.size());
        const double h = 1e-6 * std::max(1.0, std::abs(w[i]));
        e[i] = h;
        const double fd = (fm.value(w + e) - fm.value(w - e)) / (2.0 * h);
        suite.check(relative_error(gm[i], fd, 1e-6) < 1e-4, "autoencoder coordinate " + std::to_string(i));
    }
    return suite.done();
}

}  // namespace

std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& options) {
    return {
        first_step_universality(),
        two_stage_identity(),
        nag_form_equivalence(),
        closed_form_vs_iterated(options.coefficients),
        universal_convergence(options.coefficients),
        region_exactness(options.coefficients),
        gradient_checks(),
    };
}

}  // namespace rud
