#include "rud/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#ifndef RUD_VERSION
#define RUD_VERSION "unknown"
#endif

namespace rud::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string join_methods(const std::vector<Method>& methods) {
    std::string s;
    for (Method m : methods) {
        if (!s.empty()) s += ',';
        s += method_name(m);
    }
    return s;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

RunStatus final_status(const Objective& f, const Trace& trace) {
    const Vector g = f.gradient(trace.records.back().theta);
    return g.lpNorm<Eigen::Infinity>() <= kConvergedGradient ? RunStatus::converged
                                                             : RunStatus::max_iters;
}

}  // namespace

std::string_view status_name(RunStatus s) {
    switch (s) {
        case RunStatus::converged:
            return "converged";
        case RunStatus::max_iters:
            return "max-iters";
        case RunStatus::diverged:
            return "diverged";
    }
    return "unknown";
}

std::string_view version() { return RUD_VERSION; }

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path meta = csv_path;
    meta.replace_extension(".meta");
    return meta;
}

void write_meta(const ExperimentRecord& record, const std::filesystem::path& csv_path) {
    std::ostringstream out;
    out << "command=" << record.command << '\n';
    out << "version=" << record.version << '\n';
    for (const auto& [key, value] : record.config) out << key << '=' << one_line(value) << '\n';
    out << "status=" << status_name(record.status) << '\n';
    out << "wall_seconds=" << format_double(record.wall_seconds) << '\n';
    if (!record.message.empty()) out << "message=" << one_line(record.message) << '\n';
    write_text(meta_path_for(csv_path), out.str());
}

// region ---------------------------------------------------------------------

std::string region_csv(const spectral::RegionGrid& grid) {
    std::string csv = "mu,alpha,shaded\n";
    for (std::size_t i = 0; i < grid.mu_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.alpha_axis.size(); ++j) {
            csv += format_double(grid.mu_axis[i]);
            csv += ',';
            csv += format_double(grid.alpha_axis[j]);
            csv += grid.at(i, j) ? ",1\n" : ",0\n";
        }
    }
    return csv;
}

ExperimentRecord cmd_region(spectral::RegionPredicate predicate, std::size_t resolution,
                            const std::filesystem::path& out) {
    const auto start = Clock::now();
    const auto grid = spectral::rasterize_region(predicate, resolution, resolution);
    write_text(out, region_csv(grid));

    ExperimentRecord record;
    record.command = "region";
    record.version = std::string(version());
    record.config = {{"predicate", std::string(spectral::predicate_name(predicate))},
                     {"resolution", std::to_string(resolution)},
                     {"out", out.string()}};
    record.status = RunStatus::converged;
    record.message = std::to_string(grid.shaded_count()) + " of " +
                     std::to_string(grid.cells.size()) + " cells shaded";
    record.wall_seconds = seconds_since(start);
    write_meta(record, out);
    return record;
}

// trajectory -----------------------------------------------------------------

Objective isotropic_quadratic(Eigen::Index dim) {
    if (dim == 1) return scalar_quadratic();
    return Objective(
        dim, [](const Vector& theta) { return 0.5 * theta.squaredNorm(); },
        [](const Vector& theta) { return theta; });
}

ExperimentRecord cmd_trajectory(const TrajectoryConfig& config) {
    const auto start = Clock::now();
    if (config.theta1.empty()) throw std::invalid_argument("trajectory: theta1 must be nonempty");
    const Eigen::Index dim = static_cast<Eigen::Index>(config.theta1.size());
    const Vector theta1 = Eigen::Map<const Vector>(config.theta1.data(), dim);
    const Schedule schedule = make_schedule(config.schedule, config.alpha, config.mu);
    const Objective f = isotropic_quadratic(dim);

    ExperimentRecord record;
    record.command = "trajectory";
    record.version = std::string(version());

    Trace trace;
    try {
        trace = run(config.method, f, theta1, schedule, config.iters);
        record.status = final_status(f, trace);
    } catch (const DivergenceError& e) {
        trace = e.partial_trace();
        record.status = RunStatus::diverged;
        record.message = e.what();
    }

    const bool closed_form = dim == 1 && config.schedule == ScheduleKind::constant;
    std::vector<double> reference;
    if (closed_form) {
        reference = spectral::closed_form_trajectory(config.method, config.alpha, config.mu,
                                                     config.theta1[0], config.iters);
    }

    std::string csv = "t";
    for (Eigen::Index i = 0; i < dim; ++i) csv += ",theta" + std::to_string(i);
    for (Eigen::Index i = 0; i < dim; ++i) csv += ",v" + std::to_string(i);
    csv += ",J";
    if (closed_form) csv += ",closed_form_theta";
    csv += '\n';
    for (const TraceRecord& r : trace.records) {
        csv += std::to_string(r.t);
        for (Eigen::Index i = 0; i < dim; ++i) csv += ',' + format_double(r.theta[i]);
        for (Eigen::Index i = 0; i < dim; ++i) csv += ',' + format_double(r.velocity[i]);
        csv += ',' + format_double(r.objective_value);
        if (closed_form) csv += ',' + format_double(reference[static_cast<std::size_t>(r.t - 1)]);
        csv += '\n';
    }
    write_text(config.out, csv);

    std::string theta_text;
    for (double v : config.theta1) {
        if (!theta_text.empty()) theta_text += ',';
        theta_text += format_double(v);
    }
    record.config = {{"method", std::string(method_name(config.method))},
                     {"alpha", format_double(config.alpha)},
                     {"mu", format_double(config.mu)},
                     {"schedule", config.schedule == ScheduleKind::constant ? "constant" : "nesterov"},
                     {"theta1", theta_text},
                     {"iters", std::to_string(config.iters)},
                     {"records", std::to_string(trace.records.size())},
                     {"out", config.out.string()}};
    record.wall_seconds = seconds_since(start);
    write_meta(record, config.out);
    return record;
}

// quadbench ------------------------------------------------------------------

double QuadbenchResult::final_log_excess(Method m) const {
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (it->method == m) return it->log_excess;
    }
    throw std::out_of_range("quadbench: no rows for method " + std::string(method_name(m)));
}

Vector quadbench_initial_point(Eigen::Index dim, std::uint64_t seed) {
    // Separate stream from the one that drew (A, b).
    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector theta(dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) theta[i] = scale * normal(rng);
    return theta;
}

QuadbenchResult quadbench(const MatrixQuadratic& problem, const Vector& theta1,
                          const Schedule& schedule, long iters, const std::vector<Method>& methods) {
    if (methods.empty()) throw std::invalid_argument("quadbench: at least one method required");
    const Objective f = as_objective(problem);
    const Vector optimum = problem.minimizer();

    QuadbenchResult result;
    for (Method m : methods) {
        Trace trace;
        RunStatus status;
        try {
            trace = run(m, f, theta1, schedule, iters);
            status = final_status(f, trace);
        } catch (const DivergenceError& e) {
            trace = e.partial_trace();
            status = RunStatus::diverged;
        }
        result.status.emplace_back(m, status);
        for (const TraceRecord& r : trace.records) {
            // J(theta) - J(theta*) = (theta - theta*)' A (theta - theta*) / 2
            const Vector err = r.theta - optimum;
            const double excess = 0.5 * err.dot(problem.A * err);
            const double second = r.theta.size() > 1 ? r.theta[1] : 0.0;
            result.rows.push_back({r.t, m, std::log(std::max(excess, 0.0) + 1e-300), r.theta[0], second});
        }
    }
    return result;
}

std::string quadbench_csv(const QuadbenchResult& result) {
    std::string csv = "t,method,logJ,theta0,theta1\n";
    for (const QuadbenchRow& r : result.rows) {
        csv += std::to_string(r.t);
        csv += ',';
        csv += method_name(r.method);
        csv += ',' + format_double(r.log_excess) + ',' + format_double(r.theta0) + ',' +
               format_double(r.theta1) + '\n';
    }
    return csv;
}

ExperimentRecord cmd_quadbench(const QuadbenchConfig& config) {
    const auto start = Clock::now();
    if (config.iters < 1) throw std::invalid_argument("quadbench: iters must be at least 1");
    const MatrixQuadratic problem =
        make_random_spd(config.dim, config.seed, config.eig_low, config.eig_high);
    const Vector theta1 = quadbench_initial_point(config.dim, config.seed);
    const Schedule schedule = make_schedule(ScheduleKind::nesterov, config.alpha);
    const QuadbenchResult result = quadbench(problem, theta1, schedule, config.iters, config.methods);
    write_text(config.out, quadbench_csv(result));

    ExperimentRecord record;
    record.command = "quadbench";
    record.version = std::string(version());
    record.config = {{"dim", std::to_string(config.dim)},
                     {"seed", std::to_string(config.seed)},
                     {"alpha", format_double(config.alpha)},
                     {"schedule", "nesterov"},
                     {"iters", std::to_string(config.iters)},
                     {"eig_low", format_double(config.eig_low)},
                     {"eig_high", format_double(config.eig_high)},
                     {"methods", join_methods(config.methods)},
                     {"out", config.out.string()}};
    bool all_converged = true;
    record.status = RunStatus::max_iters;
    for (const auto& [m, status] : result.status) {
        record.config.emplace_back("status." + std::string(method_name(m)),
                                   std::string(status_name(status)));
        if (status == RunStatus::diverged) record.status = RunStatus::diverged;
        all_converged = all_converged && status == RunStatus::converged;
    }
    if (all_converged) record.status = RunStatus::converged;
    record.wall_seconds = seconds_since(start);
    write_meta(record, config.out);
    return record;
}

// autoencoder ----------------------------------------------------------------

std::vector<AutoencoderCurve> train_autoencoder(const ImageDataset& data,
                                                const MlpAutoencoder& model,
                                                std::size_t batch_size, double alpha, long epochs,
                                                const std::vector<Method>& methods,
                                                std::uint64_t seed) {
    if (epochs < 1) throw std::invalid_argument("autoencoder: epochs must be at least 1");
    if (methods.empty()) throw std::invalid_argument("autoencoder: at least one method required");
    if (data.pixels() != model.layer_sizes().front()) {
        throw std::invalid_argument("autoencoder: layer spec does not match image size " +
                                    std::to_string(data.pixels()));
    }
    const Schedule schedule = make_schedule(ScheduleKind::nesterov, alpha);
    const Vector theta0 = model.initial_parameters(seed);
    const double initial = model.loss(theta0, data.images);

    struct Lane {
        AutoencoderCurve curve;
        OptimizerState state;
        bool alive = true;
    };
    std::vector<Lane> lanes;
    for (Method m : methods) {
        lanes.push_back({AutoencoderCurve{m, {initial}, RunStatus::max_iters},
                         OptimizerState::initial(theta0), true});
    }

    for (long epoch = 1; epoch <= epochs; ++epoch) {
        const auto order = minibatches(data, batch_size,
                                       seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(epoch));
        std::vector<Objective> batches;
        batches.reserve(order.size());
        for (const auto& idx : order) batches.push_back(as_objective(model, gather_batch(data, idx)));

        for (Lane& lane : lanes) {
            if (!lane.alive) continue;
            try {
                for (const Objective& f : batches) {
                    lane.state = step(lane.curve.method, lane.state, f, schedule);
                }
                if (!lane.state.theta.allFinite()) throw NumericalError("non-finite parameters");
                const double value = model.loss(lane.state.theta, data.images);
                if (!std::isfinite(value) || std::abs(value) > kDivergenceBound) {
                    throw NumericalError("non-finite training loss");
                }
                lane.curve.train_bce.push_back(value);
            } catch (const NumericalError&) {
                lane.alive = false;
                lane.curve.status = RunStatus::diverged;
            }
        }
    }

    std::vector<AutoencoderCurve> curves;
    for (Lane& lane : lanes) curves.push_back(std::move(lane.curve));
    return curves;
}

std::string autoencoder_csv(const std::vector<AutoencoderCurve>& curves) {
    std::string csv = "epoch,method,train_bce\n";
    for (const AutoencoderCurve& c : curves) {
        for (std::size_t e = 0; e < c.train_bce.size(); ++e) {
            csv += std::to_string(e);
            csv += ',';
            csv += method_name(c.method);
            csv += ',' + format_double(c.train_bce[e]) + '\n';
        }
    }
    return csv;
}

ExperimentRecord cmd_autoencoder(const AutoencoderConfig& config) {
    const auto start = Clock::now();
    if (config.epochs < 1) throw std::invalid_argument("autoencoder: epochs must be at least 1");
    const ImageDataset data = config.data ? load_idx_images(*config.data)
                                          : synthetic_digits(config.synthetic_count, kSyntheticSeed);
    const MlpAutoencoder model = MlpAutoencoder::from_spec(config.layers);
    const auto curves = train_autoencoder(data, model, config.batch_size, config.alpha,
                                          config.epochs, config.methods, config.seed);
    write_text(config.out, autoencoder_csv(curves));

    ExperimentRecord record;
    record.command = "autoencoder";
    record.version = std::string(version());
    record.config = {{"data", config.data ? config.data->string() : "synthetic"},
                     {"images", std::to_string(data.count())},
                     {"layers", config.layers},
                     {"batch_size", std::to_string(config.batch_size)},
                     {"alpha", format_double(config.alpha)},
                     {"schedule", "nesterov"},
                     {"epochs", std::to_string(config.epochs)},
                     {"methods", join_methods(config.methods)},
                     {"seed", std::to_string(config.seed)},
                     {"out", config.out.string()}};
    record.status = RunStatus::max_iters;
    for (const AutoencoderCurve& c : curves) {
        record.config.emplace_back("status." + std::string(method_name(c.method)),
                                   std::string(status_name(c.status)));
        if (c.status == RunStatus::diverged) record.status = RunStatus::diverged;
    }
    record.wall_seconds = seconds_since(start);
    write_meta(record, config.out);
    return record;
}

}  // namespace rud::harness
