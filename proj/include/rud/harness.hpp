#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rud/autoencoder.hpp"
#include "rud/idx.hpp"
#include "rud/objectives.hpp"
#include "rud/optimizers.hpp"
#include "rud/spectral.hpp"

namespace rud::harness {

enum class RunStatus { converged, max_iters, diverged };

std::string_view status_name(RunStatus s);

/// Sidecar describing one command invocation. Written next to the CSV as
/// `<stem>.meta`, one `key=value` per line.
struct ExperimentRecord {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::string version;
    double wall_seconds = 0.0;
    RunStatus status = RunStatus::max_iters;
    std::string message;
};

/// Version string baked in at configure time (git describe).
std::string_view version();

/// Decimal, 17 significant digits.
std::string format_double(double value);

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path);
void write_meta(const ExperimentRecord& record, const std::filesystem::path& csv_path);

/// Gradient norm (max-abs) at or below which a run counts as converged.
inline constexpr double kConvergedGradient = 1e-8;

// region --------------------------------------------------------------------

/// CSV `mu,alpha,shaded`, one row per cell, mu-major.
std::string region_csv(const spectral::RegionGrid& grid);

ExperimentRecord cmd_region(spectral::RegionPredicate predicate, std::size_t resolution,
                            const std::filesystem::path& out);

// trajectory ----------------------------------------------------------------

struct TrajectoryConfig {
    Method method = Method::RUD;
    double alpha = 0.2;
    double mu = 0.9;
    ScheduleKind schedule = ScheduleKind::constant;
    std::vector<double> theta1{1.0};
    long iters = 100;
    std::filesystem::path out;
};

/// Objective for the trajectory command: J = |theta|^2 / 2.
Objective isotropic_quadratic(Eigen::Index dim);

/// Runs on J = |theta|^2 / 2 and writes `t,theta0..,v0..,J` plus
/// `closed_form_theta` when theta is scalar and the schedule constant.
/// A divergent run writes the records produced before the guard fired.
ExperimentRecord cmd_trajectory(const TrajectoryConfig& config);

// quadbench -----------------------------------------------------------------

struct QuadbenchRow {
    long t;
    Method method;
    double log_excess;  // log(J(theta_t) - J(theta*) + 1e-300)
    double theta0;
    double theta1;
};

struct QuadbenchResult {
    std::vector<QuadbenchRow> rows;  // ordered by (method, t)
    std::vector<std::pair<Method, RunStatus>> status;

    /// Last log_excess of `m`.
    double final_log_excess(Method m) const;
};

/// Seeded standard normal scaled by 1/sqrt(dim).
Vector quadbench_initial_point(Eigen::Index dim, std::uint64_t seed);

QuadbenchResult quadbench(const MatrixQuadratic& problem, const Vector& theta1,
                          const Schedule& schedule, long iters, const std::vector<Method>& methods);

std::string quadbench_csv(const QuadbenchResult& result);

struct QuadbenchConfig {
    Eigen::Index dim = 1000;
    std::uint64_t seed = 1;
    double alpha = 0.2;
    long iters = 300;
    double eig_low = 0.01;
    double eig_high = 1.0;
    std::vector<Method> methods{Method::GD, Method::MOM, Method::NAG, Method::RUD};
    std::filesystem::path out;
};

/// Shared (A, b), theta_1 and nesterov schedule for all methods. CSV header
/// `t,method,logJ,theta0,theta1`.
ExperimentRecord cmd_quadbench(const QuadbenchConfig& config);

// autoencoder ---------------------------------------------------------------

struct AutoencoderCurve {
    Method method;
    std::vector<double> train_bce;  // index e = mean BCE after epoch e (0 = initial)
    RunStatus status;
};

/// Trains every method from the same initial weights through the same batch
/// order with the nesterov momentum schedule indexed by minibatch step.
/// Divergence of one method does not stop the others.
std::vector<AutoencoderCurve> train_autoencoder(const ImageDataset& data,
                                                const MlpAutoencoder& model,
                                                std::size_t batch_size, double alpha, long epochs,
                                                const std::vector<Method>& methods,
                                                std::uint64_t seed);

std::string autoencoder_csv(const std::vector<AutoencoderCurve>& curves);

/// Seed of the built-in synthetic digit set, fixed so that the training seed
/// varies only initialisation and batch order.
inline constexpr std::uint64_t kSyntheticSeed = 7;

struct AutoencoderConfig {
    /// IDX image file; the synthetic digit set is used when empty.
    std::optional<std::filesystem::path> data;
    std::size_t synthetic_count = 2000;
    std::string layers = "784-64-16-64-784";
    std::size_t batch_size = 200;
    double alpha = 0.05;
    long epochs = 20;
    std::vector<Method> methods{Method::GD, Method::MOM, Method::NAG, Method::RUD};
    std::uint64_t seed = 1;
    std::filesystem::path out;
};

/// CSV header `epoch,method,train_bce`.
ExperimentRecord cmd_autoencoder(const AutoencoderConfig& config);

}  // namespace rud::harness
