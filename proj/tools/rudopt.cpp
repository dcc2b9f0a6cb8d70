// rudopt: command-line front end for the optimizer experiments.
//
//   rudopt region      --predicate RUD_CONVERGES --resolution 200 --out region.csv
//   rudopt trajectory  --method rud --alpha 0.2 --mu 0.9 --theta1 1 --iters 100 --out traj.csv
//   rudopt quadbench   --dim 1000 --seed 1 --alpha 0.2 --iters 300 --out quad.csv
//   rudopt autoencoder --epochs 20 --batch-size 200 --alpha 0.05 --out ae.csv
//   rudopt selfcheck
//
// Exit status: 0 on success, 1 on bad input or I/O failure, 2 when a run
// diverged (the partial CSV and .meta are still written), 3 when selfcheck
// reports a failing suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rud/harness.hpp"
#include "rud/selfcheck.hpp"

namespace {

using namespace rud;

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const std::string& name : names) {
        const auto m = parse_method(name);
        if (!m) throw CLI::ValidationError("--method", "unknown method '" + name + "'");
        methods.push_back(*m);
    }
    return methods;
}

int report(const harness::ExperimentRecord& record, const std::string& out) {
    std::cerr << record.command << ": wrote " << out << " (status "
              << harness::status_name(record.status) << ")\n";
    if (!record.message.empty()) std::cerr << "  " << record.message << '\n';
    return record.status == harness::RunStatus::diverged ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-order optimizer experiments: GD, momentum, Nesterov and RUD"};
    app.require_subcommand(1);

    // region
    auto* region = app.add_subcommand("region", "Rasterize a convergence region on the scalar quadratic");
    std::string predicate = "RUD_CONVERGES";
    std::size_t resolution = 200;
    std::string region_out;
    region->add_option("--predicate", predicate,
                       "RUD_CONVERGES | RUD_BEATS_NAG | MOM_BEATS_NAG | MOM_BEATS_RUD")
        ->capture_default_str();
    region->add_option("--resolution", resolution, "Grid points per axis (>= 2)")->capture_default_str();
    region->add_option("--out", region_out, "Output CSV")->required();

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "Iterate one method on J = |theta|^2 / 2");
    harness::TrajectoryConfig tc;
    std::string traj_method = "rud", traj_schedule = "constant";
    std::string traj_out;
    traj->add_option("--method", traj_method, "gd|mom|nag|nag-original|nag-two-stage|rud")->capture_default_str();
    traj->add_option("--alpha", tc.alpha, "Learning rate")->capture_default_str();
    traj->add_option("--mu", tc.mu, "Momentum (constant schedule)")->capture_default_str();
    traj->add_option("--schedule", traj_schedule, "constant | nesterov")->capture_default_str();
    traj->add_option("--theta1", tc.theta1, "Initial point, comma separated")->delimiter(',')->capture_default_str();
    traj->add_option("--iters", tc.iters, "Number of records T")->capture_default_str();
    traj->add_option("--out", traj_out, "Output CSV")->required();

    // quadbench
    auto* quad = app.add_subcommand("quadbench", "All methods on a seeded random quadratic");
    harness::QuadbenchConfig qc;
    std::vector<std::string> quad_methods{"gd", "mom", "nag", "rud"};
    std::string quad_out;
    quad->add_option("--dim", qc.dim, "Dimension")->capture_default_str();
    quad->add_option("--seed", qc.seed, "Seed for A, b and theta_1")->capture_default_str();
    quad->add_option("--alpha", qc.alpha, "Learning rate")->capture_default_str();
    quad->add_option("--iters", qc.iters, "Number of records T")->capture_default_str();
    quad->add_option("--eig-low", qc.eig_low, "Smallest eigenvalue of A")->capture_default_str();
    quad->add_option("--eig-high", qc.eig_high, "Largest eigenvalue of A")->capture_default_str();
    quad->add_option("--method", quad_methods, "Methods, comma separated")->delimiter(',')->capture_default_str();
    quad->add_option("--out", quad_out, "Output CSV")->required();

    // autoencoder
    auto* ae = app.add_subcommand("autoencoder", "Train an MLP autoencoder with each method");
    harness::AutoencoderConfig ac;
    std::string data_path;
    std::vector<std::string> ae_methods{"gd", "mom", "nag", "rud"};
    std::string ae_out;
    ae->add_option("--data", data_path, "IDX image file (default: built-in synthetic digits)");
    ae->add_option("--images", ac.synthetic_count, "Synthetic image count when --data is absent")->capture_default_str();
    ae->add_option("--layers", ac.layers, "Layer sizes, e.g. 784-64-16-64-784")->capture_default_str();
    ae->add_option("--batch-size", ac.batch_size, "Minibatch size")->capture_default_str();
    ae->add_option("--alpha", ac.alpha, "Learning rate")->capture_default_str();
    ae->add_option("--epochs", ac.epochs, "Epochs (>= 1)")->capture_default_str();
    ae->add_option("--method", ae_methods, "Methods, comma separated")->delimiter(',')->capture_default_str();
    ae->add_option("--seed", ac.seed, "Seed for initialisation and batch order")->capture_default_str();
    ae->add_option("--out", ae_out, "Output CSV")->required();

    auto* self = app.add_subcommand("selfcheck", "Run the built-in invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*region) {
            const auto p = spectral::parse_predicate(predicate);
            if (!p) throw CLI::ValidationError("--predicate", "unknown predicate '" + predicate + "'");
            if (resolution < 2) throw CLI::ValidationError("--resolution", "must be at least 2");
            return report(harness::cmd_region(*p, resolution, region_out), region_out);
        }
        if (*traj) {
            tc.method = parse_methods({traj_method}).front();
            if (traj_schedule == "constant") {
                tc.schedule = ScheduleKind::constant;
            } else if (traj_schedule == "nesterov") {
                tc.schedule = ScheduleKind::nesterov;
            } else {
                throw CLI::ValidationError("--schedule", "expected constant or nesterov");
            }
            if (tc.iters < 1) throw CLI::ValidationError("--iters", "must be at least 1");
            tc.out = traj_out;
            return report(harness::cmd_trajectory(tc), traj_out);
        }
        if (*quad) {
            qc.methods = parse_methods(quad_methods);
            if (qc.iters < 1) throw CLI::ValidationError("--iters", "must be at least 1");
            qc.out = quad_out;
            return report(harness::cmd_quadbench(qc), quad_out);
        }
        if (*ae) {
            ac.methods = parse_methods(ae_methods);
            if (ac.epochs < 1) throw CLI::ValidationError("--epochs", "must be at least 1");
            if (!data_path.empty()) ac.data = data_path;
            ac.out = ae_out;
            return report(harness::cmd_autoencoder(ac), ae_out);
        }
        if (*self) {
            const auto results = run_selfcheck();
            bool ok = true;
            for (const SuiteResult& r : results) {
                std::printf("%-32s %s  %zu checks, %zu failed\n", r.name.c_str(),
                            r.passed() ? "PASS" : "FAIL", r.checked, r.failed);
                if (!r.passed() && !r.first_failure.empty()) {
                    std::printf("    first failure: %s\n", r.first_failure.c_str());
                }
                ok = ok && r.passed();
            }
            return ok ? 0 : 3;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
