#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

namespace qfilter {

// Adaptive Dormand-Prince 5(4) pair on complex-matrix states with the
// standard order-4 continuous extension for dense output.

struct IntegratorOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double initial_step = 0.0;   // 0 = auto
    double max_step = 0.0;       // 0 = unrestricted
    long max_steps = 20'000'000;
};

struct IntegratorStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
};

using MatrixRhs =
    std::function<void(double t, const Eigen::MatrixXcd& y, Eigen::MatrixXcd& dydt)>;

// Called for every requested output time (strictly increasing, inside
// [t0, t1]); `idx` is the position within `times`.
using DenseObserver = std::function<void(int idx, double t, const Eigen::MatrixXcd& y)>;

// Integrates y' = rhs(t, y) from t0 to t1 in place. Throws
// std::runtime_error on step-size underflow, naming the offending time.
IntegratorStats integrate_rk45(const MatrixRhs& rhs, double t0, double t1,
                               Eigen::MatrixXcd& y, const IntegratorOptions& opt,
                               std::span<const double> output_times = {},
                               const DenseObserver& observer = nullptr);

}  // namespace qfilter
