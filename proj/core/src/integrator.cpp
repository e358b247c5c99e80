#include "qfilter/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qfilter {

namespace {

// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - bhat (embedded 4th-order error coefficients)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output coefficients (Hairer/Norsett/Wanner dopri5)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// max-norm error control: every matrix element is held to its own scale,
// which keeps small populations (and hence near-zero eigenvalues of rho)
// within the absolute tolerance
double scaled_error(const Eigen::MatrixXcd& err, const Eigen::MatrixXcd& y0,
                    const Eigen::MatrixXcd& y1, double atol, double rtol) {
    const auto* pe = err.data();
    const auto* p0 = y0.data();
    const auto* p1 = y1.data();
    const long n = err.size();
    double worst = 0.0;
    for (long i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(p0[i]), std::abs(p1[i]));
        worst = std::max(worst, std::abs(pe[i]) / sc);
    }
    return worst;
}

}  // namespace

IntegratorStats integrate_rk45(const MatrixRhs& rhs, double t0, double t1,
                               Eigen::MatrixXcd& y, const IntegratorOptions& opt,
                               std::span<const double> output_times,
                               const DenseObserver& observer) {
    if (!(t0 < t1)) throw std::invalid_argument("integrate_rk45: t0 must be < t1");

    IntegratorStats stats;
    const long rows = y.rows(), cols = y.cols();
    Eigen::MatrixXcd k1(rows, cols), k2(rows, cols), k3(rows, cols), k4(rows, cols),
        k5(rows, cols), k6(rows, cols), k7(rows, cols), ytmp(rows, cols),
        ynew(rows, cols), err(rows, cols);
    Eigen::MatrixXcd rc2(rows, cols), rc3(rows, cols), rc4(rows, cols), rc5(rows, cols),
        yout(rows, cols);

    std::size_t out_idx = 0;
    while (observer && out_idx < output_times.size() && output_times[out_idx] <= t0) {
        observer(static_cast<int>(out_idx), t0, y);
        ++out_idx;
    }

    double t = t0;
    rhs(t, y, k1);
    ++stats.rhs_evaluations;

    double h = opt.initial_step;
    if (h <= 0.0) {
        const double y_norm = std::max(y.norm(), 1e-30);
        const double f_norm = std::max(k1.norm(), 1e-30);
        h = std::min(0.1 * (t1 - t0), 0.01 * y_norm / f_norm + 1e-6);
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    const double h_floor = 1e-14 * std::max(std::abs(t0), std::abs(t1)) + 1e-30;

    while (t < t1) {
        if (stats.steps_accepted + stats.steps_rejected >= opt.max_steps)
            throw std::runtime_error("integrate_rk45: max step count exceeded at t = " +
                                     std::to_string(t));
        if (h < h_floor)
            throw std::runtime_error("integrate_rk45: step size underflow at t = " +
                                     std::to_string(t));
        if (t + h > t1) h = t1 - t;

        ytmp.noalias() = y + h * (a21 * k1);
        rhs(t + c2 * h, ytmp, k2);
        ytmp.noalias() = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp.noalias() = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp.noalias() = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp.noalias() = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew.noalias() = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);
        stats.rhs_evaluations += 6;

        err.noalias() = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err_norm = scaled_error(err, y, ynew, opt.abs_tol, opt.rel_tol);

        if (err_norm <= 1.0) {
            if (observer && out_idx < output_times.size() &&
                output_times[out_idx] <= t + h) {
                rc2.noalias() = ynew - y;                 // ydiff
                rc3.noalias() = h * k1 - rc2;             // bspl
                rc4.noalias() = rc2 - h * k7 - rc3;
                rc5.noalias() =
                    h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (out_idx < output_times.size() && output_times[out_idx] <= t + h) {
                    const double th = (output_times[out_idx] - t) / h;
                    const double th1 = 1.0 - th;
                    yout.noalias() =
                        y + th * (rc2 + th1 * (rc3 + th * (rc4 + th1 * rc5)));
                    observer(static_cast<int>(out_idx), output_times[out_idx], yout);
                    ++out_idx;
                }
            }
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            ++stats.steps_accepted;
            const double factor =
                (err_norm == 0.0) ? 5.0
                                  : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
            h *= factor;
            if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        } else {
            ++stats.steps_rejected;
            h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
        }
    }
    return stats;
}

}  // namespace qfilter
