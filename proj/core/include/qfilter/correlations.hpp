#pragma once

#include "qfilter/dynamics.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qfilter {

// Detected H-polarized field b(t) = beta(t) + c a_H with
// beta(t) = sqrt(eta_in) <b_in>(t) and c = sqrt(eta_top kappa/hbar).
// The mode-mismatched (1 - eta_in) fraction is rejected by the collection
// fiber by default; include_uncoupled_background adds it back as a constant
// coherent amplitude at the detector only.
class OutputField {
public:
    OutputField(const LindbladGenerator& gen, const DriveSpec& drive,
                bool include_uncoupled_background = false);

    std::complex<double> beta(double t) const;  // detected c-number amplitude
    double coupling() const { return c_; }

    // Tr[b^dag(t) b(t) X]
    std::complex<double> number_trace(double t, const Matrix& x) const;
    // flux(t) = Re Tr[b^dag b rho]
    double flux(double t, const Matrix& rho) const;
    // out = b(t) X b^dag(t), optionally scaled
    void sandwich(double t, Eigen::Ref<const Matrix> x, Eigen::Ref<Matrix> out,
                  Matrix& work, double scale = 1.0) const;

private:
    const LindbladGenerator* gen_;
    DriveSpec drive_;
    DeviceParams params_;
    SparseMatrix a_, a_dag_;
    double c_ = 0.0;
    bool background_ = false;
};

struct OutputFlux {
    std::vector<double> times;
    std::vector<double> flux;  // photons/ps
    double n_out = 0.0;        // integrated photons per pulse
};

// Detected flux from recorded trajectory expectations (Eq. of motion of
// |beta|^2 + 2 c Re(beta* <a_H>) + c^2 <a_H^dag a_H>).
OutputFlux output_flux(const Trajectory& traj, const DriveSpec& d, const DeviceParams& p,
                       bool include_uncoupled_background = false);

// CW steady-state reflectivity: detected flux over coupled incident flux.
double cw_reflectivity(const LindbladGenerator& gen, const QuantumState& ss,
                       const DriveSpec& cw);

struct CorrelationOptions {
    int n_t1 = 48;               // outer two-time grid points
    double dt_out = 0.0;         // fine output step (0 = auto)
    double tail_scale = 14.0;    // emission-tail length in slow lifetimes
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double tau_window = 0.0;     // integrate |t2-t1| <= window only (0 = full)
    int n_fock_h = 0;            // 0 = heuristic from drive strength
    int n_fock_v = 2;
    int validate_every = 8;
    bool include_uncoupled_background = false;
};

struct CorrelationResult {
    std::vector<double> t_grid;          // outer grid
    Eigen::MatrixXd g2;                  // G2(t_i, t_j), photons^2/ps^2
    double g2_bar = 0.0;
    std::optional<double> g3_zero;
    double n_out = 0.0;
    StateDiagnostics validity;
};

// Time-integrated g2 via the quantum regression theorem on a uniform
// two-time grid (trapezoidal double integral); also returns the grid.
CorrelationResult g2_pulsed(const DeviceParams& p, const DriveSpec& d,
                            const LaserDetunings& det,
                            const CorrelationOptions& opts = {});

// Integrated correlations in a single pass: auxiliary sources
//   S1' = L S1 + b rho b^dag,   S2' = L S2 + b S1 b^dag
// give  int int G2 = 2 int Tr[N S1] dt  and  int^3 G3 = 6 int Tr[N S2] dt.
struct IntegratedCorrelations {
    double n_out = 0.0;
    double g2_bar = 0.0;
    double g3_zero = 0.0;  // only when requested
    OutputFlux flux;
    StateDiagnostics validity;
    IntegratorStats stats;
};

IntegratedCorrelations integrated_correlations(const DeviceParams& p, const DriveSpec& d,
                                               const LaserDetunings& det,
                                               const CorrelationOptions& opts = {},
                                               bool with_g3 = false);

// Time-integrated third-order correlation at zero delay.
double g3_zero_pulsed(const DeviceParams& p, const DriveSpec& d,
                      const LaserDetunings& det, const CorrelationOptions& opts = {});

// Propagate the sandwiched matrix left * rho(t1) * right from t1 and record
// Tr[observable(t2) chi(t2)] on the t2 grid (t2 >= t1; entries at t1 evaluate
// the sandwich directly, so tau = 0 reduces to the equal-time moment).
std::vector<std::complex<double>> quantum_regression(
    const QuantumState& rho_t1, double t1, std::span<const double> t2_grid,
    const DeviceParams& p, const DriveSpec& d, const LaserDetunings& det,
    const OperatorSet& ops, const Matrix& left, const Matrix& right,
    const std::function<std::complex<double>(double, const Matrix&)>& observable,
    double abs_tol = 1e-10, double rel_tol = 1e-8);

}  // namespace qfilter
