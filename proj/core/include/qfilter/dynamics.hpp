#pragma once

#include "qfilter/device.hpp"
#include "qfilter/drive.hpp"
#include "qfilter/hilbert.hpp"
#include "qfilter/integrator.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace qfilter {

// Fixed output grid plus the adaptive-step tolerances used to reach it.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_output = 101;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;

    std::vector<double> output_times() const;
    void validate() const;

    // Window covering the pulse support and the slow emission tail:
    // [t0 - 4 tau, t0 + 4 tau + tail], tail sized so the residual
    // intracavity population is below 1e-6 of its peak (the slow scale is
    // the Purcell-limited exciton decay, not the bare cavity lifetime).
    static TimeGrid for_pulse(const DriveSpec& d, const DeviceParams& p,
                              double dt_out = 0.0, double tail_scale = 14.0);
};

// Precomputed sparse pieces of the Lindblad right-hand side
//   d rho/dt = A(t) rho + rho A(t)^dag + sum_k J_k rho J_k^dag
// with A(t) = -(i/hbar) H0 - (1/2) sum_k J_k^dag J_k + Omega*(t) a_H - Omega(t) a_H^dag.
// Immutable after construction; safe to share across threads (apply takes
// caller-owned workspace).
class LindbladGenerator {
public:
    LindbladGenerator(const DeviceParams& p, const LaserDetunings& det,
                      const OperatorSet& ops);

    struct Workspace {
        Matrix w1, w2;
        void resize(int rows, int cols);
    };

    void apply(std::complex<double> omega, Eigen::Ref<const Matrix> rho,
               Eigen::Ref<Matrix> out, Workspace& ws) const;

    // Dense H(t) in ueV for a given Rabi amplitude (1/ps).
    Matrix hamiltonian(std::complex<double> omega) const;

    // Sparse Liouvillian superoperator for constant Omega, acting on the
    // row-major vectorization of rho.
    SparseMatrix liouvillian(std::complex<double> omega) const;

    std::complex<double> expect_a_h(const Matrix& rho) const;
    double expect_n_h(const Matrix& rho) const;
    double expect_n_v(const Matrix& rho) const;
    double expect_pi_ex(const Matrix& rho) const;

    // complex traces against an arbitrary (not necessarily Hermitian) matrix
    std::complex<double> trace_a_h(const Matrix& x) const;      // tr(a_H x)
    std::complex<double> trace_a_h_dag(const Matrix& x) const;  // tr(a_H^dag x)
    std::complex<double> trace_n_h(const Matrix& x) const;      // tr(a_H^dag a_H x)

    const OperatorSet& ops() const { return ops_; }
    const DeviceParams& params() const { return params_; }
    const LaserDetunings& detunings() const { return det_; }
    int dim() const { return ops_.dim(); }

private:
    DeviceParams params_;
    LaserDetunings det_;
    OperatorSet ops_;
    SparseMatrix a0_;                  // constant part of A(t)
    SparseMatrix a_h_, a_h_dag_;
    SparseMatrix h_static_;            // H0 (ueV), kept for hamiltonian()
    std::vector<SparseMatrix> jumps_;
    std::vector<SparseMatrix> jumps_dag_;
    Eigen::VectorXd n_h_diag_, n_v_diag_, pi_diag_;
};

// Spec-level operations (thin wrappers building a generator; use
// LindbladGenerator directly in hot loops).
Matrix hamiltonian(double t, const DeviceParams& p, const DriveSpec& d,
                   const OperatorSet& ops, const LaserDetunings& det);
Matrix lindblad_rhs(const Matrix& rho, double t, const DeviceParams& p,
                    const OperatorSet& ops, const DriveSpec& d,
                    const LaserDetunings& det);

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;              // empty unless requested
    std::vector<std::complex<double>> a_h;   // <a_H>(t)
    std::vector<double> n_h;                 // <a_H^dag a_H>(t)
    std::vector<double> n_v;
    std::vector<double> pi_ex;
    StateDiagnostics worst;
    IntegratorStats stats;
};

struct EvolveOptions {
    bool store_states = true;
    int validate_every = 4;  // eigenvalue check every k-th output point
    int store_stride = 1;    // keep only every k-th state (others left empty)
};

Trajectory evolve(const QuantumState& rho0, const TimeGrid& grid, const DeviceParams& p,
                  const DriveSpec& d, const LaserDetunings& det, const OperatorSet& ops,
                  const EvolveOptions& opts = {});

struct SteadyStateResult {
    QuantumState state;
    double residual = 0.0;  // ||L rho||_F / ||rho||_F
};

// Fixed point of the Lindbladian for a constant drive, by direct solve of
// the vectorized Liouvillian with the trace condition substituted in.
SteadyStateResult steady_state(const DeviceParams& p, const DriveSpec& cw,
                               const LaserDetunings& det, const OperatorSet& ops);

struct TruncationResult {
    int n_fock_h = 1;
    int n_fock_v = 1;
    double observable = 0.0;
};

// Smallest truncations such that incrementing either changes the observable
// by less than rel_tol (relative). Throws std::runtime_error when the cap is
// exceeded.
TruncationResult converge_truncation(
    const std::function<double(const HilbertSpace&)>& experiment, int start_h,
    int start_v, double rel_tol = 1e-3, int cap = 40);

// Analytic intracavity-photon estimate used to pick pulse truncations
// (validated against converge_truncation in the test suite).
HilbertSpace truncation_for_pulse(const DeviceParams& p, const DriveSpec& d,
                                  int n_fock_v = 2, int cap = 40);

}  // namespace qfilter
