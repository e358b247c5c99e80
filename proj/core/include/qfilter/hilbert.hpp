#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <utility>

namespace qfilter {

using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<std::complex<double>>;

// Truncated composite space: 3-level exciton (|G>,|H>,|V>) tensor
// H-mode Fock space tensor V-mode Fock space, in that order.
struct HilbertSpace {
    int n_fock_h = 1;
    int n_fock_v = 1;

    HilbertSpace() = default;
    HilbertSpace(int nh, int nv);

    int dim() const { return 3 * n_fock_h * n_fock_v; }

    // basis index of |exciton level e> |n_H> |n_V>
    int index(int e, int nh, int nv) const { return (e * n_fock_h + nh) * n_fock_v + nv; }
};

// exciton level labels
enum ExcitonLevel : int { level_g = 0, level_h = 1, level_v = 2 };

// Bosonic lowering operator on an n_fock-level Fock space:
// a[k, k+1] = sqrt(k+1).
Matrix annihilation(int n_fock);

// Coefficients of the cavity-aligned exciton states in the |X>,|Y> basis:
//   |V> =  cos(theta)|X> + sin(theta)|Y>
//   |H> = -sin(theta)|X> + cos(theta)|Y>
struct ExcitonRotation {
    Eigen::Vector2d v;  // (<X|V>, <Y|V>)
    Eigen::Vector2d h;  // (<X|H>, <Y|H>)
};
ExcitonRotation exciton_rotation(double theta);

// Rotated QD detunings:
//   delta_H^QD = delta_X sin^2(theta) + delta_Y cos^2(theta)
//   delta_V^QD = delta_X cos^2(theta) + delta_Y sin^2(theta)
std::pair<double, double> qd_detunings(double delta_x, double delta_y, double theta);

// All operators of the model embedded in the composite space.
struct OperatorSet {
    HilbertSpace space;
    double theta = 0.0;

    SparseMatrix sigma_h;  // |G><H| (x) 1 (x) 1
    SparseMatrix sigma_v;  // |G><V| (x) 1 (x) 1
    SparseMatrix a_h;      // 1 (x) a (x) 1
    SparseMatrix a_v;      // 1 (x) 1 (x) a
    SparseMatrix pi_ex;    // (|H><H| + |V><V|) (x) 1 (x) 1

    int dim() const { return space.dim(); }
};

OperatorSet build_operators(const HilbertSpace& space, double theta);

struct QuantumState {
    Matrix rho;

    int dim() const { return static_cast<int>(rho.rows()); }
};

// Defects returned by validate_state; thresholds are the caller's call.
struct StateDiagnostics {
    double hermiticity_defect = 0.0;  // max|rho - rho^dag|
    double trace_defect = 0.0;        // |tr(rho) - 1|
    double min_eigenvalue = 0.0;

    void absorb(const StateDiagnostics& other);
    bool within(double herm_tol, double trace_tol, double eig_floor) const;
};

// Throws std::invalid_argument if rho is not dim x dim.
StateDiagnostics validate_state(const Matrix& rho, int dim);

// |exciton ground> (x) |0,0>
QuantumState ground_state(const HilbertSpace& space);

}  // namespace qfilter
