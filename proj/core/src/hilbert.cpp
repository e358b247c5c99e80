#include "qfilter/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfilter {

HilbertSpace::HilbertSpace(int nh, int nv) : n_fock_h(nh), n_fock_v(nv) {
    if (nh < 1 || nv < 1)
        throw std::invalid_argument("HilbertSpace: Fock truncations must be >= 1");
}

Matrix annihilation(int n_fock) {
    if (n_fock < 1) throw std::invalid_argument("annihilation: n_fock must be >= 1");
    Matrix a = Matrix::Zero(n_fock, n_fock);
    for (int k = 0; k + 1 < n_fock; ++k)
        a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    return a;
}

ExcitonRotation exciton_rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    ExcitonRotation r;
    r.v << c, s;
    r.h << -s, c;
    return r;
}

std::pair<double, double> qd_detunings(double delta_x, double delta_y, double theta) {
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double delta_h_qd = delta_x * s2 + delta_y * c2;
    const double delta_v_qd = delta_x * c2 + delta_y * s2;
    return {delta_h_qd, delta_v_qd};
}

namespace {

SparseMatrix sparse_of(const Matrix& m) {
    return m.sparseView(1.0, 1e-300);
}

// |i><j| on a 3-level system
Matrix level_op(int i, int j) {
    Matrix m = Matrix::Zero(3, 3);
    m(i, j) = 1.0;
    return m;
}

}  // namespace

OperatorSet build_operators(const HilbertSpace& space, double theta) {
    const int nh = space.n_fock_h, nv = space.n_fock_v;
    const Matrix id_h = Matrix::Identity(nh, nh);
    const Matrix id_v = Matrix::Identity(nv, nv);
    const Matrix id_ex = Matrix::Identity(3, 3);

    auto embed = [&](const Matrix& ex, const Matrix& mh, const Matrix& mv) {
        Matrix tmp = Eigen::kroneckerProduct(ex, mh).eval();
        return Matrix(Eigen::kroneckerProduct(tmp, mv));
    };

    OperatorSet ops;
    ops.space = space;
    ops.theta = theta;
    ops.sigma_h = sparse_of(embed(level_op(level_g, level_h), id_h, id_v));
    ops.sigma_v = sparse_of(embed(level_op(level_g, level_v), id_h, id_v));
    ops.a_h = sparse_of(embed(id_ex, annihilation(nh), id_v));
    ops.a_v = sparse_of(embed(id_ex, id_h, annihilation(nv)));
    ops.pi_ex = sparse_of(embed(level_op(level_h, level_h) + level_op(level_v, level_v),
                                id_h, id_v));
    return ops;
}

void StateDiagnostics::absorb(const StateDiagnostics& other) {
    hermiticity_defect = std::max(hermiticity_defect, other.hermiticity_defect);
    trace_defect = std::max(trace_defect, other.trace_defect);
    min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
}

bool StateDiagnostics::within(double herm_tol, double trace_tol, double eig_floor) const {
    return hermiticity_defect <= herm_tol && trace_defect <= trace_tol &&
           min_eigenvalue >= eig_floor;
}

StateDiagnostics validate_state(const Matrix& rho, int dim) {
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("validate_state: matrix is not dim x dim");
    StateDiagnostics d;
    d.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_defect = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

QuantumState ground_state(const HilbertSpace& space) {
    QuantumState st;
    st.rho = Matrix::Zero(space.dim(), space.dim());
    st.rho(space.index(level_g, 0, 0), space.index(level_g, 0, 0)) = 1.0;
    return st;
}

}  // namespace qfilter
