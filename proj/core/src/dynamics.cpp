#include "qfilter/dynamics.hpp"

#include "qfilter/units.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfilter {

using cd = std::complex<double>;

std::vector<double> TimeGrid::output_times() const {
    validate();
    std::vector<double> ts(static_cast<std::size_t>(n_output));
    const double h = (t_end - t_start) / static_cast<double>(n_output - 1);
    for (int i = 0; i < n_output; ++i) ts[static_cast<std::size_t>(i)] = t_start + h * i;
    ts.back() = t_end;
    return ts;
}

void TimeGrid::validate() const {
    if (!(t_start < t_end)) throw std::invalid_argument("TimeGrid: t_start must be < t_end");
    if (n_output < 2) throw std::invalid_argument("TimeGrid: n_output must be >= 2");
}

TimeGrid TimeGrid::for_pulse(const DriveSpec& d, const DeviceParams& p, double dt_out,
                             double tail_scale) {
    if (d.kind != DriveSpec::Kind::gaussian_pulse)
        throw std::invalid_argument("TimeGrid::for_pulse: drive is not a pulse");
    const double kappa_r = rate_of(p.kappa);
    // slowest emission scale: Purcell-limited exciton decay, capped by kappa
    double gamma_slow = kappa_r;
    const double purcell = rate_of(4.0 * p.g * p.g / p.kappa + p.gamma_sp);
    if (purcell > 1e-3 * kappa_r) gamma_slow = std::min(purcell, kappa_r);
    const double tail = std::max(8.0 / kappa_r, tail_scale / gamma_slow);

    TimeGrid g;
    g.t_start = d.t0 - 4.0 * d.tau;
    g.t_end = d.t0 + 4.0 * d.tau + tail;
    if (dt_out <= 0.0) dt_out = std::min(2.0, d.tau / 64.0);
    g.n_output = static_cast<int>(std::ceil((g.t_end - g.t_start) / dt_out)) + 1;
    return g;
}

void LindbladGenerator::Workspace::resize(int rows, int cols) {
    if (w1.rows() != rows || w1.cols() != cols) {
        w1.resize(rows, cols);
        w2.resize(rows, cols);
    }
}

LindbladGenerator::LindbladGenerator(const DeviceParams& p, const LaserDetunings& det,
                                     const OperatorSet& ops)
    : params_(p), det_(det), ops_(ops) {
    p.validate();
    const int dim = ops.dim();
    const cd im(0.0, 1.0);

    const auto [dh_qd, dv_qd] = qd_detunings(det.x, det.y, ops.theta);
    const double mix = -p.delta_fss * std::cos(ops.theta) * std::sin(ops.theta);

    const SparseMatrix n_h = SparseMatrix(ops_.a_h.adjoint()) * ops_.a_h;
    const SparseMatrix n_v = SparseMatrix(ops_.a_v.adjoint()) * ops_.a_v;
    const SparseMatrix sig_h_dag = ops_.sigma_h.adjoint();
    const SparseMatrix sig_v_dag = ops_.sigma_v.adjoint();

    SparseMatrix h0 = SparseMatrix(dh_qd * (sig_h_dag * ops_.sigma_h)) +
                      SparseMatrix(dv_qd * (sig_v_dag * ops_.sigma_v)) +
                      SparseMatrix(mix * (SparseMatrix(sig_h_dag * ops_.sigma_v) +
                                          SparseMatrix(sig_v_dag * ops_.sigma_h))) +
                      SparseMatrix(det.cav_h * n_h) + SparseMatrix(det.cav_v * n_v);
    h0 += SparseMatrix(
        (-im * p.g) *
        (SparseMatrix(ops_.a_v * sig_v_dag) + SparseMatrix(ops_.a_h * sig_h_dag) -
         SparseMatrix(SparseMatrix(ops_.a_v.adjoint()) * ops_.sigma_v) -
         SparseMatrix(SparseMatrix(ops_.a_h.adjoint()) * ops_.sigma_h)));
    h0.makeCompressed();
    h_static_ = h0;

    // A0 = -(i/hbar) H0 - (1/2) sum (gamma_k/hbar) X_k^dag X_k
    SparseMatrix damp = SparseMatrix((p.gamma_sp + p.gamma_star) * ops_.pi_ex) +
                        SparseMatrix(p.kappa * (SparseMatrix(n_h + n_v)));
    a0_ = SparseMatrix((-im / hbar_uev_ps) * h0) -
          SparseMatrix((0.5 / hbar_uev_ps) * damp);
    a0_.makeCompressed();

    a_h_ = ops_.a_h;
    a_h_dag_ = ops_.a_h.adjoint();
    a_h_.makeCompressed();
    a_h_dag_.makeCompressed();

    auto add_jump = [&](double rate_uev, const SparseMatrix& x) {
        if (rate_uev <= 0.0) return;
        SparseMatrix j = std::sqrt(rate_of(rate_uev)) * x;
        j.makeCompressed();
        SparseMatrix jd = j.adjoint();
        jd.makeCompressed();
        jumps_.push_back(std::move(j));
        jumps_dag_.push_back(std::move(jd));
    };
    add_jump(p.gamma_sp, ops_.sigma_h);
    add_jump(p.gamma_sp, ops_.sigma_v);
    add_jump(p.gamma_star, ops_.pi_ex);
    add_jump(p.kappa, ops_.a_h);
    add_jump(p.kappa, ops_.a_v);

    // diagonal observables straight from the basis layout
    n_h_diag_.resize(dim);
    n_v_diag_.resize(dim);
    pi_diag_.resize(dim);
    const auto& sp = ops_.space;
    for (int e = 0; e < 3; ++e)
        for (int nh = 0; nh < sp.n_fock_h; ++nh)
            for (int nv = 0; nv < sp.n_fock_v; ++nv) {
                const int i = sp.index(e, nh, nv);
                n_h_diag_(i) = nh;
                n_v_diag_(i) = nv;
                pi_diag_(i) = (e == level_g) ? 0.0 : 1.0;
            }
}

void LindbladGenerator::apply(cd omega, Eigen::Ref<const Matrix> rho,
                              Eigen::Ref<Matrix> out, Workspace& ws) const {
    const int n = dim();
    ws.resize(n, static_cast<int>(rho.cols()));
    // ws.w1 = A(t) rho
    ws.w1.noalias() = a0_ * rho;
    if (omega != cd(0.0, 0.0)) {
        ws.w1.noalias() += std::conj(omega) * (a_h_ * rho);
        ws.w1.noalias() -= omega * (a_h_dag_ * rho);
    }
    out = ws.w1;
    out.noalias() += ws.w1.adjoint();
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        ws.w2.noalias() = jumps_[k] * rho;
        out.noalias() += ws.w2 * jumps_dag_[k];
    }
}

Matrix LindbladGenerator::hamiltonian(cd omega) const {
    Matrix h = Matrix(h_static_);
    const cd im(0.0, 1.0);
    h += im * hbar_uev_ps * (std::conj(omega) * Matrix(a_h_) - omega * Matrix(a_h_dag_));
    return h;
}

SparseMatrix LindbladGenerator::liouvillian(cd omega) const {
    const int n = dim();
    SparseMatrix a = a0_;
    if (omega != cd(0.0, 0.0))
        a = a0_ + SparseMatrix(std::conj(omega) * a_h_) - SparseMatrix(omega * a_h_dag_);
    SparseMatrix id(n, n);
    id.setIdentity();
    // row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho)
    SparseMatrix lv;
    lv = Eigen::kroneckerProduct(a, id);
    SparseMatrix term;
    term = Eigen::kroneckerProduct(id, SparseMatrix(a.conjugate()));
    lv += term;
    for (const auto& j : jumps_) {
        term = Eigen::kroneckerProduct(j, SparseMatrix(j.conjugate()));
        lv += term;
    }
    lv.makeCompressed();
    return lv;
}

namespace {

cd sparse_trace_product(const SparseMatrix& m, const Matrix& rho) {
    // tr(M rho) = sum_{ij} M(i,j) rho(j,i)
    cd sum = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            sum += it.value() * rho(it.col(), it.row());
    return sum;
}

}  // namespace

cd LindbladGenerator::expect_a_h(const Matrix& rho) const {
    return sparse_trace_product(ops_.a_h, rho);
}

double LindbladGenerator::expect_n_h(const Matrix& rho) const {
    double sum = 0.0;
    for (int i = 0; i < dim(); ++i) sum += n_h_diag_(i) * rho(i, i).real();
    return sum;
}

double LindbladGenerator::expect_n_v(const Matrix& rho) const {
    double sum = 0.0;
    for (int i = 0; i < dim(); ++i) sum += n_v_diag_(i) * rho(i, i).real();
    return sum;
}

double LindbladGenerator::expect_pi_ex(const Matrix& rho) const {
    double sum = 0.0;
    for (int i = 0; i < dim(); ++i) sum += pi_diag_(i) * rho(i, i).real();
    return sum;
}

cd LindbladGenerator::trace_a_h(const Matrix& x) const {
    return sparse_trace_product(ops_.a_h, x);
}

cd LindbladGenerator::trace_a_h_dag(const Matrix& x) const {
    // tr(a^dag x) = sum over nonzeros a(i,j): conj(a(i,j)) x(i,j)
    cd sum = 0.0;
    for (int k = 0; k < ops_.a_h.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(ops_.a_h, k); it; ++it)
            sum += std::conj(it.value()) * x(it.row(), it.col());
    return sum;
}

cd LindbladGenerator::trace_n_h(const Matrix& x) const {
    cd sum = 0.0;
    for (int i = 0; i < dim(); ++i) sum += n_h_diag_(i) * x(i, i);
    return sum;
}

Matrix hamiltonian(double t, const DeviceParams& p, const DriveSpec& d,
                   const OperatorSet& ops, const LaserDetunings& det) {
    LindbladGenerator gen(p, det, ops);
    return gen.hamiltonian(rabi_amplitude(d, p, t));
}

Matrix lindblad_rhs(const Matrix& rho, double t, const DeviceParams& p,
                    const OperatorSet& ops, const DriveSpec& d,
                    const LaserDetunings& det) {
    if (rho.rows() != ops.dim() || rho.cols() != ops.dim())
        throw std::invalid_argument("lindblad_rhs: state dimension mismatch");
    LindbladGenerator gen(p, det, ops);
    LindbladGenerator::Workspace ws;
    Matrix out(rho.rows(), rho.cols());
    gen.apply(rabi_amplitude(d, p, t), rho, out, ws);
    return out;
}

Trajectory evolve(const QuantumState& rho0, const TimeGrid& grid, const DeviceParams& p,
                  const DriveSpec& d, const LaserDetunings& det, const OperatorSet& ops,
                  const EvolveOptions& opts) {
    grid.validate();
    const int dim = ops.dim();
    if (rho0.dim() != dim) throw std::invalid_argument("evolve: state dimension mismatch");

    LindbladGenerator gen(p, det, ops);
    LindbladGenerator::Workspace ws;
    auto rhs = [&](double t, const Matrix& y, Matrix& dydt) {
        gen.apply(rabi_amplitude(d, p, t), y, dydt, ws);
    };

    const std::vector<double> times = grid.output_times();
    Trajectory traj;
    traj.times = times;
    traj.a_h.resize(times.size());
    traj.n_h.resize(times.size());
    traj.n_v.resize(times.size());
    traj.pi_ex.resize(times.size());
    if (opts.store_states) traj.states.resize(times.size());
    traj.worst.min_eigenvalue = 1.0;

    auto observer = [&](int idx, double, const Matrix& y) {
        traj.a_h[static_cast<std::size_t>(idx)] = gen.expect_a_h(y);
        traj.n_h[static_cast<std::size_t>(idx)] = gen.expect_n_h(y);
        traj.n_v[static_cast<std::size_t>(idx)] = gen.expect_n_v(y);
        traj.pi_ex[static_cast<std::size_t>(idx)] = gen.expect_pi_ex(y);
        if (opts.store_states && idx % std::max(1, opts.store_stride) == 0)
            traj.states[static_cast<std::size_t>(idx)] = y;

        StateDiagnostics diag;
        diag.hermiticity_defect = (y - y.adjoint()).cwiseAbs().maxCoeff();
        diag.trace_defect = std::abs(y.trace() - cd(1.0, 0.0));
        diag.min_eigenvalue = 1.0;  // only lowers worst when actually computed
        const int every = std::max(1, opts.validate_every);
        if (idx % every == 0 || idx + 1 == static_cast<int>(times.size())) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.adjoint()),
                                                     Eigen::EigenvaluesOnly);
            diag.min_eigenvalue = es.eigenvalues().minCoeff();
        }
        traj.worst.absorb(diag);
    };

    Matrix y = rho0.rho;
    IntegratorOptions iopt;
    iopt.abs_tol = grid.abs_tol;
    iopt.rel_tol = grid.rel_tol;
    traj.stats = integrate_rk45(rhs, grid.t_start, grid.t_end, y, iopt, traj.times,
                                observer);
    return traj;
}

SteadyStateResult steady_state(const DeviceParams& p, const DriveSpec& cw,
                               const LaserDetunings& det, const OperatorSet& ops) {
    if (cw.kind != DriveSpec::Kind::cw)
        throw std::invalid_argument("steady_state: drive must be CW");
    LindbladGenerator gen(p, det, ops);
    const int dim = ops.dim();
    const int n2 = dim * dim;
    const cd omega = rabi_amplitude(cw, p, 0.0);

    SparseMatrix lv = gen.liouvillian(omega);

    // replace the row of element (0,0) by the trace condition
    std::vector<Eigen::Triplet<cd>> trip;
    trip.reserve(static_cast<std::size_t>(lv.nonZeros()) + static_cast<std::size_t>(dim));
    for (int k = 0; k < lv.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(lv, k); it; ++it)
            if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < dim; ++i) trip.emplace_back(0, i * dim + i, cd(1.0, 0.0));
    SparseMatrix sys(n2, n2);
    sys.setFromTriplets(trip.begin(), trip.end());
    sys.makeCompressed();

    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n2);
    b(0) = 1.0;

    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(sys);
    Eigen::VectorXcd v;
    bool ok = (lu.info() == Eigen::Success);
    if (ok) v = lu.solve(b);
    ok = ok && lu.info() == Eigen::Success && v.allFinite();

    if (!ok) {
        if (n2 > 20000)
            throw std::runtime_error("steady_state: sparse solve failed and system too "
                                     "large for dense fallback");
        Matrix dense = sys.toDense();
        v = dense.colPivHouseholderQr().solve(b);
    }

    Matrix rho(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) rho(i, j) = v(i * dim + j);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const cd tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw std::runtime_error("steady_state: zero-trace solution");
    rho /= tr;

    SteadyStateResult res;
    LindbladGenerator::Workspace ws;
    Matrix resid(dim, dim);
    gen.apply(omega, rho, resid, ws);
    res.residual = resid.norm() / rho.norm();
    res.state.rho = std::move(rho);
    if (!(res.residual < 1e-8))
        throw std::runtime_error("steady_state: residual " + std::to_string(res.residual) +
                                 " above tolerance (non-convergence)");
    return res;
}

TruncationResult converge_truncation(
    const std::function<double(const HilbertSpace&)>& experiment, int start_h,
    int start_v, double rel_tol, int cap) {
    auto rel_change = [](double a, double b) {
        const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        return std::abs(a - b) / scale;
    };
    int h = std::max(1, start_h), v = std::max(1, start_v);
    double val = experiment(HilbertSpace(h, v));
    while (h <= cap && v <= cap) {
        const double val_h = experiment(HilbertSpace(h + 1, v));
        if (rel_change(val_h, val) >= rel_tol) {
            ++h;
            val = val_h;
            continue;
        }
        const double val_v = experiment(HilbertSpace(h, v + 1));
        if (rel_change(val_v, val) >= rel_tol) {
            ++v;
            val = val_v;
            continue;
        }
        return {h, v, val};
    }
    throw std::runtime_error("converge_truncation: Fock cap " + std::to_string(cap) +
                             " exceeded");
}

HilbertSpace truncation_for_pulse(const DeviceParams& p, const DriveSpec& d, int n_fock_v,
                                  int cap) {
    if (d.kind != DriveSpec::Kind::gaussian_pulse)
        throw std::invalid_argument("truncation_for_pulse: drive is not a pulse");
    const double peak_flux =
        p.eta_in * d.n_in * std::sqrt(4.0 * std::log(2.0) / M_PI) / d.tau;
    const double n_bar = 4.0 * p.eta_top * peak_flux / rate_of(p.kappa);
    const int n_h =
        std::max(5, static_cast<int>(std::ceil(n_bar + 5.0 * std::sqrt(n_bar) + 5.0)));
    if (n_h > cap)
        throw std::runtime_error("truncation_for_pulse: required n_fock_h " +
                                 std::to_string(n_h) + " exceeds cap " +
                                 std::to_string(cap));
    return HilbertSpace(n_h, n_fock_v);
}

}  // namespace qfilter
