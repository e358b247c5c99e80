#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfilter/hilbert.hpp"

#include <cmath>
#include <random>

using namespace qfilter;
using cd = std::complex<double>;

namespace {
double comm_defect(const SparseMatrix& a, const SparseMatrix& b) {
    Matrix ad = Matrix(a), bd = Matrix(b);
    return (ad * bd - bd * ad).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("annihilation matrix elements") {
    CHECK(annihilation(1).cwiseAbs().maxCoeff() == 0.0);

    Matrix a2 = annihilation(2);
    CHECK(a2(0, 1) == cd(1.0, 0.0));
    CHECK(a2(0, 0) == cd(0.0, 0.0));
    CHECK(a2(1, 0) == cd(0.0, 0.0));
    CHECK(a2(1, 1) == cd(0.0, 0.0));

    Matrix a3 = annihilation(3);
    CHECK(std::abs(a3(0, 1) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a3(1, 2) - cd(std::sqrt(2.0), 0.0)) < 1e-15);
    CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(annihilation(0), std::invalid_argument);
}

TEST_CASE("exciton rotation conventions") {
    auto r0 = exciton_rotation(0.0);
    CHECK(r0.v(0) == doctest::Approx(1.0));
    CHECK(r0.v(1) == doctest::Approx(0.0));
    CHECK(r0.h(0) == doctest::Approx(0.0));
    CHECK(r0.h(1) == doctest::Approx(1.0));

    auto r90 = exciton_rotation(M_PI / 2.0);
    CHECK(r90.v(1) == doctest::Approx(1.0));       // |V> = |Y>
    CHECK(r90.h(0) == doctest::Approx(-1.0));      // |H> = -|X>

    auto r15 = exciton_rotation(15.0 * M_PI / 180.0);
    CHECK(r15.v(0) == doctest::Approx(0.9659).epsilon(1e-4));
    CHECK(r15.v(1) == doctest::Approx(0.2588).epsilon(1e-4));

    // orthonormality and inverse composition over random angles
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double th = dist(rng);
        auto r = exciton_rotation(th);
        CHECK(std::abs(r.v.dot(r.h)) < 1e-14);
        CHECK(r.v.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.h.norm() == doctest::Approx(1.0).epsilon(1e-14));

        auto rb = exciton_rotation(-th);
        Eigen::Matrix2d fw, bw;
        fw << r.v(0), r.v(1), r.h(0), r.h(1);
        bw << rb.v(0), rb.v(1), rb.h(0), rb.h(1);
        CHECK(((bw * fw) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("rotated QD detunings") {
    auto [h0, v0] = qd_detunings(3.0, 0.0, 0.0);
    CHECK(h0 == doctest::Approx(0.0));
    CHECK(v0 == doctest::Approx(3.0));

    auto [h45, v45] = qd_detunings(3.0, 1.0, M_PI / 4.0);
    CHECK(h45 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v45 == doctest::Approx(2.0).epsilon(1e-14));

    auto [h15, v15] = qd_detunings(3.0, 0.0, 15.0 * M_PI / 180.0);
    CHECK(h15 == doctest::Approx(0.201).epsilon(2e-3));
    CHECK(v15 == doctest::Approx(2.799).epsilon(2e-3));

    // theta -> theta + pi invariance
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double th = dist(rng), dx = dist(rng), dy = dist(rng);
        auto a = qd_detunings(dx, dy, th);
        auto b = qd_detunings(dx, dy, th + M_PI);
        CHECK(a.first == doctest::Approx(b.first).epsilon(1e-12));
        CHECK(a.second == doctest::Approx(b.second).epsilon(1e-12));
    }
}

TEST_CASE("operator set structure") {
    SUBCASE("vacuum-only truncation") {
        auto ops = build_operators(HilbertSpace(1, 1), 0.0);
        CHECK(ops.dim() == 3);
        CHECK(Matrix(ops.a_h).cwiseAbs().maxCoeff() == 0.0);
        CHECK(Matrix(ops.a_v).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("factor independence and algebra") {
        auto ops = build_operators(HilbertSpace(4, 2), 0.3);
        const int d = ops.dim();
        CHECK(d == 24);
        CHECK(comm_defect(ops.sigma_h, ops.a_h) < 1e-14);
        CHECK(comm_defect(ops.sigma_v, ops.a_v) < 1e-14);
        CHECK(comm_defect(ops.sigma_h, ops.a_v) < 1e-14);

        // sigma^2 = 0
        CHECK((Matrix(ops.sigma_h) * Matrix(ops.sigma_h)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((Matrix(ops.sigma_v) * Matrix(ops.sigma_v)).cwiseAbs().maxCoeff() == 0.0);

        // pi_ex is a Hermitian projector equal to sigma_H^dag sigma_H + sigma_V^dag sigma_V
        Matrix pi = Matrix(ops.pi_ex);
        CHECK((pi * pi - pi).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((pi - pi.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        Matrix built = Matrix(ops.sigma_h).adjoint() * Matrix(ops.sigma_h) +
                       Matrix(ops.sigma_v).adjoint() * Matrix(ops.sigma_v);
        CHECK((pi - built).cwiseAbs().maxCoeff() < 1e-14);

        // [a, a^dag] = 1 away from the top Fock level of the H mode
        Matrix ah = Matrix(ops.a_h);
        Matrix comm = ah * ah.adjoint() - ah.adjoint() * ah;
        HilbertSpace sp = ops.space;
        for (int e = 0; e < 3; ++e)
            for (int nh = 0; nh < sp.n_fock_h - 1; ++nh)
                for (int nv = 0; nv < sp.n_fock_v; ++nv) {
                    const int i = sp.index(e, nh, nv);
                    CHECK(std::abs(comm(i, i) - cd(1.0, 0.0)) < 1e-14);
                }
    }

    SUBCASE("excited-space projector trace") {
        auto ops = build_operators(HilbertSpace(3, 2), 0.0);
        CHECK(ops.dim() == 18);
        CHECK(Matrix(ops.pi_ex).trace().real() == doctest::Approx(12.0));
    }
}

TEST_CASE("state validation diagnostics") {
    const HilbertSpace sp(2, 2);
    const int d = sp.dim();

    SUBCASE("maximally mixed") {
        Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
        auto diag = validate_state(rho, d);
        CHECK(diag.hermiticity_defect == 0.0);
        CHECK(diag.trace_defect < 1e-15);
        CHECK(diag.min_eigenvalue == doctest::Approx(1.0 / d).epsilon(1e-12));
    }

    SUBCASE("ground projector") {
        auto st = ground_state(sp);
        auto diag = validate_state(st.rho, d);
        CHECK(diag.hermiticity_defect == 0.0);
        CHECK(diag.trace_defect < 1e-15);
        CHECK(diag.min_eigenvalue == doctest::Approx(0.0));
    }

    SUBCASE("trace defect") {
        Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d) * 1.01;
        auto diag = validate_state(rho, d);
        CHECK(diag.trace_defect == doctest::Approx(0.01).epsilon(1e-10));
    }

    SUBCASE("dimension mismatch rejected") {
        Matrix rho = Matrix::Identity(3, 3);
        CHECK_THROWS_AS(validate_state(rho, d), std::invalid_argument);
    }
}
