#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "zeno/davies.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/expansion.hpp"
#include "zeno/fixtures.hpp"
#include "zeno/models.hpp"

using namespace zeno;
using zeno::testing::max_abs_diff;

namespace {

struct Setup {
    CompositeModel model;
    ZenoObjects z;
    SuperOperator dps;
};

Setup setup(const CompositeModel& m) {
    Setup s{m, reduce(m), {}};
    s.dps = sharp_superop(s.z.D_P, bohr_decompose(s.z.H_P));
    return s;
}

bool in_span(const Mat& x, const std::vector<Mat>& basis, double tol) {
    Mat r = x;
    for (const Mat& b : basis) r -= (b.adjoint() * x).trace() * b;
    return max_abs(r) < tol;
}

}  // namespace

TEST_CASE("subspaces of the example") {
    const Setup s = setup(example1(1.0));
    const SubspaceBasis b = build_subspaces(s.z.K_P, s.z.D_P);
    CHECK(b.V_basis.size() == 2);
    CHECK(b.W_basis.size() == 1);
    CHECK(in_span(pauli::x() / std::sqrt(2.0), b.V_basis, 1e-12));
    CHECK(in_span(pauli::z() / std::sqrt(2.0), b.V_basis, 1e-12));
    CHECK(in_span(pauli::y() / std::sqrt(2.0), b.W_basis, 1e-12));
    CHECK(b.max_basis_residual < 1e-10);
    for (const Mat& v : b.V_basis)
        for (const Mat& w : b.W_basis) CHECK(std::abs((v.adjoint() * w).trace()) < 1e-12);

    const Decomposition d1 = decompose(s.z.K_P.apply(pauli::x()), b);
    CHECK(max_abs_diff(d1.V, pauli::x()) < 1e-12);
    CHECK(max_abs(d1.W) < 1e-12);
    const Decomposition d2 = decompose(s.z.D_P.apply(pauli::y()), b);
    CHECK(max_abs(d2.V) < 1e-12);
    CHECK(max_abs_diff(d2.W, pauli::y()) < 1e-12);

    const double t = std::tanh(0.5);
    const Decomposition d0 = decompose(-s.z.D_P.apply(0.5 * pauli::id()), b);
    CHECK(max_abs_diff(d0.V, -(t / 2) * pauli::x()) < 1e-12);
    CHECK(max_abs(d0.W) < 1e-12);

    CHECK_THROWS_AS(decompose(pauli::id(), b), std::invalid_argument);
}

TEST_CASE("subspaces without a projected Hamiltonian") {
    const SpaceTag sb = SpaceTag::b(2, 3);
    const SuperOperator D = zeno::testing::random_generator(sb, 60, 1);
    const SuperOperator zero(sb, sb, Mat::Zero(9, 9));
    const SubspaceBasis b = build_subspaces(zero, D);
    CHECK(b.V_basis.empty());
    CHECK(b.W_basis.size() == 8);
    Mat x = random_complex(3, 60, 2);
    x -= (x.trace() / 3.0) * Mat::Identity(3, 3);
    const Decomposition d = decompose(x, b);
    CHECK(max_abs_diff(D.apply(d.W), x) < 1e-10);
}

TEST_CASE("decompose round trip and bounds") {
    for (int m = 0; m < 4; ++m) {
        const Setup s = setup(random_model(2 + m % 2, 2 + m / 2, 61, m));
        const SubspaceBasis b = build_subspaces(s.z.K_P, s.z.D_P);
        const int d = s.model.d_B;
        for (int k = 0; k < 25; ++k) {
            Mat x = random_complex(d, 62, 100 * m + k);
            x -= (x.trace() / double(d)) * Mat::Identity(d, d);
            const Decomposition dc = decompose(x, b);
            CHECK(max_abs_diff(s.z.K_P.apply(dc.V) + s.z.D_P.apply(dc.W), x) < 1e-10);
            CHECK(trace_norm(dc.V) <= b.C_V * trace_norm(x) * (1 + 1e-6));
            CHECK(trace_norm(dc.W) <= b.C_W * trace_norm(x) * (1 + 1e-6));
        }
    }
}

TEST_CASE("hierarchy for the example") {
    const double t = std::tanh(0.5);
    const Setup s = setup(example1(1.0));
    const ExpansionResult ex = solve_hierarchy(s.model, s.z, s.dps, 1);
    CHECK(max_abs_diff(ex.R_bar, 0.5 * pauli::id()) < 1e-12);
    const Mat n0 = pauli_sum({{1, 2, -t / 4}, {2, 1, t / 4}, {0, 1, -t / 4}, {3, 1, t * t / 4}});
    CHECK(max_abs_diff(ex.n_bar[0], n0) < 1e-10);
    CHECK(max_abs(ex.W_k[0]) < 1e-12);
    CHECK(max_abs_diff(ex.V_k[0], -(t / 2) * pauli::x()) < 1e-12);
    CHECK(max_abs_diff(ex.V_k[1], (t / 4) * pauli::z()) < 1e-12);
    for (double r : ex.per_order_residuals) CHECK(r < 1e-8);
    CHECK(ex.rbar_w_component < 1e-12);

    // gamma^-2 coefficients of the exact rational steady state
    const Mat n1 = pauli_sum({{0, 2, -1.5 * t},
                              {2, 0, -t * t / 4},
                              {0, 3, t / 8},
                              {3, 0, t / 4},
                              {1, 1, -t / 2},
                              {2, 2, -t / 2},
                              {3, 3, -3 * t * t / 8},
                              {2, 3, -t / 4},
                              {3, 2, 1.5 * t * t}});
    CHECK(max_abs_diff(ex.n_bar[1], n1) < 1e-10);
}

TEST_CASE("exact steady state of the example") {
    const Setup s = setup(example1(1.0));
    for (const double g : {0.5, 2.0, 10.0, 100.0}) {
        const Mat rho = exact_steady_state(build_composite(s.model, g).L);
        CHECK(max_abs_diff(rho, example1_exact_steady_state(1.0, g)) < 1e-10);
    }
    const double t = std::tanh(0.5);
    const double g = 10.0;
    const Mat trA = ptrace_A(exact_steady_state(build_composite(s.model, g).L), 2, 2);
    const Mat printed = 0.5 * pauli::id() - (t / (2 * g)) * pauli::x() +
                        (-(t / 4) * pauli::x() - 3 * t * pauli::y() + (t / 4) * pauli::z()) / (g * g);
    CHECK(max_abs_diff(trA, printed) < 3e-3);

    // uncoupled, H_B ∝ sigma3: pi_A ⊗ pi_A is stationary for every gamma
    const Mat pi = 0.5 * pauli::id() - (t / 2) * pauli::z();
    const CompositeModel u = make_model(2, 2, pauli::z(), Mat::Zero(4, 4), 0.4 * pauli::z(), s.model.dissipator_A, 1);
    for (const double g : {0.1, 1.0, 10.0, 1000.0})
        CHECK(max_abs(build_composite(u, g).L.apply(kron(pi, pi))) < 1e-12);
}

TEST_CASE("convergence slopes") {
    const Setup s = setup(example1(1.0));
    const ExpansionResult ex = solve_hierarchy(s.model, s.z, s.dps, 1);
    const std::vector<double> gs{10, 30, 100};
    std::vector<double> lx, l0, l1, lz;
    for (const double g : gs) {
        const Mat exact = exact_steady_state(build_composite(s.model, g).L);
        lx.push_back(std::log(g));
        l0.push_back(std::log(trace_norm(ex.truncated_state(g, 0) - exact)));
        l1.push_back(std::log(trace_norm(ex.truncated_state(g, 1) - exact)));
        lz.push_back(std::log(trace_norm(exact - kron(ex.pi_A, ex.R_bar))));
    }
    CHECK(std::abs(fit_line(lx, l0).slope + 2) <= 0.25);
    CHECK(std::abs(fit_line(lx, l1).slope + 3) <= 0.25);
    CHECK(std::abs(fit_line(lx, lz).slope + 1) <= 0.2);
}

TEST_CASE("residual decays geometrically in the order") {
    const Setup s = setup(example1(1.0));
    const ExpansionResult ex = solve_hierarchy(s.model, s.z, s.dps, 5);
    const SuperOperator L = build_composite(s.model, 100.0).L;
    double prev = trace_norm(L.apply(ex.truncated_state(100.0, 0)));
    for (int K = 1; K <= 5; ++K) {
        const double r = trace_norm(L.apply(ex.truncated_state(100.0, K)));
        CHECK(r < 0.5 * prev);
        prev = r;
    }
}

TEST_CASE("hierarchy invariants on random models") {
    int solved = 0;
    for (int m = 0; m < 12; ++m) {
        const Setup s = setup(random_model(2 + m % 2, 2 + (m / 2) % 2, 63, m));
        ExpansionResult a, b;
        try {
            a = solve_hierarchy(s.model, s.z, s.dps, 2);
            b = solve_hierarchy(s.model, s.z, s.dps, 2, 777 + m);
        } catch (const HierarchyError&) {
            continue;
        }
        ++solved;
        for (size_t k = 0; k < a.n_bar.size(); ++k) {
            CHECK(std::abs(a.n_bar[k].trace()) < 1e-9);
            CHECK(max_abs_diff(a.n_bar[k], a.n_bar[k].adjoint()) < 1e-9);
            CHECK(max_abs_diff(a.n_bar[k], b.n_bar[k]) < 1e-8);
        }
        for (double r : a.per_order_residuals) CHECK(r < 1e-8);
        CHECK(std::abs(a.truncated_state(7.0, 2).trace() - 1.0) < 1e-12);
    }
    CHECK(solved >= 10);
}

TEST_CASE("non-ergodic averaged dissipator is rejected") {
    // no coupling: D_P = 0, so D_P sharp has a large kernel
    const CompositeModel e = example1(1.0);
    const CompositeModel u = make_model(2, 2, pauli::z(), Mat::Zero(4, 4), pauli::x(), e.dissipator_A, 1.0);
    const Setup s = setup(u);
    CHECK_THROWS_AS(solve_hierarchy(s.model, s.z, s.dps, 1), HierarchyError);
}

TEST_CASE("reduced-state boundary test") {
    {
        const Setup s = setup(example1(1.0));
        const ExpansionResult ex = solve_hierarchy(s.model, s.z, s.dps, 0);
        const BoundaryTest bt = boundary_reduced_state_test(s.model, ex);
        CHECK(max_abs_diff(bt.K_A, pauli::z()) < 1e-12);
        CHECK(bt.commutator_norm < 1e-12);
        CHECK(bt.trB_n0_norm < 1e-12);
        CHECK(bt.iff_holds);
    }
    // counter-model: non-diagonal H_A with the example's dissipator, found by rejection sampling
    const CompositeModel e = example1(1.0);
    bool found = false;
    for (int s = 0; s < 50 && !found; ++s) {
        const CompositeModel m = make_model(2, 2, random_hermitian(2, 64, 3 * s), random_hermitian(4, 64, 3 * s + 1),
                                            random_hermitian(2, 64, 3 * s + 2), e.dissipator_A, 1.0);
        const Setup st = setup(m);
        ExpansionResult ex;
        try {
            ex = solve_hierarchy(st.model, st.z, st.dps, 0);
        } catch (const HierarchyError&) {
            continue;
        }
        const BoundaryTest bt = boundary_reduced_state_test(m, ex);
        if (bt.commutator_norm < 1e-3) continue;
        found = true;
        CHECK(bt.trB_n0_norm > 1e-6);
        CHECK(bt.iff_holds);
    }
    CHECK(found);

    // pi_A ∝ I: the commutator always vanishes
    const CompositeModel e0 = example1(0.0);
    for (int s = 0; s < 5; ++s) {
        const CompositeModel m = make_model(2, 2, random_hermitian(2, 65, 3 * s), random_hermitian(4, 65, 3 * s + 1),
                                            random_hermitian(2, 65, 3 * s + 2), e0.dissipator_A, 1.0);
        const Setup st = setup(m);
        const ExpansionResult ex = solve_hierarchy(st.model, st.z, st.dps, 0);
        const BoundaryTest bt = boundary_reduced_state_test(m, ex);
        CHECK(bt.commutator_norm < 1e-12);
        CHECK(bt.iff_holds);
    }
}
