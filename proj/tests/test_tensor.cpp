#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "zeno/tensor.hpp"

using namespace zeno;
using zeno::testing::max_abs_diff;
using zeno::testing::random_density;
using zeno::testing::random_generator;

TEST_CASE("space tags and operator shapes") {
    CHECK(SpaceTag::ab(2, 3).dim() == 6);
    CHECK(SpaceTag::a(2, 3).dim() == 2);
    CHECK(SpaceTag::b(2, 3).dim() == 3);
    CHECK_THROWS_AS(SpaceTag(Space::AB, 0, 2), DimensionError);
    CHECK_THROWS_AS(Operator(SpaceTag::a(2, 2), Mat::Zero(3, 3)), DimensionError);
    CHECK_THROWS_AS(SuperOperator(SpaceTag::a(2, 2), SpaceTag::b(2, 3), Mat::Zero(4, 4)), DimensionError);
}

TEST_CASE("tensor product ordering and traces") {
    const auto a = SpaceTag::a(2, 2), b = SpaceTag::b(2, 2);
    CHECK(max_abs_diff(tensor(Operator(a, pauli::id()), Operator(b, pauli::id())).m, Mat::Identity(4, 4)) == 0);

    const Mat t = tensor(Operator(a, pauli::z()), Operator(b, pauli::x())).m;
    CHECK(t(0, 1) == cplx(1, 0));
    CHECK(t(2, 3) == cplx(-1, 0));

    const Mat x = random_complex(2, 1, 1), y = random_complex(3, 1, 2);
    const auto a3 = SpaceTag::a(2, 3), b3 = SpaceTag::b(2, 3);
    CHECK(std::abs(tensor(Operator(a3, x), Operator(b3, y)).m.trace() - x.trace() * y.trace()) < 1e-12);
    CHECK_THROWS_AS(tensor(Operator(b, x), Operator(b, x)), DimensionError);
}

TEST_CASE("partial traces") {
    const int dA = 3, dB = 2;
    const auto a = SpaceTag::a(dA, dB), b = SpaceTag::b(dA, dB), ab = SpaceTag::ab(dA, dB);
    const Mat pi = random_density(dA, 3, 1), R = random_complex(dB, 3, 2);
    CHECK(max_abs_diff(partial_trace_A(tensor(Operator(a, pi), Operator(b, R))).m, R) < 1e-12);

    const Mat x = random_complex(dA, 4, 1), y = random_complex(dB, 4, 2);
    const Operator xy = tensor(Operator(a, x), Operator(b, y));
    CHECK(max_abs_diff(partial_trace_A(xy).m, x.trace() * y) < 1e-12);
    CHECK(max_abs_diff(partial_trace_B(xy).m, y.trace() * x) < 1e-12);

    const auto a2 = SpaceTag::a(2, 2), b2 = SpaceTag::b(2, 2);
    CHECK(max_abs_diff(partial_trace_A(tensor(Operator(a2, pauli::z()), Operator(b2, pauli::x()))).m,
                       Mat::Zero(2, 2)) < 1e-15);

    for (int s = 0; s < 10; ++s) {
        const Operator z(ab, random_complex(dA * dB, 5, s));
        CHECK(std::abs(partial_trace_A(z).m.trace() - z.m.trace()) < 1e-12);
        CHECK(std::abs(partial_trace_B(z).m.trace() - z.m.trace()) < 1e-12);
    }
    CHECK_THROWS_AS(partial_trace_A(Operator(a, x)), DimensionError);
}

TEST_CASE("trace norm") {
    CHECK(trace_norm(random_density(4, 6, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_norm(pauli::x()) == doctest::Approx(2.0).epsilon(1e-14));
    Mat e01 = Mat::Zero(2, 2);
    e01(0, 1) = 1;
    CHECK(trace_norm(e01) == doctest::Approx(1.0).epsilon(1e-14));

    for (int s = 0; s < 20; ++s) {
        const Mat x = random_complex(3, 7, 3 * s), y = random_complex(3, 7, 3 * s + 1);
        const cplx c(0.3 * s - 2, 1.1);
        CHECK(trace_norm(x + y) <= trace_norm(x) + trace_norm(y) + 1e-10);
        CHECK(std::abs(trace_norm(c * x) - std::abs(c) * trace_norm(x)) < 1e-10);
    }
}

TEST_CASE("vectorization convention") {
    const Vec v = vec(pauli::id());
    CHECK(v(0) == cplx(1));
    CHECK(v(1) == cplx(0));
    CHECK(v(2) == cplx(0));
    CHECK(v(3) == cplx(1));

    const Mat x = random_complex(3, 8, 1), y = random_complex(3, 8, 2);
    CHECK(unvec(vec(x), 3) == x);
    CHECK(std::abs(vec(x).dot(vec(y)) - (x.adjoint() * y).trace()) < 1e-12);

    const SuperOperator flip(SpaceTag::a(2, 2), SpaceTag::a(2, 2), sandwich(pauli::x(), pauli::x()));
    CHECK(max_abs_diff(flip.apply(pauli::z()), -pauli::z()) < 1e-15);

    const Mat A = random_complex(3, 8, 3), B = random_complex(3, 8, 4);
    CHECK(max_abs_diff(unvec(sandwich(A, B) * vec(x), 3), A * x * B) < 1e-12);
    CHECK(max_abs_diff(sandwich(A, B), kron(B.transpose(), A)) == 0);
}

TEST_CASE("superoperator algebra") {
    const auto s = SpaceTag::ab(2, 2);
    const SuperOperator t1 = random_generator(s, 9, 1), t2 = random_generator(s, 9, 2);
    const Mat x = random_complex(4, 9, 3);
    CHECK(max_abs_diff((t1 * t2).apply(x), t1.apply(t2.apply(x))) < 1e-10);
    const Mat y = random_complex(4, 9, 4);
    CHECK(std::abs((y.adjoint() * t1.apply(x)).trace() - (t1.adjoint().apply(y).adjoint() * x).trace()) < 1e-10);
}

TEST_CASE("matrix exponential") {
    const auto s = SpaceTag::ab(2, 2);
    const SuperOperator L = random_generator(s, 10, 1);
    CHECK(max_abs_diff(expm(L, 0.0).m, Mat::Identity(16, 16)) == 0);
    CHECK(max_abs_diff((expm(L, 0.3) * expm(L, 0.3)).m, expm(L, 0.6).m) < 1e-10);

    for (int k = 0; k < 5; ++k) {
        const Mat x = random_complex(4, 10, 10 + k);
        CHECK(std::abs(expm(L, 0.7 * (k + 1)).apply(x).trace() - x.trace()) < 1e-10);
    }

    // jumps c sigma_+, s sigma_- with c^2 + s^2 = 1 damp sigma3 at rate 2
    const double t = std::tanh(0.5), c = std::sqrt((1 - t) / 2), sn = std::sqrt((1 + t) / 2);
    Mat DA = Mat::Zero(4, 4);
    for (const Mat& j : {Mat(c * pauli::plus()), Mat(sn * pauli::minus())}) {
        const Mat jj = j.adjoint() * j;
        DA += 2.0 * sandwich(j, j.adjoint()) - sandwich(jj, Mat::Identity(2, 2)) - sandwich(Mat::Identity(2, 2), jj);
    }
    const SuperOperator D(SpaceTag::a(2, 1), SpaceTag::a(2, 1), DA);
    for (double tau : {0.1, 1.0, 3.0})
        CHECK(max_abs_diff(expm(D, tau).apply(pauli::z()), std::exp(-2 * tau) * pauli::z()) < 1e-12);
}

TEST_CASE("1->1 norm witnesses") {
    const auto s = SpaceTag::ab(2, 2);
    const SuperOperator cptp = expm(random_generator(s, 11, 1), 0.5);
    CHECK(superop_norm_1to1(cptp, false).value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(superop_norm_1to1(cptp, true).value == doctest::Approx(1.0).epsilon(1e-8));

    for (int k = 0; k < 5; ++k) {
        const Mat H = random_hermitian(4, 11, 10 + k);
        const double h = H.selfadjointView<Eigen::Lower>().eigenvalues().cwiseAbs().maxCoeff();
        CHECK(superop_norm_1to1(commutator_superop(s, H), false).value <= 2 * h + 1e-9);
    }

    // |Y><X| ⊗ id has norm ||Y||_1 ||X||_inf
    for (int k = 0; k < 5; ++k) {
        const Mat X = random_complex(2, 12, 2 * k), Y = random_complex(2, 12, 2 * k + 1);
        const SuperOperator rank1(SpaceTag::a(2, 2), SpaceTag::a(2, 2), vec(Y) * vec(X).adjoint());
        const double w = superop_norm_1to1(ampliate_A(rank1, 2), false).value;
        CHECK(std::abs(w - trace_norm(Y) * op_norm(X)) < 1e-6);
    }

    // contraction under post-composition with a CPTP map
    const SuperOperator t1 = random_generator(s, 13, 1);
    const double w1 = superop_norm_1to1(t1, false).value;
    CHECK(superop_norm_1to1(cptp * t1, false).value <= w1 + 1e-6);
    CHECK(superop_norm_1to1(t1 * cptp, false).value <= w1 + 1e-6);
}

TEST_CASE("norm witness is identical under serial and parallel execution") {
    const SuperOperator t = random_generator(SpaceTag::ab(2, 3), 14, 1);
    for (bool herm : {false, true}) {
        NormOptions a, b;
        a.exec = Exec::Serial;
        b.exec = Exec::Parallel;
        const NormWitness wa = superop_norm_1to1(t, herm, a), wb = superop_norm_1to1(t, herm, b);
        CHECK(wa.value == wb.value);
        CHECK(wa.psi == wb.psi);
        CHECK(wa.agreeing_restarts == wb.agreeing_restarts);
    }
}
