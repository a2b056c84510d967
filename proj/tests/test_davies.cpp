#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "zeno/davies.hpp"
#include "zeno/models.hpp"
#include "zeno/zeno.hpp"

using namespace zeno;
using zeno::testing::max_abs_diff;
using zeno::testing::random_generator;

namespace {

Mat diag3(double a, double b, double c) {
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

bool contains_up_to_phase(const std::vector<Mat>& ops, const Mat& want, double tol) {
    for (const Mat& v : ops) {
        const cplx ov = (want.adjoint() * v).trace();
        const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1);
        if (max_abs_diff(v, ph * want) < tol) return true;
    }
    return false;
}

// (1/2T) int_{-T}^{T} e^{-s K_P} T e^{s K_P} ds, panelled 8-point Gauss-Legendre
Mat time_average(const SuperOperator& t, const SuperOperator& KP, double T, int panels) {
    static const double x[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double w[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    Mat acc = Mat::Zero(t.m.rows(), t.m.cols());
    const double h = 2 * T / panels;
    for (int p = 0; p < panels; ++p)
        for (int k = 0; k < 8; ++k) {
            const double s = -T + h * (p + 0.5 * (x[k] + 1));
            acc += (0.5 * h * w[k]) * (expm(KP, -s).m * t.m * expm(KP, s).m);
        }
    return acc / (2 * T);
}

}  // namespace

TEST_CASE("Bohr decomposition of sigma2") {
    const BohrDecomposition b = bohr_decompose(pauli::y());
    REQUIRE(b.eigenvalues.size() == 2);
    CHECK(b.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(b.eigenvalues[1] == doctest::Approx(1.0));
    REQUIRE(b.frequencies.size() == 3);
    CHECK(b.frequencies[0] == doctest::Approx(-2.0));
    CHECK(std::abs(b.frequencies[1]) < 1e-12);
    CHECK(b.frequencies[2] == doctest::Approx(2.0));
    CHECK(b.b == doctest::Approx(2.0));
    CHECK(max_abs_diff(b.projections[1], 0.5 * (pauli::id() + pauli::y())) < 1e-12);
    CHECK(max_abs_diff(b.projections[0], 0.5 * (pauli::id() - pauli::y())) < 1e-12);
}

TEST_CASE("Bohr decomposition invariants") {
    const BohrDecomposition b = bohr_decompose(diag3(0, 1, 3));
    CHECK(b.frequencies.size() == 7);
    CHECK(b.b == doctest::Approx(1.0));

    for (int s = 0; s < 10; ++s) {
        const int d = 2 + s % 3;
        const BohrDecomposition r = bohr_decompose(random_hermitian(d, 40, s));
        Mat sum = Mat::Zero(d, d);
        for (size_t i = 0; i < r.projections.size(); ++i) {
            sum += r.projections[i];
            CHECK(max_abs_diff(r.projections[i], r.projections[i].adjoint()) < 1e-10);
            for (size_t j = 0; j < r.projections.size(); ++j) {
                const Mat pp = r.projections[i] * r.projections[j];
                CHECK(max_abs_diff(pp, i == j ? r.projections[i] : Mat::Zero(d, d)) < 1e-10);
            }
        }
        CHECK(max_abs_diff(sum, Mat::Identity(d, d)) < 1e-10);
        CHECK(r.b > 0);
    }

    CHECK(bohr_decompose(Mat::Identity(3, 3)).degenerate);

    // resonant within tolerance, warned when just outside it
    const BohrDecomposition near = bohr_decompose(diag3(0, 1, 2 + 5e-8));
    CHECK_FALSE(near.warnings.empty());
}

TEST_CASE("pinching") {
    const BohrDecomposition b = bohr_decompose(pauli::y());
    CHECK(max_abs(sharp_operator(pauli::x(), b)) < 1e-14);
    CHECK(max_abs_diff(sharp_operator(pauli::y(), b), pauli::y()) < 1e-14);

    const Mat H = random_hermitian(3, 41, 0);
    const BohrDecomposition r = bohr_decompose(H);
    const Mat f = expm(Mat(-I_unit * H * 0.37));
    const Mat commuting = f + f.adjoint();
    CHECK(max_abs_diff(sharp_operator(commuting, r), commuting) < 1e-10);
    const Mat x = random_complex(3, 41, 1);
    CHECK(max_abs_diff(sharp_operator(sharp_operator(x, r), r), sharp_operator(x, r)) < 1e-12);
}

TEST_CASE("Davies average of the example") {
    const ZenoObjects z = reduce(example1(1.0));
    const BohrDecomposition b = bohr_decompose(z.H_P);
    const SuperOperator s = sharp_superop(z.D_P, b);
    const Mat a = example1_a();
    for (int k = 0; k < 5; ++k) {
        const Mat R = random_complex(2, 42, k);
        const Mat want = 0.5 * a * R * a.adjoint() + 0.5 * a.adjoint() * R * a +
                         0.5 * pauli::y() * R * pauli::y() - R;
        CHECK(max_abs_diff(s.apply(R), want) < 1e-12);
    }
    // the same operator for every beta
    for (const double beta : {0.0, 2.0})
        CHECK(max_abs_diff(sharp_superop(reduce(example1(beta)).D_P, b).m, s.m) < 1e-12);
}

TEST_CASE("superoperator averaging properties") {
    for (int k = 0; k < 5; ++k) {
        const int d = 2 + k % 2;
        const SpaceTag sb = SpaceTag::b(2, d);
        const Mat H = random_hermitian(d, 43, k);
        const BohrDecomposition b = bohr_decompose(H);
        const SuperOperator KP = commutator_superop(sb, H);
        const SuperOperator T = random_generator(sb, 44, k);
        const SuperOperator Ts = sharp_superop(T, b);
        CHECK(max_abs_diff(sharp_superop(Ts, b).m, Ts.m) < 1e-10);
        CHECK(max_abs_diff(KP.m * Ts.m, Ts.m * KP.m) < 1e-9);
        CHECK(superop_norm_1to1(Ts, false).value <= superop_norm_1to1(T, false).value + 1e-8);
    }
}

TEST_CASE("finite-time average converges to the Davies average") {
    const double T = 1e3;
    {
        const ZenoObjects z = reduce(example1(1.0));
        const BohrDecomposition b = bohr_decompose(z.H_P);
        const double n = double(b.eigenvalues.size());
        const Mat diff = sharp_superop(z.D_P, b).m - time_average(z.D_P, z.K_P, T, 4000);
        const double err = superop_norm_1to1(SuperOperator(z.D_P.domain, z.D_P.codomain, diff), false).value;
        CHECK(err <= std::pow(n, 4) * 3 * M_PI / (2 * b.b * T));
    }
    {
        const SpaceTag sb = SpaceTag::b(2, 3);
        const Mat H = random_hermitian(3, 45, 0);
        const BohrDecomposition b = bohr_decompose(H);
        const SuperOperator KP = commutator_superop(sb, H);
        const SuperOperator t = random_generator(sb, 45, 1);
        const double n = double(b.eigenvalues.size());
        const Mat diff = sharp_superop(t, b).m - time_average(t, KP, T, 6000);
        const double err = superop_norm_1to1(SuperOperator(sb, sb, diff), false).value;
        CHECK(err <= std::pow(n, 4) * 3 * M_PI / (2 * b.b * T));
    }
}

TEST_CASE("Lindblad form of the Davies average") {
    const Example1Params p = example1_params(1.0);
    const ZenoObjects z = reduce(example1(1.0));
    REQUIRE(z.dp_lindblad);
    const BohrDecomposition b = bohr_decompose(z.H_P);
    std::vector<SharpJump> labels;
    const LindbladSpec sl = sharp_lindblad_form(z.dp_lindblad->spec, b, &labels);
    CHECK(max_abs_diff(build_dissipator(sl).m, sharp_superop(z.D_P, b).m) < 1e-8);
    const Mat a = example1_a();
    for (const double c : {p.c, p.s}) {
        CHECK(contains_up_to_phase(sl.jumps, (c / 2) * a, 1e-12));
        CHECK(contains_up_to_phase(sl.jumps, (c / 2) * a.adjoint(), 1e-12));
        CHECK(contains_up_to_phase(sl.jumps, (c / 2) * pauli::y(), 1e-12));
    }
    for (const SharpJump& j : labels) {
        if (max_abs_diff(j.op, Mat::Zero(2, 2)) < 1e-12) continue;
        CHECK(std::min({std::abs(j.omega - 2), std::abs(j.omega), std::abs(j.omega + 2)}) < 1e-12);
    }
}

TEST_CASE("Lindblad form of the Davies average on random models") {
    int checked = 0;
    for (int s = 0; s < 30; ++s) {
        const CompositeModel m = random_model(2 + s % 2, 2 + (s / 2) % 2, 46, s);
        const ZenoObjects z = reduce(m);
        const BohrDecomposition b = bohr_decompose(z.H_P);
        const SuperOperator ds = sharp_superop(z.D_P, b);
        CHECK(gks_conditional_cp_test(ds).is_lindblad);
        const SpectralSummary sp = analyze_spectrum(ds);
        if (sp.is_ergodic && sp.steady_state) {
            const Mat& R = *sp.steady_state;
            CHECK(max_abs_diff(z.H_P * R, R * z.H_P) < 1e-9);
        }
        if (!z.dp_lindblad) continue;
        ++checked;
        CHECK(max_abs_diff(build_dissipator(sharp_lindblad_form(z.dp_lindblad->spec, b)).m, ds.m) < 1e-8);
    }
    CHECK(checked >= 25);
}

TEST_CASE("jump decomposition across frequencies") {
    for (int s = 0; s < 5; ++s) {
        const int d = 3;
        const SpaceTag sb = SpaceTag::b(2, d);
        const BohrDecomposition b = bohr_decompose(random_hermitian(d, 47, s));
        const Mat V = random_complex(d, 48, s);
        std::vector<SharpJump> labels;
        sharp_lindblad_form(LindbladSpec(sb, {V}, Mat::Zero(d, d)), b, &labels);
        Mat lhs = Mat::Zero(d, d);
        for (const SharpJump& j : labels) lhs += j.op.adjoint() * j.op;
        CHECK(max_abs_diff(lhs, sharp_operator(V.adjoint() * V, b)) < 1e-12);
    }

    // jumps commuting with H_P pass through unchanged
    const Mat H = random_hermitian(3, 49, 0);
    const BohrDecomposition b = bohr_decompose(H);
    const Mat c1 = H * H - 0.3 * H, c2 = cplx(0, 0.5) * H;
    const LindbladSpec spec(SpaceTag::b(2, 3), {c1, c2}, Mat(0.2 * H));
    const LindbladSpec out = sharp_lindblad_form(spec, b);
    CHECK(max_abs_diff(build_dissipator(out).m, build_dissipator(spec).m) < 1e-12);
    CHECK(contains_up_to_phase(out.jumps, c1, 1e-12));
    CHECK(contains_up_to_phase(out.jumps, c2, 1e-12));
}

TEST_CASE("kernel of the Davies average is closed under pinching") {
    for (int s = 0; s < 10; ++s) {
        const CompositeModel m = random_model(2, 3, 50, s);
        const ZenoObjects z = reduce(m);
        const BohrDecomposition b = bohr_decompose(z.H_P);
        const SuperOperator ds = sharp_superop(z.D_P, b);
        Eigen::FullPivLU<Mat> lu(ds.m);
        lu.setThreshold(1e-10);
        const Mat ker = lu.kernel();
        for (Eigen::Index k = 0; k < ker.cols(); ++k) {
            const Mat X = unvec(ker.col(k), 3);
            if (max_abs(ds.apply(X)) > 1e-9) continue;
            CHECK(max_abs(ds.apply(sharp_operator(X, b))) < 1e-9);
        }
    }
}
