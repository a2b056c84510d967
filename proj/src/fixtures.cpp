#include "zeno/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zeno/davies.hpp"
#include "zeno/expansion.hpp"
#include "zeno/models.hpp"

namespace zeno {

namespace {

Mat sigma(int i) {
    switch (i) {
        case 1: return pauli::x();
        case 2: return pauli::y();
        case 3: return pauli::z();
        default: return pauli::id();
    }
}

Check close(std::string name, const Mat& got, const Mat& want, double tol) {
    Check c;
    c.name = std::move(name);
    c.error = max_abs(got - want);
    c.tol = tol;
    c.pass = c.error <= tol;
    return c;
}

// greedy nearest matching of two eigenvalue lists
double spectrum_distance(std::vector<cplx> got, const std::vector<cplx>& want) {
    if (got.size() != want.size()) return INFINITY;
    double worst = 0.0;
    for (const cplx w : want) {
        auto it = std::min_element(got.begin(), got.end(),
                                   [&](cplx a, cplx b) { return std::abs(a - w) < std::abs(b - w); });
        worst = std::max(worst, std::abs(*it - w));
        got.erase(it);
    }
    return worst;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

Mat pauli_sum(const PauliTerms& terms) {
    Mat out = Mat::Zero(4, 4);
    for (const auto& [i, j, c] : terms) out += c * kron(sigma(i), sigma(j));
    return out;
}

Mat pauli_sum_1(const std::vector<std::pair<int, double>>& terms) {
    Mat out = Mat::Zero(2, 2);
    for (const auto& [i, c] : terms) out += c * sigma(i);
    return out;
}

Mat example1_exact_steady_state(double beta, double g) {
    const double t = std::tanh(beta / 2), t2 = t * t, g2 = g * g;
    const double D = 2 * g2 * g2 + 23 * g2 + 64;
    return pauli_sum({
        {0, 0, 0.25},
        {0, 1, -g * t * (g2 + 6) / (2 * D)},
        {0, 2, -t * (3 * g2 + 14) / D},
        {0, 3, t * (g2 + 4) / (4 * D)},
        {1, 0, 4 * g * t2 / D},
        {1, 1, -t * (g2 + 5) / D},
        {1, 2, -g * t * (g2 + 7) / (2 * D)},
        {2, 0, -t2 * (g2 - 12) / (2 * D)},
        {2, 1, g * t * (g2 + 5) / (2 * D)},
        {2, 2, -t * (g2 + 7) / D},
        {2, 3, -t * (g2 + 4) / (2 * D)},
        {3, 0, -t * (g2 + 4) * (2 * g2 + 13) / (4 * D)},
        {3, 1, g * t2 * (g2 + 4) / (2 * D)},
        {3, 2, 3 * t2 * (g2 + 4) / D},
        {3, 3, -3 * t2 * (g2 + 4) / (4 * D)},
    });
}

std::vector<Check> example1_checks(double beta, const ExampleTolerances& tol) {
    std::vector<Check> out;
    const double t = std::tanh(beta / 2), t2 = t * t;
    const CompositeModel model = example1(beta);
    const ZenoObjects z = reduce(model);
    const BohrDecomposition bohr = bohr_decompose(z.H_P);
    const SuperOperator dps = sharp_superop(z.D_P, bohr);
    const double e = tol.exact;

    out.push_back(close("H_P = sigma2", z.H_P, pauli::y(), e));

    {
        const Mat sm = pauli::minus(), sp = pauli::plus(), s3 = pauli::z();
        const Mat pi = 0.5 * pauli::id() - (t / 2) * s3;
        double err = max_abs(z.D_P.apply(sm) + sm);
        err = std::max(err, max_abs(z.D_P.apply(sp) + sp));
        err = std::max(err, max_abs(z.D_P.apply(s3) + 2.0 * s3));
        err = std::max(err, max_abs(z.D_P.apply(pi)));
        out.push_back({"D_P eigen-actions on sigma_-, sigma_+, sigma3, pi", err <= e, err, e});
    }
    {
        double err = max_abs(dps.apply(pauli::id()));
        err = std::max(err, max_abs(dps.apply(pauli::x()) + pauli::x()));
        err = std::max(err, max_abs(dps.apply(pauli::z()) + pauli::z()));
        err = std::max(err, max_abs(dps.apply(pauli::y()) + 1.5 * pauli::y()));
        out.push_back({"D_P sharp eigen-actions {0, -1, -1, -3/2}", err <= e, err, e});
        // trace-consistent actions: tr D_P sharp = tr D_P = -4
        err = max_abs(dps.apply(pauli::id()));
        err = std::max(err, max_abs(dps.apply(pauli::x()) + 1.5 * pauli::x()));
        err = std::max(err, max_abs(dps.apply(pauli::z()) + 1.5 * pauli::z()));
        err = std::max(err, max_abs(dps.apply(pauli::y()) + pauli::y()));
        out.push_back({"D_P sharp actions I -> 0, sigma1, sigma3 -> -3/2, sigma2 -> -1", err <= e, err, e, true});
    }

    ExpansionResult ex;
    bool have_ex = true;
    try {
        ex = solve_hierarchy(model, z, dps, 1);
    } catch (const std::exception&) {
        have_ex = false;
    }
    if (have_ex)
        out.push_back(close("R_bar = I/2", ex.R_bar, 0.5 * pauli::id(), e));
    else
        out.push_back({"R_bar = I/2", false, INFINITY, e});

    for (const double g : {2.0, 10.0}) {
        const Mat want = pauli_sum_1({{0, 0.5}, {1, -g * t / (4 * g * g + 2)}, {3, -t / (8 * g * g + 4)}});
        const SpectralSummary s = analyze_spectrum(z.L_P(g));
        const Mat got = s.steady_state ? *s.steady_state : Mat::Constant(2, 2, NAN);
        out.push_back(close("steady state of L_P at gamma = " + fmt(g), got, want, e));
        // null vector of the generator with D_P(I) = -2t sigma3
        Check c = close("steady state of L_P at gamma = " + fmt(g) + " with the factor-2 correction", got,
                        pauli_sum_1({{0, 0.5}, {1, -2 * g * t / (4 * g * g + 2)}, {3, -t / (4 * g * g + 2)}}), e);
        c.informational = true;
        out.push_back(c);
        const double r = std::sqrt(16 * g * g - 1);
        const std::vector<cplx> ev{0.0, -1.0 / g, cplx(-3, -r) / (2 * g), cplx(-3, r) / (2 * g)};
        const double d = spectrum_distance(s.eigenvalues, ev);
        out.push_back({"spectrum of L_P at gamma = " + fmt(g), d <= e, d, e});
    }

    // hierarchy against the printed closed forms
    const Mat n0_want = pauli_sum({{1, 2, -t / 4}, {2, 1, t / 4}, {0, 1, -t / 4}, {3, 1, t2 / 4}});
    const Mat n1_printed = pauli_sum({{1, 0, t / 8},
                                      {0, 1, -t / 8},
                                      {0, 2, -1.5 * t},
                                      {2, 0, -t2 / 4},
                                      {0, 3, t / 8},
                                      {3, 0, t / 4},
                                      {1, 1, -t / 2},
                                      {2, 2, -t / 2},
                                      {3, 3, -3 * t2 / 8},
                                      {2, 3, -t / 4},
                                      {3, 2, 1.5 * t2}});
    const Mat trB1 = pauli_sum_1({{1, t / 4}, {2, -t2 / 2}, {3, t / 2}});
    const Mat trA0 = pauli_sum_1({{1, -t / 2}});
    const Mat trA1 = pauli_sum_1({{1, -t / 4}, {2, -3 * t}, {3, t / 4}});
    if (have_ex) {
        out.push_back(close("n_0 closed form", ex.n_bar[0], n0_want, tol.n0));
        out.push_back(close("order-1 truncation: gamma^-1 coefficients", ex.n_bar[0], n0_want, e));
        out.push_back(close("order-1 truncation: gamma^-2 coefficients", ex.n_bar[1], n1_printed, e));
        const auto trB = [&](const Mat& x) { return ptrace_B(x, 2, 2); };
        const auto trA = [&](const Mat& x) { return ptrace_A(x, 2, 2); };
        out.push_back(close("Tr_B of truncation: gamma^-1 coefficient", trB(ex.n_bar[0]), Mat::Zero(2, 2), e));
        out.push_back(close("Tr_B of truncation: gamma^-2 coefficient", trB(ex.n_bar[1]), trB1, e));
        out.push_back(close("Tr_A of truncation: gamma^-1 coefficient", trA(ex.n_bar[0]), trA0, e));
        out.push_back(close("Tr_A of truncation: gamma^-2 coefficient", trA(ex.n_bar[1]), trA1, e));

        const BoundaryTest bt = boundary_reduced_state_test(model, ex);
        const double err = std::max(bt.commutator_norm, bt.trB_n0_norm);
        out.push_back({"[pi_A, K_A] = 0 and Tr_B n_0 = 0", bt.iff_holds && err <= e, err, e});

        // the exact rational series, for comparison with the printed one
        const double gbig = 1e3;
        const Mat exact = example1_exact_steady_state(beta, gbig);
        const Mat series = ex.truncated_state(gbig, 1);
        Check c = close("order-1 truncation vs exact rational state at gamma = 1e3 (scaled by gamma^3)",
                        gbig * gbig * gbig * (series - exact), Mat::Zero(4, 4), 5.0);
        c.informational = true;
        out.push_back(c);
        const Mat n1_exact = pauli_sum({{0, 2, -1.5 * t},
                                        {2, 0, -t2 / 4},
                                        {0, 3, t / 8},
                                        {3, 0, t / 4},
                                        {1, 1, -t / 2},
                                        {2, 2, -t / 2},
                                        {3, 3, -3 * t2 / 8},
                                        {2, 3, -t / 4},
                                        {3, 2, 1.5 * t2}});
        c = close("gamma^-2 coefficients vs exact rational series", ex.n_bar[1], n1_exact, e);
        c.informational = true;
        out.push_back(c);
    }

    for (const double g : {1.0, 10.0, 100.0}) {
        const SuperOperator l2 = z.K_P + (1.0 / g) * z.D_P + (1.0 / (g * g)) * z.B_P;
        const GksResult r = gks_conditional_cp_test(l2);
        out.push_back({"second-order projected generator not Lindblad at gamma = " + fmt(g),
                       r.min_projected_choi_eigenvalue < tol.negative_choi, r.min_projected_choi_eigenvalue,
                       tol.negative_choi});
    }
    return out;
}

}  // namespace zeno
