#include "zeno/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zeno {

Mat CompositeModel::H() const {
    const Mat ia = Mat::Identity(d_A, d_A), ib = Mat::Identity(d_B, d_B);
    return kron(H_A, ib) + H_AB + kron(ia, H_B);
}

namespace {

void require_shape(const Mat& m, int d, const char* name) {
    if (m.rows() != d || m.cols() != d) {
        std::ostringstream os;
        os << name << " must be " << d << "x" << d << ", got " << m.rows() << "x" << m.cols();
        throw ModelError(os.str());
    }
}

void require_hermitian(const Mat& m, const char* name) {
    const double dev = max_abs(m - m.adjoint());
    if (dev > 1e-10) {
        std::ostringstream os;
        os << name << " is not self-adjoint (deviation " << dev << ")";
        throw ModelError(os.str());
    }
}

}  // namespace

CompositeModel make_model(int d_A, int d_B, const Mat& H_A, const Mat& H_AB, const Mat& H_B,
                          const LindbladSpec& dissipator_A, double gamma) {
    if (d_A < 1 || d_B < 1) throw ModelError("dimensions must be >= 1");
    require_shape(H_A, d_A, "H_A");
    require_shape(H_B, d_B, "H_B");
    require_shape(H_AB, d_A * d_B, "H_AB");
    require_hermitian(H_A, "H_A");
    require_hermitian(H_B, "H_B");
    require_hermitian(H_AB, "H_AB");
    if (dissipator_A.space.which != Space::A || dissipator_A.space.dim() != d_A)
        throw ModelError("dissipator_A must act on the A space of dimension d_A");
    if (!(gamma >= 0) || !std::isfinite(gamma)) throw ModelError("gamma must be finite and >= 0");

    CompositeModel m;
    m.d_A = d_A;
    m.d_B = d_B;
    m.gamma = gamma;
    m.dissipator_A = LindbladSpec(SpaceTag::a(d_A, d_B), dissipator_A.jumps, dissipator_A.hamiltonian_part);

    const Mat ia = Mat::Identity(d_A, d_A), ib = Mat::Identity(d_B, d_B);
    const int d = d_A * d_B;
    Mat H = kron(H_A, ib) + H_AB + kron(ia, H_B);
    const double shift = H.trace().real() / d;
    Mat H0 = H - shift * Mat::Identity(d, d);
    m.H_A = herm_part(ptrace_B(H0, d_A, d_B) / double(d_B));
    m.H_B = herm_part(ptrace_A(H0, d_A, d_B) / double(d_A));
    m.H_AB = herm_part(H0 - kron(m.H_A, ib) - kron(ia, m.H_B));
    m.trace_shift = shift;
    if (std::abs(shift) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "Tr H = " << H.trace().real() << " != 0: subtracted " << shift << " * I";
        m.adjustments.push_back(os.str());
    }
    if (max_abs(m.H_A - H_A) > 1e-12 || max_abs(m.H_B - H_B) > 1e-12 || max_abs(m.H_AB - H_AB) > 1e-12)
        m.adjustments.push_back("re-split H into traceless H_A, H_B and H_AB with vanishing partial traces");

    const SuperOperator DA = build_dissipator(m.dissipator_A);
    const SpectralSummary sp = analyze_spectrum(DA);
    if (!sp.is_ergodic) throw ModelError("D_A is not ergodic: " + sp.note);
    if (sp.gap <= kGappedThreshold) {
        std::ostringstream os;
        os << "D_A is not gapped (gap " << sp.gap << ")";
        throw ModelError(os.str());
    }
    return m;
}

Composite build_composite(const CompositeModel& model) { return build_composite(model, model.gamma); }

Composite build_composite(const CompositeModel& model, double gamma) {
    Composite c;
    c.K = commutator_superop(model.ab(), model.H());
    c.D = ampliate_A(build_dissipator(model.dissipator_A), model.d_B);
    c.L = c.K + gamma * c.D;
    return c;
}

Projectors build_projectors(const CompositeModel& model) {
    Projectors pr;
    pr.D_A = build_dissipator(model.dissipator_A);
    const SpectralSummary sp = analyze_spectrum(pr.D_A);
    if (!sp.is_ergodic || !sp.steady_state) throw ModelError("D_A is not ergodic: " + sp.note);
    if (sp.gap <= kGappedThreshold) throw ModelError("D_A is not gapped");
    pr.gap_A = sp.gap;
    pr.pi_A = *sp.steady_state;

    const int dA = model.d_A, dB = model.d_B;
    const SpaceTag a = model.a();
    const Mat ia = Mat::Identity(dA, dA);
    // P_A X = pi_A Tr X
    pr.P_A = SuperOperator(a, a, vec(pr.pi_A) * vec(ia).adjoint());
    pr.Q_A = identity_superop(a) - pr.P_A;
    pr.S_A = SuperOperator(a, a, (pr.D_A.m - pr.P_A.m).partialPivLu().solve(pr.Q_A.m));

    pr.TrA = partial_trace_A_superop(dA, dB);
    pr.V = embed_superop(pr.pi_A, dB);
    pr.P = pr.V * pr.TrA;
    pr.Q = identity_superop(model.ab()) - pr.P;
    const SuperOperator D = ampliate_A(pr.D_A, dB);
    pr.S = SuperOperator(model.ab(), model.ab(), (D.m - pr.P.m).partialPivLu().solve(pr.Q.m));
    return pr;
}

ProjectedHamiltonian projected_hamiltonian(const CompositeModel& model, const Projectors& pr) {
    const Mat ib = Mat::Identity(model.d_B, model.d_B);
    // supplied Hamiltonian = centered H + trace_shift * I
    const Mat H = model.H() + model.trace_shift * Mat::Identity(model.d_A * model.d_B, model.d_A * model.d_B);
    Mat hp = ptrace_A(kron(pr.pi_A, ib) * H, model.d_A, model.d_B);
    const double dev = max_abs(hp - hp.adjoint());
    if (dev > 1e-10) throw ModelError("H_P is not self-adjoint (deviation " + std::to_string(dev) + ")");
    ProjectedHamiltonian out;
    out.H_P = herm_part(hp);
    out.K_P = commutator_superop(model.b(), out.H_P);
    return out;
}

SuperOperator projected_dissipator(const SuperOperator& K, const Projectors& pr) {
    return -1.0 * (pr.TrA * K * pr.S * K * pr.V);
}

SuperOperator second_order_corrector(const SuperOperator& K, const Projectors& pr) {
    const SuperOperator SK = pr.S * K;
    const SuperOperator inner = SK * SK - pr.S * SK * pr.P * K;
    return pr.TrA * K * inner * pr.V;
}

cplx gns(const Mat& x, const Mat& y, const Mat& pi) { return (x.adjoint() * y * pi).trace(); }

DpLindbladForm extract_dp_lindblad_form(const CompositeModel& model, const Projectors& pr,
                                        const SuperOperator& D_P) {
    const int dA = model.d_A, dB = model.d_B;
    const int nA = dA * dA;
    Eigen::ComplexEigenSolver<Mat> es(pr.D_A.m);
    Vec lam = es.eigenvalues();
    Mat vecs = es.eigenvectors();
    int i0 = 0;
    for (int i = 1; i < nA; ++i)
        if (std::abs(lam(i)) < std::abs(lam(i0))) i0 = i;

    DpLindbladForm f;
    Mat Ymat(nA, nA);
    std::vector<int> order{i0};
    for (int i = 0; i < nA; ++i)
        if (i != i0) order.push_back(i);
    for (int j = 0; j < nA; ++j) {
        const int i = order[j];
        f.lambda.push_back(j == 0 ? cplx(0.0) : lam(i));
        Ymat.col(j) = j == 0 ? vec(pr.pi_A) : Vec(vecs.col(i));
    }
    Eigen::JacobiSVD<Mat> ysvd(Ymat);
    const auto sv = ysvd.singularValues();
    f.basis_condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!(f.basis_condition < 1e8)) {
        std::ostringstream os;
        os << "D_A eigenbasis is ill-conditioned or defective (condition " << f.basis_condition << ")";
        throw ExtractionUnavailable(os.str());
    }
    const Mat Xmat = Ymat.inverse().adjoint();
    const Mat ib = Mat::Identity(dB, dB);
    const Mat H = model.H();
    for (int j = 0; j < nA; ++j) {
        f.Y.push_back(unvec(Ymat.col(j), dA));
        f.X.push_back(unvec(Xmat.col(j), dA));
        f.G.push_back(ptrace_A(kron(f.Y.back().adjoint(), ib) * H, dA, dB));
    }

    const int n = nA - 1;
    f.M = Mat::Zero(n, n);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) f.M(j - 1, k - 1) = -gns(f.X[k], f.X[j], pr.pi_A) / f.lambda[k];
    f.A_mat = herm_part(f.M);
    f.B_mat = (f.M - f.M.adjoint()) / (2.0 * I_unit);

    Eigen::SelfAdjointEigenSolver<Mat> as(f.A_mat);
    f.A_eigenvalues = as.eigenvalues();
    if (n > 0 && f.A_eigenvalues(0) < -1e-8) {
        std::ostringstream os;
        os << "A matrix has eigenvalue " << f.A_eigenvalues(0) << " < -1e-8";
        throw std::logic_error(os.str());
    }
    std::vector<Mat> jumps;
    const double mu_floor = 1e-12 * std::max(1.0, n > 0 ? f.A_eigenvalues(n - 1) : 0.0);
    for (int l = 0; l < n; ++l) {
        const double mu = f.A_eigenvalues(l);
        if (mu <= mu_floor) continue;  // clipped or round-off
        Mat V = Mat::Zero(dB, dB);
        for (int j = 0; j < n; ++j) V += as.eigenvectors()(j, l) * f.G[j + 1];
        // a jump proportional to I contributes nothing
        const Mat traceless = V - (V.trace() / double(dB)) * Mat::Identity(dB, dB);
        if (max_abs(traceless) <= 1e-12 * std::max(1.0, max_abs(V))) continue;
        jumps.push_back(std::sqrt(mu) * V);
    }
    Mat HL = Mat::Zero(dB, dB);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) HL += f.B_mat(j, k) * f.G[k + 1].adjoint() * f.G[j + 1];
    f.spec = LindbladSpec(model.b(), jumps, herm_part(HL));
    f.rebuild_error = max_abs(build_dissipator(f.spec).m - D_P.m);
    return f;
}

SuperOperator ZenoObjects::L_P(double gamma) const { return K_P + (1.0 / gamma) * D_P; }

ZenoObjects reduce(const CompositeModel& model) {
    ZenoObjects z;
    z.proj = build_projectors(model);
    const Composite c = build_composite(model);
    z.K = c.K;
    z.D = c.D;
    const ProjectedHamiltonian ph = projected_hamiltonian(model, z.proj);
    z.H_P = ph.H_P;
    z.K_P = ph.K_P;
    z.D_P = projected_dissipator(z.K, z.proj);
    z.B_P = second_order_corrector(z.K, z.proj);
    try {
        z.dp_lindblad = extract_dp_lindblad_form(model, z.proj, z.D_P);
    } catch (const ExtractionUnavailable& e) {
        z.extraction_note = e.what();
    }
    return z;
}

}  // namespace zeno
