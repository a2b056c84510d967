#include "zeno/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace zeno {

LindbladSpec::LindbladSpec(SpaceTag s, std::vector<Mat> js, Mat kl)
    : space(s), jumps(std::move(js)), hamiltonian_part(std::move(kl)) {
    const int d = s.dim();
    for (const auto& j : jumps)
        if (j.rows() != d || j.cols() != d) throw DimensionError("jump operator has wrong shape");
    if (hamiltonian_part.size() == 0) hamiltonian_part = Mat::Zero(d, d);
    if (hamiltonian_part.rows() != d || hamiltonian_part.cols() != d)
        throw DimensionError("hamiltonian part has wrong shape");
    if (max_abs(hamiltonian_part - hamiltonian_part.adjoint()) > 1e-12)
        throw std::invalid_argument("hamiltonian part of a dissipator must be self-adjoint");
}

SuperOperator build_dissipator(const LindbladSpec& spec) {
    const int d = spec.space.dim();
    const Mat id = Mat::Identity(d, d);
    if (max_abs(spec.hamiltonian_part - spec.hamiltonian_part.adjoint()) > 1e-12)
        throw std::invalid_argument("hamiltonian part of a dissipator must be self-adjoint");
    Mat m = commutator_superop(spec.space, spec.hamiltonian_part).m;
    for (const auto& L : spec.jumps) {
        const Mat LL = L.adjoint() * L;
        m += 2.0 * sandwich(L, L.adjoint()) - sandwich(LL, id) - sandwich(id, LL);
    }
    return {spec.space, spec.space, m};
}

Mat choi_matrix(const SuperOperator& t) {
    const int di = t.domain.dim(), dout = t.codomain.dim();
    Mat J = Mat::Zero(di * dout, di * dout);
    for (int j = 0; j < di; ++j)
        for (int i = 0; i < di; ++i) {
            // column i + di*j of the superoperator is vec T(E_ij)
            Mat img = unvec(t.m.col(i + di * j), dout);
            J.block(i * dout, j * dout, dout, dout) = img;
        }
    return J;
}

namespace {

double min_herm_eig(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

// distance of X -> T(X^dag)^dag from T, entrywise
double hermiticity_defect(const Mat& J) { return max_abs(J - J.adjoint()); }

}  // namespace

GksResult gks_conditional_cp_test(const SuperOperator& l, double tol) {
    if (!l.square()) throw DimensionError("GKS test needs a square superoperator");
    const int d = l.domain.dim();
    GksResult r;
    const Mat J = choi_matrix(l);
    r.is_hermiticity_preserving = hermiticity_defect(J) <= tol;
    const Vec tr = vec(Mat::Identity(d, d));
    r.is_trace_annihilating = (tr.adjoint() * l.m).cwiseAbs().maxCoeff() <= tol;
    Vec omega = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) omega(i * d + i) = 1.0;
    omega /= omega.norm();
    const Mat Pp = Mat::Identity(d * d, d * d) - omega * omega.adjoint();
    r.min_projected_choi_eigenvalue = min_herm_eig(Pp * J * Pp);
    r.is_lindblad = r.is_hermiticity_preserving && r.is_trace_annihilating &&
                    r.min_projected_choi_eigenvalue >= -tol;
    return r;
}

CptpResult cptp_check(const SuperOperator& map, double tol) {
    const int di = map.domain.dim(), dout = map.codomain.dim();
    CptpResult r;
    const Mat J = choi_matrix(map);
    r.min_choi_eigenvalue = min_herm_eig(J);
    r.is_cp = hermiticity_defect(J) <= tol && r.min_choi_eigenvalue >= -tol;
    const Vec tin = vec(Mat::Identity(di, di));
    const Vec tout = vec(Mat::Identity(dout, dout));
    const Eigen::RowVectorXcd defect = tout.adjoint() * map.m - tin.adjoint();
    r.is_tp = defect.cwiseAbs().maxCoeff() <= tol;
    return r;
}

SpectralSummary analyze_spectrum(const SuperOperator& l, double tol) {
    if (!l.square()) throw DimensionError("spectrum needs a square superoperator");
    SpectralSummary s;
    const int d = l.domain.dim();
    const double scale = std::max(inf_norm(l.m), 1e-300);
    s.cluster_tol = tol > 0 ? tol : 1e-8 * scale;

    Eigen::ComplexEigenSolver<Mat> es(l.m, false);
    const Vec ev = es.eigenvalues();
    double max_re = -std::numeric_limits<double>::infinity();
    bool any_nonzero = false;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const cplx z = ev(i);
        s.eigenvalues.push_back(z);
        if (std::abs(z.real()) < s.cluster_tol && std::abs(z.imag()) < s.cluster_tol) {
            ++s.zero_multiplicity;
            continue;
        }
        any_nonzero = true;
        max_re = std::max(max_re, z.real());
        if (std::abs(z.real()) < s.cluster_tol) s.has_imaginary_eigenvalues = true;
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    s.gap = any_nonzero ? std::max(0.0, -max_re) : 0.0;
    s.is_ergodic = s.zero_multiplicity == 1 && !s.has_imaginary_eigenvalues;
    if (!s.is_ergodic) {
        s.note = s.zero_multiplicity == 1 ? "purely imaginary eigenvalues present"
                                          : "zero eigenvalue has multiplicity " +
                                                std::to_string(s.zero_multiplicity);
        return s;
    }

    // null vector from the smallest singular direction
    Eigen::JacobiSVD<Mat> svd(l.m, Eigen::ComputeFullV);
    Mat x = unvec(svd.matrixV().col(d * d - 1), d);
    const cplx tr = x.trace();
    if (std::abs(tr) < 1e-12) {
        s.is_ergodic = false;
        s.note = "zero eigenvector has zero trace";
        return s;
    }
    x = herm_part(x / tr);
    Eigen::SelfAdjointEigenSolver<Mat> hs(x);
    Eigen::VectorXd w = hs.eigenvalues();
    if (w(0) < -1e-10) {
        s.is_ergodic = false;
        s.note = "steady-state candidate is not positive (min eigenvalue " + std::to_string(w(0)) + ")";
        return s;
    }
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w(i) < 0) w(i) = 0;
    x = hs.eigenvectors() * w.cast<cplx>().asDiagonal() * hs.eigenvectors().adjoint();
    x /= x.trace().real();
    s.steady_state = x;
    return s;
}

}  // namespace zeno
