#include "zeno/expansion.hpp"

#include <cmath>
#include <sstream>

namespace zeno {

namespace {

Mat random_unitary(int n, std::uint64_t seed) {
    Mat g = random_complex(n, seed, 0xB0B);
    Eigen::HouseholderQR<Mat> qr(g);
    return qr.householderQ() * Mat::Identity(n, n);
}

void columns_to_mats(const Mat& cols, int d, std::vector<Mat>& out) {
    out.clear();
    for (Eigen::Index j = 0; j < cols.cols(); ++j) out.push_back(unvec(cols.col(j), d));
}

}  // namespace

SubspaceBasis build_subspaces(const SuperOperator& K_P, const SuperOperator& D_P, std::uint64_t rotation_seed) {
    if (!K_P.square() || !(K_P.domain == D_P.domain) || !D_P.square())
        throw DimensionError("build_subspaces: K_P and D_P must be square on the same space");
    SubspaceBasis sb;
    const int d = K_P.domain.dim();
    const int n = d * d;
    sb.d = d;

    Eigen::JacobiSVD<Mat> svd(K_P.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (smax > 0 && s(i) > 1e-10 * smax) ++r;
    Mat Vb = svd.matrixU().leftCols(r);
    Mat ker = svd.matrixV().rightCols(n - r);

    const Vec e = vec(Mat::Identity(d, d)) / std::sqrt(double(d));
    Mat kt = ker - e * (e.adjoint() * ker);
    Eigen::JacobiSVD<Mat> ks(kt, Eigen::ComputeThinU);
    const auto kv = ks.singularValues();
    int rw = 0;
    for (Eigen::Index i = 0; i < kv.size(); ++i)
        if (kv(i) > 1e-10) ++rw;
    Mat Wb = ks.matrixU().leftCols(rw);

    if (r + rw + 1 != n) {
        std::ostringstream os;
        os << "dim(V) + dim(W) + 1 = " << r + rw + 1 << " != d^2 = " << n;
        throw SubspaceError(os.str());
    }
    if (rotation_seed != 0) {
        if (r > 0) Vb = Vb * random_unitary(r, rotation_seed);
        if (rw > 0) Wb = Wb * random_unitary(rw, rotation_seed + 1);
    }
    columns_to_mats(Vb, d, sb.V_basis);
    columns_to_mats(Wb, d, sb.W_basis);

    sb.coords.resize(n, n - 1);
    sb.coords << Vb, Wb;
    Mat image(n, n - 1);
    image << K_P.m * Vb, D_P.m * Wb;
    const Mat C = sb.coords.adjoint() * image;
    Eigen::JacobiSVD<Mat> cs(C);
    const auto cv = cs.singularValues();
    if (cv.size() && cv(cv.size() - 1) < 1e-12 * std::max(cv(0), 1e-300))
        throw SubspaceError("decomposition map is singular (D_P sharp is likely not ergodic)");
    sb.solver.compute(C);
    sb.inverse = sb.solver.inverse();
    const double sqd = std::sqrt(double(d));
    sb.C_V = r > 0 ? sqd * op_norm(sb.inverse.topRows(r)) : 0.0;
    sb.C_W = rw > 0 ? sqd * op_norm(sb.inverse.bottomRows(rw)) : 0.0;
    sb.max_basis_residual = max_abs(C * sb.inverse - Mat::Identity(n - 1, n - 1));
    return sb;
}

Decomposition decompose(const Mat& x, const SubspaceBasis& basis) {
    const int d = basis.d;
    if (x.rows() != d || x.cols() != d) throw DimensionError("decompose: wrong shape");
    if (std::abs(x.trace()) > 1e-10 * std::max(1.0, trace_norm(x)))
        throw std::invalid_argument("decompose needs a traceless operator");
    const Vec y = basis.coords.adjoint() * vec(x);
    const Vec c = basis.solver.solve(y);
    const int r = static_cast<int>(basis.V_basis.size());
    const int rw = static_cast<int>(basis.W_basis.size());
    Decomposition out;
    out.V = r ? unvec(basis.coords.leftCols(r) * c.head(r), d) : Mat::Zero(d, d);
    out.W = rw ? unvec(basis.coords.middleCols(r, rw) * c.tail(rw), d) : Mat::Zero(d, d);
    return out;
}

Mat ExpansionResult::truncated_state(double gamma, int K) const {
    if (K < 0 || K >= static_cast<int>(n_bar.size()))
        throw std::out_of_range("truncation order beyond the computed hierarchy");
    Mat rho = kron(pi_A, R_bar);
    double g = 1.0;
    for (int k = 0; k <= K; ++k) {
        g /= gamma;
        rho += g * n_bar[k];
    }
    return rho;
}

ExpansionResult solve_hierarchy(const CompositeModel& model, const ZenoObjects& z, const SuperOperator& d_p_sharp,
                                int K, std::uint64_t rotation_seed, double residual_tol) {
    if (K < 0) throw std::invalid_argument("order must be >= 0");
    const SpectralSummary ss = analyze_spectrum(d_p_sharp);
    if (!ss.is_ergodic || !ss.steady_state) throw HierarchyError("D_P sharp is not ergodic: " + ss.note, -1);
    if (ss.gap <= kGappedThreshold) throw HierarchyError("D_P sharp is not gapped", -1);

    ExpansionResult ex;
    ex.d_A = model.d_A;
    ex.d_B = model.d_B;
    ex.pi_A = z.proj.pi_A;
    ex.R_bar = *ss.steady_state;

    const SubspaceBasis basis = build_subspaces(z.K_P, z.D_P, rotation_seed);
    const int dA = model.d_A, dB = model.d_B, d = dA * dB;
    auto emb = [&](const Mat& x) { return kron(ex.pi_A, x); };
    const Mat SK = z.proj.S.m * z.K.m;
    const Mat TrKSK = z.proj.TrA.m * z.K.m * SK;
    auto apply = [d](const Mat& m, const Mat& x) { return unvec(m * vec(x), d); };

    const Decomposition d0 = decompose(-z.D_P.apply(ex.R_bar), basis);
    ex.rbar_w_component = trace_norm(d0.W);
    ex.V_k.push_back(d0.V);
    ex.m_tilde.push_back(-apply(SK, emb(ex.R_bar)) + emb(d0.V));

    Mat prev = emb(ex.R_bar);
    for (int k = 0; k <= K; ++k) {
        const Mat& mk = ex.m_tilde.back();
        const Mat F = unvec(TrKSK * vec(mk), dB);
        const Decomposition dk = decompose(F, basis);
        ex.W_k.push_back(dk.W);
        ex.V_k.push_back(dk.V);
        const Mat nk = mk + emb(dk.W);
        const double res = trace_norm(z.D.apply(nk) + z.K.apply(prev));
        ex.per_order_residuals.push_back(res);
        if (!(res < residual_tol)) {
            std::ostringstream os;
            os << "hierarchy residual " << res << " at order " << k;
            throw HierarchyError(os.str(), k);
        }
        if (std::abs(nk.trace()) > 1e-9 || max_abs(nk - nk.adjoint()) > 1e-9) {
            std::ostringstream os;
            os << "n_" << k << " is not traceless and self-adjoint";
            throw HierarchyError(os.str(), k);
        }
        ex.n_bar.push_back(nk);
        ex.m_tilde.push_back(-apply(SK, mk) - apply(SK, emb(dk.W)) + emb(dk.V));
        prev = nk;
    }
    return ex;
}

Mat exact_steady_state(const SuperOperator& L) {
    const SpectralSummary s = analyze_spectrum(L);
    if (!s.is_ergodic || !s.steady_state) throw std::runtime_error("generator is not ergodic: " + s.note);
    return *s.steady_state;
}

BoundaryTest boundary_reduced_state_test(const CompositeModel& model, const ExpansionResult& ex, double tol) {
    BoundaryTest bt;
    const Mat ia = Mat::Identity(model.d_A, model.d_A);
    bt.K_A = model.H_A + ptrace_B(kron(ia, ex.R_bar) * model.H_AB, model.d_A, model.d_B);
    bt.commutator_norm = trace_norm(ex.pi_A * bt.K_A - bt.K_A * ex.pi_A);
    if (ex.n_bar.empty()) throw std::invalid_argument("expansion has no n_0");
    bt.trB_n0_norm = trace_norm(ptrace_B(ex.n_bar[0], model.d_A, model.d_B));
    bt.iff_holds = (bt.commutator_norm <= tol) == (bt.trB_n0_norm <= tol);
    return bt;
}

}  // namespace zeno
