#include "zeno/tensor.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zeno {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

SpaceTag::SpaceTag(Space w, int dA, int dB) : which(w), dim_A(dA), dim_B(dB) {
    if (dA < 1 || dB < 1) throw DimensionError("space dimensions must be >= 1");
}

int SpaceTag::dim() const {
    switch (which) {
        case Space::A: return dim_A;
        case Space::B: return dim_B;
        default: return dim_A * dim_B;
    }
}

std::string to_string(const SpaceTag& s) {
    const char* n = s.which == Space::A ? "A" : s.which == Space::B ? "B" : "AB";
    return std::string(n) + "(dA=" + std::to_string(s.dim_A) + ",dB=" + std::to_string(s.dim_B) + ")";
}

Operator::Operator(SpaceTag s, Mat entries) : space(s), m(std::move(entries)) {
    if (m.rows() != s.dim() || m.cols() != s.dim())
        throw DimensionError("operator shape does not match " + to_string(s));
}

SuperOperator::SuperOperator(SpaceTag dom, SpaceTag cod, Mat matrix)
    : domain(dom), codomain(cod), m(std::move(matrix)) {
    const int di = dom.dim(), dout = cod.dim();
    if (m.rows() != dout * dout || m.cols() != di * di)
        throw DimensionError("superoperator shape does not match " + to_string(dom) + " -> " +
                             to_string(cod));
}

Operator SuperOperator::operator()(const Operator& x) const {
    if (!(x.space == domain))
        throw DimensionError("operator on " + to_string(x.space) + " passed to map on " +
                             to_string(domain));
    return {codomain, apply(x.m)};
}

Mat SuperOperator::apply(const Mat& x) const {
    if (x.rows() != domain.dim() || x.cols() != domain.dim())
        throw DimensionError("operator shape does not match superoperator domain");
    return unvec(m * vec(x), codomain.dim());
}

SuperOperator SuperOperator::adjoint() const { return {codomain, domain, m.adjoint()}; }

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
    if (!(b.codomain == a.domain))
        throw DimensionError("composition mismatch: " + to_string(b.codomain) + " vs " +
                             to_string(a.domain));
    return {b.domain, a.codomain, a.m * b.m};
}

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
    if (!(a.domain == b.domain) || !(a.codomain == b.codomain))
        throw DimensionError("sum of superoperators on different spaces");
    return {a.domain, a.codomain, a.m + b.m};
}

SuperOperator operator-(const SuperOperator& a, const SuperOperator& b) {
    if (!(a.domain == b.domain) || !(a.codomain == b.codomain))
        throw DimensionError("difference of superoperators on different spaces");
    return {a.domain, a.codomain, a.m - b.m};
}

SuperOperator operator*(cplx s, const SuperOperator& a) { return {a.domain, a.codomain, s * a.m}; }
SuperOperator operator*(double s, const SuperOperator& a) { return {a.domain, a.codomain, s * a.m}; }

Vec vec(const Mat& x) { return Eigen::Map<const Vec>(x.data(), x.size()); }

Mat unvec(const Vec& v, int d) {
    if (v.size() != static_cast<Eigen::Index>(d) * d) throw DimensionError("unvec: length is not d*d");
    return Eigen::Map<const Mat>(v.data(), d, d);
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat sandwich(const Mat& A, const Mat& B) { return kron(B.transpose(), A); }

Operator tensor(const Operator& x, const Operator& y) {
    if (x.space.which != Space::A || y.space.which != Space::B)
        throw DimensionError("tensor expects an A operator and a B operator");
    if (x.space.dim_A != y.space.dim_A || x.space.dim_B != y.space.dim_B)
        throw DimensionError("tensor: inconsistent dimension tags");
    return {SpaceTag::ab(x.space.dim_A, x.space.dim_B), kron(x.m, y.m)};
}

Mat ptrace_A(const Mat& z, int dA, int dB) {
    if (z.rows() != dA * dB || z.cols() != dA * dB) throw DimensionError("ptrace_A: shape");
    Mat r = Mat::Zero(dB, dB);
    for (int a = 0; a < dA; ++a) r += z.block(a * dB, a * dB, dB, dB);
    return r;
}

Mat ptrace_B(const Mat& z, int dA, int dB) {
    if (z.rows() != dA * dB || z.cols() != dA * dB) throw DimensionError("ptrace_B: shape");
    Mat r(dA, dA);
    for (int a = 0; a < dA; ++a)
        for (int c = 0; c < dA; ++c) r(a, c) = z.block(a * dB, c * dB, dB, dB).trace();
    return r;
}

Operator partial_trace_A(const Operator& z) {
    if (z.space.which != Space::AB) throw DimensionError("partial_trace_A needs an AB operator");
    return {SpaceTag::b(z.space.dim_A, z.space.dim_B), ptrace_A(z.m, z.space.dim_A, z.space.dim_B)};
}

Operator partial_trace_B(const Operator& z) {
    if (z.space.which != Space::AB) throw DimensionError("partial_trace_B needs an AB operator");
    return {SpaceTag::a(z.space.dim_A, z.space.dim_B), ptrace_B(z.m, z.space.dim_A, z.space.dim_B)};
}

double trace_norm(const Mat& x) {
    if (x.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(x).singularValues().sum();
}

double op_norm(const Mat& x) {
    if (x.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(x).singularValues()(0);
}

double max_abs(const Mat& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

double inf_norm(const Mat& x) { return x.size() ? x.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

Mat dagger(const Mat& x) { return x.adjoint(); }

Mat herm_part(const Mat& x) { return 0.5 * (x + x.adjoint()); }

SuperOperator identity_superop(SpaceTag s) {
    const int n = s.dim() * s.dim();
    return {s, s, Mat::Identity(n, n)};
}

SuperOperator superop_from_map(SpaceTag dom, SpaceTag cod, const std::function<Mat(const Mat&)>& f) {
    const int di = dom.dim(), dout = cod.dim();
    Mat out(dout * dout, di * di);
    Mat e = Mat::Zero(di, di);
    for (int j = 0; j < di; ++j)
        for (int i = 0; i < di; ++i) {
            e(i, j) = 1.0;
            Mat y = f(e);
            if (y.rows() != dout || y.cols() != dout) throw DimensionError("map output has wrong shape");
            out.col(i + di * j) = vec(y);
            e(i, j) = 0.0;
        }
    return {dom, cod, out};
}

SuperOperator commutator_superop(SpaceTag s, const Mat& H) {
    const int d = s.dim();
    if (H.rows() != d || H.cols() != d) throw DimensionError("commutator: H shape");
    Mat id = Mat::Identity(d, d);
    return {s, s, -I_unit * (sandwich(H, id) - sandwich(id, H))};
}

SuperOperator partial_trace_A_superop(int dA, int dB) {
    const int d = dA * dB;
    Mat m = Mat::Zero(dB * dB, d * d);
    for (int a = 0; a < dA; ++a)
        for (int b = 0; b < dB; ++b)
            for (int b2 = 0; b2 < dB; ++b2) m(b + dB * b2, (a * dB + b) + d * (a * dB + b2)) = 1.0;
    return {SpaceTag::ab(dA, dB), SpaceTag::b(dA, dB), m};
}

SuperOperator embed_superop(const Mat& pi_A, int dB) {
    const int dA = static_cast<int>(pi_A.rows());
    const int d = dA * dB;
    Mat m = Mat::Zero(d * d, dB * dB);
    for (int a = 0; a < dA; ++a)
        for (int a2 = 0; a2 < dA; ++a2)
            for (int b = 0; b < dB; ++b)
                for (int b2 = 0; b2 < dB; ++b2)
                    m((a * dB + b) + d * (a2 * dB + b2), b + dB * b2) = pi_A(a, a2);
    return {SpaceTag::b(dA, dB), SpaceTag::ab(dA, dB), m};
}

SuperOperator ampliate_A(const SuperOperator& tA, int dB) {
    if (tA.domain.which != Space::A || tA.codomain.which != Space::A)
        throw DimensionError("ampliate_A expects a map on A");
    const int dA = tA.domain.dim_A;
    const int d = dA * dB;
    Mat m = Mat::Zero(d * d, d * d);
    for (int a = 0; a < dA; ++a)
        for (int a2 = 0; a2 < dA; ++a2)
            for (int c = 0; c < dA; ++c)
                for (int c2 = 0; c2 < dA; ++c2) {
                    const cplx v = tA.m(a + dA * a2, c + dA * c2);
                    if (v == cplx(0.0)) continue;
                    for (int b = 0; b < dB; ++b)
                        for (int b2 = 0; b2 < dB; ++b2)
                            m((a * dB + b) + d * (a2 * dB + b2), (c * dB + b) + d * (c2 * dB + b2)) = v;
                }
    SpaceTag s = SpaceTag::ab(dA, dB);
    return {s, s, m};
}

Mat expm(const Mat& m) { return m.exp(); }

SuperOperator expm(const SuperOperator& t, double s) {
    if (!t.square()) throw DimensionError("expm needs a square superoperator");
    if (s == 0.0) return identity_superop(t.domain);
    Mat e = (s * t.m).exp();
    return {t.domain, t.codomain, e};
}

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

struct RestartResult {
    double value = -1.0;
    Vec psi, phi;
};

RestartResult ascend(const Mat& T, const Mat& Tadj, int din, int dout, bool herm, Vec psi, Vec phi,
                     double tol, int max_iter) {
    RestartResult r;
    double prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        Mat x = herm ? Mat(psi * psi.adjoint()) : Mat(psi * phi.adjoint());
        Mat y = unvec(T * vec(x), dout);
        Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double val = svd.singularValues().sum();
        if (val > r.value) {
            r.value = val;
            r.psi = psi;
            r.phi = herm ? psi : phi;
        }
        if (val - prev <= tol * std::max(1.0, val)) break;
        prev = val;
        Mat u = svd.matrixU() * svd.matrixV().adjoint();
        Mat g = unvec(Tadj * vec(u), din);
        if (herm) {
            Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(g));
            psi = es.eigenvectors().col(din - 1);
        } else {
            Eigen::JacobiSVD<Mat> sg(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
            psi = sg.matrixU().col(0);
            phi = sg.matrixV().col(0);
        }
    }
    return r;
}

}  // namespace

Vec random_unit(int d, std::uint64_t seed, std::uint64_t stream) {
    auto rng = make_rng(seed, stream);
    std::normal_distribution<double> n(0.0, 1.0);
    Vec v(d);
    for (int i = 0; i < d; ++i) {
        const double re = n(rng);
        const double im = n(rng);
        v(i) = cplx(re, im);
    }
    return v / v.norm();
}

Mat random_pure_state(int d, std::uint64_t seed, std::uint64_t stream) {
    Vec v = random_unit(d, seed, stream);
    return v * v.adjoint();
}

Mat random_complex(int d, std::uint64_t seed, std::uint64_t stream) {
    auto rng = make_rng(seed, stream);
    std::normal_distribution<double> n(0.0, 1.0);
    Mat m(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const double re = n(rng);
            const double im = n(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

Mat random_hermitian(int d, std::uint64_t seed, std::uint64_t stream) {
    return herm_part(random_complex(d, seed, stream));
}

NormWitness superop_norm_1to1(const SuperOperator& t, bool hermitian_restricted, const NormOptions& opt) {
    const int din = t.domain.dim(), dout = t.codomain.dim();
    const Mat T = t.m;
    const Mat Tadj = t.m.adjoint();
    const int n = std::max(1, opt.restarts);
    std::vector<RestartResult> res(n);

#pragma omp parallel for schedule(static) if (opt.exec == Exec::Parallel)
    for (int r = 0; r < n; ++r) {
        Vec psi = random_unit(din, opt.seed, 2 * static_cast<std::uint64_t>(r));
        Vec phi = random_unit(din, opt.seed, 2 * static_cast<std::uint64_t>(r) + 1);
        res[r] = ascend(T, Tadj, din, dout, hermitian_restricted, psi, phi, opt.tol, opt.max_iter);
    }

    NormWitness w;
    w.restarts = n;
    int best = 0;
    for (int r = 1; r < n; ++r)
        if (res[r].value > res[best].value) best = r;
    w.value = res[best].value;
    w.psi = res[best].psi;
    w.phi = res[best].phi;
    for (const auto& r : res)
        if (r.value >= w.value - 1e-6 * std::max(1.0, w.value)) ++w.agreeing_restarts;
    return w;
}

namespace pauli {
Mat id() { return Mat::Identity(2, 2); }
Mat x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Mat y() {
    Mat m(2, 2);
    m << 0, -I_unit, I_unit, 0;
    return m;
}
Mat z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
Mat plus() { return 0.5 * (x() + I_unit * y()); }
Mat minus() { return 0.5 * (x() - I_unit * y()); }
}  // namespace pauli

}  // namespace zeno
