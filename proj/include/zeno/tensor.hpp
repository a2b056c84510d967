#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "zeno/exec.hpp"

namespace zeno {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I_unit{0.0, 1.0};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Space { A, B, AB };

struct SpaceTag {
    Space which = Space::AB;
    int dim_A = 1;
    int dim_B = 1;

    SpaceTag() = default;
    SpaceTag(Space w, int dA, int dB);

    int dim() const;
    bool operator==(const SpaceTag&) const = default;

    static SpaceTag a(int dA, int dB) { return {Space::A, dA, dB}; }
    static SpaceTag b(int dA, int dB) { return {Space::B, dA, dB}; }
    static SpaceTag ab(int dA, int dB) { return {Space::AB, dA, dB}; }
};

std::string to_string(const SpaceTag&);

struct Operator {
    SpaceTag space;
    Mat m;

    Operator() = default;
    Operator(SpaceTag s, Mat entries);
};

struct SuperOperator {
    SpaceTag domain;
    SpaceTag codomain;
    Mat m;

    SuperOperator() = default;
    SuperOperator(SpaceTag dom, SpaceTag cod, Mat matrix);

    Operator operator()(const Operator& x) const;
    Mat apply(const Mat& x) const;  // unchecked tag, checked shape
    SuperOperator adjoint() const;  // Hilbert-Schmidt adjoint
    bool square() const { return domain == codomain; }
};

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);  // composition a∘b
SuperOperator operator+(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator-(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator*(cplx s, const SuperOperator& a);
SuperOperator operator*(double s, const SuperOperator& a);

// column stacking
Vec vec(const Mat& x);
Mat unvec(const Vec& v, int d);

Mat kron(const Mat& a, const Mat& b);
// matrix of X -> A X B
Mat sandwich(const Mat& A, const Mat& B);

Operator tensor(const Operator& x, const Operator& y);
Operator partial_trace_A(const Operator& z);
Operator partial_trace_B(const Operator& z);
Mat ptrace_A(const Mat& z, int dA, int dB);
Mat ptrace_B(const Mat& z, int dA, int dB);

double trace_norm(const Mat& x);
inline double trace_norm(const Operator& x) { return trace_norm(x.m); }
double op_norm(const Mat& x);  // largest singular value
double max_abs(const Mat& x);
double inf_norm(const Mat& x);  // max absolute row sum
Mat dagger(const Mat& x);
Mat herm_part(const Mat& x);

SuperOperator identity_superop(SpaceTag s);
SuperOperator superop_from_map(SpaceTag dom, SpaceTag cod, const std::function<Mat(const Mat&)>& f);
SuperOperator commutator_superop(SpaceTag s, const Mat& H);  // X -> -i[H, X]
SuperOperator partial_trace_A_superop(int dA, int dB);
SuperOperator embed_superop(const Mat& pi_A, int dB);  // X -> pi_A ⊗ X
SuperOperator ampliate_A(const SuperOperator& tA, int dB);  // T ⊗ id_B

SuperOperator expm(const SuperOperator& t, double s);
Mat expm(const Mat& m);

struct NormOptions {
    int restarts = 64;
    double tol = 1e-9;
    int max_iter = 500;
    std::uint64_t seed = 12345;
    Exec exec = Exec::Parallel;
};

struct NormWitness {
    double value = 0.0;
    Vec psi, phi;  // maximizing rank-one input |psi><phi| (phi == psi when hermitian)
    int agreeing_restarts = 0;  // restarts landing within tol of the best
    int restarts = 0;
};

// lower-bound witness for ||T||_{1->1}; hermitian_restricted maximizes over |psi><psi|
NormWitness superop_norm_1to1(const SuperOperator& t, bool hermitian_restricted,
                              const NormOptions& opt = {});

Vec random_unit(int d, std::uint64_t seed, std::uint64_t stream);
Mat random_pure_state(int d, std::uint64_t seed, std::uint64_t stream);
Mat random_hermitian(int d, std::uint64_t seed, std::uint64_t stream);
Mat random_complex(int d, std::uint64_t seed, std::uint64_t stream);

namespace pauli {
Mat id();
Mat x();
Mat y();
Mat z();
Mat plus();   // sigma_+ = (sigma1 + i sigma2)/2
Mat minus();  // sigma_- = (sigma1 - i sigma2)/2
}  // namespace pauli

}  // namespace zeno
