#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeno/lindblad.hpp"

namespace zeno {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// H = H_A ⊗ I + H_AB + I ⊗ H_B, stored centered: Tr H = 0, Tr_A H_AB = Tr_B H_AB = 0.
// The supplied Hamiltonian is H + trace_shift * I.
struct CompositeModel {
    int d_A = 2;
    int d_B = 2;
    Mat H_A, H_AB, H_B;
    LindbladSpec dissipator_A;
    double gamma = 1.0;
    double trace_shift = 0.0;
    std::vector<std::string> adjustments;

    Mat H() const;
    SpaceTag ab() const { return SpaceTag::ab(d_A, d_B); }
    SpaceTag a() const { return SpaceTag::a(d_A, d_B); }
    SpaceTag b() const { return SpaceTag::b(d_A, d_B); }
};

// Validates shapes and self-adjointness, re-centers H, and checks that D_A is ergodic and gapped.
CompositeModel make_model(int d_A, int d_B, const Mat& H_A, const Mat& H_AB, const Mat& H_B,
                          const LindbladSpec& dissipator_A, double gamma);

struct Composite {
    SuperOperator K, D, L;
};

Composite build_composite(const CompositeModel& model);
Composite build_composite(const CompositeModel& model, double gamma);

struct Projectors {
    Mat pi_A;
    double gap_A = 0.0;
    SuperOperator D_A, P_A, Q_A, S_A;  // on A
    SuperOperator TrA, V;              // AB -> B, B -> AB
    SuperOperator P, Q, S;             // on AB
};

Projectors build_projectors(const CompositeModel& model);

struct ProjectedHamiltonian {
    Mat H_P;
    SuperOperator K_P;
};

ProjectedHamiltonian projected_hamiltonian(const CompositeModel& model, const Projectors& pr);

// -Tr_A K S K V
SuperOperator projected_dissipator(const SuperOperator& K, const Projectors& pr);

// Tr_A K (S K S K - S^2 K P K) V
SuperOperator second_order_corrector(const SuperOperator& K, const Projectors& pr);

struct ExtractionUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DpLindbladForm {
    std::vector<cplx> lambda;   // D_A eigenvalues, lambda[0] = 0
    std::vector<Mat> Y, X, G;   // eigenbasis, dual basis, H = sum X_j ⊗ G_j
    Mat M, A_mat, B_mat;        // indices 1..n_A
    Eigen::VectorXd A_eigenvalues;
    LindbladSpec spec;          // jumps V_l and H_L on B
    double basis_condition = 0.0;
    double rebuild_error = 0.0;
};

DpLindbladForm extract_dp_lindblad_form(const CompositeModel& model, const Projectors& pr,
                                        const SuperOperator& D_P);

struct ZenoObjects {
    Projectors proj;
    SuperOperator K, D;
    Mat H_P;
    SuperOperator K_P, D_P, B_P;
    std::optional<DpLindbladForm> dp_lindblad;
    std::string extraction_note;

    SuperOperator L_P(double gamma) const;  // K_P + D_P / gamma
};

ZenoObjects reduce(const CompositeModel& model);

// GNS inner product Tr[X^dag Y pi]
cplx gns(const Mat& x, const Mat& y, const Mat& pi);

}  // namespace zeno
