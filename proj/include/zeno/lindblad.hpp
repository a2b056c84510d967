#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zeno/tensor.hpp"

namespace zeno {

struct LindbladSpec {
    SpaceTag space;
    std::vector<Mat> jumps;
    Mat hamiltonian_part;  // K_L

    LindbladSpec() = default;
    LindbladSpec(SpaceTag s, std::vector<Mat> js, Mat kl);
};

// X -> sum_j (2 L X L^dag - L^dag L X - X L^dag L) - i[K_L, X]
SuperOperator build_dissipator(const LindbladSpec& spec);

// J = sum_ij E_ij ⊗ T(E_ij), size (d_in d_out)^2
Mat choi_matrix(const SuperOperator& t);

struct GksResult {
    bool is_hermiticity_preserving = false;
    bool is_trace_annihilating = false;
    double min_projected_choi_eigenvalue = 0.0;
    bool is_lindblad = false;
};

GksResult gks_conditional_cp_test(const SuperOperator& l, double tol = 1e-9);

struct CptpResult {
    bool is_cp = false;
    bool is_tp = false;
    double min_choi_eigenvalue = 0.0;
};

CptpResult cptp_check(const SuperOperator& map, double tol = 1e-9);

struct SpectralSummary {
    std::vector<cplx> eigenvalues;
    double gap = 0.0;
    int zero_multiplicity = 0;
    bool is_ergodic = false;
    bool has_imaginary_eigenvalues = false;
    std::optional<Mat> steady_state;
    double cluster_tol = 0.0;
    std::string note;  // why a steady state is absent, if it is
};

// tol <= 0 selects 1e-8 * ||L||_inf
SpectralSummary analyze_spectrum(const SuperOperator& l, double tol = -1.0);

inline constexpr double kGappedThreshold = 1e-6;

}  // namespace zeno
