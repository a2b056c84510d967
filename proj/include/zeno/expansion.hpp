#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zeno/zeno.hpp"

namespace zeno {

struct SubspaceBasis {
    int d = 0;
    std::vector<Mat> V_basis;  // orthonormal, spans ran K_P
    std::vector<Mat> W_basis;  // orthonormal, spans ker K_P ∩ traceless
    Mat coords;                // columns vec V_basis then vec W_basis
    Eigen::PartialPivLU<Mat> solver;  // of coords^dag [K_P V, D_P W]
    Mat inverse;
    double C_V = 0.0, C_W = 0.0;
    double max_basis_residual = 0.0;
};

struct SubspaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// rotation_seed != 0 applies a random unitary inside each subspace (different orthonormalization)
SubspaceBasis build_subspaces(const SuperOperator& K_P, const SuperOperator& D_P,
                              std::uint64_t rotation_seed = 0);

struct Decomposition {
    Mat V, W;
};

Decomposition decompose(const Mat& x, const SubspaceBasis& basis);

struct HierarchyError : std::runtime_error {
    int order;
    HierarchyError(const std::string& what, int k) : std::runtime_error(what), order(k) {}
};

struct ExpansionResult {
    int d_A = 0, d_B = 0;
    Mat pi_A;
    Mat R_bar;
    std::vector<Mat> n_bar;    // n_0..n_K
    std::vector<Mat> m_tilde;  // m_0..m_{K+1}
    std::vector<Mat> V_k;      // V_0..V_{K+1}
    std::vector<Mat> W_k;      // W_0..W_K
    std::vector<double> per_order_residuals;
    double rbar_w_component = 0.0;  // W part of -D_P R_bar, vanishes when solvable

    // pi_A ⊗ R_bar + sum_{k<=K} gamma^{-(k+1)} n_k
    Mat truncated_state(double gamma, int K) const;
};

ExpansionResult solve_hierarchy(const CompositeModel& model, const ZenoObjects& z,
                                const SuperOperator& d_p_sharp, int K, std::uint64_t rotation_seed = 0,
                                double residual_tol = 1e-8);

// null-space steady state of an ergodic generator
Mat exact_steady_state(const SuperOperator& L);

struct BoundaryTest {
    Mat K_A;
    double commutator_norm = 0.0;
    double trB_n0_norm = 0.0;
    bool iff_holds = false;
};

BoundaryTest boundary_reduced_state_test(const CompositeModel& model, const ExpansionResult& ex,
                                         double tol = 1e-9);

}  // namespace zeno
