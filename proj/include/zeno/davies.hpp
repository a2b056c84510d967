#pragma once

#include <string>
#include <vector>

#include "zeno/lindblad.hpp"

namespace zeno {

struct BohrDecomposition {
    std::vector<double> eigenvalues;  // distinct, ascending
    std::vector<Mat> projections;     // P_mu
    std::vector<double> frequencies;  // distinct mu - nu, ascending
    double b = 0.0;                   // min gap between distinct frequencies
    bool degenerate = false;          // a single eigenvalue: b undefined
    double cluster_tol = 0.0;
    std::vector<std::string> warnings;

    // frequency index of mu_i - mu_j
    int freq_index(double w) const;
};

// cluster_tol <= 0 selects 1e-8 * ||H_P||_inf
BohrDecomposition bohr_decompose(const Mat& h_p, double cluster_tol = -1.0);

// pinching sum_mu P_mu X P_mu
Mat sharp_operator(const Mat& x, const BohrDecomposition& bohr);

// frequency-matched double sum of Q_{mu nu} T Q_{mu' nu'}
SuperOperator sharp_superop(const SuperOperator& t, const BohrDecomposition& bohr);

struct SharpJump {
    int source = 0;       // index of the jump in the input spec
    double omega = 0.0;
    Mat op;
};

// jumps V_{j,omega} = sum_{mu - mu' = omega} P_mu' V_j P_mu, pinched hamiltonian part
LindbladSpec sharp_lindblad_form(const LindbladSpec& dp, const BohrDecomposition& bohr,
                                 std::vector<SharpJump>* labels = nullptr);

}  // namespace zeno
