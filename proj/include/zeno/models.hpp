#pragma once

#include <cstdint>
#include <optional>

#include "zeno/zeno.hpp"

namespace zeno {

struct Example1Params {
    double beta = 1.0;
    double t = 0.0;  // tanh(beta/2)
    double c = 0.0;  // c^2 = (1 - t)/2
    double s = 0.0;  // s^2 = (1 + t)/2
};

Example1Params example1_params(double beta);

// Two qubits: H_A = sigma3, H_AB = sigma_- ⊗ sigma_+ + sigma_+ ⊗ sigma_-,
// H_B = sigma2 + tI unless overridden, D_A with jumps c sigma_+, s sigma_-.
// Basis convention |0> = (0,1)^T, |1> = (1,0)^T with standard Pauli matrices.
CompositeModel example1(double beta, double gamma = 1.0, const std::optional<Mat>& H_B = std::nullopt);

Mat example1_HB(double beta);

// a = (sigma1 - i sigma3)/2
Mat example1_a();

// Random ergodic model: Gaussian Hermitian H parts, two random jumps plus a random K_L on A.
CompositeModel random_model(int d_A, int d_B, std::uint64_t seed, std::uint64_t stream, double gamma = 1.0);

}  // namespace zeno
