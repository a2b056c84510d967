#include "zeno/models.hpp"

#include <cmath>

namespace zeno {

Example1Params example1_params(double beta) {
    Example1Params p;
    p.beta = beta;
    p.t = std::tanh(beta / 2);
    p.c = std::sqrt((1 - p.t) / 2);
    p.s = std::sqrt((1 + p.t) / 2);
    return p;
}

Mat example1_HB(double beta) { return pauli::y() + std::tanh(beta / 2) * pauli::id(); }

Mat example1_a() { return 0.5 * (pauli::x() - I_unit * pauli::z()); }

CompositeModel example1(double beta, double gamma, const std::optional<Mat>& H_B) {
    const Example1Params p = example1_params(beta);
    const Mat sp = pauli::plus(), sm = pauli::minus();
    const Mat H_AB = kron(sm, sp) + kron(sp, sm);
    LindbladSpec da(SpaceTag::a(2, 2), {p.c * sp, p.s * sm}, Mat::Zero(2, 2));
    return make_model(2, 2, pauli::z(), H_AB, H_B ? *H_B : example1_HB(beta), da, gamma);
}

CompositeModel random_model(int d_A, int d_B, std::uint64_t seed, std::uint64_t stream, double gamma) {
    const std::uint64_t s0 = stream * 16;
    const Mat H_A = random_hermitian(d_A, seed, s0 + 1);
    const Mat H_B = random_hermitian(d_B, seed, s0 + 2);
    const Mat H_AB = random_hermitian(d_A * d_B, seed, s0 + 3);
    std::vector<Mat> jumps{random_complex(d_A, seed, s0 + 4) / std::sqrt(double(d_A)),
                           random_complex(d_A, seed, s0 + 5) / std::sqrt(double(d_A))};
    LindbladSpec da(SpaceTag::a(d_A, d_B), jumps, random_hermitian(d_A, seed, s0 + 6));
    return make_model(d_A, d_B, H_A, H_AB, H_B, da, gamma);
}

}  // namespace zeno
