#pragma once

#include "zeno/lindblad.hpp"

namespace zeno::testing {

inline Mat random_density(int d, std::uint64_t seed, std::uint64_t stream) {
    const Mat g = random_complex(d, seed, stream);
    const Mat r = g * g.adjoint();
    return r / r.trace().real();
}

inline LindbladSpec random_spec(SpaceTag s, std::uint64_t seed, std::uint64_t stream, int n_jumps = 2) {
    std::vector<Mat> jumps;
    for (int j = 0; j < n_jumps; ++j) jumps.push_back(random_complex(s.dim(), seed, 100 * stream + j));
    return LindbladSpec(s, jumps, random_hermitian(s.dim(), seed, 100 * stream + 99));
}

inline SuperOperator random_generator(SpaceTag s, std::uint64_t seed, std::uint64_t stream) {
    return build_dissipator(random_spec(s, seed, stream));
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace zeno::testing
