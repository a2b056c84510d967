#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "zeno/tensor.hpp"

namespace zeno {

// sum of c * sigma_i ⊗ sigma_j with sigma_0 = I
using PauliTerms = std::vector<std::tuple<int, int, double>>;
Mat pauli_sum(const PauliTerms& terms);
Mat pauli_sum_1(const std::vector<std::pair<int, double>>& terms);

// exact steady state of the two-qubit example as rational functions of gamma
Mat example1_exact_steady_state(double beta, double gamma);

struct Check {
    std::string name;
    bool pass = false;
    double error = 0.0;
    double tol = 0.0;
    bool informational = false;  // reported, not counted
};

struct ExampleTolerances {
    double exact = 1e-9;
    double n0 = 1e-10;
    double negative_choi = -1e-6;
};

// the fixture suite for the two-qubit example at inverse temperature beta
std::vector<Check> example1_checks(double beta, const ExampleTolerances& tol = {});

}  // namespace zeno
