#include "zeno/davies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zeno {

namespace {

// greedy clustering of sorted values; returns cluster representatives (means)
std::vector<double> cluster(std::vector<double> v, double tol, std::vector<int>* label_of_sorted = nullptr) {
    std::sort(v.begin(), v.end());
    std::vector<double> reps;
    std::vector<int> counts;
    for (double x : v) {
        if (!reps.empty() && x - reps.back() <= tol) {
            // keep running mean
            reps.back() = (reps.back() * counts.back() + x) / (counts.back() + 1);
            ++counts.back();
        } else {
            reps.push_back(x);
            counts.push_back(1);
        }
        if (label_of_sorted) label_of_sorted->push_back(static_cast<int>(reps.size()) - 1);
    }
    return reps;
}

}  // namespace

int BohrDecomposition::freq_index(double w) const {
    int best = -1;
    double bd = INFINITY;
    for (size_t i = 0; i < frequencies.size(); ++i) {
        const double d = std::abs(frequencies[i] - w);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(i);
        }
    }
    return bd <= cluster_tol * 2 + 1e-300 ? best : -1;
}

BohrDecomposition bohr_decompose(const Mat& h_p, double cluster_tol) {
    if (max_abs(h_p - h_p.adjoint()) > 1e-10) throw std::invalid_argument("bohr_decompose needs a self-adjoint H_P");
    BohrDecomposition bd;
    const int d = static_cast<int>(h_p.rows());
    bd.cluster_tol = cluster_tol > 0 ? cluster_tol : 1e-8 * std::max(inf_norm(h_p), 1e-300);
    Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(h_p));
    const Eigen::VectorXd w = es.eigenvalues();  // ascending

    std::vector<double> ws(w.data(), w.data() + d);
    std::vector<int> lab;
    bd.eigenvalues = cluster(ws, bd.cluster_tol, &lab);
    bd.projections.assign(bd.eigenvalues.size(), Mat::Zero(d, d));
    for (int i = 0; i < d; ++i) {
        const Vec u = es.eigenvectors().col(i);
        bd.projections[lab[i]] += u * u.adjoint();
    }

    std::vector<double> diffs;
    for (double mu : bd.eigenvalues)
        for (double nu : bd.eigenvalues) diffs.push_back(mu - nu);
    bd.frequencies = cluster(diffs, bd.cluster_tol);

    if (bd.eigenvalues.size() < 2) {
        bd.degenerate = true;
        bd.b = 0.0;
        bd.warnings.push_back("H_P has a single eigenvalue: b undefined, averaging is the identity");
        return bd;
    }
    bd.b = INFINITY;
    for (size_t i = 1; i < bd.frequencies.size(); ++i) {
        const double g = bd.frequencies[i] - bd.frequencies[i - 1];
        bd.b = std::min(bd.b, g);
    }
    // near-resonant frequency differences that were not merged
    for (size_t i = 0; i < bd.frequencies.size(); ++i)
        for (size_t j = i + 1; j < bd.frequencies.size(); ++j) {
            const double g = bd.frequencies[j] - bd.frequencies[i];
            if (g > bd.cluster_tol && g < 10 * bd.cluster_tol) {
                std::ostringstream os;
                os << "frequencies " << bd.frequencies[i] << " and " << bd.frequencies[j]
                   << " are near-coincident (within 10x the clustering tolerance)";
                bd.warnings.push_back(os.str());
            }
        }
    for (size_t i = 1; i < bd.eigenvalues.size(); ++i) {
        const double g = bd.eigenvalues[i] - bd.eigenvalues[i - 1];
        if (g > bd.cluster_tol && g < 10 * bd.cluster_tol) bd.warnings.push_back("near-degenerate eigenvalues of H_P");
    }
    return bd;
}

Mat sharp_operator(const Mat& x, const BohrDecomposition& bohr) {
    Mat out = Mat::Zero(x.rows(), x.cols());
    for (const auto& p : bohr.projections) out += p * x * p;
    return out;
}

SuperOperator sharp_superop(const SuperOperator& t, const BohrDecomposition& bohr) {
    if (!t.square()) throw DimensionError("sharp_superop needs a square superoperator");
    const int n = static_cast<int>(bohr.eigenvalues.size());
    // Q_{mu nu} X = P_mu X P_nu
    std::vector<Mat> Q(n * n);
    std::vector<double> freq(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Q[a * n + b] = sandwich(bohr.projections[a], bohr.projections[b]);
            freq[a * n + b] = bohr.eigenvalues[b] - bohr.eigenvalues[a];
        }
    Mat out = Mat::Zero(t.m.rows(), t.m.cols());
    for (int i = 0; i < n * n; ++i)
        for (int j = 0; j < n * n; ++j)
            if (std::abs(freq[i] - freq[j]) <= bohr.cluster_tol) out += Q[i] * t.m * Q[j];
    return {t.domain, t.codomain, out};
}

LindbladSpec sharp_lindblad_form(const LindbladSpec& dp, const BohrDecomposition& bohr,
                                 std::vector<SharpJump>* labels) {
    const int n = static_cast<int>(bohr.eigenvalues.size());
    std::vector<Mat> jumps;
    if (labels) labels->clear();
    for (size_t j = 0; j < dp.jumps.size(); ++j) {
        for (double w : bohr.frequencies) {
            Mat z = Mat::Zero(dp.jumps[j].rows(), dp.jumps[j].cols());
            for (int mu = 0; mu < n; ++mu)
                for (int mp = 0; mp < n; ++mp)
                    if (std::abs((bohr.eigenvalues[mu] - bohr.eigenvalues[mp]) - w) <= bohr.cluster_tol)
                        z += bohr.projections[mp] * dp.jumps[j] * bohr.projections[mu];
            if (max_abs(z) <= 1e-14 * std::max(1.0, max_abs(dp.jumps[j]))) continue;
            jumps.push_back(z);
            if (labels) labels->push_back({static_cast<int>(j), w, z});
        }
    }
    return LindbladSpec(dp.space, jumps, herm_part(sharp_operator(dp.hamiltonian_part, bohr)));
}

}  // namespace zeno
