#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeno/zeno.hpp"

namespace zeno {

// states at the requested times, stepping with expm on the increments
std::vector<Mat> propagate(const SuperOperator& l, const Mat& rho0, const std::vector<double>& times);

enum class TheoremTag { TZCVS, EULLIM, COHERENTSC, MTILRM, MTILRMEUL, PROJMOZLTH, PROJMOZLTHA };

std::string to_string(TheoremTag tag);
std::optional<TheoremTag> parse_theorem_tag(const std::string& s);
const std::vector<TheoremTag>& all_theorem_tags();

struct ScanOptions {
    int n_states = 32;  // random pure states; the maximally mixed state is always added
    int n_times = 64;
    std::uint64_t seed = 7;
    double T = -1.0;    // <= 0 picks the per-theorem default
    Exec exec = Exec::Parallel;
};

struct TrajectoryGapReport {
    TheoremTag tag = TheoremTag::TZCVS;
    double T = 0.0;
    std::vector<double> gammas;
    std::vector<std::vector<double>> time_grid;  // per gamma (tau for the PROJMOZLTH family)
    std::vector<std::vector<double>> gaps;       // per gamma, per time
    std::vector<double> sup_gap;                 // per gamma
    std::string fit_abscissa;                    // "gamma" or "log(1+gamma)/gamma"
    double fitted_rate = 0.0;                    // slope of log(sup_gap)
    double intercept = 0.0;
    double r_squared = 0.0;
};

double default_horizon(TheoremTag tag);

// window of times for one gamma: 64 geometric points
std::vector<double> theorem_time_grid(TheoremTag tag, double gamma, double a, double T, int n);

TrajectoryGapReport theorem_gap_scan(const CompositeModel& model, const ZenoObjects& z,
                                     const SuperOperator& d_p_sharp, TheoremTag tag,
                                     const std::vector<double>& gamma_grid, const ScanOptions& opt = {});

struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct MixingOptions {
    int restarts = 12;
    double ascent_tol = 1e-12;
    int max_iter = 400;
    double rel_resolution = 1e-3;
    double t_max = -1.0;  // <= 0: 1e4 / max(gap, 1e-6)
    std::uint64_t seed = 99;
    Exec exec = Exec::Parallel;
};

struct TvWitness {
    double value = 0.0;
    Mat rho0, rho1;
};

// sup over pure-state pairs of (1/2)||E(rho0 - rho1)||_1
TvWitness tv_sup(const SuperOperator& e, const MixingOptions& opt = {});

struct MixingReport {
    double epsilon = 0.0;
    double t_mix = 0.0;
    bool infinite = false;
    double t_max = 0.0;
    double sup_at_t_mix = 0.0;
    Mat rho0, rho1;  // witness pair at t_mix
    std::string method = "bisection";
    int evaluations = 0;
};

MixingReport mixing_time(const SuperOperator& l, double epsilon, const MixingOptions& opt = {});

struct DecayRow {
    int k = 0;
    double d_tv = 0.0;
    double bound = 0.0;  // 2 (2 eps)^k
};

// sup d_TV at k * t_mix against 2(2eps)^k
std::vector<DecayRow> geometric_decay_check(const SuperOperator& l, const MixingReport& mix, int k_max,
                                            const MixingOptions& opt = {});

struct MixingRow {
    double gamma = 0.0;
    double tmix_L = 0.0, tmix_LP = 0.0;
    bool inf_L = false, inf_LP = false;
    double ratio_L = 0.0, ratio_LP = 0.0;  // t_mix / gamma
    double rel_L = 0.0, rel_LP = 0.0;      // |ratio - limit| / limit
};

struct MixingScan {
    double epsilon = 0.0;
    double tmix_sharp = 0.0;
    std::vector<MixingRow> rows;
};

MixingScan mixing_ratio_scan(const ZenoObjects& z, const SuperOperator& d_p_sharp, double epsilon,
                             const std::vector<double>& gamma_grid, const MixingOptions& opt = {});

}  // namespace zeno
