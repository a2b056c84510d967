#include "zeno/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zeno/lindblad.hpp"

namespace zeno {

std::vector<Mat> propagate(const SuperOperator& l, const Mat& rho0, const std::vector<double>& times) {
    if (!l.square()) throw DimensionError("propagate needs a square generator");
    std::vector<Mat> out;
    out.reserve(times.size());
    Vec v = vec(rho0);
    double t_prev = 0.0;
    const int d = l.domain.dim();
    for (double t : times) {
        if (t < t_prev) throw std::invalid_argument("propagate: times must be non-decreasing and >= 0");
        if (t > t_prev) v = expm(l, t - t_prev).m * v;
        t_prev = t;
        out.push_back(unvec(v, d));
    }
    return out;
}

std::string to_string(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::TZCVS: return "TZCVS";
        case TheoremTag::EULLIM: return "EULLIM";
        case TheoremTag::COHERENTSC: return "COHERENTSC";
        case TheoremTag::MTILRM: return "MTILRM";
        case TheoremTag::MTILRMEUL: return "MTILRMEUL";
        case TheoremTag::PROJMOZLTH: return "PROJMOZLTH";
        case TheoremTag::PROJMOZLTHA: return "PROJMOZLTHA";
    }
    return "?";
}

const std::vector<TheoremTag>& all_theorem_tags() {
    static const std::vector<TheoremTag> tags{TheoremTag::TZCVS,     TheoremTag::EULLIM,     TheoremTag::COHERENTSC,
                                              TheoremTag::MTILRM,    TheoremTag::MTILRMEUL,  TheoremTag::PROJMOZLTH,
                                              TheoremTag::PROJMOZLTHA};
    return tags;
}

std::optional<TheoremTag> parse_theorem_tag(const std::string& s) {
    for (TheoremTag t : all_theorem_tags())
        if (to_string(t) == s) return t;
    return std::nullopt;
}

double default_horizon(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::COHERENTSC: return 5.0;
        case TheoremTag::PROJMOZLTH:
        case TheoremTag::PROJMOZLTHA: return 2.0;
        default: return 1.0;
    }
}

namespace {

std::vector<double> geomspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = hi;
        return g;
    }
    const double r = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(r * i);
    g.back() = hi;
    return g;
}

}  // namespace

std::vector<double> theorem_time_grid(TheoremTag tag, double gamma, double a, double T, int n) {
    const double tg = gamma > 1 ? 2 * std::log(gamma) / (a * gamma) : 0.0;
    double lo = tg / 4, hi = 0.0;
    switch (tag) {
        case TheoremTag::TZCVS: hi = std::max(10 / a, gamma * T); break;
        case TheoremTag::EULLIM: lo = tg; hi = std::max(10 / a, gamma * T); break;
        case TheoremTag::COHERENTSC: hi = T; break;
        case TheoremTag::MTILRM: lo = tg; hi = gamma * T; break;
        case TheoremTag::MTILRMEUL: lo = tg; hi = T; break;
        case TheoremTag::PROJMOZLTH:
        case TheoremTag::PROJMOZLTHA: hi = T; break;
    }
    if (!(lo > 0) || lo >= hi) lo = hi / 100;
    return geomspace(lo, hi, std::max(1, n));
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs matching samples");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ssr += r * r;
    }
    f.r_squared = syy > 0 ? 1 - ssr / syy : 1.0;
    return f;
}

TrajectoryGapReport theorem_gap_scan(const CompositeModel& model, const ZenoObjects& z,
                                     const SuperOperator& d_p_sharp, TheoremTag tag,
                                     const std::vector<double>& gamma_grid, const ScanOptions& opt) {
    if (gamma_grid.size() < 3) throw std::invalid_argument("theorem_gap_scan needs at least 3 gamma points");
    TrajectoryGapReport rep;
    rep.tag = tag;
    rep.T = opt.T > 0 ? opt.T : default_horizon(tag);
    rep.gammas = gamma_grid;
    const double a = z.proj.gap_A;
    const int dA = model.d_A, dB = model.d_B, d = dA * dB;

    std::vector<Mat> states_ab, states_b;
    for (int i = 0; i < opt.n_states; ++i) states_ab.push_back(random_pure_state(d, opt.seed, i));
    states_ab.push_back(Mat::Identity(d, d) / double(d));
    for (const auto& s : states_ab) states_b.push_back(ptrace_A(s, dA, dB));

    const bool on_b = tag == TheoremTag::COHERENTSC || tag == TheoremTag::PROJMOZLTH ||
                      tag == TheoremTag::PROJMOZLTHA;
    const auto& inputs = on_b ? states_b : states_ab;
    const int dout = on_b ? dB : d;
    const SpaceTag space = on_b ? model.b() : model.ab();

    for (double g : gamma_grid) {
        const std::vector<double> grid = theorem_time_grid(tag, g, a, rep.T, opt.n_times);
        const SuperOperator L = z.K + g * z.D;
        const SuperOperator LP = z.L_P(g);
        auto map_at = [&](double t) -> Mat {
            switch (tag) {
                case TheoremTag::TZCVS: return z.proj.Q.m * expm(L, t).m * z.proj.P.m;
                case TheoremTag::EULLIM: return expm(L, t).m * z.proj.Q.m;
                case TheoremTag::COHERENTSC: return z.proj.TrA.m * expm(L, t).m * z.proj.V.m - expm(LP, t).m;
                case TheoremTag::MTILRM: return expm(L, t).m - z.proj.V.m * expm(LP, t).m * z.proj.TrA.m;
                case TheoremTag::MTILRMEUL: return expm(L, t).m - z.proj.V.m * expm(z.K_P, t).m * z.proj.TrA.m;
                case TheoremTag::PROJMOZLTH: return expm(z.K_P, -g * t).m * expm(LP, g * t).m - expm(d_p_sharp, t).m;
                case TheoremTag::PROJMOZLTHA:
                    return expm(z.K_P, -g * t).m * z.proj.TrA.m * expm(L, g * t).m * z.proj.V.m -
                           expm(d_p_sharp, t).m;
            }
            return {};
        };
        std::vector<double> gaps(grid.size(), 0.0);
        const int n = static_cast<int>(grid.size());

#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
        for (int i = 0; i < n; ++i) {
            const Mat M = map_at(grid[i]);
            double best = 0.0;
            for (const auto& x : inputs) best = std::max(best, trace_norm(unvec(M * vec(x), dout)));
            gaps[i] = best;
        }
        // refine the best sampled time over all pure inputs
        const auto it = std::max_element(gaps.begin(), gaps.end());
        {
            const SuperOperator M(space, space, map_at(grid[it - gaps.begin()]));
            NormOptions no;
            no.restarts = 8;
            no.seed = opt.seed + 1;
            no.exec = opt.exec;
            *it = std::max(*it, superop_norm_1to1(M, true, no).value);
        }
        rep.time_grid.push_back(grid);
        rep.sup_gap.push_back(*std::max_element(gaps.begin(), gaps.end()));
        rep.gaps.push_back(std::move(gaps));
    }

    std::vector<double> xs, ys;
    const bool eul = tag == TheoremTag::EULLIM;
    rep.fit_abscissa = eul ? "log(1+gamma)/gamma" : "gamma";
    for (size_t i = 0; i < gamma_grid.size(); ++i) {
        const double g = gamma_grid[i];
        xs.push_back(eul ? std::log(std::log1p(g) / g) : std::log(g));
        ys.push_back(std::log(std::max(rep.sup_gap[i], 1e-300)));
    }
    const LineFit f = fit_line(xs, ys);
    rep.fitted_rate = f.slope;
    rep.intercept = f.intercept;
    rep.r_squared = f.r_squared;
    return rep;
}

namespace {

struct Ascent {
    double value = -1.0;
    Vec psi, phi;
};

Ascent tv_ascend(const Mat& E, const Mat& Eadj, int din, int dout, Vec psi, Vec phi, double tol, int max_iter) {
    Ascent best;
    double prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Mat x = psi * psi.adjoint() - phi * phi.adjoint();
        const Mat y = unvec(E * vec(x), dout);
        Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double val = 0.5 * svd.singularValues().sum();
        if (val > best.value) {
            best.value = val;
            best.psi = psi;
            best.phi = phi;
        }
        if (val - prev <= tol) break;
        prev = val;
        const Mat u = svd.matrixU() * svd.matrixV().adjoint();
        const Mat g = unvec(Eadj * vec(u), din);
        Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(g));
        psi = es.eigenvectors().col(din - 1);
        phi = es.eigenvectors().col(0);
    }
    return best;
}

}  // namespace

TvWitness tv_sup(const SuperOperator& e, const MixingOptions& opt) {
    const int din = e.domain.dim(), dout = e.codomain.dim();
    const Mat E = e.m, Eadj = e.m.adjoint();
    const int n = std::max(1, opt.restarts);
    std::vector<Ascent> res(n);

#pragma omp parallel for schedule(static) if (opt.exec == Exec::Parallel)
    for (int r = 0; r < n; ++r) {
        Vec psi, phi;
        if (r == 0) {
            // one deterministic start from a pair of orthogonal basis states
            psi = Vec::Unit(din, 0);
            phi = Vec::Unit(din, din > 1 ? din - 1 : 0);
        } else {
            psi = random_unit(din, opt.seed, 2 * static_cast<std::uint64_t>(r));
            phi = random_unit(din, opt.seed, 2 * static_cast<std::uint64_t>(r) + 1);
        }
        res[r] = tv_ascend(E, Eadj, din, dout, psi, phi, opt.ascent_tol, opt.max_iter);
    }
    int best = 0;
    for (int r = 1; r < n; ++r)
        if (res[r].value > res[best].value) best = r;
    TvWitness w;
    w.value = res[best].value;
    w.rho0 = res[best].psi * res[best].psi.adjoint();
    w.rho1 = res[best].phi * res[best].phi.adjoint();
    return w;
}

MixingReport mixing_time(const SuperOperator& l, double epsilon, const MixingOptions& opt) {
    if (!(epsilon > 0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    MixingReport rep;
    rep.epsilon = epsilon;
    const SpectralSummary sp = analyze_spectrum(l);
    const double gap = std::max(sp.gap, kGappedThreshold);
    rep.t_max = opt.t_max > 0 ? opt.t_max : 1e4 / gap;

    auto eval = [&](double t) {
        ++rep.evaluations;
        return tv_sup(expm(l, t), opt);
    };

    // bracket: sup(lo) >= eps > sup(hi)
    double lo = 0.0;
    double hi = std::min(rep.t_max, 1.0 / gap);
    TvWitness whi = eval(hi);
    while (whi.value >= epsilon) {
        if (hi >= rep.t_max) {
            rep.infinite = true;
            rep.t_mix = INFINITY;
            rep.sup_at_t_mix = whi.value;
            rep.rho0 = whi.rho0;
            rep.rho1 = whi.rho1;
            return rep;
        }
        lo = hi;
        hi = std::min(rep.t_max, 2 * hi);
        whi = eval(hi);
    }
    while (hi - lo > opt.rel_resolution * hi) {
        const double mid = 0.5 * (lo + hi);
        TvWitness w = eval(mid);
        if (w.value < epsilon) {
            hi = mid;
            whi = std::move(w);
        } else {
            lo = mid;
        }
    }
    rep.t_mix = hi;
    rep.sup_at_t_mix = whi.value;
    rep.rho0 = whi.rho0;
    rep.rho1 = whi.rho1;
    return rep;
}

std::vector<DecayRow> geometric_decay_check(const SuperOperator& l, const MixingReport& mix, int k_max,
                                            const MixingOptions& opt) {
    if (mix.infinite) throw std::invalid_argument("geometric decay check needs a finite mixing time");
    std::vector<DecayRow> rows;
    for (int k = 1; k <= k_max; ++k) {
        DecayRow r;
        r.k = k;
        r.d_tv = tv_sup(expm(l, k * mix.t_mix), opt).value;
        r.bound = 2 * std::pow(2 * mix.epsilon, k);
        rows.push_back(r);
    }
    return rows;
}

MixingScan mixing_ratio_scan(const ZenoObjects& z, const SuperOperator& d_p_sharp, double epsilon,
                             const std::vector<double>& gamma_grid, const MixingOptions& opt) {
    MixingScan scan;
    scan.epsilon = epsilon;
    const MixingReport ms = mixing_time(d_p_sharp, epsilon, opt);
    if (ms.infinite) throw std::runtime_error("D_P sharp does not mix: hypothesis of the limit theorem fails");
    scan.tmix_sharp = ms.t_mix;
    for (double g : gamma_grid) {
        MixingRow row;
        row.gamma = g;
        const MixingReport a = mixing_time(z.K + g * z.D, epsilon, opt);
        const MixingReport b = mixing_time(z.L_P(g), epsilon, opt);
        row.inf_L = a.infinite;
        row.inf_LP = b.infinite;
        row.tmix_L = a.t_mix;
        row.tmix_LP = b.t_mix;
        row.ratio_L = a.t_mix / g;
        row.ratio_LP = b.t_mix / g;
        row.rel_L = std::abs(row.ratio_L - scan.tmix_sharp) / scan.tmix_sharp;
        row.rel_LP = std::abs(row.ratio_LP - scan.tmix_sharp) / scan.tmix_sharp;
        scan.rows.push_back(row);
    }
    return scan;
}

}  // namespace zeno
