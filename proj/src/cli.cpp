#include "zeno/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "zeno/config.hpp"
#include "zeno/davies.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/expansion.hpp"
#include "zeno/fixtures.hpp"

namespace zeno {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_exact, tol_fit;
    bool serial = false;
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Run {
public:
    using clock = std::chrono::steady_clock;
    using clock_time = clock::time_point;

    Run(std::string command, const Globals& g) : command_(std::move(command)), g_(g) {}

    ModelConfig& config() {
        if (!cfg_) {
            const auto t0 = clock::now();
            if (g_.config.empty()) throw UsageError("--config is required for " + command_);
            cfg_ = resolve(g_.config);
            stage("parse", t0);
        }
        return *cfg_;
    }

    std::uint64_t seed() { return g_.seed ? *g_.seed : (cfg_ ? cfg_->seed : 0); }
    Exec exec() const { return g_.serial ? Exec::Serial : Exec::Parallel; }

    double tol(const char* key, std::optional<double> flag, double fallback) {
        if (flag) return *flag;
        if (cfg_) {
            auto it = cfg_->tolerances.find(key);
            if (it != cfg_->tolerances.end()) return it->second;
        }
        return fallback;
    }
    double tol_exact() { return tol("exact", g_.tol_exact, 1e-9); }
    double tol_fit() { return tol("fit", g_.tol_fit, 1e-3); }

    void stage(const std::string& name, clock_time t0) {
        wall_[name] = std::chrono::duration<double>(clock::now() - t0).count();
    }

    void emit(const std::string& name, const std::string& contents) {
        const fs::path p = fs::path(g_.out_dir) / name;
        atomic_write(p, contents);
        outputs_.push_back(p.string());
    }

    void write_manifest() {
        json m;
        m["command"] = command_;
        m["config_digest"] = cfg_ ? json(config_digest(*cfg_)) : json(nullptr);
        m["seed"] = seed();
        m["version"] = kVersion;
        m["csv_version"] = kCsvVersion;
        m["wall_times"] = wall_;
        m["outputs"] = outputs_;
        const fs::path p = fs::path(g_.out_dir) / "manifest.json";
        atomic_write(p, m.dump(2) + "\n");
    }

private:
    static ModelConfig resolve(const std::string& spec) {
        // "example1" or "example1:BETA" selects the built-in two-qubit example
        if (spec == "example1") return example1_config(1.0);
        if (spec.rfind("example1:", 0) == 0) {
            double beta = 0.0;
            try {
                size_t used = 0;
                beta = std::stod(spec.substr(9), &used);
                if (used != spec.size() - 9) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ConfigError("bad beta in " + spec);
            }
            if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
            return example1_config(beta);
        }
        return load_config(spec);
    }

    std::string command_;
    Globals g_;
    std::optional<ModelConfig> cfg_;
    std::map<std::string, double> wall_;
    std::vector<std::string> outputs_;
};

using clock = Run::clock;

json superop_json(const SuperOperator& s) { return matrix_to_json(s.m); }

json lindblad_json(const LindbladSpec& l) {
    json jumps = json::array();
    for (const Mat& j : l.jumps) jumps.push_back(matrix_to_json(j));
    return {{"jumps", jumps}, {"hamiltonian_part", matrix_to_json(l.hamiltonian_part)}};
}

struct Reduced {
    CompositeModel model;
    ZenoObjects z;
    BohrDecomposition bohr;
    SuperOperator dps;
};

Reduced reduce_all(Run& run) {
    const ModelConfig& cfg = run.config();
    auto t0 = clock::now();
    Reduced r{to_model(cfg), {}, {}, {}};
    run.stage("model", t0);
    t0 = clock::now();
    r.z = reduce(r.model);
    r.bohr = bohr_decompose(r.z.H_P);
    r.dps = sharp_superop(r.z.D_P, r.bohr);
    run.stage("reduce", t0);
    return r;
}

std::vector<double> gamma_list(const ModelConfig& cfg) {
    if (!cfg.gamma_grid.empty()) return cfg.gamma_grid;
    if (cfg.gamma) return {*cfg.gamma};
    return {1.0};
}

int cmd_validate(Run& run, std::ostream& out) {
    const ModelConfig& cfg = run.config();
    json checks = json::array();
    bool ok = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        out << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
        ok = ok && pass;
    };
    json notices = json::array();

    auto t0 = clock::now();
    std::optional<CompositeModel> model;
    try {
        model = to_model(cfg);
    } catch (const std::exception& e) {
        report("model invariants", false, e.what());
    }
    run.stage("model", t0);
    if (model) {
        for (const auto& a : model->adjustments) {
            out << "note: " << a << "\n";
            notices.push_back(a);
        }
        report("model invariants", true, "");
        t0 = clock::now();
        const SpectralSummary sa = analyze_spectrum(build_dissipator(model->dissipator_A));
        report("D_A ergodic and gapped", sa.is_ergodic && sa.gap > kGappedThreshold, "gap " + num(sa.gap));
        const ZenoObjects z = reduce(*model);
        const GksResult g = gks_conditional_cp_test(z.D_P);
        report("D_P is a Lindblad generator", g.is_lindblad,
               "min projected Choi eigenvalue " + num(g.min_projected_choi_eigenvalue));
        const BohrDecomposition bohr = bohr_decompose(z.H_P);
        for (const auto& w : bohr.warnings) {
            out << "note: " << w << "\n";
            notices.push_back(w);
        }
        const SpectralSummary ss = analyze_spectrum(sharp_superop(z.D_P, bohr));
        report("D_P sharp ergodic and gapped", ss.is_ergodic && ss.gap > kGappedThreshold,
               "gap " + num(ss.gap) + (ss.note.empty() ? "" : "; " + ss.note));
        run.stage("checks", t0);
    }
    run.emit("validate.json", json{{"checks", checks}, {"notices", notices}, {"pass", ok}}.dump(2) + "\n");
    return ok ? 0 : 1;
}

int cmd_project(Run& run, std::ostream& out) {
    Reduced r = reduce_all(run);
    const auto t0 = clock::now();
    json j;
    j["convention"] = "column-stacking vec; X -> A X B has matrix kron(B^T, A)";
    j["H_P"] = matrix_to_json(r.z.H_P);
    j["K_P"] = superop_json(r.z.K_P);
    j["D_P"] = superop_json(r.z.D_P);
    j["B_P"] = superop_json(r.z.B_P);
    j["D_P_sharp"] = superop_json(r.dps);
    j["bohr"] = {{"eigenvalues", r.bohr.eigenvalues}, {"frequencies", r.bohr.frequencies}, {"b", r.bohr.b}};
    if (r.z.dp_lindblad) {
        const DpLindbladForm& f = *r.z.dp_lindblad;
        json dl = lindblad_json(f.spec);
        dl["M"] = matrix_to_json(f.M);
        dl["A"] = matrix_to_json(f.A_mat);
        dl["B"] = matrix_to_json(f.B_mat);
        dl["A_eigenvalues"] = std::vector<double>(f.A_eigenvalues.data(), f.A_eigenvalues.data() + f.A_eigenvalues.size());
        dl["rebuild_error"] = f.rebuild_error;
        j["D_P_lindblad"] = dl;

        std::vector<SharpJump> labels;
        const LindbladSpec sl = sharp_lindblad_form(f.spec, r.bohr, &labels);
        json sj = json::array();
        for (const SharpJump& s : labels)
            sj.push_back({{"source", s.source}, {"omega", s.omega}, {"op", matrix_to_json(s.op)}});
        j["D_P_sharp_lindblad"] = {{"jumps", sj}, {"hamiltonian_part", matrix_to_json(sl.hamiltonian_part)}};
    } else {
        out << "notice: " << r.z.extraction_note << "; emitting the D_P superoperator only\n";
        j["D_P_lindblad"] = nullptr;
        j["D_P_sharp_lindblad"] = nullptr;
        j["extraction_note"] = r.z.extraction_note;
    }
    run.stage("serialize", t0);
    run.emit("project.json", j.dump(2) + "\n");
    out << "H_P, D_P, D_P sharp and B_P written to project.json\n";
    return 0;
}

int cmd_steady(Run& run, std::ostream& out, int K) {
    if (K < 0) throw UsageError("--order must be >= 0");
    Reduced r = reduce_all(run);
    auto t0 = clock::now();
    const ExpansionResult ex = solve_hierarchy(r.model, r.z, r.dps, K, 0, run.tol("residual", std::nullopt, 1e-8));
    run.stage("hierarchy", t0);

    t0 = clock::now();
    json j;
    j["R_bar"] = matrix_to_json(ex.R_bar);
    json nb = json::array();
    for (const Mat& n : ex.n_bar) nb.push_back(matrix_to_json(n));
    j["n_bar"] = nb;
    j["per_order_residuals"] = ex.per_order_residuals;
    json states = json::array();
    std::ostringstream csv;
    csv << "gamma,K,trace_norm_error,residual\n";
    for (const double g : gamma_list(run.config())) {
        const Composite c = build_composite(r.model, g);
        const Mat exact = exact_steady_state(c.L);
        json truncated = json::array();
        for (int k = 0; k <= K; ++k) {
            const Mat rho = ex.truncated_state(g, k);
            truncated.push_back(matrix_to_json(rho));
            csv << num(g) << "," << k << "," << num(trace_norm(rho - exact)) << ","
                << num(trace_norm(c.L.apply(rho))) << "\n";
        }
        states.push_back({{"gamma", g}, {"exact", matrix_to_json(exact)}, {"truncated", truncated}});
    }
    j["states"] = states;
    run.stage("states", t0);
    run.emit("steady.json", j.dump(2) + "\n");
    run.emit("steady_errors.csv", csv.str());
    out << "R_bar, n_bar_0.." << K << " and the error table written\n";
    return 0;
}

int cmd_scan_theorem(Run& run, std::ostream& out, const std::string& tag_s) {
    const auto tag = parse_theorem_tag(tag_s);
    if (!tag) throw UsageError("unknown theorem tag '" + tag_s + "'");
    if (run.config().gamma_grid.size() < 3) throw UsageError("scan needs a gamma_grid with at least 3 entries");
    Reduced r = reduce_all(run);
    const auto t0 = clock::now();
    ScanOptions opt;
    opt.seed = run.seed();
    opt.exec = run.exec();
    const TrajectoryGapReport rep = theorem_gap_scan(r.model, r.z, r.dps, *tag, run.config().gamma_grid, opt);
    run.stage("scan", t0);
    std::ostringstream csv;
    csv << "kind,gamma,t,gap,slope,r_squared\n";
    for (size_t i = 0; i < rep.gammas.size(); ++i)
        for (size_t k = 0; k < rep.time_grid[i].size(); ++k)
            csv << "point," << num(rep.gammas[i]) << "," << num(rep.time_grid[i][k]) << "," << num(rep.gaps[i][k])
                << ",,\n";
    csv << "summary,,,," << num(rep.fitted_rate) << "," << num(rep.r_squared) << "\n";
    const std::string name = "scan_" + to_string(*tag) + ".csv";
    run.emit(name, csv.str());
    out << to_string(*tag) << ": fitted slope " << num(rep.fitted_rate) << " against " << rep.fit_abscissa
        << ", R^2 " << num(rep.r_squared) << "\n";
    return 0;
}

int cmd_scan_mixing(Run& run, std::ostream& out, double eps) {
    if (!(eps > 0 && eps < 0.5)) throw UsageError("--epsilon must lie in (0, 1/2)");
    if (run.config().gamma_grid.empty()) throw UsageError("scan needs a gamma_grid");
    Reduced r = reduce_all(run);
    const auto t0 = clock::now();
    MixingOptions opt;
    opt.seed = run.seed();
    opt.exec = run.exec();
    opt.rel_resolution = run.tol_fit();
    const MixingScan scan = mixing_ratio_scan(r.z, r.dps, eps, run.config().gamma_grid, opt);
    run.stage("mixing", t0);

    std::vector<double> lx, ly;
    std::ostringstream csv;
    csv << "kind,gamma,tmix_L,tmix_LP,tmix_sharp,slope,ratio_LP_to_sharp,ratio_L_to_sharp\n";
    for (const MixingRow& row : scan.rows) {
        auto t = [](double v, bool inf) { return inf ? std::string("inf") : num(v); };
        csv << "point," << num(row.gamma) << "," << t(row.tmix_L, row.inf_L) << "," << t(row.tmix_LP, row.inf_LP)
            << "," << num(scan.tmix_sharp) << ",," << num(row.ratio_LP / scan.tmix_sharp) << ","
            << num(row.ratio_L / scan.tmix_sharp) << "\n";
        if (!row.inf_L) {
            lx.push_back(std::log(row.gamma));
            ly.push_back(std::log(row.tmix_L));
        }
    }
    const double slope = lx.size() >= 2 ? fit_line(lx, ly).slope : NAN;
    csv << "summary,,,,," << num(slope) << ",,\n";
    run.emit("mixing.csv", csv.str());
    out << "t_mix(D_P sharp, " << eps << ") = " << num(scan.tmix_sharp) << "; slope of log t_mix(L) "
        << num(slope) << "\n";
    return 0;
}

int cmd_verify(Run& run, std::ostream& out, double beta) {
    if (!std::isfinite(beta)) throw UsageError("--beta must be finite");
    const auto t0 = clock::now();
    ExampleTolerances tol;
    tol.exact = run.tol_exact();
    const std::vector<Check> checks = example1_checks(beta, tol);
    run.stage("checks", t0);
    bool ok = true;
    json arr = json::array();
    for (const Check& c : checks) {
        const char* label = c.informational ? "INFO" : c.pass ? "PASS" : "FAIL";
        if (!c.informational) ok = ok && c.pass;
        out << label << " " << c.name << " (error " << num(c.error) << ", tol " << num(c.tol) << ")\n";
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"informational", c.informational},
                       {"error", c.error},
                       {"tol", c.tol}});
    }
    out << (ok ? "all checks passed" : "some checks failed") << "\n";
    run.emit("verify.json", json{{"beta", beta}, {"checks", arr}, {"pass", ok}}.dump(2) + "\n");
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zeno-limit reduction of boundary-driven Lindblad systems"};
    app.set_version_flag("--version", std::string(kVersion));
    Globals g;
    app.add_option("--config", g.config, "model config (JSON path, or example1[:BETA])");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "RNG seed, overrides the config");
    app.add_option("--tol-exact", g.tol_exact, "tolerance for exact fixture checks");
    app.add_option("--tol-fit", g.tol_fit, "relative resolution of mixing-time bisection");
    app.add_flag("--serial", g.serial, "use the serial reference kernels");
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "check model invariants and ergodicity");
    auto* project = app.add_subcommand("project", "write H_P, D_P, D_P sharp and B_P");
    auto* steady = app.add_subcommand("steady", "steady-state expansion and error table");
    int order = 1;
    steady->add_option("--order", order, "expansion order K")->required();
    auto* scan = app.add_subcommand("scan", "theorem gap scans and mixing-time ratios");
    std::string theorem;
    double epsilon = 0.2;
    auto* th = scan->add_option("--theorem", theorem, "one of TZCVS EULLIM COHERENTSC MTILRM MTILRMEUL "
                                                       "PROJMOZLTH PROJMOZLTHA");
    auto* mx = scan->add_flag("--mixing", "mixing-time scan");
    scan->add_option("--epsilon", epsilon, "mixing threshold")->needs(mx);
    th->excludes(mx);
    auto* verify = app.add_subcommand("verify-example", "fixture suite for the two-qubit example");
    double beta = 1.0;
    verify->add_option("--beta", beta, "inverse temperature")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    Run run(sub->get_name(), g);
    try {
        int code = 0;
        if (sub == validate)
            code = cmd_validate(run, out);
        else if (sub == project)
            code = cmd_project(run, out);
        else if (sub == steady)
            code = cmd_steady(run, out, order);
        else if (sub == scan) {
            if (!th->empty())
                code = cmd_scan_theorem(run, out, theorem);
            else if (!mx->empty())
                code = cmd_scan_mixing(run, out, epsilon);
            else
                throw UsageError("scan needs --theorem TAG or --mixing");
        } else if (sub == verify)
            code = cmd_verify(run, out, beta);
        run.write_manifest();
        return code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const HierarchyError& e) {
        err << "hierarchy failure at order " << e.order << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"zeno"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace zeno
