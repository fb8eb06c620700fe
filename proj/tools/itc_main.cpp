// Command-line front end: single runs, benchmark sweeps, control-operator
// selection, adiabatic gap scans, spectrum reports, and truncation
// experiments. Results land in --out as CSV files plus a JSON manifest.

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itc/harness.hpp"

namespace fs = std::filesystem;
using namespace itc;

namespace {

constexpr const char* kVersion = "itc 0.1.0";

struct GlobalOptions {
    std::uint64_t seed = 1;
    double dtau = 0.03;
    double threshold = 0.99;
    long max_steps = 200000;
    std::string out_dir = "out";
    int dense_limit = kDefaultDenseLimit;
    std::string method = "euler";
    int jobs = 1;

    StepMethod step_method() const {
        if (method == "euler") return StepMethod::euler;
        if (method == "exact") return StepMethod::exact;
        throw CLI::ValidationError("--method must be euler or exact");
    }
};

void add_global_flags(CLI::App* cmd, GlobalOptions& g) {
    cmd->add_option("--seed", g.seed, "Master seed");
    cmd->add_option("--dtau", g.dtau, "Imaginary-time step")->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", g.threshold, "Convergence fidelity threshold");
    cmd->add_option("--max-steps", g.max_steps, "Step ceiling per run");
    cmd->add_option("--out", g.out_dir, "Output directory");
    cmd->add_option("--dense-limit", g.dense_limit, "Max qubits for dense operations");
    cmd->add_option("--method", g.method, "Stepping method: euler or exact");
    cmd->add_option("--jobs", g.jobs, "Worker threads for sweeps");
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            kv[item] = "";
        } else {
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    return kv;
}

// Model descriptors:
//   xxx2d:rows=3,cols=3        open-grid spin lattice
//   sk:n=6,seed=1              random all-to-all ZZ glass
//   sat:<path.cnf>             3-SAT penalty Hamiltonian
//   aqc:<path.cnf>,s=0.5       interpolated annealing Hamiltonian
//   gapfam:n=3,gap=0.2,seed=7  synthetic fixed-gap dense operator
//   file:<path>                Hamiltonian text file
Operator parse_model(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    const std::string kind = descriptor.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
    if (kind == "xxx2d") {
        auto kv = parse_kv(rest);
        LatticeSpec spec;
        spec.rows = kv.count("rows") ? std::stoi(kv["rows"]) : 3;
        spec.cols = kv.count("cols") ? std::stoi(kv["cols"]) : 3;
        return Operator(build_xxx_2d(spec));
    }
    if (kind == "sk") {
        auto kv = parse_kv(rest);
        const int n = kv.count("n") ? std::stoi(kv["n"]) : 4;
        const std::uint64_t seed = kv.count("seed") ? std::stoull(kv["seed"]) : 1;
        return Operator(build_sk(n, seed));
    }
    if (kind == "sat") {
        return Operator(sat_to_hamiltonian(load_dimacs(rest)));
    }
    if (kind == "aqc") {
        const auto comma = rest.find(',');
        const std::string path = rest.substr(0, comma);
        double s = 0.5;
        if (comma != std::string::npos) {
            auto kv = parse_kv(rest.substr(comma + 1));
            if (kv.count("s")) s = std::stod(kv["s"]);
        }
        return Operator(aqc_hamiltonian(load_dimacs(path), s));
    }
    if (kind == "gapfam") {
        auto kv = parse_kv(rest);
        const int n = kv.count("n") ? std::stoi(kv["n"]) : 3;
        const double gap = kv.count("gap") ? std::stod(kv["gap"]) : 0.2;
        const std::uint64_t seed = kv.count("seed") ? std::stoull(kv["seed"]) : 7;
        return make_tunable_gap_operator(n, gap, seed);
    }
    if (kind == "file") {
        return Operator(load_hamiltonian(rest));
    }
    throw CLI::ValidationError("unknown model descriptor '" + descriptor + "'");
}

// Control-set descriptors:
//   none
//   pool                        every single- and double-Z string
//   empirical:N=2,M=4           occupation-split selection (also full/half/all)
//   poly:orders=2-5,thresh=0.1  truncated matrix powers; thresh is relative
//                               to the largest entry of each power
//   cyclicz:weights=1+4         circular-shift Z families
//   dtilde:p=0.1,seed=1[,replace] eigenbasis-constructed dense control
//   strings:IIZZ+ZZII           explicit Pauli strings
std::vector<Operator> parse_controls(const std::string& descriptor, const Operator& h_p, int dense_limit) {
    std::vector<Operator> controls;
    if (descriptor.empty() || descriptor == "none") return controls;
    const auto colon = descriptor.find(':');
    const std::string kind = descriptor.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
    const int n = h_p.n_qubits();

    auto lift = [&](const std::vector<PauliString>& strings) {
        for (const PauliString& s : strings) controls.emplace_back(PauliSum(n, {{1.0, s}}));
    };

    if (kind == "pool") {
        lift(candidate_pool(n));
    } else if (kind == "empirical" || kind == "full" || kind == "half" || kind == "all") {
        auto kv = parse_kv(rest);
        OrbitalSplit split;
        split.n_electrons = kv.count("N") ? std::stoi(kv["N"]) : n / 2;
        split.n_orbitals = kv.count("M") ? std::stoi(kv["M"]) : n;
        const HdVariant variant = kind == "empirical" ? HdVariant::empirical
                                : kind == "full"      ? HdVariant::full
                                : kind == "half"      ? HdVariant::half
                                                      : HdVariant::all;
        lift(variant_hd(variant, split));
    } else if (kind == "poly") {
        auto kv = parse_kv(rest);
        std::vector<int> orders;
        std::string range = kv.count("orders") ? kv["orders"] : "2-5";
        const auto dash = range.find('-');
        if (dash == std::string::npos) {
            orders.push_back(std::stoi(range));
        } else {
            const int lo = std::stoi(range.substr(0, dash));
            const int hi = std::stoi(range.substr(dash + 1));
            for (int k = lo; k <= hi; ++k) orders.push_back(k);
        }
        const double rel_thresh = kv.count("thresh") ? std::stod(kv["thresh"]) : 0.0;
        // Apply the relative threshold per power: scale by each power's
        // largest entry before truncation.
        for (int k : orders) {
            const Eigen::MatrixXcd power = polynomial_hd(h_p, {k}, 0.0, dense_limit, false)[0].dense();
            const double cutoff = rel_thresh * power.cwiseAbs().maxCoeff();
            controls.push_back(polynomial_hd(h_p, {k}, cutoff, dense_limit, true)[0]);
        }
    } else if (kind == "cyclicz") {
        auto kv = parse_kv(rest);
        std::vector<int> weights;
        std::string spec = kv.count("weights") ? kv["weights"] : "1";
        std::stringstream ss(spec);
        std::string w;
        while (std::getline(ss, w, '+')) weights.push_back(std::stoi(w));
        lift(cyclic_z_hd(n, weights));
    } else if (kind == "dtilde") {
        auto kv = parse_kv(rest);
        DiagExperimentSpec spec;
        spec.diag_entries = default_diag_entries(h_p.dim());
        spec.p = kv.count("p") ? std::stod(kv["p"]) : 0.0;
        spec.seed = kv.count("seed") ? std::stoull(kv["seed"]) : 1;
        spec.mode = kv.count("replace") ? DiagMode::replace : DiagMode::additive;
        controls.push_back(build_diag_experiment(h_p, spec, dense_limit));
    } else if (kind == "strings") {
        std::vector<PauliString> strings;
        std::stringstream ss(rest);
        std::string s;
        while (std::getline(ss, s, '+')) strings.push_back(PauliString::parse(s));
        lift(strings);
    } else {
        throw CLI::ValidationError("unknown control descriptor '" + descriptor + "'");
    }
    return controls;
}

struct StrategyOptions {
    std::string name = "none";
    double S = 1.0, gamma = 1.0, L = 0.0;
    double K1 = 10.0, K2 = 1.0;
    double gain = 1.0;
    double beta_cap = 10.0;
    double equil_tol = 1e-3;
    int equil_window = 10;
    int type1_sign = +1;
    bool adaptive_cap = false;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--strategy", name, "none|gradient|type1|type2");
        cmd->add_option("--S", S, "type1 max strength");
        cmd->add_option("--gamma", gamma, "type1 sigmoid slope");
        cmd->add_option("--L", L, "type1 activation threshold");
        cmd->add_option("--K1", K1, "type2 phase-1 strength");
        cmd->add_option("--K2", K2, "type2 phase-2 strength");
        cmd->add_option("--gain", gain, "gradient proportional gain");
        cmd->add_option("--beta-cap", beta_cap, "global |beta| bound");
        cmd->add_option("--equil-tol", equil_tol, "type2 equilibrium tolerance (relative)");
        cmd->add_option("--equil-window", equil_window, "type2 equilibrium window (steps)");
        cmd->add_option("--type1-sign", type1_sign, "+1 published sigmoid sign, -1 descent sign");
        cmd->add_flag("--adaptive-cap", adaptive_cap, "cap |beta| at |<H_p>| each step");
    }

    ControlStrategy build() const {
        ControlStrategy s2;
        if (name == "none") s2.kind = StrategyKind::none;
        else if (name == "gradient") s2.kind = StrategyKind::gradient;
        else if (name == "type1") s2.kind = StrategyKind::type1;
        else if (name == "type2") s2.kind = StrategyKind::type2;
        else throw CLI::ValidationError("--strategy must be none|gradient|type1|type2");
        s2.S = S;
        s2.gamma = gamma;
        s2.L = L;
        s2.K1 = K1;
        s2.K2 = K2;
        s2.gain = gain;
        s2.beta_cap = beta_cap;
        s2.equil_tol_rel = equil_tol;
        s2.equil_window = equil_window;
        s2.type1_sign = type1_sign;
        if (s2.kind != StrategyKind::none) s2.validate();
        return s2;
    }
};

InitSpec parse_init(const std::string& text, std::uint64_t seed) {
    InitSpec init;
    if (text == "plus" || text.empty()) {
        init.kind = InitSpec::Kind::plus;
    } else if (text.rfind("basis:", 0) == 0) {
        init.kind = InitSpec::Kind::basis;
        init.basis_index = std::stoull(text.substr(6));
    } else if (text == "random") {
        init.kind = InitSpec::Kind::random;
        init.seed = seed;
    } else if (text.rfind("random:", 0) == 0) {
        init.kind = InitSpec::Kind::random;
        init.seed = std::stoull(text.substr(7));
    } else {
        throw CLI::ValidationError("--init must be plus, basis:<index>, or random[:<seed>]");
    }
    return init;
}

void ensure_out_dir(const GlobalOptions& g) { fs::create_directories(g.out_dir); }

std::vector<std::pair<std::string, std::string>> base_manifest(const GlobalOptions& g, const std::string& command) {
    return {
        {"version", kVersion},
        {"command", command},
        {"seed", std::to_string(g.seed)},
        {"dtau", std::to_string(g.dtau)},
        {"threshold", std::to_string(g.threshold)},
        {"max_steps", std::to_string(g.max_steps)},
        {"dense_limit", std::to_string(g.dense_limit)},
        {"method", g.method},
    };
}

CaseSpec build_case(const GlobalOptions& g, const std::string& model, const std::string& hd,
                    const StrategyOptions& strat, const std::string& init_text) {
    CaseSpec spec;
    spec.case_id = "cli";
    spec.model = model;
    spec.strategy = strat.name;
    spec.h_p = parse_model(model);
    spec.controls = parse_controls(hd, spec.h_p, g.dense_limit);
    spec.control = strat.build();
    spec.init = parse_init(init_text, g.seed);
    spec.dtau = g.dtau;
    spec.fidelity_threshold = g.threshold;
    spec.max_steps = g.max_steps;
    spec.method = g.step_method();
    spec.dense_limit = g.dense_limit;
    spec.adaptive_cap = strat.adaptive_cap;
    spec.seed = g.seed;
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imaginary-time evolution and closed-loop control benchmark harness"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config");
    app.require_subcommand(1);

    GlobalOptions g;
    std::string model = "xxx2d:rows=3,cols=3";
    std::string hd = "none";
    std::string init_text = "plus";
    StrategyOptions strat;

    // run: one case, optional trajectory dump.
    auto* run_cmd = app.add_subcommand("run", "Run a single case and report steps to convergence");
    add_global_flags(run_cmd, g);
    run_cmd->add_option("--model", model, "Model descriptor");
    run_cmd->add_option("--hd", hd, "Control-set descriptor");
    run_cmd->add_option("--init", init_text, "Initial state: plus | basis:<i> | random[:<seed>]");
    strat.add_flags(run_cmd);
    bool dump_trajectory = false;
    run_cmd->add_flag("--trajectory", dump_trajectory, "Write trajectory.csv");

    // sweep: grid of cases over seeds and initial states, strategies paired
    // against the uncontrolled baseline.
    auto* sweep_cmd = app.add_subcommand("sweep", "Paired baseline/controlled sweep over seeds and inits");
    add_global_flags(sweep_cmd, g);
    std::string sweep_family = "sk";
    int sweep_n = 4;
    int sweep_cases = 5;
    int sweep_inits = 3;
    std::vector<std::string> sweep_hds = {"poly:orders=2-5,thresh=0.1"};
    sweep_cmd->add_option("--family", sweep_family, "sk | dtilde | gapfam");
    sweep_cmd->add_option("--n", sweep_n, "Qubit count (sk/gapfam)");
    sweep_cmd->add_option("--cases", sweep_cases, "Number of sampled instances");
    sweep_cmd->add_option("--inits", sweep_inits, "Random initial states per instance");
    sweep_cmd->add_option("--hd", sweep_hds, "Control-set descriptors to compare");
    std::vector<double> sweep_ps = {0.0, 0.1, 0.6, 0.9};
    sweep_cmd->add_option("--p", sweep_ps, "Disorder densities (dtilde family)");
    std::vector<double> sweep_gaps = {0.05, 0.1, 0.2, 0.4, 0.8};
    sweep_cmd->add_option("--gaps", sweep_gaps, "Gap grid (gapfam family)");
    StrategyOptions sweep_strat;
    sweep_strat.name = "gradient";
    sweep_strat.add_flags(sweep_cmd);

    // select-hd: score the Z candidate pool on a Hamiltonian file.
    auto* select_cmd = app.add_subcommand("select-hd", "Score single/double-Z candidates by time-summed pulse");
    add_global_flags(select_cmd, g);
    std::string select_file;
    int select_electrons = 0;
    select_cmd->add_option("--hamiltonian", select_file, "Hamiltonian text file")->required();
    select_cmd->add_option("--electrons", select_electrons, "Occupied-orbital count for the reference split");
    StrategyOptions select_strat;
    select_strat.name = "gradient";
    select_strat.add_flags(select_cmd);

    // gap-scan: annealing-path gap profile for a CNF instance.
    auto* gap_cmd = app.add_subcommand("gap-scan", "Scan the annealing-path gap of a 3-SAT instance");
    add_global_flags(gap_cmd, g);
    std::string gap_cnf;
    int gap_points = 51;
    gap_cmd->add_option("--cnf", gap_cnf, "DIMACS CNF file")->required();
    gap_cmd->add_option("--points", gap_points, "Grid points over s in [0,1]");

    // spectrum: controlled spectrum trajectory + mean pulse + reorder flags.
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Record the controlled spectrum trajectory");
    add_global_flags(spectrum_cmd, g);
    spectrum_cmd->add_option("--model", model, "Model descriptor");
    spectrum_cmd->add_option("--hd", hd, "Control-set descriptor");
    spectrum_cmd->add_option("--init", init_text, "Initial state");
    StrategyOptions spectrum_strat;
    spectrum_strat.name = "type1";
    spectrum_strat.add_flags(spectrum_cmd);

    // truncate: paired full-vs-truncated pulse runs over an L schedule.
    auto* trunc_cmd = app.add_subcommand("truncate", "Compare full control against threshold-truncated control");
    add_global_flags(trunc_cmd, g);
    trunc_cmd->add_option("--model", model, "Model descriptor");
    trunc_cmd->add_option("--hd", hd, "Control-set descriptor");
    trunc_cmd->add_option("--init", init_text, "Initial state");
    std::vector<double> l_schedule = {0.0};
    long trunc_budget = 2000;
    trunc_cmd->add_option("--L-schedule", l_schedule, "Truncation thresholds to test");
    trunc_cmd->add_option("--budget", trunc_budget, "Step budget shared by the paired runs");
    StrategyOptions trunc_strat;
    trunc_strat.name = "type1";
    trunc_strat.add_flags(trunc_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            ensure_out_dir(g);
            CaseSpec spec = build_case(g, model, hd, strat, init_text);
            spec.record_trajectory = dump_trajectory;
            const CaseResult result = run_case(spec);
            write_results_csv(g.out_dir + "/results.csv", {result});
            if (dump_trajectory && result.trajectory) {
                write_trajectory_csv(g.out_dir + "/trajectory.csv", *result.trajectory);
            }
            auto manifest = base_manifest(g, "run");
            manifest.emplace_back("model", model);
            manifest.emplace_back("hd", hd);
            manifest.emplace_back("strategy", strat.name);
            manifest.emplace_back("init", init_text);
            write_manifest(g.out_dir + "/manifest.json", manifest);
            std::cout << (result.converged ? "converged in " + std::to_string(result.steps) + " steps"
                                           : "did-not-converge")
                      << ", final fidelity " << result.final_fidelity << ", final energy " << result.final_energy
                      << "\n";
            return 0;
        }

        if (sweep_cmd->parsed()) {
            ensure_out_dir(g);
            SweepSpec spec;
            spec.jobs = g.jobs;
            Rng master(g.seed);
            if (sweep_family == "sk") {
                for (int c = 0; c < sweep_cases; ++c) {
                    const std::uint64_t instance_seed = master.next_u64();
                    const Operator h_p{PauliSum(build_sk(sweep_n, instance_seed))};
                    for (int i = 0; i < sweep_inits; ++i) {
                        const std::uint64_t init_seed = master.next_u64();
                        InitSpec init;
                        init.kind = InitSpec::Kind::random;
                        init.seed = init_seed;
                        auto push_case = [&](const std::string& label, const std::string& hd_desc,
                                             const ControlStrategy& control) {
                            CaseSpec cs;
                            cs.case_id = "sk" + std::to_string(c) + "_i" + std::to_string(i) + "_" + label;
                            cs.model = "sk:n=" + std::to_string(sweep_n) + ",seed=" + std::to_string(instance_seed);
                            cs.strategy = label;
                            cs.h_p = h_p;
                            cs.controls = parse_controls(hd_desc, h_p, g.dense_limit);
                            cs.control = control;
                            cs.init = init;
                            cs.dtau = g.dtau;
                            cs.fidelity_threshold = g.threshold;
                            cs.max_steps = g.max_steps;
                            cs.method = g.step_method();
                            cs.dense_limit = g.dense_limit;
                            cs.adaptive_cap = sweep_strat.adaptive_cap;
                            cs.seed = instance_seed ^ init_seed;
                            spec.cases.push_back(std::move(cs));
                        };
                        ControlStrategy none;
                        push_case("ite", "none", none);
                        for (const std::string& hd_desc : sweep_hds) {
                            push_case(hd_desc, hd_desc, sweep_strat.build());
                        }
                    }
                }
            } else if (sweep_family == "dtilde") {
                const Operator h_p = parse_model(model);
                InitSpec init; // |+...+>
                auto push_case = [&](const std::string& label, const std::vector<Operator>& controls,
                                     const ControlStrategy& control) {
                    CaseSpec cs;
                    cs.case_id = label;
                    cs.model = model;
                    cs.strategy = label;
                    cs.h_p = h_p;
                    cs.controls = controls;
                    cs.control = control;
                    cs.init = init;
                    cs.dtau = g.dtau;
                    cs.fidelity_threshold = g.threshold;
                    cs.max_steps = g.max_steps;
                    cs.method = g.step_method();
                    cs.dense_limit = g.dense_limit;
                    cs.adaptive_cap = sweep_strat.adaptive_cap;
                    cs.seed = g.seed;
                    spec.cases.push_back(std::move(cs));
                };
                ControlStrategy none;
                push_case("ite", {}, none);
                for (double p : sweep_ps) {
                    DiagExperimentSpec d;
                    d.diag_entries = default_diag_entries(h_p.dim());
                    d.p = p;
                    d.seed = g.seed;
                    push_case("dtilde_p" + std::to_string(p), {build_diag_experiment(h_p, d, g.dense_limit)},
                              sweep_strat.build());
                }
            } else if (sweep_family == "gapfam") {
                InitSpec init;
                init.kind = InitSpec::Kind::random;
                init.seed = g.seed;
                for (double gap : sweep_gaps) {
                    CaseSpec cs;
                    cs.case_id = "gapfam_" + std::to_string(gap);
                    cs.model = "gapfam:n=" + std::to_string(sweep_n) + ",gap=" + std::to_string(gap);
                    cs.strategy = "ite";
                    cs.h_p = make_tunable_gap_operator(sweep_n, gap, g.seed);
                    cs.init = init;
                    cs.dtau = g.dtau;
                    cs.fidelity_threshold = g.threshold;
                    cs.max_steps = g.max_steps;
                    cs.method = g.step_method();
                    cs.dense_limit = g.dense_limit;
                    cs.seed = g.seed;
                    spec.cases.push_back(std::move(cs));
                }
            } else {
                throw CLI::ValidationError("--family must be sk, dtilde, or gapfam");
            }

            const std::vector<CaseResult> results = sweep(spec);
            write_results_csv(g.out_dir + "/results.csv", results);
            auto manifest = base_manifest(g, "sweep");
            manifest.emplace_back("family", sweep_family);
            manifest.emplace_back("cases", std::to_string(spec.cases.size()));
            manifest.emplace_back("jobs", std::to_string(g.jobs));
            write_manifest(g.out_dir + "/manifest.json", manifest);
            std::cout << "wrote " << results.size() << " rows to " << g.out_dir << "/results.csv\n";
            return 0;
        }

        if (select_cmd->parsed()) {
            ensure_out_dir(g);
            const PauliSum h_p = load_hamiltonian(select_file);
            ScoreOptions opts;
            opts.policy = select_strat.build();
            if (opts.policy.kind == StrategyKind::none) {
                opts.policy = ScoreOptions{}.policy; // default gradient probe
            }
            opts.dtau = g.dtau;
            opts.max_steps = g.max_steps;
            opts.fidelity_threshold = g.threshold;
            opts.method = g.step_method();
            opts.dense_limit = g.dense_limit;
            const auto pool = candidate_pool(h_p.n_qubits());
            const auto scores = score_candidates(Operator(h_p), pool, opts);

            std::vector<PauliString> selected;
            for (const auto& s : scores) {
                if (s.B < 0.0) selected.push_back(s.candidate);
            }
            write_selection_csv(g.out_dir + "/selection.csv", scores, selected);
            auto manifest = base_manifest(g, "select-hd");
            manifest.emplace_back("hamiltonian", select_file);
            manifest.emplace_back("probe_strategy", select_strat.name);
            manifest.emplace_back("probe_gain", std::to_string(select_strat.gain));
            write_manifest(g.out_dir + "/manifest.json", manifest);

            if (select_electrons > 0) {
                OrbitalSplit split{select_electrons, h_p.n_qubits()};
                const auto reference = empirical_hd(split);
                std::size_t agree = 0;
                for (const auto& s : scores) {
                    const bool in_ref = std::find(reference.begin(), reference.end(), s.candidate) != reference.end();
                    if (in_ref == (s.B < 0.0)) ++agree;
                }
                std::cout << "negative-B candidates matching the occupation-split reference: " << agree << "/"
                          << scores.size() << "\n";
            }
            std::cout << "wrote " << scores.size() << " candidate scores to " << g.out_dir << "/selection.csv\n";
            return 0;
        }

        if (gap_cmd->parsed()) {
            ensure_out_dir(g);
            const CnfFormula f = load_dimacs(gap_cnf);
            const GapScanResult scan = gap_scan(f, gap_points, g.dense_limit);
            write_gap_scan_csv(g.out_dir + "/gapscan.csv", scan);
            auto manifest = base_manifest(g, "gap-scan");
            manifest.emplace_back("cnf", gap_cnf);
            manifest.emplace_back("points", std::to_string(gap_points));
            write_manifest(g.out_dir + "/manifest.json", manifest);
            std::cout << "min gap " << scan.min_gap << " at s = " << scan.min_gap_s << "\n";
            return 0;
        }

        if (spectrum_cmd->parsed()) {
            ensure_out_dir(g);
            CaseSpec spec = build_case(g, model, hd, spectrum_strat, init_text);
            const SpectrumReport report = spectrum_report(spec);
            write_spectrum_csv(g.out_dir + "/spectrum.csv", report.times, report.spectrum);
            write_trajectory_csv(g.out_dir + "/trajectory.csv", report.trajectory);
            auto manifest = base_manifest(g, "spectrum");
            manifest.emplace_back("model", model);
            manifest.emplace_back("hd", hd);
            manifest.emplace_back("strategy", spectrum_strat.name);
            manifest.emplace_back("reorder_steps", std::to_string(report.reorder_steps.size()));
            write_manifest(g.out_dir + "/manifest.json", manifest);
            std::cout << "final mean pulse " << (report.mean_beta.empty() ? 0.0 : report.mean_beta.back())
                      << ", re-ordering flags " << report.reorder_steps.size() << "\n";
            return 0;
        }

        if (trunc_cmd->parsed()) {
            ensure_out_dir(g);
            CaseSpec spec = build_case(g, model, hd, trunc_strat, init_text);
            spec.max_steps = trunc_budget;
            if (spec.control.kind != StrategyKind::type1) {
                throw CLI::ValidationError("truncate requires --strategy type1");
            }
            const TruncationReport report = truncation_experiment(spec, l_schedule);
            std::ofstream out(g.out_dir + "/truncation.csv");
            out.precision(17);
            out << "L,full_energy,truncated_energy,energy_deficit_rel,full_fidelity,truncated_fidelity\n";
            for (const auto& p : report.points) {
                out << p.L << ',' << p.full_energy << ',' << p.truncated_energy << ',' << p.energy_deficit_rel << ','
                    << p.full_fidelity << ',' << p.truncated_fidelity << '\n';
            }
            auto manifest = base_manifest(g, "truncate");
            manifest.emplace_back("model", model);
            manifest.emplace_back("hd", hd);
            manifest.emplace_back("gap", std::to_string(report.gap));
            write_manifest(g.out_dir + "/manifest.json", manifest);
            std::cout << "gap " << report.gap << ", wrote " << report.points.size() << " truncation points\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
