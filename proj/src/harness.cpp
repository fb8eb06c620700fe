#include "itc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "itc/rng.hpp"

namespace itc {

StateVector InitSpec::make(int n_qubits) const {
    switch (kind) {
        case Kind::plus:
            return StateVector::plus_state(n_qubits);
        case Kind::basis:
            return StateVector::basis_state(n_qubits, basis_index);
        case Kind::random: {
            Rng rng(seed);
            return StateVector::random_state(n_qubits, rng);
        }
    }
    throw std::logic_error("InitSpec: unreachable");
}

std::string InitSpec::describe() const {
    switch (kind) {
        case Kind::plus:
            return "plus";
        case Kind::basis:
            return "basis:" + std::to_string(basis_index);
        case Kind::random:
            return "random:" + std::to_string(seed);
    }
    throw std::logic_error("InitSpec: unreachable");
}

CaseResult run_case(const CaseSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();

    CaseResult result;
    result.case_id = spec.case_id;
    result.model = spec.model;
    result.strategy = spec.strategy;
    result.init = spec.init.describe();
    result.seed = spec.seed;
    result.n_qubits = spec.h_p.n_qubits();
    result.dtau = spec.dtau;

    const Eigensystem es = eigensystem(spec.h_p, spec.dense_limit);
    result.gap = es.eigenvalues.size() > 1 ? es.eigenvalues(1) - es.eigenvalues(0) : 0.0;

    StopRule stop;
    stop.max_steps = spec.max_steps;
    stop.fidelity_threshold = spec.fidelity_threshold;

    EvolveOptions opts;
    opts.method = spec.method;
    opts.dense_limit = spec.dense_limit;
    opts.adaptive_cap = spec.adaptive_cap;

    std::optional<ControlPolicy> policy;
    if (spec.control.kind != StrategyKind::none) {
        policy.emplace(spec.control, static_cast<int>(spec.controls.size()));
    }

    Trajectory traj = evolve(spec.init.make(spec.h_p.n_qubits()), spec.h_p, spec.controls,
                             policy ? &*policy : nullptr, spec.dtau, stop, opts);

    result.converged = traj.converged;
    result.steps = traj.converged ? traj.steps : -1;
    result.final_fidelity = traj.fidelity.back();
    result.final_energy = traj.energy.back();
    if (spec.record_trajectory) result.trajectory = std::move(traj);

    const auto t1 = std::chrono::steady_clock::now();
    result.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    return result;
}

std::optional<double> speedup(const CaseResult& ite, const CaseResult& itc) {
    if (!ite.converged || !itc.converged) return std::nullopt;
    if (itc.steps <= 0) {
        // Converged at step zero: the initial state already met the
        // threshold, so the ratio is not meaningful.
        return std::nullopt;
    }
    return static_cast<double>(ite.steps) / static_cast<double>(itc.steps);
}

std::vector<CaseResult> sweep(const SweepSpec& spec) {
    std::vector<CaseResult> results(spec.cases.size());
    if (spec.cases.empty()) return results;
    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < spec.cases.size(); ++i) results[i] = run_case(spec.cases[i]);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(spec.cases.size());
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= spec.cases.size()) return;
            try {
                results[i] = run_case(spec.cases[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(jobs, static_cast<int>(spec.cases.size()));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            throw std::runtime_error("sweep: case '" + spec.cases[i].case_id + "' failed: " + errors[i]);
        }
    }
    return results;
}

TruncationReport truncation_experiment(const CaseSpec& base, const std::vector<double>& l_schedule) {
    if (base.control.kind != StrategyKind::type1) {
        throw std::invalid_argument("truncation_experiment: requires the type1 strategy");
    }

    auto run_with_L = [&base](double l_value) {
        CaseSpec spec = base;
        spec.control.L = l_value;
        // Fixed step budget: both runs spend the same imaginary time.
        spec.fidelity_threshold = 2.0; // unreachable; stop on max_steps
        spec.record_trajectory = false;
        return run_case(spec);
    };

    const double never = -std::numeric_limits<double>::infinity();
    const CaseResult full = run_with_L(never);

    TruncationReport report;
    report.gap = full.gap;
    for (double l_value : l_schedule) {
        const CaseResult truncated = std::isinf(l_value) && l_value < 0.0 ? full : run_with_L(l_value);
        TruncationPoint point;
        point.L = l_value;
        point.full_energy = full.final_energy;
        point.truncated_energy = truncated.final_energy;
        const double scale = std::max(std::abs(full.final_energy), 1e-12);
        point.energy_deficit_rel = std::abs(truncated.final_energy - full.final_energy) / scale;
        point.full_fidelity = full.final_fidelity;
        point.truncated_fidelity = truncated.final_fidelity;
        report.points.push_back(point);
    }
    return report;
}

SpectrumReport spectrum_report(const CaseSpec& spec) {
    const Eigensystem es = eigensystem(spec.h_p, spec.dense_limit);
    const Eigen::VectorXcd ground = es.eigenvectors.col(0);

    StopRule stop;
    stop.max_steps = spec.max_steps;
    stop.fidelity_threshold = spec.fidelity_threshold;
    EvolveOptions opts;
    opts.method = spec.method;
    opts.dense_limit = spec.dense_limit;
    opts.adaptive_cap = spec.adaptive_cap;
    opts.record_spectrum = true;

    std::optional<ControlPolicy> policy;
    if (spec.control.kind != StrategyKind::none) {
        policy.emplace(spec.control, static_cast<int>(spec.controls.size()));
    }
    Trajectory traj = evolve(spec.init.make(spec.h_p.n_qubits()), spec.h_p, spec.controls,
                             policy ? &*policy : nullptr, spec.dtau, stop, opts);

    SpectrumReport report;
    report.times = traj.times;
    report.spectrum = traj.spectrum;

    const std::size_t n_steps = traj.times.size();
    const std::size_t n_controls = traj.beta.size();
    report.mean_beta.resize(n_steps, 0.0);
    for (std::size_t m = 0; m < n_steps; ++m) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n_controls; ++k) sum += traj.beta[k][m];
        report.mean_beta[m] = n_controls > 0 ? sum / static_cast<double>(n_controls) : 0.0;
    }

    // Re-ordering flags: H(tau)'s minimal eigenvector should stay the
    // problem ground state; detect the swap by overlap collapse.
    Eigen::MatrixXcd base_dense = spec.h_p.to_dense(spec.dense_limit);
    std::vector<Eigen::MatrixXcd> control_dense;
    for (const Operator& c : spec.controls) control_dense.push_back(c.to_dense(spec.dense_limit));
    for (std::size_t m = 0; m < n_steps; ++m) {
        bool any_pulse = false;
        Eigen::MatrixXcd h = base_dense;
        for (std::size_t k = 0; k < n_controls; ++k) {
            if (traj.beta[k][m] != 0.0) {
                h += traj.beta[k][m] * control_dense[k];
                any_pulse = true;
            }
        }
        if (!any_pulse) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        const double overlap = std::norm(solver.eigenvectors().col(0).dot(ground));
        if (overlap < 0.5) report.reorder_steps.push_back(static_cast<long>(m));
    }

    report.trajectory = std::move(traj);
    return report;
}

Operator make_tunable_gap_operator(int n_qubits, double gap, std::uint64_t seed) {
    if (!(gap > 0.0)) throw std::invalid_argument("make_tunable_gap_operator: gap must be positive");
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    Eigen::VectorXd spectrum(dim);
    spectrum(0) = 0.0;
    if (dim > 1) spectrum(1) = gap;
    for (std::int64_t i = 2; i < dim; ++i) {
        spectrum(i) = gap + 1.0 + 0.7 * static_cast<double>(i - 2);
    }

    // Random unitary from the QR decomposition of a complex Gaussian matrix.
    Rng rng(seed);
    Eigen::MatrixXcd g(dim, dim);
    for (std::int64_t c = 0; c < dim; ++c) {
        for (std::int64_t r = 0; r < dim; ++r) g(r, c) = Complex(rng.normal(), rng.normal());
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    const Eigen::MatrixXcd q = qr.householderQ();

    Eigen::MatrixXcd h = q * spectrum.asDiagonal() * q.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    return Operator(std::move(h));
}

Operator make_level_projector(const Operator& h, int level, int dense_limit) {
    const Eigensystem es = eigensystem(h, dense_limit);
    if (level < 0 || level >= es.eigenvalues.size()) {
        throw std::invalid_argument("make_level_projector: level out of range");
    }
    const Eigen::VectorXcd v = es.eigenvectors.col(level);
    Eigen::MatrixXcd proj = v * v.adjoint();
    proj = 0.5 * (proj + proj.adjoint()).eval();
    return Operator(std::move(proj));
}

// --- result emission -------------------------------------------------------

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out.precision(17);
    return out;
}

} // namespace

void write_results_csv(const std::string& path, const std::vector<CaseResult>& results) {
    std::ofstream out = open_out(path);
    out << "case_id,model,strategy,init,seed,n_qubits,dtau,converged,steps,final_fidelity,final_energy,gap,wall_time_s\n";
    for (const CaseResult& r : results) {
        out << r.case_id << ',' << r.model << ',' << r.strategy << ',' << r.init << ',' << r.seed << ','
            << r.n_qubits << ',' << r.dtau << ',' << (r.converged ? 1 : 0) << ','
            << (r.converged ? std::to_string(r.steps) : std::string("did-not-converge")) << ','
            << r.final_fidelity << ',' << r.final_energy << ',' << r.gap << ',' << r.wall_time_s << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "step,tau,energy,fidelity";
    for (std::size_t k = 0; k < traj.beta.size(); ++k) out << ",beta_" << k;
    out << '\n';
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        out << m << ',' << traj.times[m] << ',' << traj.energy[m] << ',' << traj.fidelity[m];
        for (std::size_t k = 0; k < traj.beta.size(); ++k) out << ',' << traj.beta[k][m];
        out << '\n';
    }
}

void write_spectrum_csv(const std::string& path, const std::vector<double>& times,
                        const std::vector<Eigen::VectorXd>& spectrum) {
    std::ofstream out = open_out(path);
    const Eigen::Index dim = spectrum.empty() ? 0 : spectrum.front().size();
    out << "step,tau";
    for (Eigen::Index i = 0; i < dim; ++i) out << ",e" << i;
    out << '\n';
    for (std::size_t m = 0; m < spectrum.size(); ++m) {
        out << m << ',' << times[m];
        for (Eigen::Index i = 0; i < dim; ++i) out << ',' << spectrum[m](i);
        out << '\n';
    }
}

void write_gap_scan_csv(const std::string& path, const GapScanResult& scan) {
    std::ofstream out = open_out(path);
    out << "s,e0,e1,gap\n";
    for (const GapScanPoint& p : scan.points) {
        out << p.s << ',' << p.e0 << ',' << p.e1 << ',' << p.gap << '\n';
    }
}

void write_selection_csv(const std::string& path, const std::vector<CandidateScore>& scores,
                         const std::vector<PauliString>& selected) {
    std::ofstream out = open_out(path);
    out << "candidate,B,selected\n";
    for (const CandidateScore& s : scores) {
        const bool chosen = std::find(selected.begin(), selected.end(), s.candidate) != selected.end();
        out << s.candidate.str() << ',' << s.B << ',' << (chosen ? 1 : 0) << '\n';
    }
}

void write_manifest(const std::string& path, const std::vector<std::pair<std::string, std::string>>& entries) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : entries) j[key] = value;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace itc
