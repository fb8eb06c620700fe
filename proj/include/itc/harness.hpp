#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itc/control.hpp"
#include "itc/engine.hpp"
#include "itc/hd_select.hpp"
#include "itc/models.hpp"
#include "itc/op.hpp"

namespace itc {

// Initial-state selection for a benchmark case.
struct InitSpec {
    enum class Kind { plus, basis, random } kind = Kind::plus;
    std::uint64_t basis_index = 0; // basis only
    std::uint64_t seed = 0;        // random only

    StateVector make(int n_qubits) const;
    std::string describe() const;
};

struct CaseSpec {
    std::string case_id;
    std::string model;    // free-form descriptor, echoed into results
    std::string strategy; // free-form descriptor, echoed into results

    Operator h_p{PauliSum(1)}; // placeholder; callers must set the real model
    std::vector<Operator> controls;
    ControlStrategy control; // kind none = plain imaginary-time evolution
    InitSpec init;

    double dtau = 0.03;
    double fidelity_threshold = 0.99;
    long max_steps = 200000;
    StepMethod method = StepMethod::euler;
    int dense_limit = kDefaultDenseLimit;
    bool adaptive_cap = false;
    std::uint64_t seed = 0;
    bool record_trajectory = false;
};

struct CaseResult {
    std::string case_id;
    std::string model;
    std::string strategy;
    std::string init;
    std::uint64_t seed = 0;
    int n_qubits = 0;
    double dtau = 0.0;

    bool converged = false;
    long steps = -1; // -1 once a run fails to converge
    double final_fidelity = 0.0;
    double final_energy = 0.0;
    double gap = 0.0; // E1 - E0 of the problem Hamiltonian
    double wall_time_s = 0.0;

    std::optional<Trajectory> trajectory;
};

CaseResult run_case(const CaseSpec& spec);

// ite.steps / itc.steps; empty unless both runs converged.
std::optional<double> speedup(const CaseResult& ite, const CaseResult& itc);

struct SweepSpec {
    std::vector<CaseSpec> cases;
    int jobs = 1; // worker threads; results are merged by case order regardless
};

std::vector<CaseResult> sweep(const SweepSpec& spec);

// Paired full-vs-truncated runs of the sigmoid-threshold strategy: the
// reference run never truncates (threshold at -infinity); each schedule
// entry L re-runs with truncation once the feedback falls below L and
// reports the relative final-energy deficit at the shared step budget.
struct TruncationPoint {
    double L = 0.0;
    double full_energy = 0.0;
    double truncated_energy = 0.0;
    double energy_deficit_rel = 0.0;
    double full_fidelity = 0.0;
    double truncated_fidelity = 0.0;
};

struct TruncationReport {
    double gap = 0.0;
    std::vector<TruncationPoint> points;
};

TruncationReport truncation_experiment(const CaseSpec& base, const std::vector<double>& l_schedule);

// Controlled spectrum trajectory: per-step eigenvalues of H(tau), the mean
// pulse across controls, and the steps at which the problem ground
// eigenvector is no longer the minimal eigenvector of H(tau).
struct SpectrumReport {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> spectrum;
    std::vector<double> mean_beta;
    std::vector<long> reorder_steps;
    Trajectory trajectory;
};

SpectrumReport spectrum_report(const CaseSpec& spec);

// Synthetic dense Hamiltonian with a prescribed ground gap: spectrum
// (0, gap, 1 + gap, 1.7 + gap, ...) conjugated by a seeded random unitary.
Operator make_tunable_gap_operator(int n_qubits, double gap, std::uint64_t seed);

// Projector |v_level><v_level| onto an eigenvector of h, as a dense operator.
Operator make_level_projector(const Operator& h, int level, int dense_limit = kDefaultDenseLimit);

// --- result emission -------------------------------------------------------

void write_results_csv(const std::string& path, const std::vector<CaseResult>& results);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_spectrum_csv(const std::string& path, const std::vector<double>& times,
                        const std::vector<Eigen::VectorXd>& spectrum);
void write_gap_scan_csv(const std::string& path, const GapScanResult& scan);
void write_selection_csv(const std::string& path, const std::vector<CandidateScore>& scores,
                         const std::vector<PauliString>& selected);
// Flat key/value run manifest (JSON object of strings).
void write_manifest(const std::string& path, const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace itc
