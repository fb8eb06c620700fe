#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "itc/control.hpp"
#include "itc/op.hpp"
#include "itc/state.hpp"

namespace itc {

enum class StepMethod { euler, exact };

struct Eigensystem {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXcd eigenvectors; // columns, orthonormal
};

// Dense eigendecomposition; throws if the operator exceeds dense_limit.
Eigensystem eigensystem(const Operator& h, int dense_limit = kDefaultDenseLimit);

// Squared norm of the projection of psi onto the ground eigenspace
// (eigenvalues within degeneracy_tol of the minimum).
double ground_space_fidelity(const StateVector& psi, const Eigensystem& es, double degeneracy_tol = 1e-8);

// One step of normalized imaginary-time propagation, e^{-H dtau}|psi> up to
// normalization. euler uses (1 - H dtau) and requires dtau * norm_bound < 1;
// exact uses the dense eigensystem and requires n <= dense_limit.
StateVector ite_step(const StateVector& psi, const Operator& h, double dtau, StepMethod method,
                     int dense_limit = kDefaultDenseLimit);

struct StopRule {
    long max_steps = 200000;
    // Converged once ground-space fidelity against the problem Hamiltonian
    // reaches this value; set use_fidelity = false to run to max_steps.
    double fidelity_threshold = 0.99;
    bool use_fidelity = true;
};

struct EvolveOptions {
    StepMethod method = StepMethod::euler;
    int dense_limit = kDefaultDenseLimit;
    bool record_spectrum = false; // eigenvalues of H(tau) per recorded step
    // When set, the per-step |beta| bound is min(beta_cap, |<H_p>|).
    bool adaptive_cap = false;
};

// Time series emitted by evolve. All per-step sequences share one length;
// beta[k][m] is the pulse on control k applied between times[m] and
// times[m+1] (zero on the final record, where no further step is taken).
struct Trajectory {
    std::vector<double> times;
    std::vector<double> energy;
    std::vector<double> fidelity;
    std::vector<std::vector<double>> beta;      // [control][step]
    std::vector<Eigen::VectorXd> spectrum;      // optional, [step] -> ascending eigenvalues

    std::optional<StateVector> final_state;
    bool converged = false;
    long steps = 0; // imaginary-time steps taken

    void validate() const; // cross-sequence length and range checks
};

// Closed-loop normalized imaginary-time evolution under
// H(tau) = H_p + sum_k beta_k(tau) H_dk. With policy == nullptr this is
// plain imaginary-time evolution under H_p. Each step evaluates the
// feedback T_k, asks the policy for beta_k, advances one ite_step, and
// records energy / fidelity / pulses.
Trajectory evolve(const StateVector& psi0, const Operator& h_p, const std::vector<Operator>& controls,
                  ControlPolicy* policy, double dtau, const StopRule& stop, const EvolveOptions& opts = {});

// Energy differences <v_0|H(tau)|v_0> - <v_i|H(tau)|v_i> evaluated in the
// fixed eigenbasis {v_i} of H_p, replayed over a recorded pulse history.
// Row m covers times[m]; column i-1 holds the i-th excited difference.
struct GapTrajectory {
    std::vector<double> times;
    Eigen::MatrixXd delta;
};

GapTrajectory gap_trajectory(const Operator& h_p, const std::vector<Operator>& controls,
                             const std::vector<double>& times,
                             const std::vector<std::vector<double>>& beta_history,
                             int dense_limit = kDefaultDenseLimit);

// Krylov-style reachability heuristic: grow span{products of {H_p, controls}
// applied to psi0} until it stabilizes, then report which H_p eigenstates
// have non-negligible overlap with the span.
struct ControllabilityReport {
    std::vector<bool> reachable;
    std::vector<double> overlaps; // squared projection of each eigenstate onto the span
    bool complete = false;        // every eigenstate reachable
    int span_dim = 0;
};

ControllabilityReport controllability_probe(const Operator& h_p, const std::vector<Operator>& controls,
                                            const StateVector& psi0, int dense_limit = kDefaultDenseLimit,
                                            double overlap_tol = 1e-8);

} // namespace itc
