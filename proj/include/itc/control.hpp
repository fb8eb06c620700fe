#pragma once

#include <vector>

#include "itc/op.hpp"
#include "itc/state.hpp"

namespace itc {

enum class StrategyKind { none, gradient, type1, type2 };

// Closed-loop policy parameters. Only the fields of the selected kind are
// consulted; validate() checks the corresponding positivity constraints.
struct ControlStrategy {
    StrategyKind kind = StrategyKind::none;

    // type1: sigmoid threshold pulse.
    double S = 1.0;     // max admissible strength
    double gamma = 1.0; // sigmoid slope
    double L = 0.0;     // activation threshold on the feedback

    // type2: two-phase bang-bang pulse, K1 >> K2.
    double K1 = 10.0;
    double K2 = 1.0;

    // gradient: proportional law.
    double gain = 1.0;

    double beta_cap = 10.0; // global bound on |beta| for every kind

    // Equilibrium detection for the type2 phase switch: the phase-1 ->
    // phase-2 transition fires when every consecutive energy change across
    // a window of equil_window steps is below equil_tol_rel * |E|.
    double equil_tol_rel = 1e-3;
    int equil_window = 10;

    // The type1 formula gives beta the sign of the feedback. With -1 the
    // sign is flipped so the pulse contributes first-order energy descent
    // instead. Keep +1 to run the published form.
    int type1_sign = +1;

    void validate() const;
};

enum class ControlPhase { phase1 = 1, phase2 = 2, off = 0 };

// Mutable per-run control bookkeeping. Owned by a single evolve loop.
struct ControlState {
    ControlPhase phase = ControlPhase::phase1;
    // Last two observed nonzero feedback signs per control (older first);
    // 0 marks "no observation yet". A zero-sign step clears the chain.
    std::vector<std::array<int, 2>> sign_history;
    std::vector<bool> latched; // control permanently off once true
    std::vector<double> energy_history;

    explicit ControlState(int n_controls = 0)
        : sign_history(static_cast<std::size_t>(n_controls), {0, 0}),
          latched(static_cast<std::size_t>(n_controls), false) {}
};

// Feedback for one control: T_k = 2<H_p><H_dk> - <{H_p, H_dk}>. This equals
// the first-order rate at which a unit pulse on H_dk changes <H_p> along the
// normalized imaginary-time flow.
double feedback_T(const StateVector& psi, const Operator& h_p, const Operator& h_dk);

double beta_type1(double t_k, const ControlStrategy& strategy);
double beta_type2(double t_k, const ControlState& state, int control_index, const ControlStrategy& strategy);
double beta_gradient(double t_k, const ControlStrategy& strategy);

// Phase-1 -> phase-2 switch on a flat energy window; otherwise unchanged.
ControlState phase_update(ControlState state, const std::vector<double>& energy_window, double tol);

// |<H_p>|: recommended per-step cap on |beta| that keeps the controlled
// spectrum from re-ordering the low levels.
double admissible_bound(const StateVector& psi, const Operator& h_p);

// Stateful orchestrator used by the evolution loop: applies the selected
// pulse law, maintains sign latches and the type2 phase machinery.
class ControlPolicy {
public:
    ControlPolicy(ControlStrategy strategy, int n_controls);

    // One closed-loop decision. cap is the effective bound on |beta| for
    // this step (min of strategy.beta_cap and any adaptive bound).
    std::vector<double> step(const std::vector<double>& feedback, double energy, double cap);

    const ControlStrategy& strategy() const { return strategy_; }
    const ControlState& state() const { return state_; }
    int phase_switch_step() const { return phase_switch_step_; } // -1 if never fired

private:
    ControlStrategy strategy_;
    ControlState state_;
    int steps_seen_ = 0;
    int phase_switch_step_ = -1;
};

} // namespace itc
