#include "itc/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itc {

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

double clamp_cap(double beta, double cap) { return std::clamp(beta, -cap, cap); }

} // namespace

void ControlStrategy::validate() const {
    if (beta_cap <= 0.0) throw std::invalid_argument("ControlStrategy: beta_cap must be positive");
    switch (kind) {
        case StrategyKind::none:
            break;
        case StrategyKind::gradient:
            if (gain <= 0.0) throw std::invalid_argument("ControlStrategy: gain must be positive");
            break;
        case StrategyKind::type1:
            if (S <= 0.0 || gamma <= 0.0) throw std::invalid_argument("ControlStrategy: type1 needs S > 0 and gamma > 0");
            if (type1_sign != 1 && type1_sign != -1) throw std::invalid_argument("ControlStrategy: type1_sign must be +1 or -1");
            break;
        case StrategyKind::type2:
            if (!(K1 > K2 && K2 > 0.0)) throw std::invalid_argument("ControlStrategy: type2 needs K1 > K2 > 0");
            if (equil_window < 2) throw std::invalid_argument("ControlStrategy: equil_window must be at least 2");
            if (equil_tol_rel <= 0.0) throw std::invalid_argument("ControlStrategy: equil_tol_rel must be positive");
            break;
    }
}

double feedback_T(const StateVector& psi, const Operator& h_p, const Operator& h_dk) {
    return 2.0 * h_p.expectation(psi) * h_dk.expectation(psi) - anticommutator_expectation(h_p, h_dk, psi);
}

double beta_type1(double t_k, const ControlStrategy& strategy) {
    if (t_k < strategy.L) return 0.0;
    const double s = strategy.S;
    const double raw = 2.0 * s / (1.0 + std::exp(-strategy.gamma * t_k)) - s;
    return clamp_cap(strategy.type1_sign * raw, strategy.beta_cap);
}

double beta_type2(double t_k, const ControlState& state, int control_index, const ControlStrategy& strategy) {
    const auto k = static_cast<std::size_t>(control_index);
    if (k >= state.latched.size()) throw std::invalid_argument("beta_type2: control index out of range");
    if (state.latched[k] || state.phase == ControlPhase::off) return 0.0;
    const int sgn = sign_of(t_k);
    const double beta = state.phase == ControlPhase::phase1 ? strategy.K1 * sgn : -strategy.K2 * sgn;
    return clamp_cap(beta, strategy.beta_cap);
}

double beta_gradient(double t_k, const ControlStrategy& strategy) {
    return clamp_cap(-strategy.gain * t_k, strategy.beta_cap);
}

ControlState phase_update(ControlState state, const std::vector<double>& energy_window, double tol) {
    if (energy_window.size() < 2) throw std::invalid_argument("phase_update: window length must be at least 2");
    if (state.phase != ControlPhase::phase1) return state;
    double max_change = 0.0;
    for (std::size_t i = 1; i < energy_window.size(); ++i) {
        max_change = std::max(max_change, std::abs(energy_window[i] - energy_window[i - 1]));
    }
    if (max_change < tol) state.phase = ControlPhase::phase2;
    return state;
}

double admissible_bound(const StateVector& psi, const Operator& h_p) {
    return std::abs(h_p.expectation(psi));
}

ControlPolicy::ControlPolicy(ControlStrategy strategy, int n_controls)
    : strategy_(strategy), state_(n_controls) {
    strategy_.validate();
    if (n_controls < 0) throw std::invalid_argument("ControlPolicy: negative control count");
}

std::vector<double> ControlPolicy::step(const std::vector<double>& feedback, double energy, double cap) {
    const std::size_t n = state_.latched.size();
    if (feedback.size() != n) throw std::invalid_argument("ControlPolicy::step: feedback size mismatch");
    const double effective_cap = std::min(cap, strategy_.beta_cap);

    if (strategy_.kind == StrategyKind::type2) {
        state_.energy_history.push_back(energy);
        const auto window = static_cast<std::size_t>(strategy_.equil_window);
        if (state_.energy_history.size() > window) {
            state_.energy_history.erase(state_.energy_history.begin());
        }
        if (state_.phase == ControlPhase::phase1 && state_.energy_history.size() == window) {
            const double tol = strategy_.equil_tol_rel * std::max(std::abs(energy), 1e-12);
            state_ = phase_update(state_, state_.energy_history, tol);
            if (state_.phase == ControlPhase::phase2 && phase_switch_step_ < 0) {
                phase_switch_step_ = steps_seen_;
            }
        }
    }

    std::vector<double> betas(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t_k = feedback[k];
        switch (strategy_.kind) {
            case StrategyKind::none:
                break;
            case StrategyKind::gradient:
                betas[k] = clamp_cap(beta_gradient(t_k, strategy_), effective_cap);
                break;
            case StrategyKind::type1:
                betas[k] = clamp_cap(beta_type1(t_k, strategy_), effective_cap);
                break;
            case StrategyKind::type2: {
                betas[k] = clamp_cap(beta_type2(t_k, state_, static_cast<int>(k), strategy_), effective_cap);
                // Track nonzero feedback signs; +,-,+ or -,+,- on consecutive
                // steps means the pulse is chattering at the operator's limit,
                // so the control is retired for the rest of the run.
                const int sgn = t_k > 0.0 ? 1 : (t_k < 0.0 ? -1 : 0);
                auto& hist = state_.sign_history[k];
                if (sgn == 0) {
                    hist = {0, 0};
                } else {
                    if (hist[0] != 0 && hist[1] != 0 && hist[1] == -sgn && hist[0] == sgn) {
                        state_.latched[k] = true;
                        betas[k] = 0.0;
                    }
                    hist[0] = hist[1];
                    hist[1] = sgn;
                }
                break;
            }
        }
    }

    if (strategy_.kind == StrategyKind::type2 && state_.phase != ControlPhase::off &&
        std::all_of(state_.latched.begin(), state_.latched.end(), [](bool b) { return b; }) && !state_.latched.empty()) {
        state_.phase = ControlPhase::off;
    }

    ++steps_seen_;
    return betas;
}

} // namespace itc
