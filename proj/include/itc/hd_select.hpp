#pragma once

#include <vector>

#include "itc/control.hpp"
#include "itc/engine.hpp"
#include "itc/op.hpp"
#include "itc/pauli.hpp"

namespace itc {

// Orbital occupation split: positions [0, n_electrons) are occupied and
// [n_electrons, n_orbitals) are virtual, lowest orbital leftmost.
struct OrbitalSplit {
    int n_electrons = 0;
    int n_orbitals = 0;

    void validate() const;
};

struct CandidateScore {
    PauliString candidate;
    double B = 0.0; // time-summed pulse over the probe run
};

// Every string with exactly one or exactly two Z letters, lexicographic.
std::vector<PauliString> candidate_pool(int n);

// Single-Z strings in the virtual block plus double-Z strings confined to
// either block.
std::vector<PauliString> empirical_hd(const OrbitalSplit& split);

enum class HdVariant { full, half, all, empirical };

// The four selection families: empirical as above; full adds the occupied
// single-Z strings; half drops the occupied double-Z strings; all is the
// whole Z pool regardless of the split.
std::vector<PauliString> variant_hd(HdVariant kind, const OrbitalSplit& split);

// Dense truncated powers H_p^k for k in orders: entries below threshold are
// zeroed, the result re-Hermitized by symmetric averaging, and (by default)
// scaled by its largest-magnitude entry.
std::vector<Operator> polynomial_hd(const Operator& h_p, const std::vector<int>& orders, double threshold,
                                    int dense_limit = kDefaultDenseLimit, bool normalize = true);

// Union over the given weights w of all circular shifts of Z^w I^{n-w}.
std::vector<PauliString> cyclic_z_hd(int n, const std::vector<int>& weights);

struct ScoreOptions {
    ControlStrategy policy;          // defaults to the gradient law below
    double dtau = 0.03;
    long max_steps = 20000;
    double fidelity_threshold = 0.99;
    StepMethod method = StepMethod::euler;
    int dense_limit = kDefaultDenseLimit;

    ScoreOptions() {
        policy.kind = StrategyKind::gradient;
        policy.gain = 1.0;
        policy.beta_cap = 10.0;
    }
};

// One controlled evolution from |+...+> with every pool element active as a
// control; returns B_i = sum over recorded steps of beta_i(tau), aligned
// with the pool. Deterministic for fixed inputs.
std::vector<CandidateScore> score_candidates(const Operator& h_p, const std::vector<PauliString>& pool,
                                             const ScoreOptions& opts = {});

} // namespace itc
