#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "itc/rng.hpp"

namespace itc {

using Complex = std::complex<double>;

inline constexpr int kDefaultDenseLimit = 14;
inline constexpr double kNormTol = 1e-10;

// Normalized n-qubit wavefunction. Basis-state bit q holds the value of
// qubit q, so index = sum_q bit_q * 2^q. The constructor normalizes, which
// makes a StateVector valid by construction everywhere downstream.
class StateVector {
public:
    explicit StateVector(Eigen::VectorXcd amplitudes);

    static StateVector plus_state(int n_qubits);
    static StateVector basis_state(int n_qubits, std::uint64_t index);
    static StateVector random_state(int n_qubits, Rng& rng);

    int n_qubits() const { return n_qubits_; }
    std::int64_t dim() const { return amps_.size(); }
    const Eigen::VectorXcd& amps() const { return amps_; }

private:
    Eigen::VectorXcd amps_;
    int n_qubits_ = 0;
};

// |<a|b>|^2; invariant under a global phase of either argument.
double fidelity(const StateVector& a, const StateVector& b);

} // namespace itc
