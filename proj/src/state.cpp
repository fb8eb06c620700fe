#include "itc/state.hpp"

#include <cmath>
#include <stdexcept>

namespace itc {

namespace {

int qubit_count_for(std::int64_t dim) {
    if (dim < 2) throw std::invalid_argument("StateVector: dimension must be at least 2");
    int n = 0;
    std::int64_t d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw std::invalid_argument("StateVector: dimension must be a power of two");
        d /= 2;
        ++n;
    }
    return n;
}

} // namespace

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
    n_qubits_ = qubit_count_for(amps_.size());
    const double norm = amps_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("StateVector: amplitudes must have finite nonzero norm");
    }
    amps_ /= norm;
}

StateVector StateVector::plus_state(int n_qubits) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    return StateVector(Eigen::VectorXcd::Constant(dim, Complex(1.0, 0.0)));
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    if (index >= static_cast<std::uint64_t>(dim)) {
        throw std::invalid_argument("StateVector: basis index out of range");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
    amps(static_cast<std::int64_t>(index)) = Complex(1.0, 0.0);
    return StateVector(std::move(amps));
}

StateVector StateVector::random_state(int n_qubits, Rng& rng) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    Eigen::VectorXcd amps(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        amps(i) = Complex(rng.normal(), rng.normal());
    }
    return StateVector(std::move(amps));
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    const Complex overlap = a.amps().dot(b.amps());
    const double f = std::norm(overlap);
    return f > 1.0 ? 1.0 : f; // clip rounding spill above 1
}

} // namespace itc
