#pragma once

#include <optional>

#include <Eigen/Dense>

#include "itc/pauli.hpp"
#include "itc/state.hpp"

namespace itc {

// Hermitian operator that is either a PauliSum or an explicit dense matrix.
// Problem Hamiltonians are Pauli sums; some control operators (matrix
// polynomials, eigenbasis-constructed controls) only exist in dense form,
// and the evolution engine accepts both through this type.
class Operator {
public:
    Operator(PauliSum sum); // NOLINT(google-explicit-constructor): intended implicit lift
    explicit Operator(Eigen::MatrixXcd dense);

    bool is_pauli() const { return pauli_.has_value(); }
    const PauliSum& pauli() const;
    const Eigen::MatrixXcd& dense() const;

    int n_qubits() const { return n_qubits_; }
    std::int64_t dim() const { return std::int64_t{1} << n_qubits_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& amps) const;
    double expectation(const StateVector& psi) const;
    Eigen::MatrixXcd to_dense(int dense_limit = kDefaultDenseLimit) const;

    // Upper bound on the spectral radius: coefficient one-norm for Pauli
    // sums, max absolute row sum (Gershgorin) for dense operators.
    double norm_bound() const;

private:
    std::optional<PauliSum> pauli_;
    std::optional<Eigen::MatrixXcd> dense_;
    int n_qubits_ = 0;
};

double anticommutator_expectation(const Operator& a, const Operator& b, const StateVector& psi);

} // namespace itc
