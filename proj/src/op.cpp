#include "itc/op.hpp"

#include <cmath>
#include <stdexcept>

namespace itc {

namespace {

int qubit_count_for_dim(std::int64_t dim) {
    int n = 0;
    std::int64_t d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw std::invalid_argument("Operator: dense dimension must be a power of two");
        d /= 2;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("Operator: dense dimension must be at least 2");
    return n;
}

} // namespace

Operator::Operator(PauliSum sum) : pauli_(std::move(sum)), n_qubits_(pauli_->n_qubits()) {}

Operator::Operator(Eigen::MatrixXcd dense) : dense_(std::move(dense)) {
    if (dense_->rows() != dense_->cols()) throw std::invalid_argument("Operator: dense matrix must be square");
    n_qubits_ = qubit_count_for_dim(dense_->rows());
    const double herm_defect = (*dense_ - dense_->adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-9) {
        throw std::invalid_argument("Operator: dense matrix is not Hermitian (defect " + std::to_string(herm_defect) + ")");
    }
}

const PauliSum& Operator::pauli() const {
    if (!pauli_) throw std::logic_error("Operator: not Pauli-backed");
    return *pauli_;
}

const Eigen::MatrixXcd& Operator::dense() const {
    if (!dense_) throw std::logic_error("Operator: not dense-backed");
    return *dense_;
}

Eigen::VectorXcd Operator::apply(const Eigen::VectorXcd& amps) const {
    if (amps.size() != dim()) throw std::invalid_argument("Operator::apply: dimension mismatch");
    if (pauli_) return pauli_->apply(amps);
    return *dense_ * amps;
}

double Operator::expectation(const StateVector& psi) const {
    if (psi.dim() != dim()) throw std::invalid_argument("Operator::expectation: dimension mismatch");
    return std::real(psi.amps().dot(apply(psi.amps())));
}

Eigen::MatrixXcd Operator::to_dense(int dense_limit) const {
    if (pauli_) return pauli_->to_dense(dense_limit);
    if (n_qubits_ > dense_limit) {
        throw std::domain_error("Operator::to_dense: " + std::to_string(n_qubits_) +
                                " qubits exceeds dense limit " + std::to_string(dense_limit));
    }
    return *dense_;
}

double Operator::norm_bound() const {
    if (pauli_) return pauli_->one_norm();
    return dense_->cwiseAbs().rowwise().sum().maxCoeff();
}

double anticommutator_expectation(const Operator& a, const Operator& b, const StateVector& psi) {
    if (a.dim() != psi.dim() || b.dim() != psi.dim()) {
        throw std::invalid_argument("anticommutator_expectation: dimension mismatch");
    }
    const Eigen::VectorXcd av = a.apply(psi.amps());
    const Eigen::VectorXcd bv = b.apply(psi.amps());
    return 2.0 * std::real(av.dot(bv));
}

} // namespace itc
