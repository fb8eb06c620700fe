#pragma once

// Test-only reference implementations. These deliberately avoid the library
// code paths they are used to check: dense matrices come from explicit
// Kronecker products and the matrix exponential from a scaled Taylor series.

#include <complex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "itc/pauli.hpp"
#include "itc/rng.hpp"
#include "itc/state.hpp"

namespace oracle {

using itc::Complex;

inline Eigen::Matrix2cd single_qubit_matrix(char letter) {
    Eigen::Matrix2cd m;
    switch (letter) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("oracle: bad letter");
    }
    return m;
}

// kron(A, B) with A on the slow (high-bit) index.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Dense matrix of a Pauli string. Qubit 0 is the lowest basis-index bit, so
// it sits in the rightmost Kronecker factor.
inline Eigen::MatrixXcd pauli_string_matrix(const itc::PauliString& s) {
    Eigen::MatrixXcd m = single_qubit_matrix(s.letter(s.n_qubits() - 1));
    for (int q = s.n_qubits() - 2; q >= 0; --q) {
        m = kron(m, single_qubit_matrix(s.letter(q)));
    }
    return m;
}

inline Eigen::MatrixXcd pauli_sum_matrix(const itc::PauliSum& h) {
    const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& term : h.terms()) {
        m += term.coeff * pauli_string_matrix(term.string);
    }
    return m;
}

// e^{tau M} by scaling-and-squaring with a Taylor series.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m, double tau = 1.0) {
    Eigen::MatrixXcd a = tau * m;
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        a *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    const Eigen::Index dim = m.rows();
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 1; k <= 40; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) result = (result * result).eval();
    return result;
}

// Distinct rearrangements counted by explicit enumeration (std::set), for
// cross-checking the library's permutation generator.
inline std::size_t count_multiset_permutations(const std::string& letters) {
    std::string sorted = letters;
    std::sort(sorted.begin(), sorted.end());
    std::set<std::string> seen;
    std::vector<int> order(sorted.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    do {
        std::string perm;
        for (int idx : order) perm += sorted[static_cast<std::size_t>(idx)];
        seen.insert(perm);
    } while (std::next_permutation(order.begin(), order.end()));
    return seen.size();
}

inline itc::PauliString random_string(int n, itc::Rng& rng) {
    static const char letters[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    for (int q = 0; q < n; ++q) s += letters[rng.next_u64() % 4];
    return itc::PauliString(std::move(s));
}

inline itc::PauliSum random_sum(int n, int n_terms, itc::Rng& rng) {
    std::vector<itc::PauliSum::Term> terms;
    for (int t = 0; t < n_terms; ++t) {
        terms.push_back({2.0 * rng.uniform() - 1.0, random_string(n, rng)});
    }
    itc::PauliSum h(n, std::move(terms));
    if (h.size() == 0) {
        // All coefficients cancelled; retry with fresh draws.
        return random_sum(n, n_terms, rng);
    }
    return h;
}

inline itc::StateVector random_state(int n, itc::Rng& rng) {
    return itc::StateVector::random_state(n, rng);
}

} // namespace oracle
