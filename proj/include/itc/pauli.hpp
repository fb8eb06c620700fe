#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "itc/state.hpp"

namespace itc {

inline constexpr double kCoeffDropTol = 1e-15;

// Tensor product of single-qubit operators from {I, X, Y, Z}. The leftmost
// character in text form is qubit 0, matching the basis-index convention in
// StateVector (bit q = qubit q).
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::string letters);

    // Validating constructor for untrusted text; rejects empty input and
    // characters outside {I, X, Y, Z}.
    static PauliString parse(const std::string& text);

    int n_qubits() const { return static_cast<int>(letters_.size()); }
    char letter(int q) const { return letters_[static_cast<std::size_t>(q)]; }
    const std::string& str() const { return letters_; }

    bool is_identity() const;
    int weight() const; // number of non-identity letters

    // Bit q of x_mask is set iff letter q is X or Y; bit q of z_mask iff
    // letter q is Z or Y. Together with the Y count these drive the
    // matrix-free application rules.
    std::uint64_t x_mask() const;
    std::uint64_t z_mask() const;
    int y_count() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;
    friend std::strong_ordering operator<=>(const PauliString&, const PauliString&) = default;

private:
    std::string letters_;
};

PauliString concat(const PauliString& a, const PauliString& b);

// All distinct rearrangements of the letters of pattern, lexicographic.
std::vector<PauliString> permutation_set(const PauliString& pattern);

// All distinct circular shifts of pattern, lexicographic.
std::vector<PauliString> cyclic_set(const PauliString& pattern);

// Two Pauli strings commute iff the number of positions where both letters
// are non-identity and different is even.
bool commutes(const PauliString& a, const PauliString& b);

// Hermitian operator as a real-weighted sum of Pauli strings. Construction
// canonicalizes: terms sorted by string, duplicates merged by summing, and
// coefficients with |c| < kCoeffDropTol dropped.
class PauliSum {
public:
    struct Term {
        double coeff = 0.0;
        PauliString string;

        bool operator==(const Term&) const = default;
    };

    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
    PauliSum(int n_qubits, std::vector<Term> terms);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    double coefficient(const PauliString& s) const; // 0 if absent
    double one_norm() const;                        // sum |c_j|, bounds the spectral radius

    PauliSum& operator+=(const PauliSum& other);
    PauliSum& operator*=(double factor);
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator*(double f, PauliSum s) { return s *= f; }

    bool operator==(const PauliSum&) const = default;

    // H|psi> accumulated term-by-term via bit manipulation; the result is
    // intentionally unnormalized.
    Eigen::VectorXcd apply(const Eigen::VectorXcd& amps) const;

    // 2^n x 2^n Hermitian matrix; throws if n_qubits exceeds dense_limit.
    Eigen::MatrixXcd to_dense(int dense_limit = kDefaultDenseLimit) const;

private:
    void canonicalize();

    int n_qubits_ = 0;
    std::vector<Term> terms_;
};

// <psi|H|psi>. The imaginary residue of the quadratic form is discarded;
// psi must be normalized.
double expectation(const PauliSum& h, const StateVector& psi);

// <psi|AB + BA|psi> = 2 Re <A psi|B psi>.
double anticommutator_expectation(const PauliSum& a, const PauliSum& b, const StateVector& psi);

// Text format: one "<coefficient> <pauli_string>" per line, '#' starts a
// comment, blank lines ignored. Qubit count is inferred from the string
// length and must be uniform across the file.
PauliSum load_hamiltonian(const std::string& path);
void save_hamiltonian(const PauliSum& h, const std::string& path);
PauliSum parse_hamiltonian_text(const std::string& text, const std::string& origin = "<string>");

} // namespace itc
