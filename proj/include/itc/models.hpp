#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "itc/op.hpp"
#include "itc/pauli.hpp"

namespace itc {

// Open-boundary rows x cols grid; qubit index is row-major.
struct LatticeSpec {
    int rows = 1;
    int cols = 1;
};

// 0.2 sum_i Z_i + 0.1 sum_<ij> (X_i X_j + Y_i Y_j + Z_i Z_j) over the
// nearest-neighbor edges of the open grid.
PauliSum build_xxx_2d(const LatticeSpec& spec);

// All-to-all sum_{i<j} J_ij Z_i Z_j with J_ij iid standard normal scaled by
// 1/sqrt(n); deterministic in the seed.
PauliSum build_sk(int n, std::uint64_t seed);

// Three signed DIMACS literals per clause; variable indices are 1-based.
struct CnfFormula {
    int n_vars = 0;
    std::vector<std::array<int, 3>> clauses;

    void validate() const;
};

CnfFormula load_dimacs(const std::string& path);

// One rank-1 projector per clause onto its unique falsifying assignment,
// expanded into I/Z products. A computational basis state's eigenvalue is
// the number of clauses it violates. Variable v maps to qubit v-1, and the
// value "true" maps to |1>.
PauliSum sat_to_hamiltonian(const CnfFormula& f);

// (1-s) * H_init + s * H_final with H_init = 1/2 sum_i (I - X_i).
PauliSum aqc_hamiltonian(const CnfFormula& f, double s);

struct GapScanPoint {
    double s = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;
    double gap = 0.0;
};

struct GapScanResult {
    std::vector<GapScanPoint> points;
    double min_gap = 0.0;
    double min_gap_s = 0.0;
};

// E_1(s) - E_0(s) on a uniform s grid over [0, 1].
GapScanResult gap_scan(const CnfFormula& f, int n_points, int dense_limit = kDefaultDenseLimit);

enum class DiagMode {
    additive, // returned operator is a control added on top of H_p
    replace,  // returned operator minus H_p, so H_p + control = U D U^dag
};

// Control operator built in the eigenbasis of the problem Hamiltonian:
// U D U^dag with D = diag(diag_entries) + R(p), where U collects the
// ascending-order eigenvectors of H_p and R(p) is a random sparse real
// symmetric matrix with zero diagonal, exactly a p fraction of nonzero
// off-diagonal pairs, and values uniform in [0, 1).
struct DiagExperimentSpec {
    Eigen::VectorXd diag_entries;
    double p = 0.0;
    std::uint64_t seed = 0;
    DiagMode mode = DiagMode::additive;
};

Operator build_diag_experiment(const Operator& h_p, const DiagExperimentSpec& spec,
                               int dense_limit = kDefaultDenseLimit);

// diag(-5, 5, 0, ..., 0): lowers the ground level and raises the first
// excited level when applied with a positive pulse.
Eigen::VectorXd default_diag_entries(std::int64_t dim);

// {XX..X, YY..Y, ZZ..Z}: a mutually commuting control set.
std::vector<PauliString> commuting_basis(int n);

} // namespace itc
