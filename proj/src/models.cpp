#include "itc/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "itc/engine.hpp"
#include "itc/rng.hpp"

namespace itc {

namespace {

PauliString single_site(int n, int site, char letter) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(site)] = letter;
    return PauliString(std::move(s));
}

PauliString two_site(int n, int a, int b, char la, char lb) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(a)] = la;
    s[static_cast<std::size_t>(b)] = lb;
    return PauliString(std::move(s));
}

} // namespace

PauliSum build_xxx_2d(const LatticeSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("build_xxx_2d: grid must be at least 1x1");
    const int n = spec.rows * spec.cols;
    std::vector<PauliSum::Term> terms;
    for (int q = 0; q < n; ++q) {
        terms.push_back({0.2, single_site(n, q, 'Z')});
    }
    auto add_edge = [&](int a, int b) {
        for (char letter : {'X', 'Y', 'Z'}) {
            terms.push_back({0.1, two_site(n, a, b, letter, letter)});
        }
    };
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            const int q = r * spec.cols + c;
            if (c + 1 < spec.cols) add_edge(q, q + 1);
            if (r + 1 < spec.rows) add_edge(q, q + spec.cols);
        }
    }
    return PauliSum(n, std::move(terms));
}

PauliSum build_sk(int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("build_sk: need at least 2 spins");
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<PauliSum::Term> terms;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            terms.push_back({rng.normal() * scale, two_site(n, i, j, 'Z', 'Z')});
        }
    }
    return PauliSum(n, std::move(terms));
}

void CnfFormula::validate() const {
    if (n_vars < 1) throw std::invalid_argument("CnfFormula: need at least one variable");
    for (const auto& clause : clauses) {
        for (int lit : clause) {
            if (lit == 0 || std::abs(lit) > n_vars) {
                throw std::invalid_argument("CnfFormula: literal " + std::to_string(lit) + " out of range");
            }
        }
    }
}

CnfFormula load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dimacs: cannot open " + path);
    CnfFormula f;
    std::string line;
    int line_no = 0;
    long declared_clauses = -1;
    std::vector<int> pending;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head)) continue;
        if (head == "c") continue;
        if (head == "p") {
            std::string kind;
            if (!(fields >> kind >> f.n_vars >> declared_clauses) || kind != "cnf") {
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed problem line");
            }
            continue;
        }
        // Clause data: integers terminated by 0, possibly spanning lines.
        fields.clear();
        fields.str(line);
        int lit = 0;
        while (fields >> lit) {
            if (lit == 0) {
                if (pending.size() != 3) {
                    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": clause with " +
                                             std::to_string(pending.size()) + " literals (need exactly 3)");
                }
                f.clauses.push_back({pending[0], pending[1], pending[2]});
                pending.clear();
            } else {
                pending.push_back(lit);
            }
        }
    }
    if (!pending.empty()) throw std::runtime_error(path + ": unterminated clause at end of file");
    if (f.n_vars == 0) throw std::runtime_error(path + ": missing 'p cnf' problem line");
    if (declared_clauses >= 0 && static_cast<long>(f.clauses.size()) != declared_clauses) {
        throw std::runtime_error(path + ": clause count " + std::to_string(f.clauses.size()) +
                                 " does not match declared " + std::to_string(declared_clauses));
    }
    f.validate();
    return f;
}

PauliSum sat_to_hamiltonian(const CnfFormula& f) {
    f.validate();
    const int n = f.n_vars;
    std::vector<PauliSum::Term> terms;
    for (const auto& clause : f.clauses) {
        // The clause is violated only when every literal is false, i.e.
        // variable v = 0 for a positive literal and v = 1 for a negative
        // one. The projector onto that assignment is the product of
        // (I + s Z_q)/2 with s = +1 for value 0 and s = -1 for value 1.
        std::array<int, 3> qubits{};
        std::array<double, 3> signs{};
        for (int i = 0; i < 3; ++i) {
            const int lit = clause[static_cast<std::size_t>(i)];
            qubits[static_cast<std::size_t>(i)] = std::abs(lit) - 1;
            signs[static_cast<std::size_t>(i)] = lit > 0 ? +1.0 : -1.0;
        }
        for (int mask = 0; mask < 8; ++mask) {
            double coeff = 1.0 / 8.0;
            std::string s(static_cast<std::size_t>(n), 'I');
            for (int i = 0; i < 3; ++i) {
                if (mask & (1 << i)) {
                    coeff *= signs[static_cast<std::size_t>(i)];
                    s[static_cast<std::size_t>(qubits[static_cast<std::size_t>(i)])] = 'Z';
                }
            }
            terms.push_back({coeff, PauliString(std::move(s))});
        }
    }
    return PauliSum(n, std::move(terms));
}

PauliSum aqc_hamiltonian(const CnfFormula& f, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("aqc_hamiltonian: s must lie in [0, 1]");
    f.validate();
    const int n = f.n_vars;
    std::vector<PauliSum::Term> init_terms;
    for (int q = 0; q < n; ++q) {
        init_terms.push_back({0.5, single_site(n, q, 'I')});
        init_terms.push_back({-0.5, single_site(n, q, 'X')});
    }
    PauliSum h = (1.0 - s) * PauliSum(n, std::move(init_terms));
    h += s * sat_to_hamiltonian(f);
    return h;
}

GapScanResult gap_scan(const CnfFormula& f, int n_points, int dense_limit) {
    if (n_points < 2) throw std::invalid_argument("gap_scan: need at least 2 grid points");
    if (f.n_vars > dense_limit) {
        throw std::domain_error("gap_scan: " + std::to_string(f.n_vars) + " variables exceeds dense limit");
    }
    GapScanResult out;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_points; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n_points - 1);
        const Eigensystem es = eigensystem(Operator(aqc_hamiltonian(f, s)), dense_limit);
        GapScanPoint point;
        point.s = s;
        point.e0 = es.eigenvalues(0);
        point.e1 = es.eigenvalues(1);
        point.gap = point.e1 - point.e0;
        if (point.gap < out.min_gap) {
            out.min_gap = point.gap;
            out.min_gap_s = s;
        }
        out.points.push_back(point);
    }
    return out;
}

Eigen::VectorXd default_diag_entries(std::int64_t dim) {
    if (dim < 2) throw std::invalid_argument("default_diag_entries: dimension must be at least 2");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
    d(0) = -5.0;
    d(1) = 5.0;
    return d;
}

Operator build_diag_experiment(const Operator& h_p, const DiagExperimentSpec& spec, int dense_limit) {
    const std::int64_t dim = h_p.dim();
    if (spec.diag_entries.size() != dim) {
        throw std::invalid_argument("build_diag_experiment: diag_entries length must equal 2^n");
    }
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw std::invalid_argument("build_diag_experiment: p must lie in [0, 1]");

    Eigen::MatrixXd d_tilde = spec.diag_entries.asDiagonal();

    // R(p): choose exactly round(p * n_pairs) of the i<j pairs, mirror the
    // uniform values to keep the matrix symmetric, leave the diagonal zero.
    const std::int64_t n_pairs = dim * (dim - 1) / 2;
    const auto target = static_cast<std::int64_t>(std::llround(spec.p * static_cast<double>(n_pairs)));
    if (target > 0) {
        Rng rng(spec.seed);
        std::vector<std::int64_t> pair_index(static_cast<std::size_t>(n_pairs));
        for (std::size_t i = 0; i < pair_index.size(); ++i) pair_index[i] = static_cast<std::int64_t>(i);
        // Partial Fisher-Yates: the first `target` entries become the chosen pairs.
        for (std::int64_t i = 0; i < target; ++i) {
            const auto j = i + static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(n_pairs - i));
            std::swap(pair_index[static_cast<std::size_t>(i)], pair_index[static_cast<std::size_t>(j)]);
        }
        for (std::int64_t i = 0; i < target; ++i) {
            // Decode the flat pair index into (row, col) with row < col.
            std::int64_t rest = pair_index[static_cast<std::size_t>(i)];
            std::int64_t row = 0;
            std::int64_t row_len = dim - 1;
            while (rest >= row_len) {
                rest -= row_len;
                ++row;
                --row_len;
            }
            const std::int64_t col = row + 1 + rest;
            const double value = rng.uniform();
            d_tilde(row, col) += value;
            d_tilde(col, row) += value;
        }
    }

    const Eigensystem es = eigensystem(h_p, dense_limit);
    Eigen::MatrixXcd rotated = es.eigenvectors * d_tilde * es.eigenvectors.adjoint();
    if (spec.mode == DiagMode::replace) {
        rotated -= h_p.to_dense(dense_limit);
    }
    // Symmetrize away the rounding defect so the Operator constructor's
    // Hermiticity check cannot trip on accumulated error.
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    return Operator(std::move(rotated));
}

std::vector<PauliString> commuting_basis(int n) {
    if (n < 1) throw std::invalid_argument("commuting_basis: need at least one qubit");
    return {
        PauliString(std::string(static_cast<std::size_t>(n), 'X')),
        PauliString(std::string(static_cast<std::size_t>(n), 'Y')),
        PauliString(std::string(static_cast<std::size_t>(n), 'Z')),
    };
}

} // namespace itc
