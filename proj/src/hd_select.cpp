#include "itc/hd_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace itc {

namespace {

PauliString z_string(int n, const std::vector<int>& positions) {
    std::string s(static_cast<std::size_t>(n), 'I');
    for (int p : positions) s[static_cast<std::size_t>(p)] = 'Z';
    return PauliString(std::move(s));
}

void sort_unique(std::vector<PauliString>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

void OrbitalSplit::validate() const {
    if (!(0 < n_electrons && n_electrons < n_orbitals)) {
        throw std::invalid_argument("OrbitalSplit: need 0 < electrons < orbitals");
    }
}

std::vector<PauliString> candidate_pool(int n) {
    if (n < 2) throw std::invalid_argument("candidate_pool: need at least 2 qubits");
    std::vector<PauliString> pool;
    for (int i = 0; i < n; ++i) pool.push_back(z_string(n, {i}));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pool.push_back(z_string(n, {i, j}));
    }
    sort_unique(pool);
    return pool;
}

std::vector<PauliString> empirical_hd(const OrbitalSplit& split) {
    split.validate();
    const int n = split.n_orbitals;
    const int ne = split.n_electrons;
    std::vector<PauliString> out;
    for (int i = ne; i < n; ++i) out.push_back(z_string(n, {i}));
    for (int i = ne; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) out.push_back(z_string(n, {i, j}));
    }
    for (int i = 0; i < ne; ++i) {
        for (int j = i + 1; j < ne; ++j) out.push_back(z_string(n, {i, j}));
    }
    sort_unique(out);
    return out;
}

std::vector<PauliString> variant_hd(HdVariant kind, const OrbitalSplit& split) {
    split.validate();
    const int n = split.n_orbitals;
    const int ne = split.n_electrons;
    switch (kind) {
        case HdVariant::empirical:
            return empirical_hd(split);
        case HdVariant::full: {
            std::vector<PauliString> out = empirical_hd(split);
            for (int i = 0; i < ne; ++i) out.push_back(z_string(n, {i}));
            sort_unique(out);
            return out;
        }
        case HdVariant::half: {
            std::vector<PauliString> out;
            for (int i = ne; i < n; ++i) out.push_back(z_string(n, {i}));
            for (int i = ne; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) out.push_back(z_string(n, {i, j}));
            }
            sort_unique(out);
            return out;
        }
        case HdVariant::all:
            return candidate_pool(n);
    }
    throw std::logic_error("variant_hd: unreachable");
}

std::vector<Operator> polynomial_hd(const Operator& h_p, const std::vector<int>& orders, double threshold,
                                    int dense_limit, bool normalize) {
    if (orders.empty()) throw std::invalid_argument("polynomial_hd: no orders requested");
    for (int k : orders) {
        if (k < 2 || k > 8) throw std::invalid_argument("polynomial_hd: orders must lie in [2, 8]");
    }
    if (threshold < 0.0) throw std::invalid_argument("polynomial_hd: threshold must be non-negative");

    const Eigen::MatrixXcd base = h_p.to_dense(dense_limit);
    const int max_order = *std::max_element(orders.begin(), orders.end());
    std::vector<Eigen::MatrixXcd> powers(static_cast<std::size_t>(max_order) + 1);
    powers[1] = base;
    for (int k = 2; k <= max_order; ++k) {
        powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * base;
    }

    std::vector<Operator> out;
    out.reserve(orders.size());
    for (int k : orders) {
        Eigen::MatrixXcd m = powers[static_cast<std::size_t>(k)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                if (std::abs(m(r, c)) < threshold) m(r, c) = Complex{};
            }
        }
        m = 0.5 * (m + m.adjoint()).eval();
        const double max_entry = m.cwiseAbs().maxCoeff();
        if (normalize && max_entry > 0.0) m /= max_entry;
        out.emplace_back(std::move(m));
    }
    return out;
}

std::vector<PauliString> cyclic_z_hd(int n, const std::vector<int>& weights) {
    if (n < 1) throw std::invalid_argument("cyclic_z_hd: need at least one qubit");
    std::vector<PauliString> out;
    for (int w : weights) {
        if (w < 1 || w > n) throw std::invalid_argument("cyclic_z_hd: weight " + std::to_string(w) + " out of range");
        std::string pattern = std::string(static_cast<std::size_t>(w), 'Z') +
                              std::string(static_cast<std::size_t>(n - w), 'I');
        for (const PauliString& s : cyclic_set(PauliString(pattern))) out.push_back(s);
    }
    sort_unique(out);
    return out;
}

std::vector<CandidateScore> score_candidates(const Operator& h_p, const std::vector<PauliString>& pool,
                                             const ScoreOptions& opts) {
    if (pool.empty()) throw std::invalid_argument("score_candidates: empty pool");
    const int n = h_p.n_qubits();
    std::vector<Operator> controls;
    controls.reserve(pool.size());
    for (const PauliString& s : pool) {
        if (s.n_qubits() != n) throw std::invalid_argument("score_candidates: pool string size mismatch");
        controls.emplace_back(PauliSum(n, {{1.0, s}}));
    }

    ControlPolicy policy(opts.policy, static_cast<int>(pool.size()));
    StopRule stop;
    stop.max_steps = opts.max_steps;
    stop.fidelity_threshold = opts.fidelity_threshold;
    EvolveOptions evolve_opts;
    evolve_opts.method = opts.method;
    evolve_opts.dense_limit = opts.dense_limit;

    const Trajectory traj = evolve(StateVector::plus_state(n), h_p, controls, &policy, opts.dtau, stop, evolve_opts);

    std::vector<CandidateScore> scores;
    scores.reserve(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const double b = std::accumulate(traj.beta[k].begin(), traj.beta[k].end(), 0.0);
        scores.push_back({pool[k], b});
    }
    return scores;
}

} // namespace itc
