#include "itc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace itc {

namespace {

// H_p + sum_k beta_k H_dk without materializing the combination.
struct GeneratorView {
    const Operator* base;
    const std::vector<Operator>* controls;
    const std::vector<double>* betas;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& amps) const {
        Eigen::VectorXcd out = base->apply(amps);
        for (std::size_t k = 0; k < controls->size(); ++k) {
            const double b = (*betas)[k];
            if (b != 0.0) out += b * (*controls)[k].apply(amps);
        }
        return out;
    }

    double norm_bound() const {
        double bound = base->norm_bound();
        for (std::size_t k = 0; k < controls->size(); ++k) {
            bound += std::abs((*betas)[k]) * (*controls)[k].norm_bound();
        }
        return bound;
    }
};

StateVector euler_step(const Eigen::VectorXcd& amps, const GeneratorView& gen, double dtau) {
    const double bound = gen.norm_bound();
    if (!(dtau * bound < 1.0)) {
        throw std::domain_error("ite_step: euler stability guard violated (dtau * " + std::to_string(bound) +
                                " >= 1); use a smaller step or the exact method");
    }
    return StateVector(amps - dtau * gen.apply(amps));
}

StateVector exact_step_from_dense(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& h, double dtau) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("ite_step: eigendecomposition failed");
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    Eigen::VectorXcd coeffs = solver.eigenvectors().adjoint() * amps;
    // Shift by the minimum eigenvalue; the factor cancels in normalization
    // and keeps the exponentials bounded.
    const double shift = lambda.minCoeff();
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        coeffs(i) *= std::exp(-(lambda(i) - shift) * dtau);
    }
    return StateVector(solver.eigenvectors() * coeffs);
}

Eigen::MatrixXcd combined_dense(const Eigen::MatrixXcd& base_dense,
                                const std::vector<Eigen::MatrixXcd>& control_dense,
                                const std::vector<double>& betas) {
    Eigen::MatrixXcd h = base_dense;
    for (std::size_t k = 0; k < control_dense.size(); ++k) {
        if (betas[k] != 0.0) h += betas[k] * control_dense[k];
    }
    return h;
}

} // namespace

Eigensystem eigensystem(const Operator& h, int dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_dense(dense_limit));
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensystem: decomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double ground_space_fidelity(const StateVector& psi, const Eigensystem& es, double degeneracy_tol) {
    if (psi.dim() != es.eigenvectors.rows()) throw std::invalid_argument("ground_space_fidelity: dimension mismatch");
    const double e0 = es.eigenvalues(0);
    double f = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues.size() && es.eigenvalues(i) <= e0 + degeneracy_tol; ++i) {
        f += std::norm(es.eigenvectors.col(i).dot(psi.amps()));
    }
    return f > 1.0 ? 1.0 : f;
}

StateVector ite_step(const StateVector& psi, const Operator& h, double dtau, StepMethod method, int dense_limit) {
    if (psi.dim() != h.dim()) throw std::invalid_argument("ite_step: dimension mismatch");
    if (!(dtau > 0.0)) throw std::invalid_argument("ite_step: dtau must be positive");
    static const std::vector<Operator> no_controls;
    static const std::vector<double> no_betas;
    const GeneratorView gen{&h, &no_controls, &no_betas};
    if (method == StepMethod::euler) return euler_step(psi.amps(), gen, dtau);
    return exact_step_from_dense(psi.amps(), h.to_dense(dense_limit), dtau);
}

void Trajectory::validate() const {
    const std::size_t n = times.size();
    if (energy.size() != n || fidelity.size() != n) throw std::logic_error("Trajectory: sequence length mismatch");
    for (const auto& series : beta) {
        if (series.size() != n) throw std::logic_error("Trajectory: beta sequence length mismatch");
    }
    if (!spectrum.empty() && spectrum.size() != n) throw std::logic_error("Trajectory: spectrum length mismatch");
    for (double f : fidelity) {
        if (!(f >= 0.0 && f <= 1.0)) throw std::logic_error("Trajectory: fidelity outside [0, 1]");
    }
}

Trajectory evolve(const StateVector& psi0, const Operator& h_p, const std::vector<Operator>& controls,
                  ControlPolicy* policy, double dtau, const StopRule& stop, const EvolveOptions& opts) {
    if (!(dtau > 0.0)) throw std::invalid_argument("evolve: dtau must be positive");
    for (const Operator& c : controls) {
        if (c.dim() != h_p.dim()) throw std::invalid_argument("evolve: control dimension mismatch");
    }
    if (psi0.dim() != h_p.dim()) throw std::invalid_argument("evolve: state dimension mismatch");
    const std::size_t n_controls = controls.size();

    // Ground-space data of H_p; fidelity is measured against it throughout.
    const Eigensystem es_hp = eigensystem(h_p, opts.dense_limit);

    Trajectory traj;
    traj.beta.assign(n_controls, {});

    // Fast path: constant generator + exact stepping reduces to independent
    // exponential decay of the eigenbasis coefficients.
    const bool spectral_path = policy == nullptr && opts.method == StepMethod::exact;

    std::vector<Eigen::MatrixXcd> control_dense;
    Eigen::MatrixXcd base_dense;
    const bool need_dense_ops = !spectral_path && (opts.method == StepMethod::exact || opts.record_spectrum);
    if (need_dense_ops) {
        base_dense = h_p.to_dense(opts.dense_limit);
        control_dense.reserve(n_controls);
        for (const Operator& c : controls) control_dense.push_back(c.to_dense(opts.dense_limit));
    }

    Eigen::VectorXcd coeffs; // spectral-path representation of the state
    if (spectral_path) {
        coeffs = es_hp.eigenvectors.adjoint() * psi0.amps();
    }

    const double e0_shift = spectral_path ? es_hp.eigenvalues.minCoeff() : 0.0;
    std::size_t ground_count = 0;
    {
        const double e0 = es_hp.eigenvalues(0);
        while (ground_count < static_cast<std::size_t>(es_hp.eigenvalues.size()) &&
               es_hp.eigenvalues(static_cast<Eigen::Index>(ground_count)) <= e0 + 1e-8) {
            ++ground_count;
        }
    }

    StateVector psi = psi0;
    Eigen::VectorXcd hp_psi;
    for (long step = 0;; ++step) {
        double energy;
        double fid;
        if (spectral_path) {
            const Eigen::VectorXd pops = coeffs.cwiseAbs2();
            const double total = pops.sum();
            energy = es_hp.eigenvalues.dot(pops) / total;
            double ground = 0.0;
            for (std::size_t i = 0; i < ground_count; ++i) ground += pops(static_cast<Eigen::Index>(i));
            fid = std::min(ground / total, 1.0);
        } else {
            hp_psi = h_p.apply(psi.amps());
            energy = std::real(psi.amps().dot(hp_psi));
            fid = ground_space_fidelity(psi, es_hp);
        }
        if (!std::isfinite(energy)) {
            throw std::runtime_error("evolve: non-finite energy at step " + std::to_string(step));
        }

        const bool converged = stop.use_fidelity && fid >= stop.fidelity_threshold;
        const bool done = converged || step >= stop.max_steps;

        std::vector<double> betas(n_controls, 0.0);
        if (policy != nullptr && !done && n_controls > 0) {
            std::vector<double> feedback(n_controls);
            if (spectral_path) throw std::logic_error("evolve: spectral path cannot carry a policy");
            for (std::size_t k = 0; k < n_controls; ++k) {
                const Eigen::VectorXcd hd_psi = controls[k].apply(psi.amps());
                const double exp_hd = std::real(psi.amps().dot(hd_psi));
                const double anti = 2.0 * std::real(hp_psi.dot(hd_psi));
                feedback[k] = 2.0 * energy * exp_hd - anti;
            }
            const double cap = opts.adaptive_cap ? std::abs(energy) : policy->strategy().beta_cap;
            betas = policy->step(feedback, energy, cap);
        }

        traj.times.push_back(static_cast<double>(step) * dtau);
        traj.energy.push_back(energy);
        traj.fidelity.push_back(fid);
        for (std::size_t k = 0; k < n_controls; ++k) traj.beta[k].push_back(betas[k]);
        if (opts.record_spectrum) {
            const bool any_pulse = std::any_of(betas.begin(), betas.end(), [](double b) { return b != 0.0; });
            if (!any_pulse) {
                traj.spectrum.push_back(es_hp.eigenvalues);
            } else {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(combined_dense(base_dense, control_dense, betas));
                traj.spectrum.push_back(solver.eigenvalues());
            }
        }

        if (done) {
            traj.converged = converged;
            traj.steps = step;
            if (spectral_path) {
                psi = StateVector(es_hp.eigenvectors * coeffs);
            }
            traj.final_state = psi;
            break;
        }

        if (spectral_path) {
            for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
                coeffs(i) *= std::exp(-(es_hp.eigenvalues(i) - e0_shift) * dtau);
            }
            coeffs /= coeffs.norm();
        } else if (opts.method == StepMethod::euler) {
            const GeneratorView gen{&h_p, &controls, &betas};
            psi = euler_step(psi.amps(), gen, dtau);
        } else {
            psi = exact_step_from_dense(psi.amps(), combined_dense(base_dense, control_dense, betas), dtau);
        }
    }
    return traj;
}

GapTrajectory gap_trajectory(const Operator& h_p, const std::vector<Operator>& controls,
                             const std::vector<double>& times,
                             const std::vector<std::vector<double>>& beta_history, int dense_limit) {
    if (beta_history.size() != controls.size()) {
        throw std::invalid_argument("gap_trajectory: beta history does not match controls");
    }
    for (const auto& series : beta_history) {
        if (series.size() != times.size()) throw std::invalid_argument("gap_trajectory: series length mismatch");
    }
    const Eigensystem es = eigensystem(h_p, dense_limit);
    const Eigen::Index dim = es.eigenvalues.size();

    // Diagonal of each control in the H_p eigenbasis.
    Eigen::MatrixXd control_diag(static_cast<Eigen::Index>(controls.size()), dim);
    for (std::size_t k = 0; k < controls.size(); ++k) {
        const Eigen::MatrixXcd hd = controls[k].to_dense(dense_limit);
        for (Eigen::Index i = 0; i < dim; ++i) {
            control_diag(static_cast<Eigen::Index>(k), i) = std::real(es.eigenvectors.col(i).dot(hd * es.eigenvectors.col(i)));
        }
    }

    GapTrajectory out;
    out.times = times;
    out.delta.resize(static_cast<Eigen::Index>(times.size()), dim - 1);
    for (std::size_t m = 0; m < times.size(); ++m) {
        double level0 = es.eigenvalues(0);
        for (std::size_t k = 0; k < controls.size(); ++k) level0 += beta_history[k][m] * control_diag(static_cast<Eigen::Index>(k), 0);
        for (Eigen::Index i = 1; i < dim; ++i) {
            double leveli = es.eigenvalues(i);
            for (std::size_t k = 0; k < controls.size(); ++k) {
                leveli += beta_history[k][m] * control_diag(static_cast<Eigen::Index>(k), i);
            }
            out.delta(static_cast<Eigen::Index>(m), i - 1) = level0 - leveli;
        }
    }
    return out;
}

ControllabilityReport controllability_probe(const Operator& h_p, const std::vector<Operator>& controls,
                                            const StateVector& psi0, int dense_limit, double overlap_tol) {
    const Eigensystem es = eigensystem(h_p, dense_limit);
    const Eigen::Index dim = es.eigenvectors.rows();

    std::vector<Eigen::MatrixXcd> generators;
    generators.push_back(h_p.to_dense(dense_limit));
    for (const Operator& c : controls) generators.push_back(c.to_dense(dense_limit));

    // Orthonormal span basis, grown by applying every generator to every
    // newly admitted vector until the span stabilizes or fills the space.
    std::vector<Eigen::VectorXcd> basis{psi0.amps()};
    std::size_t frontier_begin = 0;
    const double residual_tol = 1e-10;
    while (frontier_begin < basis.size() && basis.size() < static_cast<std::size_t>(dim)) {
        const std::size_t frontier_end = basis.size();
        for (std::size_t v = frontier_begin; v < frontier_end; ++v) {
            for (const auto& g : generators) {
                Eigen::VectorXcd cand = g * basis[v];
                for (const auto& b : basis) cand -= b.dot(cand) * b;
                for (const auto& b : basis) cand -= b.dot(cand) * b; // second pass for re-orthogonalization
                const double norm = cand.norm();
                if (norm > residual_tol) {
                    basis.push_back(cand / norm);
                    if (basis.size() == static_cast<std::size_t>(dim)) break;
                }
            }
            if (basis.size() == static_cast<std::size_t>(dim)) break;
        }
        frontier_begin = frontier_end;
    }

    ControllabilityReport report;
    report.span_dim = static_cast<int>(basis.size());
    report.reachable.resize(static_cast<std::size_t>(dim));
    report.overlaps.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        double overlap = 0.0;
        for (const auto& b : basis) overlap += std::norm(b.dot(es.eigenvectors.col(i)));
        report.overlaps[static_cast<std::size_t>(i)] = overlap;
        report.reachable[static_cast<std::size_t>(i)] = overlap > overlap_tol;
    }
    report.complete = std::all_of(report.reachable.begin(), report.reachable.end(), [](bool b) { return b; });
    return report;
}

} // namespace itc
