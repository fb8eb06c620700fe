#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "itc/control.hpp"
#include "itc/engine.hpp"
#include "oracles.hpp"

using namespace itc;

namespace {

Operator op(const PauliSum& h) { return Operator(h); }

ControlStrategy gradient_strategy(double gain, double cap = 10.0) {
    ControlStrategy s;
    s.kind = StrategyKind::gradient;
    s.gain = gain;
    s.beta_cap = cap;
    return s;
}

ControlStrategy type1_strategy(double S, double gamma = 1.0, double L = 0.0) {
    ControlStrategy s;
    s.kind = StrategyKind::type1;
    s.S = S;
    s.gamma = gamma;
    s.L = L;
    return s;
}

ControlStrategy type2_strategy(double k1, double k2) {
    ControlStrategy s;
    s.kind = StrategyKind::type2;
    s.K1 = k1;
    s.K2 = k2;
    return s;
}

} // namespace

TEST_CASE("feedback_T") {
    const Operator z = op(PauliSum(1, {{1.0, PauliString("Z")}}));

    SUBCASE("vanishes on eigenstates of the control") {
        // H_p arbitrary, H_d = Z, psi = |0> (a Z eigenstate).
        Rng rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            const Operator h_p = op(oracle::random_sum(1, 3, rng));
            CHECK(feedback_T(StateVector::basis_state(1, 0), h_p, z) == doctest::Approx(0.0).epsilon(1e-12));
        }
    }

    SUBCASE("H_p = H_d = Z on |+> gives -2") {
        CHECK(feedback_T(StateVector::plus_state(1), z, z) == doctest::Approx(-2.0));
    }

    SUBCASE("matches the assembled dense expression") {
        Rng rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const PauliSum h_p = oracle::random_sum(4, 8, rng);
            const PauliSum h_d = oracle::random_sum(4, 6, rng);
            const StateVector psi = oracle::random_state(4, rng);
            const Eigen::MatrixXcd mp = oracle::pauli_sum_matrix(h_p);
            const Eigen::MatrixXcd md = oracle::pauli_sum_matrix(h_d);
            const double ep = std::real(psi.amps().dot(mp * psi.amps()));
            const double ed = std::real(psi.amps().dot(md * psi.amps()));
            const double anti = std::real(psi.amps().dot((mp * md + md * mp) * psi.amps()));
            CHECK(feedback_T(psi, op(h_p), op(h_d)) == doctest::Approx(2.0 * ep * ed - anti).epsilon(1e-9));
        }
    }

    SUBCASE("scales linearly with the problem Hamiltonian") {
        Rng rng(11);
        const PauliSum h_p = oracle::random_sum(3, 6, rng);
        const PauliSum h_d = oracle::random_sum(3, 4, rng);
        const StateVector psi = oracle::random_state(3, rng);
        const double base = feedback_T(psi, op(h_p), op(h_d));
        for (double alpha : {0.5, 2.0, -3.0}) {
            CHECK(feedback_T(psi, op(alpha * h_p), op(h_d)) == doctest::Approx(alpha * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("beta_type1") {
    const ControlStrategy s = type1_strategy(1.0, 1.0, 0.0);

    CHECK(beta_type1(-0.5, s) == 0.0);                    // below threshold
    CHECK(beta_type1(0.0, s) == doctest::Approx(0.0));    // sigmoid midpoint
    CHECK(beta_type1(1e9, s) == doctest::Approx(1.0));    // saturation at S

    SUBCASE("negative threshold exposes the negative branch") {
        ControlStrategy open = type1_strategy(1.0, 1.0, -1e18);
        CHECK(beta_type1(-2.0, open) < 0.0);
        CHECK(beta_type1(-1e9, open) == doctest::Approx(-1.0));
    }

    SUBCASE("monotone and bounded on the active branch") {
        double prev = beta_type1(0.0, s);
        for (double t = 0.05; t < 8.0; t += 0.05) {
            const double b = beta_type1(t, s);
            CHECK(b >= prev - 1e-15);
            CHECK(std::abs(b) < s.S);
            prev = b;
        }
    }

    SUBCASE("descent sign convention flips the pulse") {
        ControlStrategy flipped = type1_strategy(1.0);
        flipped.type1_sign = -1;
        CHECK(beta_type1(2.0, flipped) == doctest::Approx(-beta_type1(2.0, s)));
    }

    SUBCASE("beta_cap clamps the pulse") {
        ControlStrategy capped = type1_strategy(5.0);
        capped.beta_cap = 0.25;
        CHECK(beta_type1(1e9, capped) == doctest::Approx(0.25));
    }
}

TEST_CASE("beta_type2") {
    const ControlStrategy s = type2_strategy(10.0, 1.0);
    ControlState state(1);

    SUBCASE("phase branches") {
        state.phase = ControlPhase::phase1;
        CHECK(beta_type2(0.7, state, 0, s) == doctest::Approx(10.0));
        CHECK(beta_type2(-0.7, state, 0, s) == doctest::Approx(-10.0));
        state.phase = ControlPhase::phase2;
        CHECK(beta_type2(0.7, state, 0, s) == doctest::Approx(-1.0));
        CHECK(beta_type2(-0.7, state, 0, s) == doctest::Approx(1.0));
    }

    SUBCASE("sgn(0) = 0") {
        CHECK(beta_type2(0.0, state, 0, s) == 0.0);
    }

    SUBCASE("latched control stays silent") {
        state.latched[0] = true;
        CHECK(beta_type2(5.0, state, 0, s) == 0.0);
    }

    SUBCASE("alternating feedback sign latches the control off") {
        ControlPolicy policy(s, 1);
        // Feed +, -, + on consecutive steps; the third call must latch.
        CHECK(policy.step({1.0}, 0.0, 100.0)[0] == doctest::Approx(10.0));
        CHECK(policy.step({-1.0}, 0.0, 100.0)[0] == doctest::Approx(-10.0));
        CHECK(policy.step({1.0}, 0.0, 100.0)[0] == 0.0);
        CHECK(policy.state().latched[0]);
        CHECK(policy.step({1.0}, 0.0, 100.0)[0] == 0.0);
    }

    SUBCASE("a zero-sign step clears the alternation chain") {
        ControlPolicy policy(s, 1);
        policy.step({1.0}, 0.0, 100.0);
        policy.step({-1.0}, 0.0, 100.0);
        policy.step({0.0}, 0.0, 100.0);
        CHECK(policy.step({1.0}, 0.0, 100.0)[0] == doctest::Approx(10.0));
        CHECK_FALSE(policy.state().latched[0]);
    }

    SUBCASE("bang-bang magnitudes only") {
        ControlPolicy policy(s, 1);
        Rng rng(13);
        for (int step = 0; step < 200; ++step) {
            const double t = 2.0 * rng.uniform() - 1.0;
            const double b = std::abs(policy.step({t}, 0.0, 100.0)[0]);
            const bool allowed = b == 0.0 || b == doctest::Approx(10.0) || b == doctest::Approx(1.0);
            CHECK(allowed);
        }
    }
}

TEST_CASE("beta_gradient") {
    const ControlStrategy s = gradient_strategy(0.5);
    CHECK(beta_gradient(0.0, s) == 0.0);
    CHECK(beta_gradient(1.0, s) == doctest::Approx(-0.5));

    SUBCASE("pulse times feedback is never positive") {
        Rng rng(17);
        for (int trial = 0; trial < 100; ++trial) {
            const double t = 20.0 * (rng.uniform() - 0.5);
            CHECK(beta_gradient(t, s) * t <= 0.0);
        }
    }

    SUBCASE("controlled exact step descends at least as fast as the bare step") {
        Rng rng(19);
        const double dtau = 1e-3;
        for (int trial = 0; trial < 12; ++trial) {
            const PauliSum h_p = oracle::random_sum(4, 8, rng);
            const PauliSum h_d = oracle::random_sum(4, 4, rng);
            const StateVector psi = oracle::random_state(4, rng);

            const double t_k = feedback_T(psi, op(h_p), op(h_d));
            const double beta = beta_gradient(t_k, gradient_strategy(0.2, 1.0));

            const StateVector bare = ite_step(psi, op(h_p), dtau, StepMethod::exact);
            const StateVector driven = ite_step(psi, op(h_p + beta * h_d), dtau, StepMethod::exact);
            CHECK(expectation(h_p, driven) <= expectation(h_p, bare) + 1e-10);
        }
    }
}

TEST_CASE("phase_update") {
    ControlState state(1);
    state.phase = ControlPhase::phase1;

    const ControlState flat = phase_update(state, {3.0, 3.0001, 3.0000}, 1e-2);
    CHECK(flat.phase == ControlPhase::phase2);

    const ControlState falling = phase_update(state, {3.0, 2.0, 1.0}, 1e-2);
    CHECK(falling.phase == ControlPhase::phase1);

    SUBCASE("no backwards transition") {
        ControlState in_phase2(1);
        in_phase2.phase = ControlPhase::phase2;
        CHECK(phase_update(in_phase2, {1.0, 1.0}, 1e-2).phase == ControlPhase::phase2);
    }

    CHECK_THROWS_AS(phase_update(state, {1.0}, 1e-2), std::invalid_argument);
}

TEST_CASE("admissible_bound") {
    const Operator z = op(PauliSum(1, {{1.0, PauliString("Z")}}));
    CHECK(admissible_bound(StateVector::basis_state(1, 0), z) == doctest::Approx(1.0));
    CHECK(admissible_bound(StateVector::plus_state(1), z) == doctest::Approx(0.0));
}

TEST_CASE("pulse bound invariant") {
    // |beta| <= beta_cap for every strategy and any feedback value.
    Rng rng(23);
    std::vector<ControlStrategy> strategies{gradient_strategy(3.0, 0.7), type1_strategy(5.0), type2_strategy(8.0, 2.0)};
    strategies[1].beta_cap = 0.7;
    strategies[2].beta_cap = 0.7;
    for (const auto& s : strategies) {
        ControlPolicy policy(s, 2);
        for (int step = 0; step < 100; ++step) {
            const double t0 = 50.0 * (rng.uniform() - 0.5);
            const double t1 = 50.0 * (rng.uniform() - 0.5);
            for (double b : policy.step({t0, t1}, -1.0, s.beta_cap)) {
                CHECK(std::abs(b) <= 0.7 + 1e-15);
            }
        }
    }
}

TEST_CASE("strategy validation") {
    ControlStrategy bad = type2_strategy(1.0, 2.0); // K1 <= K2
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    ControlStrategy neg = gradient_strategy(-1.0);
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
    ControlStrategy zero_cap = gradient_strategy(1.0, -2.0);
    CHECK_THROWS_AS(zero_cap.validate(), std::invalid_argument);
}
