#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qadia/schmidt.hpp"

using namespace qadia;

namespace {

Vec4 random_state(std::mt19937& rng) {
    std::normal_distribution<double> nd;
    Vec4 v;
    for (int i = 0; i < 4; ++i) v(i) = Complex(nd(rng), nd(rng));
    return v / v.norm();
}

Trajectory flipflop_ground_run(double omega, int n_steps) {
    ModelSpec m{CouplingKind::FlipFlop, 1.0, pi / 3, omega, 0.0};
    const LoopSpec loop = LoopSpec::one_period(m, n_steps);
    const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
    return evolve_pure(loop, f.vectors.col(1));  // label 2 = lowest level
}

}  // namespace

TEST_CASE("product and maximally entangled decompositions") {
    SUBCASE("|up,up> is a pure product") {
        const auto form = schmidt_decompose(basis_ket(0, 0));
        CHECK(form.p[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(form.p[1] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(std::abs(form.basis1[0](0)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(form.basis2[0](0)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("the Bell state splits evenly") {
        Vec4 bell = (basis_ket(0, 0) + basis_ket(1, 1)) / std::sqrt(2.0);
        const auto form = schmidt_decompose(bell);
        CHECK(form.p[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(form.p[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("every closed-form eigenvector is a product state") {
        for (double g : {0.0, 0.9, 2.1}) {
            const auto form =
                schmidt_decompose(oracle::eigenvector(g, 1.2, 0.7, 1));
            CHECK(form.p[0] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(form.p[1] < 1e-12);
        }
    }
}

TEST_CASE("decomposition reconstructs random states up to a global phase") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec4 psi = random_state(rng);
        const auto form = schmidt_decompose(psi);
        CHECK(std::abs(form.basis1[0].dot(form.basis1[1])) < 1e-12);
        CHECK(std::abs(form.basis2[0].dot(form.basis2[1])) < 1e-12);
        CHECK(overlap_mag(form.reconstruct(), psi) > 1.0 - 1e-10);
    }
}

TEST_CASE("z-exchange runs from a product eigenstate never move the weights") {
    ModelSpec m{CouplingKind::IsingZ, 1.0, pi / 3, 1.0, 0.0};
    const LoopSpec loop = LoopSpec::one_period(m, 4096);
    const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
    const auto traj = evolve_pure(loop, f.vectors.col(0));
    const auto series = schmidt_series(traj);
    for (const auto& pk : series.p) CHECK(std::abs(pk[0] - 1.0) < 1e-8);

    const auto ratios = nontransitional_ratios(series);
    CHECK_FALSE(ratios.any_singular());
    CHECK(ratios.max_finite() < 1e-10);
}

TEST_CASE("a stationary run keeps the weights frozen") {
    // an entangled eigenstate of a static flip-flop Hamiltonian only turns
    // its global phase, so both weights must hold exactly
    ModelSpec m{CouplingKind::FlipFlop, 0.8, 1.0, 0.0, 0.4};
    const LoopSpec loop{m, 4.0, 1024};
    const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
    const auto traj = evolve_pure(loop, f.vectors.col(1));
    const auto series = schmidt_series(traj);
    CHECK(series.p[0][1] > 0.01);  // genuinely entangled seed
    for (const auto& pk : series.p) {
        CHECK(std::abs(pk[0] - series.p[0][0]) < 1e-9);
        CHECK(std::abs(pk[1] - series.p[0][1]) < 1e-9);
    }
}

TEST_CASE("flip-flop transport moves the weights and the ratio sees it") {
    const auto traj = flipflop_ground_run(0.1, 8192);
    const auto series = schmidt_series(traj);
    CHECK(series.p_drift_max() > 0.01);
    const auto ratios = nontransitional_ratios(series);
    CHECK(ratios.max_finite() > 0.1);
}

TEST_CASE("uncoupled product runs have identically vanishing ratios") {
    ModelSpec m{CouplingKind::None, 0.0, pi / 2, 10.0, 0.0};
    const LoopSpec loop = LoopSpec::one_period(m, 2048);
    const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
    const auto traj = evolve_pure(loop, f.vectors.col(0));
    const auto series = schmidt_series(traj);
    const auto ratios = nontransitional_ratios(series);
    CHECK(ratios.max_finite() < 1e-10);
    CHECK(series.p_drift_max() < 1e-10);
}

TEST_CASE("rate identity residuals") {
    SUBCASE("stationary product runs satisfy the identity to rounding") {
        // every series entry is constant for a static product eigenstate
        ModelSpec m{CouplingKind::IsingZ, 0.8, 1.0, 0.0, 0.4};
        const LoopSpec loop{m, 4.0, 512};
        const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
        const auto traj = evolve_pure(loop, f.vectors.col(0));
        CHECK(rate_equation_residual(schmidt_series(traj)) < 1e-8);
    }
    SUBCASE("slow z-exchange runs sit well under the discretization bound") {
        ModelSpec m{CouplingKind::IsingZ, 0.5, pi / 3, 0.01, 0.0};
        const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
        Vec4 psi0 = f.vectors.col(0) + 0.005 * f.vectors.col(2);
        psi0 /= psi0.norm();
        const auto t1 = evolve_pure(LoopSpec::one_period(m, 4096), psi0);
        const auto t2 = evolve_pure(LoopSpec::one_period(m, 8192), psi0);
        const double r1 = rate_equation_residual(schmidt_series(t1));
        const double r2 = rate_equation_residual(schmidt_series(t2));
        CHECK(r1 < 1e-4);
        CHECK(r1 / r2 > 1.5);
    }
    SUBCASE("flip-flop runs converge under refinement") {
        const double r1 = rate_equation_residual(schmidt_series(flipflop_ground_run(0.05, 4096)));
        const double r2 = rate_equation_residual(schmidt_series(flipflop_ground_run(0.05, 8192)));
        CHECK(r2 < r1);
        CHECK(r1 / r2 > 1.5);
    }
    SUBCASE("too few samples are rejected") {
        ModelSpec m{CouplingKind::IsingZ, 0.0, 0.3, 1.0, 0.0};
        const LoopSpec loop = LoopSpec::one_period(m, 32);
        const auto traj = evolve_pure(loop, numeric_eigensystem(m, 0.0).vectors.col(0));
        CHECK_THROWS_AS(rate_equation_residual(schmidt_series(traj)), InsufficientSamples);
    }
}

TEST_CASE("external-agent ratios") {
    ModelSpec m{CouplingKind::IsingZ, 1.0, pi / 3, 1.0, 0.0};
    const LoopSpec loop = LoopSpec::one_period(m, 1024);
    const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
    const auto traj = evolve_pure(loop, f.vectors.col(0));
    const auto series = schmidt_series(traj);

    std::vector<Mat4> ops;
    ops.push_back(Mat4::Identity());
    ops.push_back(tensor(sigma_x(), identity2()));
    ops.push_back(tensor(sigma_x(), sigma_x()));
    const auto rs = open_system_ratio(series, ops);

    SUBCASE("the identity never connects distinct channels") {
        CHECK(rs[0].max_finite() < 1e-12);
    }
    SUBCASE("a drive on qubit 1 alone cannot flip the partner channel") {
        CHECK(rs[1].max_finite() < 1e-10);
    }
    SUBCASE("a genuinely two-sided agent produces a finite ratio") {
        CHECK(rs[2].max_finite() > 1e-6);
    }
    SUBCASE("the Hamiltonian as its own agent reproduces the channel ratio") {
        // evaluate against the per-sample Hamiltonian explicitly
        const auto base = nontransitional_ratios(series);
        double worst = 0.0;
        for (std::size_t k = 0; k < series.times.size(); k += 37) {
            const Mat4 h = hamiltonian_at(m, series.times[k]);
            const Vec4 ket0 = tensor_ket(series.basis1[k][0], series.basis2[k][0]);
            const Vec4 ket1 = tensor_ket(series.basis1[k][1], series.basis2[k][1]);
            const double denom =
                std::abs(series.hmat[k](0, 0).real() - series.hmat[k](1, 1).real());
            const double ratio = std::abs(ket0.dot(h * ket1)) / denom;
            worst = std::max(worst, std::abs(ratio - base.values[k]));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("reduced spectral series") {
    SUBCASE("adiabatic product transport keeps eigenvalues 1 and 0") {
        ModelSpec m{CouplingKind::IsingZ, 1.0, pi / 3, 0.02, 0.0};
        const LoopSpec loop = LoopSpec::one_period(m, 32768);
        const GaugeFixedFrame f = numeric_eigensystem(m, 0.0);
        const auto traj = evolve_pure(loop, f.vectors.col(0));
        const auto red = reduced_density_eigen(traj);
        CHECK(red.drift_max() < 1e-8);
        CHECK(red.eigenvalues[0][0] == doctest::Approx(1.0).epsilon(1e-10));

        // entrywise check of the reduced state against the closed form; the
        // evolved state trails the instantaneous level at first order in the
        // adiabaticity metric, so that sets the scale of the gap
        const double metric = oracle::gamma12_closed(1.0, pi / 3, m.omega);
        for (std::size_t k = 0; k < traj.n_samples(); k += 4096) {
            Vec4 psi = traj.states[k] / traj.states[k].norm();
            const Mat2 rho1 = partial_trace_2(psi * psi.adjoint());
            const Mat2 ref = oracle::rho1_closed(1.0, pi / 3, m.phase_at(traj.times[k]), 1);
            CHECK((rho1 - ref).cwiseAbs().maxCoeff() < 3.0 * metric);
        }
    }
    SUBCASE("uncoupled mixed evolution keeps the 0.7/0.3 split") {
        ModelSpec m{CouplingKind::None, 0.0, pi / 2, 1.0, 0.0};
        const LoopSpec loop = LoopSpec::one_period(m, 2048);
        const Vec4 uu = basis_ket(0, 0), dd = basis_ket(1, 1);
        const Mat4 rho0 = 0.7 * uu * uu.adjoint() + 0.3 * dd * dd.adjoint();
        const auto traj = evolve_mixed(loop, rho0);
        const auto red = reduced_density_eigen(traj);
        for (const auto& ev : red.eigenvalues) {
            CHECK(std::abs(ev[0] - 0.7) < 1e-8);
            CHECK(std::abs(ev[1] - 0.3) < 1e-8);
        }
    }
    SUBCASE("the maximally mixed state stays flat") {
        ModelSpec m{CouplingKind::IsingZ, 1.0, 1.0, 1.0, 0.0};
        const LoopSpec loop = LoopSpec::one_period(m, 1024);
        const auto traj = evolve_mixed(loop, 0.25 * Mat4::Identity());
        const auto red = reduced_density_eigen(traj);
        for (const auto& ev : red.eigenvalues) {
            CHECK(std::abs(ev[0] - 0.5) < 1e-12);
            CHECK(std::abs(ev[1] - 0.5) < 1e-12);
        }
    }
}

TEST_CASE("reduced eigenvalues agree with the Schmidt weights on pure runs") {
    const auto traj = flipflop_ground_run(0.1, 4096);
    const auto series = schmidt_series(traj);
    const auto red = reduced_density_eigen(traj);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.n_samples(); ++k)
        worst = std::max(worst, std::abs(series.p[k][0] - red.eigenvalues[k][0]));
    CHECK(worst < 1e-9);
}

TEST_CASE("pure-state runs give the same ratios through both routes") {
    const auto traj = flipflop_ground_run(0.1, 2048);
    const auto a = nontransitional_ratios(schmidt_series(traj));
    const auto b = subsystem_ratio_series(traj);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        if (!a.singular[k] && !b.singular[k])
            worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
    CHECK(worst < 1e-8);
}

TEST_CASE("weight drift tracks the ratio across a drive-rate sweep") {
    std::vector<double> drifts, ratios;
    for (double w : {0.02, 0.03, 0.045, 0.07, 0.1, 0.15, 0.22, 0.33}) {
        const auto traj = flipflop_ground_run(w, 4096);
        const auto series = schmidt_series(traj);
        drifts.push_back(series.p_drift_max());
        ratios.push_back(nontransitional_ratios(series).max_finite());
    }
    CHECK(oracle::spearman(drifts, ratios) > 0.9);
}
