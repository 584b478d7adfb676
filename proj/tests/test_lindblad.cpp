#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "steerlab/densemat.hpp"
#include "steerlab/lindblad.hpp"
#include "steerlab/squeeze.hpp"

using namespace steerlab;

namespace {

// Frozen closed-form values for r = 0.5 (see closedform.hpp for the general
// expressions; duplicated here as plain numbers to keep the check honest).
constexpr double kAlphaHalf = 0.6480542736638854;
constexpr double kLoopPhaseHalf = -1.1056701083198614;   // -pi (1 - alpha)
constexpr double kVisibilityHalfXi1em2 = 0.9882605779465426;  // exp(-pi a b^2 xi)

ComplexMatrix random_density(int dim, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix a(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cxd{u(rng), u(rng)};
    ComplexMatrix rho = mat_mul(a, adjoint(a));
    rho *= 1.0 / trace(rho).real();
    // exact Hermitian part, products round asymmetrically
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const cxd h = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = h;
        }
    return rho;
}

}  // namespace

TEST_CASE("lindblad_rhs: dark state is stationary under a static reservoir") {
    const SqueezeParams p{0.7, 1.1};
    auto model = build_three_level_model(p, 0.0, 1.0, Frame::Lab);
    auto rho = DensityMatrix::pure(dark_state(LevelBasis{BasisKind::ThreePlusAncilla}, 1, p));
    auto rhs = lindblad_rhs(model, rho, 0.0);
    REQUIRE(frobenius_norm(rhs) < 1e-12);
}

TEST_CASE("lindblad_rhs: traceless and Hermiticity-preserving") {
    std::mt19937 rng(61);
    auto model = build_three_level_model(SqueezeParams{0.5, 0.3}, 1e-2, 1.0, Frame::Rotating);
    auto model_lab = build_three_level_model(SqueezeParams{0.5, 0.3}, 1e-2, 1.0, Frame::Lab);
    std::uniform_real_distribution<double> ut(0.0, 300.0);
    for (int rep = 0; rep < 50; ++rep) {
        auto rho = random_density(4, rng);
        const double t = ut(rng);
        for (const auto* m : {&model, &model_lab}) {
            auto rhs = lindblad_rhs(*m, rho, t);
            REQUIRE(std::abs(trace(rhs)) < 1e-12);
            REQUIRE(hermiticity_defect(rhs) < 1e-12);
        }
    }
}

TEST_CASE("lindblad_rhs: rotating-frame equations of the ancilla coherences") {
    std::mt19937 rng(67);
    const double phi_rate = 3e-2;
    const auto d = derive(SqueezeParams{0.8, 0.0}, 1.0);
    auto model = build_three_level_model(SqueezeParams{0.8, 0.0}, phi_rate, 1.0, Frame::Rotating);
    for (int rep = 0; rep < 50; ++rep) {
        auto rho = random_density(4, rng);
        auto rhs = lindblad_rhs(model, rho, 120.0);
        const cxd x = rho(2, 3);  // <-1|rho|a>
        const cxd y = rho(0, 3);  // <+1|rho|a>
        const cxd i{0.0, 1.0};
        const cxd expected_x = i * (0.5 * phi_rate) * (d.alpha * x - d.beta * y);
        const cxd expected_y =
            -0.5 * (d.gamma_eff + i * d.alpha * phi_rate) * y - i * (0.5 * phi_rate) * d.beta * x;
        REQUIRE(std::abs(rhs(2, 3) - expected_x) < 1e-12);
        REQUIRE(std::abs(rhs(0, 3) - expected_y) < 1e-12);
    }
}

TEST_CASE("lindblad_rhs: dimension mismatch is rejected") {
    auto model = build_three_level_model(SqueezeParams{0.5, 0.0}, 1e-2, 1.0, Frame::Lab);
    ComplexMatrix five(5);
    REQUIRE_THROWS_AS(lindblad_rhs(model, five, 0.0), std::invalid_argument);
}

TEST_CASE("integrate: vacuum cascade relaxes |1> to |-1> with unit trace") {
    auto model = build_three_level_model(SqueezeParams{0.0, 0.0}, 0.0, 1.0, Frame::Lab);
    auto rho0 = DensityMatrix::pure(ComplexVector::basis(4, level::up));
    StepControl ctrl{0.02, 64, 64};
    auto traj = integrate(model, rho0, 30.0, ctrl);
    for (size_t k = 0; k < traj.times.size(); ++k)
        REQUIRE(std::abs(trace(traj.states[k]) - cxd{1.0}) < 1e-9);
    const auto& fin = traj.states.back();
    REQUIRE(fin(2, 2).real() == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(std::abs(fin(0, 0)) < 1e-9);
}

TEST_CASE("integrate: decoherence-free state is fixed for t = 100/Gamma") {
    const SqueezeParams p{0.5, 0.3};
    auto model = build_three_level_model(p, 0.0, 1.0, Frame::Lab);
    auto rho0 = DensityMatrix::pure(dark_state(LevelBasis{BasisKind::ThreePlusAncilla}, 1, p));
    StepControl ctrl{default_step(derive(p, 1.0).gamma_eff, 0.0), 256, 64};
    auto traj = integrate(model, rho0, 100.0, ctrl);
    REQUIRE(frobenius_distance(traj.states.back(), rho0.mat) < 1e-9);
}

TEST_CASE("integrate: lab and rotating frames agree after the frame map") {
    const double r = 0.5;
    const double phi0 = 0.2;
    const double phi_rate = 1e-2;
    const double period = kTwoPi / phi_rate;
    const SqueezeParams p0{r, phi0};
    const auto d = derive(p0, 1.0);
    auto rho0 = interferometric_state(p0);

    auto lab_model = build_three_level_model(p0, phi_rate, 1.0, Frame::Lab);
    auto rot_model = build_three_level_model(p0, phi_rate, 1.0, Frame::Rotating);
    StepControl ctrl{default_step(d.gamma_eff, phi_rate), 1 << 20, 64};

    auto lab = integrate(lab_model, rho0, period, ctrl);
    auto rot0 = DensityMatrix::from_matrix(conjugate_by(frame_unitary(p0), rho0.mat));
    auto rot = integrate(rot_model, rot0, period, ctrl);

    // back-transform with the unreduced phase phi0 + 2 pi
    const PhiSchedule sched{r, phi0, phi_rate};
    auto rot_in_lab = conjugate_by(adjoint(frame_unitary(sched.at(period))), rot.states.back());
    REQUIRE(frobenius_distance(rot_in_lab, lab.states.back()) < 1e-7);
}

TEST_CASE("integrate: RK4 order measured by step halving") {
    const SqueezeParams p{0.5, 0.0};
    auto model = build_three_level_model(p, 0.05, 1.0, Frame::Lab);
    auto rho0 = DensityMatrix::pure(ComplexVector::basis(4, level::up));
    auto final_state = [&](double dt) {
        StepControl ctrl{dt, 1 << 20, 1 << 20};
        return integrate(model, rho0, 10.0, ctrl).states.back();
    };
    const double err_h = frobenius_distance(final_state(0.2), final_state(0.05));
    const double err_h2 = frobenius_distance(final_state(0.1), final_state(0.025));
    const double ratio = err_h / err_h2;
    REQUIRE(ratio > 10.0);
    REQUIRE(ratio < 24.0);
}

TEST_CASE("integrate: blow-up is reported as an integration failure") {
    auto model = build_three_level_model(SqueezeParams{0.5, 0.0}, 1e-2, 1.0, Frame::Lab);
    auto rho0 = interferometric_state(SqueezeParams{0.5, 0.0});
    StepControl ctrl{100.0, 1, 1};
    REQUIRE_THROWS_AS(integrate(model, rho0, 628.0, ctrl), IntegrationError);
}

TEST_CASE("integrate: input validation") {
    auto model = build_three_level_model(SqueezeParams{0.5, 0.0}, 1e-2, 1.0, Frame::Lab);
    auto rho0 = interferometric_state(SqueezeParams{0.5, 0.0});
    StepControl ctrl{0.01, 64, 64};
    REQUIRE_THROWS_AS(integrate(model, rho0, -1.0, ctrl), std::invalid_argument);
    ComplexMatrix junk(4);
    junk(0, 0) = 2.0;  // trace 2
    DensityMatrix bad;
    bad.mat = junk;
    REQUIRE_THROWS_AS(integrate(model, bad, 1.0, ctrl), std::invalid_argument);
}

TEST_CASE("coherence extraction") {
    auto x = ComplexVector::basis(4, 0);
    auto y = ComplexVector::basis(4, 3);

    // generalized matrix element on a raw operator |x><y|
    REQUIRE(std::abs(sandwich(x, outer(x, y), y) - cxd{1.0}) < 1e-15);

    auto proj = DensityMatrix::pure(x);
    REQUIRE(std::abs(coherence(proj, x, x) - cxd{1.0}) < 1e-15);

    ComplexMatrix mixed(4);
    for (int i = 0; i < 4; ++i) mixed(i, i) = 0.25;
    auto rho_mixed = DensityMatrix::from_matrix(mixed);
    REQUIRE(std::abs(coherence(rho_mixed, x, y)) == 0.0);

    // the interferometric initial condition carries coherence 1/2
    const SqueezeParams p{0.5, 0.0};
    auto rho0 = interferometric_state(p);
    auto psi = dark_state(LevelBasis{BasisKind::ThreePlusAncilla}, 1, p);
    REQUIRE(std::abs(coherence(rho0, psi, y) - cxd{0.5}) < 1e-12);

    ComplexVector not_unit(4);
    not_unit[0] = 0.5;
    REQUIRE_THROWS_AS(coherence(rho0, not_unit, y), std::invalid_argument);
    REQUIRE_THROWS_AS(coherence(rho0, ComplexVector::basis(5, 0), ComplexVector::basis(5, 1)),
                      std::invalid_argument);
}

TEST_CASE("run_loop: no squeezing leaves the coherence untouched") {
    auto res = run_loop(LoopSchedule::make(0.0, 1e-2));
    REQUIRE(std::abs(res.phase) < 1e-9);
    REQUIRE(res.visibility == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(std::abs(res.initial_coherence - cxd{0.5}) < 1e-12);
}

TEST_CASE("run_loop: adiabatic loop phase at r=0.5, xi=1e-3") {
    auto res = run_loop(LoopSchedule::make(0.5, 1e-3));
    REQUIRE(res.phase == Catch::Approx(kLoopPhaseHalf).margin(6e-3));
    // phase track is sane: starts at zero, small increments
    const auto& track = res.trajectory.phase_track;
    REQUIRE(track.front() == 0.0);
    for (size_t k = 1; k < track.size(); ++k)
        REQUIRE(std::abs(track[k] - track[k - 1]) < kPi / 4.0);
    REQUIRE(res.trajectory.times.front() == 0.0);
    for (size_t k = 1; k < res.trajectory.times.size(); ++k)
        REQUIRE(res.trajectory.times[k] > res.trajectory.times[k - 1]);
}

TEST_CASE("run_loop: visibility at r=0.5, xi=1e-2") {
    auto res = run_loop(LoopSchedule::make(0.5, 1e-2));
    REQUIRE(res.visibility == Catch::Approx(kVisibilityHalfXi1em2).margin(2e-3));
    REQUIRE(res.phase == Catch::Approx(-kPi * (1.0 - kAlphaHalf)).margin(2e-2));
}

TEST_CASE("run_loop: both frames report the same lab-frame loop factor") {
    auto lab = run_loop(LoopSchedule::make(0.5, 1e-2, 0.4, Frame::Lab));
    auto rot = run_loop(LoopSchedule::make(0.5, 1e-2, 0.4, Frame::Rotating));
    REQUIRE(std::abs(lab.phase - rot.phase) < 1e-6);
    REQUIRE(std::abs(lab.visibility - rot.visibility) < 1e-6);
    REQUIRE(std::abs(lab.final_coherence - rot.final_coherence) < 1e-6);
}

TEST_CASE("run_loop: runs are deterministic") {
    auto a = run_loop(LoopSchedule::make(0.7, 2e-2));
    auto b = run_loop(LoopSchedule::make(0.7, 2e-2));
    REQUIRE(a.phase == b.phase);
    REQUIRE(a.visibility == b.visibility);
    REQUIRE(a.final_coherence == b.final_coherence);
}

TEST_CASE("run_loop: rejects an initial state without tracked coherence") {
    auto rho0 = DensityMatrix::pure(ComplexVector::basis(4, level::up));
    REQUIRE_THROWS_AS(run_loop(LoopSchedule::make(0.5, 1e-2), 1.0, rho0), std::invalid_argument);
}

TEST_CASE("run_loop: deliberately coarse stepping fails loudly") {
    LoopOptions opt;
    opt.steps_per_period = 10;
    REQUIRE_THROWS_AS(run_loop(LoopSchedule::make(0.5, 1e-3), 1.0, std::nullopt, opt),
                      IntegrationError);
}

TEST_CASE("run_loop_five: symmetric channels gain no relative phase") {
    auto res = run_loop_five(0.3, 0.3, 1e-2, 1.0, 1.0);
    REQUIRE(std::abs(res.phase) < 1e-6);
    REQUIRE(res.visibility <= 1.0);
    REQUIRE(std::abs(res.initial_coherence - cxd{0.5}) < 1e-12);
}

TEST_CASE("run_loop_five: relative geometric phase at moderate drive") {
    const double a1 = 0.6480542736638854;   // 1/cosh(1)
    const double a2 = 0.2658022288340797;   // 1/cosh(2)
    auto res = run_loop_five(0.5, 1.0, 5e-3, 1.0, 1.0);
    REQUIRE(res.phase == Catch::Approx(kPi * (a1 - a2)).margin(1e-3));
}
