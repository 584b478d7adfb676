#pragma once

// The primary acceptance suite: eleven numbered criteria pitting the
// Lindblad engine against the closed-form predictions, each with a pinned
// tolerance. Shared by the `verify` CLI subcommand and the acceptance test
// binary. Criterion 12 (byte-determinism of `verify` itself) lives with the
// callers that can spawn the CLI.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerlab/closedform.hpp"
#include "steerlab/densemat.hpp"
#include "steerlab/lindblad.hpp"
#include "steerlab/squeeze.hpp"

namespace steerlab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = std::nan("");
    double target = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct SuiteOptions {
    std::optional<std::int64_t> steps_per_period;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

// Standalone RK4 oracle for the 2x2 coherence flow; deliberately written
// out longhand so it shares nothing with exact_coherence.
inline std::pair<cxd, cxd> rk4_coherence_pair(const SqueezeDerived& d, double w, cxd x0,
                                              double t_end, double dt) {
    const cxd i{0.0, 1.0};
    auto fx = [&](cxd x, cxd y) { return i * 0.5 * w * (d.alpha * x - d.beta * y); };
    auto fy = [&](cxd x, cxd y) {
        return -0.5 * cxd{d.gamma_eff, d.alpha * w} * y - i * 0.5 * w * d.beta * x;
    };
    const auto n = static_cast<std::int64_t>(std::ceil(t_end / dt));
    const double h = t_end / static_cast<double>(n);
    cxd x = x0, y = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        const cxd kx1 = fx(x, y), ky1 = fy(x, y);
        const cxd kx2 = fx(x + 0.5 * h * kx1, y + 0.5 * h * ky1);
        const cxd ky2 = fy(x + 0.5 * h * kx1, y + 0.5 * h * ky1);
        const cxd kx3 = fx(x + 0.5 * h * kx2, y + 0.5 * h * ky2);
        const cxd ky3 = fy(x + 0.5 * h * kx2, y + 0.5 * h * ky2);
        const cxd kx4 = fx(x + h * kx3, y + h * ky3);
        const cxd ky4 = fy(x + h * kx3, y + h * ky3);
        x += h / 6.0 * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
        y += h / 6.0 * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4);
    }
    return {x, y};
}

class SuiteRunner {
  public:
    explicit SuiteRunner(const SuiteOptions& opt) : opt_(opt) {
        loop_opt_.steps_per_period = opt.steps_per_period;
    }

    std::vector<CriterionResult> run() {
        std::vector<CriterionResult> out;
        out.push_back(criterion([&] { return c1(); }, 1, "lab-frame loop phase"));
        out.push_back(criterion([&] { return c2(); }, 2, "loop visibility"));
        out.push_back(criterion([&] { return c3(); }, 3, "adiabatic first-order scaling"));
        out.push_back(criterion([&] { return c4(); }, 4, "dark-state suite"));
        out.push_back(criterion([&] { return c5(); }, 5, "rotating-frame structure"));
        out.push_back(criterion([&] { return c6(); }, 6, "closed-form coherence"));
        out.push_back(criterion([&] { return c7(); }, 7, "eigenrate invariants"));
        out.push_back(criterion([&] { return c8(); }, 8, "berry-phase oracle"));
        out.push_back(criterion([&] { return c9(); }, 9, "five-level interferometer"));
        out.push_back(criterion([&] { return c10(); }, 10, "polarization map"));
        out.push_back(criterion([&] { return c11(); }, 11, "state validity"));
        return out;
    }

    std::int64_t total_steps() const { return total_steps_; }

  private:
    template <typename Fn>
    CriterionResult criterion(Fn&& fn, int id, std::string name) {
        CriterionResult res;
        try {
            res = fn();
        } catch (const std::exception& e) {
            res.pass = false;
            res.measured = std::nan("");
            res.detail = std::string("failed to evaluate: ") + e.what();
        }
        res.id = id;
        res.name = std::move(name);
        return res;
    }

    const LoopResult& lab_run(double xi) {
        auto it = lab_runs_.find(xi);
        if (it == lab_runs_.end()) {
            auto res = run_loop(LoopSchedule::make(0.5, xi, 0.0, Frame::Lab), 1.0, std::nullopt,
                                loop_opt_);
            total_steps_ += res.trajectory.total_steps;
            it = lab_runs_.emplace(xi, std::move(res)).first;
        }
        return it->second;
    }

    const LoopResult& rotating_run_1em2() {
        if (!rot_1em2_) {
            rot_1em2_ = run_loop(LoopSchedule::make(0.5, 1e-2, 0.0, Frame::Rotating), 1.0,
                                 std::nullopt, loop_opt_);
            total_steps_ += rot_1em2_->trajectory.total_steps;
        }
        return *rot_1em2_;
    }

    const LoopResult& five_run_1em3() {
        if (!five_1em3_) {
            five_1em3_ = run_loop_five(0.5, 1.0, 1e-3, 1.0, 1.0, 0.0, Frame::Lab, std::nullopt,
                                       loop_opt_);
            total_steps_ += five_1em3_->trajectory.total_steps;
        }
        return *five_1em3_;
    }

    // ------------------------------------------------------------------
    // 1. Geometric phase from full lab-frame dynamics, r=0.5, xi=1e-3.
    // Runtime target 30 s single-threaded.
    CriterionResult c1() {
        const auto d = derive(SqueezeParams{0.5, 0.0}, 1.0);
        const auto t0 = std::chrono::steady_clock::now();
        const auto& res = lab_run(1e-3);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        CriterionResult c;
        c.target = -kPi * (1.0 - d.alpha);
        c.tolerance = 6e-3;
        c.measured = res.phase;
        c.pass = std::abs(c.measured - c.target) < c.tolerance && secs < 30.0;
        c.detail = "|phase - (-pi(1-alpha))| = " + fmt(std::abs(c.measured - c.target)) +
                   ", steps = " + std::to_string(res.trajectory.total_steps) + ", " +
                   fmt(secs) + " s (target < 30 s)";
        return c;
    }

    // 2. Visibility at xi = 1e-2 against exp(-pi alpha beta^2 xi).
    // Runtime target 5 s.
    CriterionResult c2() {
        const auto d = derive(SqueezeParams{0.5, 0.0}, 1.0);
        const auto t0 = std::chrono::steady_clock::now();
        const auto& res = lab_run(1e-2);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        CriterionResult c;
        c.target = loop_prediction(d, 1e-2).visibility;
        c.tolerance = 2e-3;
        c.measured = res.visibility;
        c.pass = std::abs(c.measured - c.target) < c.tolerance && secs < 5.0;
        c.detail = "|vis - exp(-pi a b^2 xi)| = " + fmt(std::abs(c.measured - c.target)) +
                   ", " + fmt(secs) + " s (target < 5 s)";
        return c;
    }

    // 3. First-order-in-xi convergence of the loop factor toward the pure
    // geometric phase: err(xi) = |Z(T)/Z(0) - e^{i phase}| halves with xi.
    // (The argument alone converges at second order; the first-order part
    // of the deviation is the visibility deficit, which dominates err.)
    CriterionResult c3() {
        const auto d = derive(SqueezeParams{0.5, 0.0}, 1.0);
        const cxd pure = std::polar(1.0, -kPi * (1.0 - d.alpha));
        double err[3];
        double arg_err[3];
        const double xis[3] = {4e-3, 2e-3, 1e-3};
        for (int k = 0; k < 3; ++k) {
            const auto& res = lab_run(xis[k]);
            const cxd factor = res.final_coherence / res.initial_coherence;
            err[k] = std::abs(factor - pure);
            arg_err[k] = std::abs(res.phase - (-kPi * (1.0 - d.alpha)));
        }
        const double ratio1 = err[0] / err[1];
        const double ratio2 = err[1] / err[2];
        CriterionResult c;
        c.target = 2.0;
        c.tolerance = 0.4;
        c.measured = ratio1;
        c.pass = err[0] > err[1] && err[1] > err[2] && ratio1 > 1.6 && ratio1 < 2.4 &&
                 ratio2 > 1.6 && ratio2 < 2.4;
        c.detail = "errs = {" + fmt(err[0]) + ", " + fmt(err[1]) + ", " + fmt(err[2]) +
                   "}, ratios = {" + fmt(ratio1) + ", " + fmt(ratio2) +
                   "}; arg-only errs (second order) = {" + fmt(arg_err[0]) + ", " +
                   fmt(arg_err[1]) + ", " + fmt(arg_err[2]) + "}";
        return c;
    }

    // 4. Dark-state annihilation on a 20x20 (r, phi) grid plus stationarity
    // of the dark state under a static reservoir for t = 100/Gamma.
    CriterionResult c4() {
        const LevelBasis basis{BasisKind::ThreePlusAncilla};
        double grid_max = 0.0;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                const SqueezeParams p{2.0 * i / 19.0, kTwoPi * j / 20.0};
                const double res = norm(apply(jump_operator(basis, 1, p), dark_state(basis, 1, p)));
                grid_max = std::max(grid_max, res);
            }

        const SqueezeParams p0{0.5, 0.3};
        auto model = build_three_level_model(p0, 0.0, 1.0, Frame::Lab);
        auto rho0 = DensityMatrix::pure(dark_state(basis, 1, p0));
        StepControl ctrl{default_step(derive(p0, 1.0).gamma_eff, 0.0), 256, 64};
        auto traj = integrate(model, rho0, 100.0, ctrl);
        total_steps_ += traj.total_steps;
        double drift = 0.0;
        for (const auto& st : traj.states)
            drift = std::max(drift, frobenius_distance(st, rho0.mat));
        static_traj_ = std::move(traj);

        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 1e-12;
        c.measured = grid_max;
        c.pass = grid_max < 1e-12 && drift < 1e-9;
        c.detail = "max ||R psi_DF|| = " + fmt(grid_max) + " (tol 1e-12), static drift = " +
                   fmt(drift) + " (tol 1e-9)";
        return c;
    }

    // 5. Rotating-frame structure: diagonal Lindbladian and lab/rotating
    // trajectory agreement at t = T for xi = 1e-2, r = 0.5.
    CriterionResult c5() {
        double diag_max = 0.0;
        std::mt19937 rng(424242);
        std::uniform_real_distribution<double> ur(0.0, 2.0);
        std::uniform_real_distribution<double> uphi(0.0, kTwoPi);
        ComplexMatrix want(4);
        want(0, 0) = 1.0;
        want(1, 1) = 1.0;
        for (int rep = 0; rep < 50; ++rep) {
            const SqueezeParams p{ur(rng), uphi(rng)};
            auto model = build_three_level_model(p, 1e-2, 1.0, Frame::Rotating);
            auto rt = model.dissipators[0].jump(uphi(rng) * 40.0);
            diag_max = std::max(diag_max,
                                frobenius_distance(mat_mul(adjoint(rt), rt), want));
        }

        const auto& lab = lab_run(1e-2);
        const auto& rot = rotating_run_1em2();
        const PhiSchedule sched{0.5, 0.0, 1e-2};
        const double t_end = kTwoPi / 1e-2;
        const ComplexMatrix rot_in_lab =
            conjugate_by(adjoint(frame_unitary(sched.at(t_end))), rot.trajectory.states.back());
        const double frame_dist =
            frobenius_distance(rot_in_lab, lab.trajectory.states.back());

        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 1e-12;
        c.measured = diag_max;
        c.pass = diag_max < 1e-12 && frame_dist < 1e-7;
        c.detail = "max ||R~dag R~ - diag(1,1,0,0)|| = " + fmt(diag_max) +
                   " (tol 1e-12), frame agreement at T = " + fmt(frame_dist) + " (tol 1e-7)";
        return c;
    }

    // 6. Closed-form coherence: eigen-decomposition vs standalone 2x2 RK4,
    // vs the full rotating-frame engine, and the adiabatic expansion order.
    CriterionResult c6() {
        const auto d = derive(SqueezeParams{0.5, 0.0}, 1.0);
        const double w = 1e-2;
        const double period = kTwoPi / w;
        const cxd coh0{0.5, 0.0};

        double oracle_max = 0.0;
        const double dt = 0.01 / d.gamma_eff;
        for (int k = 1; k <= 20; ++k) {
            const double t = period * k / 20.0;
            const auto [xe, ye] = exact_coherence(d, w, coh0, t);
            const auto [xo, yo] = rk4_coherence_pair(d, w, coh0, t, dt);
            oracle_max = std::max(oracle_max, std::max(std::abs(xe - xo), std::abs(ye - yo)));
        }

        const auto& rot = rotating_run_1em2();
        double engine_max = 0.0;
        for (size_t k = 0; k < rot.trajectory.times.size(); ++k) {
            const auto [xe, ye] = exact_coherence(d, w, coh0, rot.trajectory.times[k]);
            engine_max = std::max(engine_max, std::abs(rot.trajectory.states[k](2, 3) - xe));
            engine_max = std::max(engine_max, std::abs(rot.trajectory.states[k](0, 3) - ye));
        }

        double adiabatic_worst_margin = 0.0;  // err / (3 xi^2), must stay <= 1
        for (double xi : {1e-1, 1e-2, 1e-3}) {
            const double t = kTwoPi / xi;
            const auto [xe, ye] = exact_coherence(d, xi, coh0, t);
            const cxd xa = adiabatic_coherence(d, xi, coh0, t);
            adiabatic_worst_margin =
                std::max(adiabatic_worst_margin, (std::abs(xa - xe) / std::abs(coh0)) / (3.0 * xi * xi));
        }

        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 1e-10;
        c.measured = oracle_max;
        c.pass = oracle_max < 1e-10 && engine_max < 1e-7 && adiabatic_worst_margin <= 1.0;
        c.detail = "exact vs 2x2 RK4 = " + fmt(oracle_max) + " (tol 1e-10), vs engine = " +
                   fmt(engine_max) + " (tol 1e-7), adiabatic err / 3 xi^2 = " +
                   fmt(adiabatic_worst_margin) + " (<= 1)";
        return c;
    }

    // 7. Eigenrate sum/product invariants over 1e3 seeded draws; exact
    // {0, -G~/2} at phi_rate = 0.
    CriterionResult c7() {
        std::mt19937 rng(20240501);
        std::uniform_real_distribution<double> ur(0.0, 2.0);
        std::uniform_real_distribution<double> uxi(1e-4, 0.1);
        double worst = 0.0;
        bool stable = true;
        for (int rep = 0; rep < 1000; ++rep) {
            const auto d = derive(SqueezeParams{ur(rng), 0.0}, 1.0);
            const double w = uxi(rng);
            const auto er = eigen_rates(d, w);
            const cxd sum_defect = er.lambda_plus + er.lambda_minus + cxd{0.5 * d.gamma_eff, 0.0};
            const cxd prod_defect = er.lambda_plus * er.lambda_minus -
                                    cxd{0.25 * w * w, -0.25 * d.alpha * d.gamma_eff * w};
            worst = std::max({worst, std::abs(sum_defect), std::abs(prod_defect)});
            stable = stable && er.lambda_plus.real() <= 0.0 && er.lambda_minus.real() <= 0.0;
        }
        const auto d = derive(SqueezeParams{0.5, 0.0}, 1.0);
        const auto er0 = eigen_rates(d, 0.0);
        const bool static_exact = er0.lambda_minus == cxd{0.0, 0.0} &&
                                  er0.lambda_plus == cxd{-0.5 * d.gamma_eff, 0.0};

        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 1e-12;
        c.measured = worst;
        c.pass = worst < 1e-12 && static_exact && stable;
        c.detail = "worst invariant defect over 1000 draws (seed 20240501) = " + fmt(worst) +
                   ", static case exact = " + (static_exact ? std::string("yes") : std::string("no"));
        return c;
    }

    // 8. Berry-phase oracle: Wilson-loop product at N = 1e4 vs closed form,
    // gauge randomization, and the exact r = 0 limit.
    CriterionResult c8() {
        double worst = 0.0;
        for (double r : {0.25, 0.5, 1.0}) {
            const double closed = berry_phase_closed(derive(SqueezeParams{r, 0.0}, 1.0));
            worst = std::max(worst, std::abs(berry_phase_numeric(r, 10000) - closed));
        }

        const LevelBasis basis{BasisKind::ThreePlusAncilla};
        const int n = 4096;
        std::vector<ComplexVector> samples;
        samples.reserve(n);
        for (int k = 0; k < n; ++k)
            samples.push_back(dark_state(basis, 1, SqueezeParams{0.5, kTwoPi * k / n}));
        const double bare = bargmann_loop_phase(samples);
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> uphase(0.0, kTwoPi);
        for (auto& v : samples) {
            const cxd g = std::polar(1.0, uphase(rng));
            for (int i = 0; i < v.dim(); ++i) v[i] *= g;
        }
        const double gauge_shift = std::abs(bargmann_loop_phase(samples) - bare);
        const bool zero_exact = berry_phase_numeric(0.0, 10000) == 0.0;

        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 1e-6;
        c.measured = worst;
        c.pass = worst < 1e-6 && gauge_shift < 1e-10 && zero_exact;
        c.detail = "max |numeric - closed| = " + fmt(worst) + " (tol 1e-6), gauge shift = " +
                   fmt(gauge_shift) + " (tol 1e-10), r=0 exact = " +
                   (zero_exact ? std::string("yes") : std::string("no"));
        return c;
    }

    // 9. Five-level interferometer at r1=0.5, r2=1.0, xi=1e-3: engine
    // relative phase vs pi (alpha1 - alpha2) and vs the closed-form
    // coherence phase at T. Runtime target 60 s.
    CriterionResult c9() {
        const auto d1 = derive(SqueezeParams{0.5, 0.0}, 1.0);
        const auto d2 = derive(SqueezeParams{1.0, 0.0}, 1.0);
        const auto t0 = std::chrono::steady_clock::now();
        const auto& res = five_run_1em3();
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        const double closed_phase = std::arg(five_level_coherence(d1, d2, 1e-3, kTwoPi / 1e-3));

        CriterionResult c;
        c.target = relative_phase(d1, d2);
        c.tolerance = 6e-3;
        c.measured = res.phase;
        const double vs_closed = std::abs(res.phase - closed_phase);
        c.pass = std::abs(c.measured - c.target) < c.tolerance && vs_closed < 2e-3 &&
                 secs < 60.0;
        c.detail = "|phase - pi(a1-a2)| = " + fmt(std::abs(c.measured - c.target)) +
                   " (tol 6e-3), |phase - closed-form arg| = " + fmt(vs_closed) +
                   " (tol 2e-3), steps = " + std::to_string(res.trajectory.total_steps) +
                   ", " + fmt(secs) + " s (target < 60 s)";
        return c;
    }

    // 10. Polarization map at Delta in {0, pi/2, pi, measured}: Stokes
    // [1, cos, sin, 0] on the unit sphere to machine rounding.
    CriterionResult c10() {
        double worst_norm = 0.0;
        double worst_component = 0.0;
        const double measured_delta = five_run_1em3().phase;
        for (double delta : {0.0, 0.5 * kPi, kPi, measured_delta}) {
            const auto p = polarization_state(delta);
            worst_component = std::max({worst_component, std::abs(p.stokes[0] - 1.0),
                                        std::abs(p.stokes[1] - std::cos(delta)),
                                        std::abs(p.stokes[2] - std::sin(delta)),
                                        std::abs(p.stokes[3])});
            const double s2 = p.stokes[1] * p.stokes[1] + p.stokes[2] * p.stokes[2] +
                              p.stokes[3] * p.stokes[3];
            worst_norm = std::max(worst_norm, std::abs(s2 - 1.0));
        }
        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 4e-16;  // unit sphere to IEEE rounding
        c.measured = worst_norm;
        c.pass = worst_norm <= 4e-16 && worst_component == 0.0;
        c.detail = "worst |S.S - 1| = " + fmt(worst_norm) + ", worst component defect = " +
                   fmt(worst_component);
        return c;
    }

    // 11. State validity across every recorded state of the dynamical runs.
    CriterionResult c11() {
        double max_trace = 0.0;
        double max_herm = 0.0;
        double min_eig = 0.0;
        std::int64_t count = 0;
        auto scan = [&](const Trajectory& traj) {
            for (const auto& st : traj.states) {
                max_trace = std::max(max_trace, std::abs(trace(st) - cxd{1.0}));
                max_herm = std::max(max_herm, hermiticity_defect(st));
                min_eig = std::min(min_eig, herm_eigvals(st).front());
                ++count;
            }
        };
        for (const auto& [xi, res] : lab_runs_) scan(res.trajectory);
        if (rot_1em2_) scan(rot_1em2_->trajectory);
        if (five_1em3_) scan(five_1em3_->trajectory);
        if (static_traj_) scan(*static_traj_);

        CriterionResult c;
        c.target = 0.0;
        c.tolerance = 1e-9;
        c.measured = min_eig;
        c.pass = count > 0 && max_trace < 1e-9 && max_herm < 1e-10 && min_eig >= -1e-9;
        c.detail = std::to_string(count) + " states checked: max |tr-1| = " + fmt(max_trace) +
                   " (tol 1e-9), max herm defect = " + fmt(max_herm) +
                   " (tol 1e-10), min eigenvalue = " + fmt(min_eig) + " (tol -1e-9)";
        return c;
    }

    SuiteOptions opt_;
    LoopOptions loop_opt_;
    std::map<double, LoopResult> lab_runs_;
    std::optional<LoopResult> rot_1em2_;
    std::optional<LoopResult> five_1em3_;
    std::optional<Trajectory> static_traj_;
    std::int64_t total_steps_ = 0;
};

}  // namespace detail

struct SuiteOutcome {
    std::vector<CriterionResult> criteria;
    std::int64_t total_steps = 0;
    bool all_pass = false;
};

/// Runs criteria 1-11 on the default parameter grid and returns one result
/// per criterion, in order.
inline SuiteOutcome run_primary_suite(const SuiteOptions& opt = {}) {
    detail::SuiteRunner runner(opt);
    SuiteOutcome out;
    out.criteria = runner.run();
    out.total_steps = runner.total_steps();
    out.all_pass = true;
    for (const auto& c : out.criteria) out.all_pass = out.all_pass && c.pass;
    return out;
}

}  // namespace steerlab::acceptance
