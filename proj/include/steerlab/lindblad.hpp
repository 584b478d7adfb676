#pragma once

// Time-dependent Lindblad integrator for the models built in squeeze.hpp:
// fixed-step classical RK4 on the density matrix, state-invariant policing
// (trace, Hermiticity, positivity), coherence extraction and closed-loop
// runs with continuous phase unwrapping.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steerlab/densemat.hpp"
#include "steerlab/squeeze.hpp"

namespace steerlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

/// Tolerances a physical state must satisfy at every checkpoint.
struct StateTolerances {
    double trace = 1e-9;
    double hermiticity = 1e-10;
    double eigenvalue = 1e-9;  // min eigenvalue >= -eigenvalue
};

struct StateViolation {
    std::string invariant;
    double magnitude = 0.0;
};

inline std::optional<StateViolation> check_density(const ComplexMatrix& rho,
                                                   const StateTolerances& tol = {}) {
    if (!all_finite(rho)) return StateViolation{"finite entries", std::nan("")};
    const double herm = hermiticity_defect(rho);
    if (!(herm < tol.hermiticity)) return StateViolation{"hermiticity", herm};
    const double tr_err = std::abs(trace(rho) - cxd{1.0});
    if (!(tr_err < tol.trace)) return StateViolation{"unit trace", tr_err};
    const auto ev = herm_eigvals(rho);
    if (!(ev.front() >= -tol.eigenvalue)) return StateViolation{"positivity", ev.front()};
    return std::nullopt;
}

/// Hermitian, unit-trace, positive state over a fixed level basis.
/// Construction validates; the raw matrix stays accessible for the
/// integrator, which re-validates at checkpoints instead.
struct DensityMatrix {
    ComplexMatrix mat;

    DensityMatrix() : mat(ComplexMatrix::identity(1)) {}

    static DensityMatrix pure(const ComplexVector& ket) {
        const double n2 = norm(ket);
        if (!(std::abs(n2 - 1.0) < 1e-9))
            throw std::invalid_argument("DensityMatrix::pure: ket must be unit norm");
        DensityMatrix rho;
        rho.mat = outer(ket, ket);
        rho.mat *= 1.0 / (n2 * n2);
        return rho;
    }

    static DensityMatrix from_matrix(const ComplexMatrix& m, const StateTolerances& tol = {}) {
        if (auto bad = check_density(m, tol))
            throw std::invalid_argument("DensityMatrix: state violates " + bad->invariant +
                                        " (magnitude " + std::to_string(bad->magnitude) + ")");
        DensityMatrix rho;
        rho.mat = m;
        return rho;
    }

    int dim() const { return mat.dim(); }
};

/// Thrown when an integration leaves the physical-state manifold or the
/// phase track becomes ambiguous.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(double time, std::string invariant, double magnitude)
        : std::runtime_error("integration failure at t=" + std::to_string(time) +
                             ": violated " + invariant + " (magnitude " +
                             std::to_string(magnitude) + ")"),
          time_(time),
          invariant_(std::move(invariant)),
          magnitude_(magnitude) {}

    double time() const { return time_; }
    const std::string& invariant() const { return invariant_; }
    double magnitude() const { return magnitude_; }

  private:
    double time_;
    std::string invariant_;
    double magnitude_;
};

/// Fixed-step controls. dt is a target; the integrator shrinks it slightly
/// so an integer number of steps lands exactly on t_end.
struct StepControl {
    double dt = 0.01;
    int record_every = 64;
    int check_every = 64;
};

/// Default step for a model with fastest dissipative rate gamma_eff and
/// drive rate phi_rate: both timescales resolved at 2% per step.
inline double default_step(double gamma_eff, double phi_rate, double safety = 1.0) {
    double dt = 0.02 / gamma_eff;
    if (phi_rate > 0.0) dt = std::min(dt, 0.02 / phi_rate);
    return dt * safety;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
    std::vector<double> phase_track;  // filled by loop runs
    std::int64_t total_steps = 0;
    double dt = 0.0;
};

namespace detail {
inline void lindblad_rhs_into(const ModelSpec& model, const ComplexMatrix& rho, double t,
                              ComplexMatrix& out) {
    out = ComplexMatrix(rho.dim());
    for (const auto& dis : model.dissipators) {
        const double rate = dis.rate(t);
        const ComplexMatrix jump = dis.jump(t);
        const ComplexMatrix jump_dag = adjoint(jump);
        const ComplexMatrix jdj = mat_mul(jump_dag, jump);
        ComplexMatrix anti = mat_mul(jdj, rho);
        anti += mat_mul(rho, jdj);
        out.axpy(-0.5 * rate, anti);
        out.axpy(rate, mat_mul(mat_mul(jump, rho), jump_dag));
    }
    if (model.generator) {
        const ComplexMatrix gen = (*model.generator)(t);
        ComplexMatrix comm = mat_mul(gen, rho);
        comm -= mat_mul(rho, gen);
        out.axpy(cxd{0.0, -1.0}, comm);
    }
}
}  // namespace detail

/// d(rho)/dt of the model at time t: sum of dissipators
/// Gamma_i (R_i rho R_i^dag - {R_i^dag R_i, rho}/2) plus -i[G, rho] when a
/// generator is present. Traceless and Hermiticity-preserving.
inline ComplexMatrix lindblad_rhs(const ModelSpec& model, const ComplexMatrix& rho, double t) {
    if (rho.dim() != model.basis.dim())
        throw std::invalid_argument("lindblad_rhs: state dimension " + std::to_string(rho.dim()) +
                                    " does not match model dimension " +
                                    std::to_string(model.basis.dim()));
    ComplexMatrix out(rho.dim());
    detail::lindblad_rhs_into(model, rho, t, out);
    return out;
}

inline ComplexMatrix lindblad_rhs(const ModelSpec& model, const DensityMatrix& rho, double t) {
    return lindblad_rhs(model, rho.mat, t);
}

/// Integrates the master equation from rho0 over [0, t_end] with classical
/// RK4. Records every record_every steps (plus both endpoints) and enforces
/// the state invariants at checkpoints; a violation raises IntegrationError
/// with the time and magnitude.
inline Trajectory integrate(const ModelSpec& model, const DensityMatrix& rho0, double t_end,
                            const StepControl& ctrl, const StateTolerances& tol = {}) {
    if (rho0.dim() != model.basis.dim())
        throw std::invalid_argument("integrate: state/model dimension mismatch");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("integrate: t_end must be positive and finite");
    if (!(ctrl.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (ctrl.record_every < 1 || ctrl.check_every < 1)
        throw std::invalid_argument("integrate: strides must be >= 1");
    if (auto bad = check_density(rho0.mat, tol))
        throw std::invalid_argument("integrate: initial state violates " + bad->invariant);

    const auto n_steps =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t_end / ctrl.dt - 1e-12)));
    const double h = t_end / static_cast<double>(n_steps);

    Trajectory traj;
    traj.total_steps = n_steps;
    traj.dt = h;
    traj.times.reserve(static_cast<size_t>(n_steps / ctrl.record_every + 2));
    traj.states.reserve(static_cast<size_t>(n_steps / ctrl.record_every + 2));

    ComplexMatrix rho = rho0.mat;
    traj.times.push_back(0.0);
    traj.states.push_back(rho);

    ComplexMatrix k1(rho.dim()), k2(rho.dim()), k3(rho.dim()), k4(rho.dim()), stage(rho.dim());
    for (std::int64_t step = 1; step <= n_steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * h;
        detail::lindblad_rhs_into(model, rho, t0, k1);
        stage = rho;
        stage.axpy(0.5 * h, k1);
        detail::lindblad_rhs_into(model, stage, t0 + 0.5 * h, k2);
        stage = rho;
        stage.axpy(0.5 * h, k2);
        detail::lindblad_rhs_into(model, stage, t0 + 0.5 * h, k3);
        stage = rho;
        stage.axpy(h, k3);
        detail::lindblad_rhs_into(model, stage, t0 + h, k4);
        rho.axpy(h / 6.0, k1);
        rho.axpy(h / 3.0, k2);
        rho.axpy(h / 3.0, k3);
        rho.axpy(h / 6.0, k4);

        const bool recording = (step % ctrl.record_every == 0) || step == n_steps;
        if (recording || step % ctrl.check_every == 0) {
            const double t = (step == n_steps) ? t_end : static_cast<double>(step) * h;
            if (auto bad = check_density(rho, tol))
                throw IntegrationError(t, bad->invariant, bad->magnitude);
            if (recording) {
                traj.times.push_back(t);
                traj.states.push_back(rho);
            }
        }
    }
    return traj;
}

/// <bra| rho |ket> for unit-norm bra and ket.
inline cxd coherence(const DensityMatrix& rho, const ComplexVector& bra,
                     const ComplexVector& ket) {
    if (bra.dim() != rho.dim() || ket.dim() != rho.dim())
        throw std::invalid_argument("coherence: dimension mismatch");
    if (!(std::abs(norm(bra) - 1.0) < 1e-9) || !(std::abs(norm(ket) - 1.0) < 1e-9))
        throw std::invalid_argument("coherence: bra and ket must be unit norm");
    return sandwich(bra, rho.mat, ket);
}

/// U X U^dag.
inline ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& x) {
    return mat_mul(mat_mul(u, x), adjoint(u));
}

/// Cyclic drive phi_t = phi0 + phi_rate * t over one period T = 2 pi /
/// phi_rate at constant squeezing amplitude r, integrated in the requested
/// frame.
struct LoopSchedule {
    double phi0 = 0.0;
    double phi_rate = 0.0;
    double r = 0.0;
    double period = 0.0;
    Frame frame = Frame::Lab;

    static LoopSchedule make(double r, double phi_rate, double phi0 = 0.0,
                             Frame frame = Frame::Lab) {
        if (!(phi_rate > 0.0) || !std::isfinite(phi_rate))
            throw std::invalid_argument("LoopSchedule: phi_rate must be > 0");
        if (!(r >= 0.0)) throw std::invalid_argument("LoopSchedule: r must be >= 0");
        LoopSchedule s;
        s.phi0 = phi0;
        s.phi_rate = phi_rate;
        s.r = r;
        s.period = kTwoPi / phi_rate;
        s.frame = frame;
        return s;
    }
};

struct LoopResult {
    cxd initial_coherence{};
    cxd final_coherence{};
    double phase = 0.0;       // unwrapped arg of Z(T)/Z(0)
    double visibility = 0.0;  // |Z(T)| / |Z(0)|
    Trajectory trajectory;
};

struct LoopOptions {
    std::optional<std::int64_t> steps_per_period;
    std::optional<std::int64_t> record_stride;  // integration steps between records
    double safety = 1.0;
};

namespace detail {

struct TrackedCycle {
    ModelSpec model;
    DensityMatrix initial;  // in the integration frame
    double t_end = 0.0;
    // Maps a recorded state at time t back to the lab frame. Identity for
    // lab-frame integrations.
    std::function<ComplexMatrix(double, const ComplexMatrix&)> to_lab;
    ComplexVector bra;
    ComplexVector ket;
};

inline LoopResult run_tracked_cycle(const TrackedCycle& cycle, double gamma_eff_max,
                                    double phi_rate, const LoopOptions& opt) {
    StepControl ctrl;
    if (opt.steps_per_period && *opt.steps_per_period >= 1) {
        ctrl.dt = cycle.t_end / static_cast<double>(*opt.steps_per_period);
    } else {
        ctrl.dt = default_step(gamma_eff_max, phi_rate, opt.safety);
    }
    const auto n_est = static_cast<std::int64_t>(std::ceil(cycle.t_end / ctrl.dt));
    ctrl.record_every =
        opt.record_stride ? static_cast<int>(std::max<std::int64_t>(1, *opt.record_stride))
                          : static_cast<int>(std::max<std::int64_t>(1, n_est / 512));
    ctrl.check_every = 64;

    LoopResult result;
    result.trajectory = integrate(cycle.model, cycle.initial, cycle.t_end, ctrl);

    auto& traj = result.trajectory;
    traj.phase_track.resize(traj.times.size(), 0.0);

    cxd prev{};
    double accumulated = 0.0;
    for (size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        const ComplexMatrix lab = cycle.to_lab(t, traj.states[k]);
        const cxd z = sandwich(cycle.bra, lab, cycle.ket);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw IntegrationError(t, "finite tracked coherence", std::nan(""));
        if (k == 0) {
            if (std::abs(z) == 0.0)
                throw std::invalid_argument(
                    "run_loop: tracked coherence vanishes in the initial state");
            result.initial_coherence = z;
        } else {
            const double inc = std::arg(z * std::conj(prev));
            // The recording stride keeps true increments well under pi/4;
            // anything near the branch cut means the track is meaningless.
            if (!(std::abs(inc) < 0.5 * kPi))
                throw IntegrationError(t, "phase-track increment < pi/2", inc);
            accumulated += inc;
        }
        traj.phase_track[k] = accumulated;
        prev = z;
    }
    result.final_coherence = prev;
    result.phase = accumulated;
    result.visibility = std::abs(prev) / std::abs(result.initial_coherence);
    return result;
}

}  // namespace detail

/// Lab-frame interferometric initial state (|psi_DF(phi0)> + |a>)/sqrt(2).
inline DensityMatrix interferometric_state(const SqueezeParams& params) {
    const LevelBasis basis{BasisKind::ThreePlusAncilla};
    const ComplexVector psi = dark_state(basis, 1, params);
    ComplexVector ket(4);
    for (int i = 0; i < 4; ++i) ket[i] = psi[i] / std::sqrt(2.0);
    ket[level::ancilla] += 1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(ket);
}

/// Lab-frame superposition (|psi_1(phi0)> + |psi_2(phi0)>)/sqrt(2) of the
/// five-level decoherence-free states.
inline DensityMatrix dfs_superposition_state(const SqueezeParams& p1, const SqueezeParams& p2) {
    const LevelBasis basis{BasisKind::FiveLevel};
    const ComplexVector psi1 = dark_state(basis, 1, p1);
    const ComplexVector psi2 = dark_state(basis, 2, p2);
    ComplexVector ket(5);
    for (int i = 0; i < 5; ++i) ket[i] = (psi1[i] + psi2[i]) / std::sqrt(2.0);
    return DensityMatrix::pure(ket);
}

/// Drives the three-level-plus-ancilla system around one full phase loop
/// and reports the interferometric coherence rho_psi_a relative to its
/// initial value. The tracked bra is the dark state at phi0 on both ends
/// (the loop closes), and rotating-frame states are mapped back through
/// O^dag built from the unreduced phase, so the reported phase is the
/// lab-frame one in either frame.
inline LoopResult run_loop(const LoopSchedule& schedule, double gamma = 1.0,
                           std::optional<DensityMatrix> rho0 = std::nullopt,
                           const LoopOptions& opt = {}) {
    const SqueezeParams params0{schedule.r, schedule.phi0};
    const SqueezeDerived d = derive(params0, gamma);
    const LevelBasis basis{BasisKind::ThreePlusAncilla};
    const PhiSchedule phi_sched{schedule.r, schedule.phi0, schedule.phi_rate};

    detail::TrackedCycle cycle;
    cycle.model = build_three_level_model(params0, schedule.phi_rate, gamma, schedule.frame);
    cycle.t_end = schedule.period;
    cycle.bra = dark_state(basis, 1, params0);
    cycle.ket = ComplexVector::basis(4, level::ancilla);

    const DensityMatrix lab0 = rho0 ? *rho0 : interferometric_state(params0);
    if (schedule.frame == Frame::Lab) {
        cycle.initial = lab0;
        cycle.to_lab = [](double, const ComplexMatrix& m) { return m; };
    } else {
        cycle.initial =
            DensityMatrix::from_matrix(conjugate_by(frame_unitary(params0), lab0.mat));
        cycle.to_lab = [phi_sched](double t, const ComplexMatrix& m) {
            return conjugate_by(adjoint(frame_unitary(phi_sched.at(t))), m);
        };
    }
    return detail::run_tracked_cycle(cycle, d.gamma_eff, schedule.phi_rate, opt);
}

/// One phase loop of the five-level system, tracking the coherence between
/// the two decoherence-free states.
inline LoopResult run_loop_five(double r1, double r2, double phi_rate, double gamma1,
                                double gamma2, double phi0 = 0.0, Frame frame = Frame::Lab,
                                std::optional<DensityMatrix> rho0 = std::nullopt,
                                const LoopOptions& opt = {}) {
    if (!(phi_rate > 0.0)) throw std::invalid_argument("run_loop_five: phi_rate must be > 0");
    const SqueezeParams p1{r1, phi0};
    const SqueezeParams p2{r2, phi0};
    const SqueezeDerived d1 = derive(p1, gamma1);
    const SqueezeDerived d2 = derive(p2, gamma2);
    const LevelBasis basis{BasisKind::FiveLevel};
    const PhiSchedule sched1{r1, phi0, phi_rate};
    const PhiSchedule sched2{r2, phi0, phi_rate};

    detail::TrackedCycle cycle;
    cycle.model = build_five_level_model(p1, p2, phi_rate, gamma1, gamma2, frame);
    cycle.t_end = kTwoPi / phi_rate;
    cycle.bra = dark_state(basis, 1, p1);
    cycle.ket = dark_state(basis, 2, p2);

    const DensityMatrix lab0 = rho0 ? *rho0 : dfs_superposition_state(p1, p2);
    if (frame == Frame::Lab) {
        cycle.initial = lab0;
        cycle.to_lab = [](double, const ComplexMatrix& m) { return m; };
    } else {
        cycle.initial = DensityMatrix::from_matrix(
            conjugate_by(frame_unitary_five(p1, p2), lab0.mat));
        cycle.to_lab = [sched1, sched2](double t, const ComplexMatrix& m) {
            return conjugate_by(adjoint(frame_unitary_five(sched1.at(t), sched2.at(t))), m);
        };
    }
    return detail::run_tracked_cycle(cycle, std::max(d1.gamma_eff, d2.gamma_eff), phi_rate, opt);
}

}  // namespace steerlab
