#pragma once

// Everything parameterized by the squeezing eta = r e^{i phi}: derived
// scalars, atomic lowering/jump operators, dark states, the frame unitary
// that pins the dark state, steering generators, and the assembled
// three-level-plus-ancilla and five-level dissipative models.
//
// Basis ordering is fixed globally:
//   four levels:  [|1>, |0>, |-1>, |a>]
//   five levels:  [|1>, |0>, |-1>, |1'>, |-1'>]

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerlab/densemat.hpp"

namespace steerlab {

/// Reservoir control knobs: squeezing amplitude r >= 0 and phase phi.
/// phi is kept as given (no mod-2pi reduction); the half-angle factors in
/// the frame unitary make the distinction observable over a closed loop.
struct SqueezeParams {
    double r = 0.0;
    double phi = 0.0;
};

/// Scalars derived from (r, Gamma): c, s normalize the dark state,
/// alpha = 1/cosh(2r) and beta = -sinh(2r)/cosh(2r) shape the steering
/// generator, gamma_eff = Gamma cosh(2r) is the rotating-frame rate.
struct SqueezeDerived {
    double c = 1.0;
    double s = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 1.0;
    double gamma_eff = 1.0;
};

inline SqueezeDerived derive(const SqueezeParams& params, double gamma) {
    if (!(params.r >= 0.0) || !std::isfinite(params.r))
        throw std::invalid_argument("derive: squeezing amplitude r must be >= 0 and finite");
    if (!std::isfinite(params.phi))
        throw std::invalid_argument("derive: squeezing phase must be finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("derive: gamma must be > 0 and finite");
    const double ch2 = std::cosh(2.0 * params.r);
    SqueezeDerived d;
    d.c = std::cosh(params.r) / std::sqrt(ch2);
    d.s = std::sinh(params.r) / std::sqrt(ch2);
    d.alpha = 1.0 / ch2;
    d.beta = -std::sinh(2.0 * params.r) / ch2;
    d.gamma = gamma;
    d.gamma_eff = gamma * ch2;
    return d;
}

enum class BasisKind { ThreePlusAncilla, FiveLevel };

/// Level basis of one of the two supported systems. Index layout:
/// ThreePlusAncilla: |1>=0, |0>=1, |-1>=2, |a>=3.
/// FiveLevel:        |1>=0, |0>=1, |-1>=2, |1'>=3, |-1'>=4.
struct LevelBasis {
    BasisKind kind = BasisKind::ThreePlusAncilla;

    int dim() const { return kind == BasisKind::ThreePlusAncilla ? 4 : 5; }

    std::vector<std::string> labels() const {
        if (kind == BasisKind::ThreePlusAncilla) return {"|1>", "|0>", "|-1>", "|a>"};
        return {"|1>", "|0>", "|-1>", "|1'>", "|-1'>"};
    }
};

namespace level {
inline constexpr int up = 0;       // |1>  (|1'> is 3)
inline constexpr int mid = 1;      // |0>, shared by both channels
inline constexpr int down = 2;     // |-1> (|-1'> is 4)
inline constexpr int ancilla = 3;  // |a>, ThreePlusAncilla only
inline constexpr int up2 = 3;
inline constexpr int down2 = 4;
}  // namespace level

namespace detail {
struct ChannelIdx {
    int up;
    int down;
};

inline ChannelIdx channel_indices(const LevelBasis& basis, int channel) {
    if (channel != 1 && channel != 2)
        throw std::invalid_argument("channel must be 1 or 2");
    if (channel == 2 && basis.kind != BasisKind::FiveLevel)
        throw std::invalid_argument("channel 2 exists only in the five-level basis");
    return channel == 1 ? ChannelIdx{level::up, level::down}
                        : ChannelIdx{level::up2, level::down2};
}
}  // namespace detail

/// Lowering operator S = |down><0| + |0><up| of the requested channel.
/// The ancilla (and the other channel's levels) are untouched.
inline ComplexMatrix lowering_operator(const LevelBasis& basis, int channel) {
    const auto idx = detail::channel_indices(basis, channel);
    ComplexMatrix s(basis.dim());
    s(idx.down, level::mid) = 1.0;
    s(level::mid, idx.up) = 1.0;
    return s;
}

/// Jump operator R(eta) = S cosh r + e^{i phi} S^dag sinh r.
inline ComplexMatrix jump_operator(const LevelBasis& basis, int channel,
                                   const SqueezeParams& params) {
    ComplexMatrix s = lowering_operator(basis, channel);
    ComplexMatrix r = adjoint(s);
    const cxd w = std::polar(1.0, params.phi) * std::sinh(params.r);
    r *= w;
    r.axpy(std::cosh(params.r), s);
    return r;
}

/// Dark state c|down> - e^{i phi} s|up> of the channel; annihilated by the
/// channel's jump operator for every (r, phi).
inline ComplexVector dark_state(const LevelBasis& basis, int channel,
                                const SqueezeParams& params) {
    const auto idx = detail::channel_indices(basis, channel);
    const double ch2 = std::cosh(2.0 * params.r);
    ComplexVector v(basis.dim());
    v[idx.down] = std::cosh(params.r) / std::sqrt(ch2);
    v[idx.up] = -std::polar(1.0, params.phi) * (std::sinh(params.r) / std::sqrt(ch2));
    return v;
}

namespace detail {
// Writes the 2x2 frame block
//   [ c e^{-i phi/2}   s e^{+i phi/2} ]
//   [-s e^{-i phi/2}   c e^{+i phi/2} ]
// onto rows/cols (up, down). phi enters through half angles, so this block
// is 4pi-periodic in phi; callers must pass the unreduced phase.
inline void put_frame_block(ComplexMatrix& o, const SqueezeParams& params, int up, int down) {
    const double ch2 = std::cosh(2.0 * params.r);
    const double c = std::cosh(params.r) / std::sqrt(ch2);
    const double s = std::sinh(params.r) / std::sqrt(ch2);
    const cxd em = std::polar(1.0, -0.5 * params.phi);
    const cxd ep = std::polar(1.0, 0.5 * params.phi);
    o(up, up) = c * em;
    o(up, down) = s * ep;
    o(down, up) = -s * em;
    o(down, down) = c * ep;
}

// Steering generator block (phi_rate/2) [[alpha, beta], [beta, -alpha]] on
// rows/cols (up, down).
inline void put_steering_block(ComplexMatrix& g, const SqueezeDerived& d, double phi_rate,
                               int up, int down) {
    const double f = 0.5 * phi_rate;
    g(up, up) += f * d.alpha;
    g(up, down) += f * d.beta;
    g(down, up) += f * d.beta;
    g(down, down) += -f * d.alpha;
}
}  // namespace detail

/// Frame unitary O(eta) of the three-level-plus-ancilla system: maps the
/// instantaneous dark state onto |-1> (up to the phase e^{i phi/2}) and acts
/// trivially on |0> and |a>.
inline ComplexMatrix frame_unitary(const SqueezeParams& params) {
    ComplexMatrix o = ComplexMatrix::identity(4);
    detail::put_frame_block(o, params, level::up, level::down);
    return o;
}

/// Frame unitary of the five-level system: one frame block per channel,
/// trivial on the shared |0>.
inline ComplexMatrix frame_unitary_five(const SqueezeParams& params1,
                                        const SqueezeParams& params2) {
    ComplexMatrix o = ComplexMatrix::identity(5);
    detail::put_frame_block(o, params1, level::up, level::down);
    detail::put_frame_block(o, params2, level::up2, level::down2);
    return o;
}

/// Closed-form steering generator G = i dO/dt O^dag for a constant-r,
/// linear-phi schedule: (phi_rate/2) [[alpha,0,beta],[0,0,0],[beta,0,-alpha]]
/// on the three-level block, zero on the ancilla.
inline ComplexMatrix steering_generator_closed(const SqueezeDerived& d, double phi_rate) {
    ComplexMatrix g(4);
    detail::put_steering_block(g, d, phi_rate, level::up, level::down);
    return g;
}

/// Steering generator from a central finite difference of the frame unitary:
/// i (O(t+dt) - O(t-dt)) / (2 dt) O^dag(t), Hermitian-symmetrized. Works for
/// any differentiable schedule, at O(dt^2) accuracy.
inline ComplexMatrix steering_generator_numeric(
    const std::function<SqueezeParams(double)>& schedule, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("steering_generator_numeric: dt must be > 0");
    const ComplexMatrix op = frame_unitary(schedule(t + dt));
    const ComplexMatrix om = frame_unitary(schedule(t - dt));
    ComplexMatrix dod = op;
    dod -= om;
    dod *= cxd{0.0, 1.0} * (0.5 / dt);
    ComplexMatrix g = mat_mul(dod, adjoint(frame_unitary(schedule(t))));
    ComplexMatrix gd = adjoint(g);
    g += gd;
    g *= 0.5;
    return g;
}

enum class Frame { Lab, Rotating };

/// A dissipative model: a basis, one (rate, jump operator) builder per
/// reservoir channel, and an optional Hermitian generator term for the
/// rotating frame. Builders are pure functions of time.
struct ModelSpec {
    struct Dissipator {
        std::function<double(double)> rate;
        std::function<ComplexMatrix(double)> jump;
    };

    LevelBasis basis;
    std::vector<Dissipator> dissipators;
    std::optional<std::function<ComplexMatrix(double)>> generator;
};

/// Linear phase schedule phi_t = phi0 + phi_rate * t at constant r.
struct PhiSchedule {
    double r = 0.0;
    double phi0 = 0.0;
    double phi_rate = 0.0;

    SqueezeParams at(double t) const { return SqueezeParams{r, phi0 + phi_rate * t}; }
};

/// Three-level-plus-ancilla model under the cyclically driven squeezed
/// reservoir. Lab frame: single dissipator (Gamma, R(eta_t)). Rotating
/// frame: (Gamma_eff, O R O^dag / sqrt(cosh 2r)) plus the steering
/// generator; the transformed Lindbladian is diagonal, diag(1,1,0,0).
inline ModelSpec build_three_level_model(const SqueezeParams& params0, double phi_rate,
                                         double gamma, Frame frame) {
    const SqueezeDerived d = derive(params0, gamma);
    const PhiSchedule sched{params0.r, params0.phi, phi_rate};
    const LevelBasis basis{BasisKind::ThreePlusAncilla};

    ModelSpec model;
    model.basis = basis;
    if (frame == Frame::Lab) {
        model.dissipators.push_back(
            {[gamma](double) { return gamma; },
             [basis, sched](double t) { return jump_operator(basis, 1, sched.at(t)); }});
    } else {
        const double scale = 1.0 / std::sqrt(std::cosh(2.0 * params0.r));
        model.dissipators.push_back(
            {[d](double) { return d.gamma_eff; },
             [basis, sched, scale](double t) {
                 const SqueezeParams p = sched.at(t);
                 const ComplexMatrix o = frame_unitary(p);
                 ComplexMatrix rt = mat_mul(mat_mul(o, jump_operator(basis, 1, p)), adjoint(o));
                 rt *= scale;
                 return rt;
             }});
        model.generator = [d, phi_rate](double) { return steering_generator_closed(d, phi_rate); };
    }
    return model;
}

/// Five-level model: two reservoir channels with independent squeezing
/// amplitudes sharing the common phase schedule phi_t = phi0 + phi_rate * t.
inline ModelSpec build_five_level_model(const SqueezeParams& params1,
                                        const SqueezeParams& params2, double phi_rate,
                                        double gamma1, double gamma2, Frame frame) {
    const SqueezeDerived d1 = derive(params1, gamma1);
    const SqueezeDerived d2 = derive(params2, gamma2);
    const PhiSchedule sched1{params1.r, params1.phi, phi_rate};
    const PhiSchedule sched2{params2.r, params2.phi, phi_rate};
    const LevelBasis basis{BasisKind::FiveLevel};

    ModelSpec model;
    model.basis = basis;
    if (frame == Frame::Lab) {
        model.dissipators.push_back(
            {[gamma1](double) { return gamma1; },
             [basis, sched1](double t) { return jump_operator(basis, 1, sched1.at(t)); }});
        model.dissipators.push_back(
            {[gamma2](double) { return gamma2; },
             [basis, sched2](double t) { return jump_operator(basis, 2, sched2.at(t)); }});
    } else {
        const double scale1 = 1.0 / std::sqrt(std::cosh(2.0 * params1.r));
        const double scale2 = 1.0 / std::sqrt(std::cosh(2.0 * params2.r));
        auto frame_at = [sched1, sched2](double t) {
            return frame_unitary_five(sched1.at(t), sched2.at(t));
        };
        model.dissipators.push_back(
            {[d1](double) { return d1.gamma_eff; },
             [basis, sched1, frame_at, scale1](double t) {
                 const ComplexMatrix o = frame_at(t);
                 ComplexMatrix rt =
                     mat_mul(mat_mul(o, jump_operator(basis, 1, sched1.at(t))), adjoint(o));
                 rt *= scale1;
                 return rt;
             }});
        model.dissipators.push_back(
            {[d2](double) { return d2.gamma_eff; },
             [basis, sched2, frame_at, scale2](double t) {
                 const ComplexMatrix o = frame_at(t);
                 ComplexMatrix rt =
                     mat_mul(mat_mul(o, jump_operator(basis, 2, sched2.at(t))), adjoint(o));
                 rt *= scale2;
                 return rt;
             }});
        model.generator = [d1, d2, phi_rate](double) {
            ComplexMatrix g(5);
            detail::put_steering_block(g, d1, phi_rate, level::up, level::down);
            detail::put_steering_block(g, d2, phi_rate, level::up2, level::down2);
            return g;
        };
    }
    return model;
}

}  // namespace steerlab
