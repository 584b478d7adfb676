#pragma once

// Analytic predictions for the steered system: eigenrates of the coherence
// flow, exact and adiabatic coherence evolution, loop phase and visibility,
// the final-state mixture, the geometric phase (closed form and a
// discretized loop oracle), the five-level coherence, and the polarization
// readout of the relative phase.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "steerlab/densemat.hpp"
#include "steerlab/lindblad.hpp"
#include "steerlab/squeeze.hpp"

namespace steerlab {

/// Eigenvalues of the 2x2 flow governing (rho_-a, rho_+a):
///   lambda_pm = -G~/4 -+ (1/2) sqrt(G~^2/4 + i alpha G~ phi_rate - phi_rate^2).
/// lambda_minus is the slow (dark) mode; lambda_plus the fast decaying one.
struct EigenRates {
    cxd lambda_plus{};
    cxd lambda_minus{};
};

inline EigenRates eigen_rates(const SqueezeDerived& d, double phi_rate) {
    const double gt = d.gamma_eff;
    if (phi_rate == 0.0) return EigenRates{cxd{-0.5 * gt, 0.0}, cxd{0.0, 0.0}};
    const cxd disc{0.25 * gt * gt - phi_rate * phi_rate, d.alpha * gt * phi_rate};
    const cxd root = std::sqrt(disc);  // principal branch
    return EigenRates{-0.25 * gt - 0.5 * root, -0.25 * gt + 0.5 * root};
}

namespace detail {
// Coefficients of the coherence pair flow d/dt (x, y) = M (x, y):
//   x' = +i (phi_rate/2) (alpha x - beta y)
//   y' = -(1/2)(gamma_eff + i alpha phi_rate) y - i (phi_rate/2) beta x
struct CoherenceFlow {
    cxd a, b, d;  // M = [[a, b], [b, d]]
};

inline CoherenceFlow coherence_flow(const SqueezeDerived& d, double phi_rate) {
    const cxd i{0.0, 1.0};
    CoherenceFlow m;
    m.a = i * 0.5 * phi_rate * d.alpha;
    m.b = -i * 0.5 * phi_rate * d.beta;
    m.d = -0.5 * cxd{d.gamma_eff, d.alpha * phi_rate};
    return m;
}
}  // namespace detail

/// Exact solution of the coherence pair with rho_+a(0) = 0, rho_-a(0) = coh0,
/// from the eigendecomposition of the 2x2 flow. Returns (rho_-a, rho_+a).
inline std::pair<cxd, cxd> exact_coherence(const SqueezeDerived& d, double phi_rate, cxd coh0,
                                           double t) {
    const auto m = detail::coherence_flow(d, phi_rate);
    const auto rates = eigen_rates(d, phi_rate);
    const cxd lp = rates.lambda_plus;
    const cxd lm = rates.lambda_minus;
    const cxd gap = lp - lm;
    if (std::abs(gap) < 1e-12 * std::max(1.0, std::abs(lp))) {
        // defective limit: exp(Mt) = e^{lt} (I + (M - l) t)
        const cxd el = std::exp(lp * t);
        return {coh0 * el * (1.0 + (m.a - lp) * t), coh0 * el * m.b * t};
    }
    const cxd ep = std::exp(lp * t);
    const cxd em = std::exp(lm * t);
    const cxd x = coh0 * ((m.a - lm) * ep - (m.a - lp) * em) / gap;
    const cxd y = coh0 * m.b * (ep - em) / gap;
    return {x, y};
}

/// Two-term adiabatic expansion of rho_-a(t), valid for phi_rate << gamma_eff:
///   coh0 [ (1-eps) e^{i a w t/2 - eps G~ t} + eps e^{-i a w t/2 - (G~/2)(1-2 eps) t} ],
/// eps = (beta^2/2) (phi_rate/gamma_eff)^2.
inline cxd adiabatic_coherence(const SqueezeDerived& d, double phi_rate, cxd coh0, double t) {
    const double u = phi_rate / d.gamma_eff;
    const double eps = 0.5 * d.beta * d.beta * u * u;
    const cxd i{0.0, 1.0};
    const cxd slow = std::exp((i * (0.5 * d.alpha * phi_rate) - eps * d.gamma_eff) * t);
    const cxd fast =
        std::exp((-i * (0.5 * d.alpha * phi_rate) - 0.5 * d.gamma_eff * (1.0 - 2.0 * eps)) * t);
    return coh0 * ((1.0 - eps) * slow + eps * fast);
}

/// Closed-loop prediction: lab-frame phase -pi (1 - alpha), visibility
/// exp(-pi alpha beta^2 phi_rate / gamma), and the population leak epsilon.
struct PhasePrediction {
    double phase = 0.0;
    double visibility = 1.0;
    double epsilon = 0.0;
};

inline PhasePrediction loop_prediction(const SqueezeDerived& d, double phi_rate) {
    if (!(phi_rate > 0.0)) throw std::invalid_argument("loop_prediction: phi_rate must be > 0");
    PhasePrediction p;
    p.phase = -kPi * (1.0 - d.alpha);
    p.visibility = std::exp(-kPi * d.alpha * d.beta * d.beta * phi_rate / d.gamma);
    const double u = phi_rate / d.gamma_eff;
    p.epsilon = 0.5 * d.beta * d.beta * u * u;
    return p;
}

/// State after one loop, starting from (|psi_DF(0)> + |a>)/sqrt(2) at phi0=0:
/// the phase-shifted superposition mixed with weight w = pi alpha beta^2
/// phi_rate / gamma of the bare dark state. Rejects w >= 1 (non-adiabatic).
inline DensityMatrix final_mixture(const SqueezeDerived& d, double phi_rate) {
    const double w = kPi * d.alpha * d.beta * d.beta * phi_rate / d.gamma;
    if (!(w < 1.0))
        throw std::invalid_argument("final_mixture: mixing weight >= 1, outside the adiabatic regime");
    ComplexVector psi(4);
    psi[level::down] = d.c;
    psi[level::up] = -d.s;
    const cxd loop_factor = std::polar(1.0, -kPi * (1.0 - d.alpha));
    ComplexVector shifted(4);
    for (int i = 0; i < 4; ++i) shifted[i] = loop_factor * psi[i] / std::sqrt(2.0);
    shifted[level::ancilla] += 1.0 / std::sqrt(2.0);

    ComplexMatrix rho = outer(shifted, shifted);
    rho *= 1.0 - w;
    rho.axpy(w, outer(psi, psi));
    DensityMatrix out;
    out.mat = rho;
    return out;
}

/// Geometric phase of the dark state over one phase cycle:
/// chi_g = -pi (1 - alpha) = -2 pi s^2.
inline double berry_phase_closed(const SqueezeDerived& d) { return -kPi * (1.0 - d.alpha); }

/// Gauge-invariant discrete loop phase -arg prod_k <psi_k | psi_{k+1}>,
/// indices cyclic. Factors are normalized to unit modulus as they are
/// multiplied, so only the accumulated argument survives.
inline double bargmann_loop_phase(const std::vector<ComplexVector>& samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("bargmann_loop_phase: need at least 3 samples");
    cxd prod{1.0, 0.0};
    const size_t n = samples.size();
    for (size_t k = 0; k < n; ++k) {
        const cxd z = dot(samples[k], samples[(k + 1) % n]);
        const double m = std::abs(z);
        if (!(m > 0.0))
            throw std::invalid_argument("bargmann_loop_phase: consecutive samples orthogonal");
        prod *= z / m;
    }
    return -std::arg(prod);
}

/// Discretized Berry-phase oracle: dark states sampled at phi_k = 2 pi k / n,
/// combined by the Bargmann loop product. Converges to berry_phase_closed as
/// O(1/n^2); the closed-form value lies inside the principal branch for all
/// r, so no extra unwrapping is needed.
inline double berry_phase_numeric(double r, int n_steps) {
    if (n_steps < 8) throw std::invalid_argument("berry_phase_numeric: need n_steps >= 8");
    if (!(r >= 0.0)) throw std::invalid_argument("berry_phase_numeric: r must be >= 0");
    const LevelBasis basis{BasisKind::ThreePlusAncilla};
    std::vector<ComplexVector> samples;
    samples.reserve(static_cast<size_t>(n_steps));
    for (int k = 0; k < n_steps; ++k)
        samples.push_back(dark_state(basis, 1, SqueezeParams{r, kTwoPi * k / n_steps}));
    return bargmann_loop_phase(samples);
}

/// Coherence between the two five-level dark states for the common linear
/// phase drive:
///   (1/2) exp{ [ -i (alpha2 - alpha1) w/2
///               - (beta1^2/(2 G~1) + beta2^2/(2 G~2)) w^2 ] t }.
inline cxd five_level_coherence(const SqueezeDerived& d1, const SqueezeDerived& d2,
                                double phi_rate, double t) {
    const cxd i{0.0, 1.0};
    const cxd exponent =
        (-i * (0.5 * (d2.alpha - d1.alpha) * phi_rate) -
         (d1.beta * d1.beta / (2.0 * d1.gamma_eff) + d2.beta * d2.beta / (2.0 * d2.gamma_eff)) *
             phi_rate * phi_rate) *
        t;
    return 0.5 * std::exp(exponent);
}

/// Adiabatic-limit relative phase of the two dark states over one period:
/// pi (alpha1 - alpha2), the difference of the individual loop phases.
inline double relative_phase(const SqueezeDerived& d1, const SqueezeDerived& d2) {
    return kPi * (d1.alpha - d2.alpha);
}

/// Photon polarization carrying the relative phase Delta: Jones vector
/// (1, e^{i Delta})/sqrt(2) over the (R, L) circular basis and the Stokes
/// parameters [1, cos Delta, sin Delta, 0] with S1 = 2 Re(E_R^* E_L),
/// S2 = 2 Im(E_R^* E_L), S3 = |E_R|^2 - |E_L|^2. Always linearly polarized;
/// the polarization plane sits at angle Delta/2.
struct PolarizationState {
    std::array<cxd, 2> jones{};    // (E_R, E_L)
    std::array<double, 4> stokes{};  // (S0, S1, S2, S3)
};

inline PolarizationState polarization_state(double delta) {
    if (!std::isfinite(delta))
        throw std::invalid_argument("polarization_state: phase must be finite");
    PolarizationState p;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    p.jones[0] = cxd{inv_sqrt2, 0.0};
    p.jones[1] = std::polar(inv_sqrt2, delta);
    p.stokes[0] = 1.0;
    p.stokes[1] = std::cos(delta);
    p.stokes[2] = std::sin(delta);
    p.stokes[3] = 0.0;
    return p;
}

}  // namespace steerlab
