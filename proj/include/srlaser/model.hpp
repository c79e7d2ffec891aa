#ifndef SRLASER_MODEL_HPP
#define SRLASER_MODEL_HPP

#include <optional>

#include "srlaser/errors.hpp"

namespace srlaser {

/// Physical rates and couplings of the driven-dissipative spin-cavity model,
/// all in the same angular-frequency units chosen by the caller.
struct ModelParams {
    int n_spins = 1;        ///< N
    double g = 0.0;         ///< single-spin cavity coupling
    double delta = 0.0;     ///< spin-cavity detuning
    double epsilon = 0.0;   ///< all-to-all spin interaction strength
    double kappa = 1.0;     ///< cavity leakage rate (> 0)
    double gamma = 0.0;     ///< single-spin spontaneous emission rate
    double pump_w = 0.0;    ///< incoherent pump rate
    double gamma_phi = 0.0; ///< single-spin dephasing rate

    /// The collective coupling g*sqrt(N) quoted in figure captions.
    double collective_coupling() const;

    /// Build params from the collective coupling, adjusting g by at most a
    /// few ulps so that g*sqrt(N) round-trips exactly.
    static ModelParams with_collective_coupling(ModelParams base, double g_sqrt_n);

    /// Throws InvalidParams unless all fields are finite and within range.
    void validate() const;
};

struct DerivedRates {
    double kappa_s = 0.0;     ///< w + gamma + gamma_phi (magnon decay)
    double gamma_total = 0.0; ///< kappa_s + kappa
    double c0 = 0.0;          ///< intrinsic cooperativity 4 N g^2 / (kappa kappa_s)
    double pump_factor = 0.0; ///< (w - gamma) / (w + gamma)
};

enum class Phase { Normal, SuperradiantLasing, Bistable };

const char* phase_name(Phase p);

/// The two self-consistent cooperativity branches. Both are absent exactly
/// when the discriminant is negative; c_plus >= c_minus otherwise.
struct CooperativityBranches {
    std::optional<double> c_plus;
    std::optional<double> c_minus;
    double discriminant = 0.0;
};

/// Throws DegenerateRates when w + gamma = 0.
DerivedRates derive_rates(const ModelParams& params);

/// Detuning shifted by the mean-field interaction energy: delta - 2 eps jz / N.
double effective_detuning(const ModelParams& params, double jz);

/// Closed-form branches of the cooperativity self-consistency equation.
/// Throws ComplexBranches when the discriminant is negative.
CooperativityBranches cooperativity_branches(const ModelParams& params);

/// Like cooperativity_branches but reports the complex case through the
/// optionals instead of throwing.
CooperativityBranches try_cooperativity_branches(const ModelParams& params);

/// Normal / SuperradiantLasing / Bistable from the branch values.
/// The exact threshold C = 1 classifies as Normal; complex branches map to Normal.
Phase classify_phase(const ModelParams& params);

} // namespace srlaser

#endif
