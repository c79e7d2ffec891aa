#include "srlaser/model.hpp"

#include <cmath>
#include <limits>

namespace srlaser {

double ModelParams::collective_coupling() const {
    return g * std::sqrt(static_cast<double>(n_spins));
}

ModelParams ModelParams::with_collective_coupling(ModelParams base, double g_sqrt_n) {
    const double root = std::sqrt(static_cast<double>(base.n_spins));
    double g = g_sqrt_n / root;
    // nudge so that g*sqrt(N) reproduces the quoted value bit-exactly
    for (int i = 0; i < 4 && g * root != g_sqrt_n; ++i) {
        g = std::nextafter(g, g * root < g_sqrt_n ? std::numeric_limits<double>::infinity()
                                                  : -std::numeric_limits<double>::infinity());
    }
    if (g * root != g_sqrt_n)
        throw InvalidParams("collective coupling does not round-trip");
    base.g = g;
    return base;
}

void ModelParams::validate() const {
    if (n_spins < 1) throw InvalidParams("n_spins must be >= 1");
    const double fields[] = {g, delta, epsilon, kappa, gamma, pump_w, gamma_phi};
    for (double f : fields)
        if (!std::isfinite(f)) throw InvalidParams("non-finite parameter");
    if (kappa <= 0.0) throw InvalidParams("kappa must be > 0");
    if (g < 0.0 || gamma < 0.0 || pump_w < 0.0 || gamma_phi < 0.0)
        throw InvalidParams("rates must be >= 0");
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Normal: return "normal";
        case Phase::SuperradiantLasing: return "lasing";
        case Phase::Bistable: return "bistable";
    }
    return "?";
}

DerivedRates derive_rates(const ModelParams& params) {
    params.validate();
    DerivedRates r;
    r.kappa_s = params.pump_w + params.gamma + params.gamma_phi;
    r.gamma_total = r.kappa_s + params.kappa;
    const double ng2 = static_cast<double>(params.n_spins) * params.g * params.g;
    r.c0 = 4.0 * ng2 / (params.kappa * r.kappa_s);
    const double wg = params.pump_w + params.gamma;
    if (wg <= 0.0) throw DegenerateRates("pump_factor undefined: w + gamma = 0");
    r.pump_factor = (params.pump_w - params.gamma) / wg;
    return r;
}

double effective_detuning(const ModelParams& params, double jz) {
    return params.delta - 2.0 * params.epsilon * jz / static_cast<double>(params.n_spins);
}

CooperativityBranches try_cooperativity_branches(const ModelParams& params) {
    const DerivedRates r = derive_rates(params);
    const double G2 = r.gamma_total * r.gamma_total;
    const double d2 = params.delta * params.delta;
    CooperativityBranches out;

    if (params.epsilon == 0.0) {
        out.discriminant = G2;
        out.c_plus = r.c0 * r.pump_factor * G2 / (G2 + 4.0 * d2);
        out.c_minus = 0.0;
        if (*out.c_plus < *out.c_minus) std::swap(out.c_plus, out.c_minus);
        return out;
    }

    const double e = params.epsilon / r.c0;
    out.discriminant = G2 + 16.0 * e * params.delta - 16.0 * e * e;
    if (out.discriminant < 0.0) return out;

    const double root = r.gamma_total * std::sqrt(out.discriminant);
    const double den = 2.0 * (G2 + 4.0 * d2);
    const double pre = r.c0 * r.pump_factor;
    const double bp = pre * (G2 + 8.0 * e * params.delta + root) / den;
    const double bm = pre * (G2 + 8.0 * e * params.delta - root) / den;
    out.c_plus = std::max(bp, bm);
    out.c_minus = std::min(bp, bm);
    return out;
}

CooperativityBranches cooperativity_branches(const ModelParams& params) {
    CooperativityBranches out = try_cooperativity_branches(params);
    if (!out.c_plus)
        throw ComplexBranches("cooperativity branches are complex (no real solution)");
    return out;
}

Phase classify_phase(const ModelParams& params) {
    const CooperativityBranches b = try_cooperativity_branches(params);
    if (!b.c_plus) return Phase::Normal;
    if (*b.c_minus > 1.0) return Phase::Bistable;
    if (*b.c_plus > 1.0) return Phase::SuperradiantLasing;
    return Phase::Normal;
}

} // namespace srlaser
