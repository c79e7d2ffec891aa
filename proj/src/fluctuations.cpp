#include "srlaser/fluctuations.hpp"

#include <algorithm>
#include <cmath>

namespace srlaser {

namespace {
constexpr double kPi = 3.14159265358979323846;

double fold_half_pi(double angle) {
    // fold into (-pi/2, pi/2]; quadrature axes are mod pi
    while (angle > 0.5 * kPi) angle -= kPi;
    while (angle <= -0.5 * kPi) angle += kPi;
    return angle;
}
} // namespace

BelowThresholdStats below_threshold_stats(const ModelParams& params) {
    const DerivedRates r = derive_rates(params);
    const double jz = 0.5 * params.n_spins * r.pump_factor;
    const double de = effective_detuning(params, jz);
    const double G = r.gamma_total;
    const double c = r.c0 * r.pump_factor * G * G / (G * G + 4.0 * de * de);
    if (c >= 1.0) throw AboveThreshold("normal-state cooperativity >= 1");

    BelowThresholdStats out;
    const double w = params.pump_w, ga = params.gamma;
    out.n_photons = w * c / ((w - ga) * (1.0 - c));
    out.delta_jz = std::sqrt(static_cast<double>(params.n_spins) * w * ga) / (w + ga);
    const double omega_lc = params.kappa * de / G; // omega_L - omega_c
    out.g1_decay = Complex(0.5 * params.kappa * (1.0 - c), omega_lc * (1.0 - c));
    out.g2_decay = params.kappa * (1.0 - c);
    return out;
}

FluctuationCoeffs fluct_coeffs(const ModelParams& params) {
    const DerivedRates r = derive_rates(params);
    const auto sols = solve_stationary(params);
    const StationarySolution* lasing = nullptr;
    for (const auto& s : sols)
        if (s.branch == BranchKind::PlusBranch) lasing = &s;
    if (!lasing) throw BelowThreshold("no lasing solution at these parameters");

    const double c = lasing->cooperativity;
    const double w = params.pump_w, ga = params.gamma;
    const double ks = r.kappa_s, G = r.gamma_total;
    const double de = effective_detuning(params, lasing->state.jz);

    FluctuationCoeffs out;
    out.a_mag = std::abs(lasing->state.a);
    out.kappa_a = params.kappa * (1.0 - 1.0 / c);
    out.d_a = params.kappa / c *
              (0.25 * (w + ga) / (w - ga) + (ks + w + ga) / (8.0 * c * ks) +
               (c - 1.0) * (w + ga) / (2.0 * c * ks));
    out.d_phi = params.kappa * c / (out.a_mag * out.a_mag) * (ks * ks) / (G * G) *
                (0.25 * (w + ga) / (w - ga) + (ks + w + ga) / (8.0 * c * ks));
    out.chi = 2.0 * lasing->state.jz * params.epsilon / (params.n_spins * G);
    out.phi_lock = -std::atan2(2.0 * de, G);
    return out;
}

GreenFunction::GreenFunction(const FluctuationCoeffs& cf, double z0, double phi0, double t,
                             const GreenTruncation& trunc)
    : z0_(z0), phi0_(phi0), t_(t) {
    const double ka = cf.kappa_a, da = cf.d_a, chi = cf.chi, am = cf.a_mag;
    const double u = std::exp(-ka * t);
    sigma2_ = da / ka * (1.0 - u * u);
    d_phi_eff_ = cf.d_phi + (4.0 * chi * chi * da + 2.0 * chi * chi * ka) / (am * am);
    z_bar_ = z0 * u;
    beta_ = chi * (1.0 - u) * (da * (1.0 - u) / ka + 0.5) / am;
    c2_ = (1.0 - u) * (da * (3.0 - u) / ka + 1.0) * chi * chi / (am * am);
    c1_im_ = -4.0 * z0 * chi / am + (1.0 - u) * 2.0 * z0 * chi / am;

    const double g2 = c2_ - 0.5 * d_phi_eff_ * t + beta_ * beta_ / sigma2_;
    if (!(g2 < 0.0))
        throw TruncationFailure("n-series does not decay at these (t, chi)");
    n_max_ = static_cast<int>(std::ceil(std::sqrt(std::log(1.0 / trunc.tol) / -g2))) + 8;
    if (n_max_ > trunc.n_cap)
        throw TruncationFailure("n_max exceeds the configured cap");
}

double GreenFunction::operator()(double z, double phi) const {
    const Complex I(0.0, 1.0);
    const double pref = 1.0 / (2.0 * kPi * std::sqrt(kPi * sigma2_));
    const double dz = z - z_bar_;

    Complex sum = std::exp(Complex(-dz * dz / sigma2_, 0.0));
    for (int n = 1; n <= n_max_; ++n) {
        const double expo2 = (c2_ - 0.5 * d_phi_eff_ * t_) * n * n;
        const Complex shift(dz, -n * beta_);
        const Complex ep = I * (static_cast<double>(n) * (phi - phi0_ + c1_im_)) + expo2 -
                           shift * shift / sigma2_;
        const Complex shift_m(dz, n * beta_);
        const Complex em = -I * (static_cast<double>(n) * (phi - phi0_ + c1_im_)) + expo2 -
                           shift_m * shift_m / sigma2_;
        sum += std::exp(ep) + std::exp(em);
    }
    imag_residue_ = std::max(imag_residue_, std::abs(sum.imag()) * pref);
    return pref * sum.real();
}

double GreenFunction::phase_variance() const {
    return d_phi_eff_ * t_ - 2.0 * c2_;
}

double QGrid::total_mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * dx() * dp() * 0.5;
}

QGrid q_representation(const FluctuationCoeffs& cf, double z0, double phi0, double t,
                       const QGridSpec& spec, const GreenTruncation& trunc) {
    const double am = cf.a_mag;
    const double u = std::exp(-cf.kappa_a * t);
    const double sigma2 = cf.d_a / cf.kappa_a * (1.0 - u * u);
    const double d_phi_eff = cf.d_phi + (4.0 * cf.chi * cf.chi * cf.d_a +
                                         2.0 * cf.chi * cf.chi * cf.kappa_a) / (am * am);
    const double z_bar = z0 * u;
    const double beta = cf.chi * (1.0 - u) * (cf.d_a * (1.0 - u) / cf.kappa_a + 0.5) / am;
    const double c2 = (1.0 - u) * (cf.d_a * (3.0 - u) / cf.kappa_a + 1.0) * cf.chi * cf.chi /
                      (am * am);
    const double c1_im = -4.0 * z0 * cf.chi / am + (1.0 - u) * 2.0 * z0 * cf.chi / am;
    const double s1 = 1.0 + sigma2;

    const double g2 = c2 - 0.5 * d_phi_eff * t + beta * beta / s1;
    if (!(g2 < 0.0)) throw TruncationFailure("Q series does not decay");
    int n_max = static_cast<int>(std::ceil(std::sqrt(std::log(1.0 / trunc.tol) / -g2))) + 8;
    if (n_max > trunc.n_cap) throw TruncationFailure("n_max exceeds the configured cap");

    std::vector<double> rho(n_max + 1);
    for (int n = 0; n <= n_max; ++n) rho[n] = std::exp(g2 * n * n);

    const int K = 4 * n_max + 64;
    std::vector<double> cphi(K);
    std::vector<double> node(K);
    for (int k = 0; k < K; ++k) {
        node[k] = 2.0 * kPi * k / K;
        cphi[k] = std::cos(node[k]);
    }

    QGrid grid;
    grid.nx = grid.np = spec.resolution;
    grid.x_min = spec.x_center - spec.half_extent;
    grid.x_max = spec.x_center + spec.half_extent;
    grid.p_min = spec.p_center - spec.half_extent;
    grid.p_max = spec.p_center + spec.half_extent;
    grid.time = t;
    grid.values.assign(static_cast<size_t>(grid.nx) * grid.np, 0.0);

    const double pref = 1.0 / (kPi * std::sqrt(s1)) / K;
    const double az = am + z_bar;
    double worst_negative = 0.0;

    for (int ip = 0; ip < grid.np; ++ip) {
        const double p = grid.p_min + ip * grid.dp();
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_min + ix * grid.dx();
            const double qm = std::sqrt(0.5 * (x * x + p * p));
            const double phi_q = std::atan2(p, x);
            const double theta0 = (phi_q - phi0) + c1_im - 2.0 * beta * az / s1;

            double acc = 0.0;
            for (int k = 0; k < K; ++k) {
                const double e0 = -qm * qm +
                                  (-az * az + 2.0 * az * qm * cphi[k] +
                                   sigma2 * qm * qm * cphi[k] * cphi[k]) / s1;
                if (e0 < -700.0) continue;
                const double w = std::exp(e0);
                const double th = node[k] + 2.0 * beta * qm * cphi[k] / s1 + theta0;
                // sum_n rho_n e^{i n th} via the cosine recurrence
                double c1 = std::cos(th);
                double cprev = 1.0, ccur = c1;
                double s = 1.0;
                for (int n = 1; n <= n_max; ++n) {
                    s += 2.0 * rho[n] * ccur;
                    const double cnext = 2.0 * c1 * ccur - cprev;
                    cprev = ccur;
                    ccur = cnext;
                }
                acc += w * s;
            }
            double q = pref * acc;
            if (q < worst_negative) worst_negative = q;
            if (q < 0.0) q = 0.0;
            grid.values[static_cast<size_t>(ip) * grid.nx + ix] = q;
        }
    }
    if (worst_negative < -1e-9)
        throw NegativeQ("Q clipped below -1e-9: truncation or quadrature misconfigured");
    return grid;
}

QMoments q_moments(const QGrid& grid) {
    QMoments m;
    double mass = 0.0, sx = 0.0, sp = 0.0;
    for (int ip = 0; ip < grid.np; ++ip) {
        const double p = grid.p_min + ip * grid.dp();
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_min + ix * grid.dx();
            const double q = grid.values[static_cast<size_t>(ip) * grid.nx + ix];
            mass += q;
            sx += q * x;
            sp += q * p;
        }
    }
    m.mean_x = sx / mass;
    m.mean_p = sp / mass;

    double vx = 0.0, vp = 0.0, cxp = 0.0, csin = 0.0, ccos = 0.0;
    for (int ip = 0; ip < grid.np; ++ip) {
        const double p = grid.p_min + ip * grid.dp();
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_min + ix * grid.dx();
            const double q = grid.values[static_cast<size_t>(ip) * grid.nx + ix];
            vx += q * (x - m.mean_x) * (x - m.mean_x);
            vp += q * (p - m.mean_p) * (p - m.mean_p);
            cxp += q * (x - m.mean_x) * (p - m.mean_p);
            const double ang = std::atan2(p, x);
            csin += q * std::sin(ang);
            ccos += q * std::cos(ang);
        }
    }
    m.var_x = vx / mass;
    m.var_p = vp / mass;
    m.cov_xp = cxp / mass;

    const double mean_ang = std::atan2(csin, ccos);
    double va = 0.0;
    for (int ip = 0; ip < grid.np; ++ip) {
        const double p = grid.p_min + ip * grid.dp();
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_min + ix * grid.dx();
            const double q = grid.values[static_cast<size_t>(ip) * grid.nx + ix];
            double d = std::atan2(p, x) - mean_ang;
            while (d > kPi) d -= 2.0 * kPi;
            while (d < -kPi) d += 2.0 * kPi;
            va += q * d * d;
        }
    }
    m.angular_variance = va / mass;
    return m;
}

Eigen::Matrix2d noise_spectrum_matrix(const FluctuationCoeffs& cf, double omega, DaMode mode) {
    const double ka = cf.kappa_a;
    const double da = mode == DaMode::Zero ? 0.0 : cf.d_a;
    const double chi = cf.chi;
    const double lor = ka * ka + omega * omega;
    const double pref = (4.0 * da + ka) / lor;

    Eigen::Matrix2d m;
    m(0, 0) = pref;
    m(0, 1) = m(1, 0) = pref * (-2.0 * ka * ka * chi / lor);
    m(1, 1) = pref * (4.0 * ka * ka * chi * chi / lor + ka / (4.0 * da + ka));
    return m;
}

NoiseSpectra principal_spectra(const FluctuationCoeffs& cf,
                               const std::vector<double>& omega_grid, DaMode mode) {
    NoiseSpectra out;
    out.omega_grid = omega_grid;
    out.s_plus.reserve(omega_grid.size());
    out.s_minus.reserve(omega_grid.size());
    for (double w : omega_grid) {
        const Eigen::Matrix2d m = noise_spectrum_matrix(cf, w, mode);
        const double avg = 0.5 * (m(0, 0) + m(1, 1));
        const double rad = std::hypot(0.5 * (m(0, 0) - m(1, 1)), m(0, 1));
        out.s_plus.push_back(avg + rad);
        out.s_minus.push_back(avg - rad);
    }

    const Eigen::Matrix2d m0 = noise_spectrum_matrix(cf, 0.0, mode);
    const double avg = 0.5 * (m0(0, 0) + m0(1, 1));
    const double rad = std::hypot(0.5 * (m0(0, 0) - m0(1, 1)), m0(0, 1));
    const double lam_minus = avg - rad;
    if (std::abs(m0(0, 1)) < 1e-300) {
        out.theta = 0.0;
    } else {
        // eigenvector of the reduced spectrum, folded into [0, pi)
        double phi_minus = std::atan2(lam_minus - m0(0, 0), m0(0, 1));
        while (phi_minus < 0.0) phi_minus += kPi;
        while (phi_minus >= kPi) phi_minus -= kPi;
        out.theta = fold_half_pi(0.5 * kPi - 2.0 * phi_minus);
    }
    return out;
}

std::pair<double, double> principal_spectra_closed_form(const FluctuationCoeffs& cf,
                                                        double omega) {
    const double ka = cf.kappa_a, chi = cf.chi;
    const double lor = ka * ka + omega * omega;
    const double base = ka / lor;
    const double sp = base * (1.0 + 2.0 * ka * ka * chi / lor * (chi + std::sqrt(1.0 + chi * chi)));
    const double sm = base * (1.0 + 2.0 * ka * ka * chi / lor * (chi - std::sqrt(1.0 + chi * chi)));
    return {std::max(sp, sm), std::min(sp, sm)};
}

double squeeze_db(const FluctuationCoeffs& cf) {
    if (!(cf.kappa_a > 0.0)) throw BelowThreshold("squeeze parameter requires lasing");
    return 20.0 / std::log(10.0) * std::asinh(std::abs(cf.chi));
}

double squeeze_db_from_spectra(const FluctuationCoeffs& cf) {
    const NoiseSpectra ns = principal_spectra(cf, {0.0}, DaMode::Zero);
    const double reference = 1.0 / cf.kappa_a; // S-(0) of the chi = 0 laser
    return -10.0 * std::log10(ns.s_minus[0] / reference);
}

} // namespace srlaser
