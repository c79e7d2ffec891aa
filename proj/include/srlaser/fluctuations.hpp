#ifndef SRLASER_FLUCTUATIONS_HPP
#define SRLASER_FLUCTUATIONS_HPP

#include <vector>

#include <Eigen/Dense>

#include "srlaser/meanfield.hpp"
#include "srlaser/model.hpp"

namespace srlaser {

/// Everything the linearized photon theory needs, taken from the lasing
/// mean-field solution on the upper branch.
struct FluctuationCoeffs {
    double kappa_a = 0.0; ///< amplitude drift kappa (1 - 1/C)
    double d_a = 0.0;     ///< amplitude diffusion
    double d_phi = 0.0;   ///< phase diffusion
    double chi = 0.0;     ///< normalized mean-field interaction 2 Jz eps / (N Gamma)
    double phi_lock = 0.0; ///< stationary cavity-magnon phase difference
    double a_mag = 0.0;   ///< |a| of the lasing state
};

struct BelowThresholdStats {
    double n_photons = 0.0;
    double delta_jz = 0.0;
    Complex g1_decay{0.0, 0.0}; ///< complex decay rate of g1(tau)
    double g2_decay = 0.0;      ///< decay rate of g2(tau) - 1
};

struct QGridSpec {
    double x_center = 0.0;
    double p_center = 0.0;
    double half_extent = 5.0; ///< quadrature units either side of the center
    int resolution = 161;     ///< points per axis
};

struct QGrid {
    std::vector<double> values; ///< row-major, values[ix + nx*ip]
    int nx = 0, np = 0;
    double x_min = 0.0, x_max = 0.0, p_min = 0.0, p_max = 0.0;
    double time = 0.0;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dp() const { return (p_max - p_min) / (np - 1); }
    /// Riemann sum of Q d^2q (= dx dp / 2); about 1 when converged.
    double total_mass() const;
};

struct QMoments {
    double mean_x = 0.0, mean_p = 0.0;
    double var_x = 0.0, var_p = 0.0, cov_xp = 0.0;
    double angular_variance = 0.0; ///< variance of atan2(p, x) about its mean
};

struct NoiseSpectra {
    std::vector<double> omega_grid;
    std::vector<double> s_plus;
    std::vector<double> s_minus;
    double theta = 0.0; ///< twist angle of the squeezed axis, atan(chi)
};

enum class DaMode { Full, Zero };

struct GreenTruncation {
    double tol = 1e-12;
    int n_cap = 20000;
};

/// Green's function of the linearized amplitude-phase Fokker-Planck flow.
/// Precomputes the closed-form ingredients at a fixed time.
class GreenFunction {
  public:
    GreenFunction(const FluctuationCoeffs& coeffs, double z0, double phi0, double t,
                  const GreenTruncation& trunc = {});

    /// Density at (z, phi); real and nonnegative after +-n pairing.
    double operator()(double z, double phi) const;
    /// Largest |imaginary residue| seen across evaluations of this instance.
    double imag_residue() const { return imag_residue_; }

    int n_max() const { return n_max_; }
    double sigma2() const { return sigma2_; }
    double d_phi_eff() const { return d_phi_eff_; }
    /// phi-marginal wrapped-Gaussian variance parameter
    double phase_variance() const;

  private:
    double z0_, phi0_, t_;
    double sigma2_;    // amplitude variance parameter
    double d_phi_eff_; // effective phase diffusion (twist-enhanced)
    double z_bar_;     // real part of the shifted centre
    double beta_;      // imaginary shift per n
    double c2_;        // real n^2 coefficient of c_n
    double c1_im_;     // imaginary n coefficient of c_n
    int n_max_;
    mutable double imag_residue_ = 0.0;
};

/// Photon statistics of the normal state below threshold.
/// Throws AboveThreshold when the normal-state cooperativity reaches 1.
BelowThresholdStats below_threshold_stats(const ModelParams& params);

/// Coefficients of the linearized photon theory at the stable lasing branch.
/// Throws BelowThreshold when there is no lasing solution.
FluctuationCoeffs fluct_coeffs(const ModelParams& params);

/// Q-representation of the evolved transient coherent state on an (x, p) grid.
/// Throws NegativeQ if clipped negatives exceed 1e-9, TruncationFailure if the
/// series cannot meet its tail bound.
QGrid q_representation(const FluctuationCoeffs& coeffs, double z0, double phi0, double t,
                       const QGridSpec& grid = {}, const GreenTruncation& trunc = {});

/// Grid-quadrature moments of a Q distribution.
QMoments q_moments(const QGrid& grid);

/// Symmetrized quadrature noise-spectrum matrix at one frequency.
Eigen::Matrix2d noise_spectrum_matrix(const FluctuationCoeffs& coeffs, double omega,
                                      DaMode mode = DaMode::Full);

/// Principal spectra S+- over a frequency grid by eigen-decomposition, plus
/// the squeezed-axis angle from the omega = 0 eigenvector.
NoiseSpectra principal_spectra(const FluctuationCoeffs& coeffs,
                               const std::vector<double>& omega_grid,
                               DaMode mode = DaMode::Full);

/// Simplified closed form of S+- valid for d_a << kappa_a; returned sorted
/// so that first >= second.
std::pair<double, double> principal_spectra_closed_form(const FluctuationCoeffs& coeffs,
                                                        double omega);

/// Decibel squeeze parameter at zero frequency: (20/ln 10) asinh(|chi|).
double squeeze_db(const FluctuationCoeffs& coeffs);

/// Same quantity from the eigen-decomposition route (D_a = 0 evaluation).
double squeeze_db_from_spectra(const FluctuationCoeffs& coeffs);

} // namespace srlaser

#endif
