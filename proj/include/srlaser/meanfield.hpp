#ifndef SRLASER_MEANFIELD_HPP
#define SRLASER_MEANFIELD_HPP

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "srlaser/model.hpp"

namespace srlaser {

using Complex = std::complex<double>;

/// Mean-field amplitudes in a frame rotating at omega_c + omega_L_offset.
struct MeanFieldState {
    Complex a{0.0, 0.0};       ///< cavity amplitude
    Complex j_minus{0.0, 0.0}; ///< magnon amplitude J^-
    double jz = 0.0;           ///< spin polarization J^z
};

using MeanFieldTangent = MeanFieldState;

enum class BranchKind { Normal, PlusBranch, MinusBranch };

struct StationarySolution {
    MeanFieldState state;
    double cooperativity = 0.0;     ///< effective C of this solution
    double laser_freq_offset = 0.0; ///< omega_L - omega_c = (kappa/Gamma) Delta_eps
    bool stable = false;
    std::array<Complex, 5> jacobian_eigenvalues{};
    BranchKind branch = BranchKind::Normal;
};

struct PhaseBoundaries {
    double eps1 = 0.0; ///< lower edge of the real-branch window
    double eps2 = 0.0; ///< upper edge (eps1 <= eps2)
    std::optional<double> eps3; ///< upper threshold crossing (C = 1)
    std::optional<double> eps4; ///< lower threshold crossing (eps4 <= eps3)
};

struct IntegrateControls {
    double rtol = 1e-9;
    double atol = 1e-12;
    double omega_L_offset = 0.0; ///< rotating-frame offset used by mf_rhs
    double initial_dt = 1e-3;
    double min_dt_fraction = 1e-14; ///< StepFailure below this fraction of the span
    int sample_stride = 1;          ///< record every k-th accepted step
};

struct Trajectory {
    std::vector<double> times;
    std::vector<MeanFieldState> states;
    double terminal_residual = 0.0; ///< |mf_rhs| at the final state
};

struct RelaxResult {
    MeanFieldState state;
    double time = 0.0;
    double residual = 0.0; ///< co-rotating residual at the end
    bool timed_out = false;
};

struct RampPoint {
    double pump_w = 0.0;
    MeanFieldState state;
    BranchKind branch = BranchKind::Normal;
    bool timed_out = false;
};

struct JacobianResult {
    std::array<std::array<Complex, 5>, 5> matrix{}; ///< rows/cols: a, a*, J^-, J^+, J^z
    std::array<Complex, 5> eigenvalues{};
    bool stable = false;
};

/// Time derivative of (a, J^-, J^z); Delta_eps is evaluated from the
/// instantaneous jz.
MeanFieldTangent mf_rhs(const ModelParams& params, const MeanFieldState& state,
                        double omega_L_offset);

/// Euclidean norm of the mf_rhs tangent.
double residual_norm(const ModelParams& params, const MeanFieldState& state,
                     double omega_L_offset);

/// Norm of mf_rhs minus its best U(1) rotation: vanishes at lasing fixed
/// points in any frame. The optimal rotation frequency is returned too.
std::pair<double, double> corotating_residual(const ModelParams& params,
                                              const MeanFieldState& state);

/// Adaptive RK45 (Dormand-Prince) integration of the mean-field equations.
/// Throws StepFailure when the controlled stepper underflows its minimum step.
Trajectory integrate(const ModelParams& params, const MeanFieldState& initial,
                     double t0, double t1, const IntegrateControls& controls = {});

/// Integrate until the co-rotating residual drops below
/// tol_scale * N * Gamma or t exceeds t_max (timeout flagged, default 1e4/Gamma).
RelaxResult relax_to_stationary(const ModelParams& params, const MeanFieldState& initial,
                                double tol_scale = 1e-8, double t_max = -1.0,
                                const IntegrateControls& controls = {});

/// The normal state plus one lasing solution per real branch with C > 1,
/// each with its closed-form amplitudes (a real positive) and stability.
std::vector<StationarySolution> solve_stationary(const ModelParams& params);

/// Jacobian of the mean-field flow at a stationary point, in the frame
/// rotating at the point's own laser frequency. Throws NotStationary when
/// the co-rotating residual exceeds 1e-6 * N * Gamma.
JacobianResult jacobian_stability(const ModelParams& params, const MeanFieldState& solution);

/// Analytic boundary curves evaluated at the pump rate in `params`.
PhaseBoundaries phase_boundaries(const ModelParams& params);

/// Phase classified from the boundary curves alone (plus the analytic branch
/// sum, linear in epsilon). Used to cross-check classify_phase.
Phase region_from_boundaries(const ModelParams& params);

/// Quasi-adiabatic pump ramp: at each w, relax from the previous endpoint
/// and record which stationary branch is occupied.
std::vector<RampPoint> hysteresis_ramp(const ModelParams& params, double w_start,
                                       double w_end, int n_steps,
                                       double tol_scale = 1e-8);

} // namespace srlaser

#endif
