#include "srlaser/meanfield.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include <Eigen/Dense>

namespace srlaser {

namespace {

using State5 = std::array<double, 5>;

State5 pack(const MeanFieldState& s) {
    return {s.a.real(), s.a.imag(), s.j_minus.real(), s.j_minus.imag(), s.jz};
}

MeanFieldState unpack(const State5& x) {
    return {Complex(x[0], x[1]), Complex(x[2], x[3]), x[4]};
}

struct MfSystem {
    const ModelParams& p;
    double offset;
    void operator()(const State5& x, State5& dxdt, double /*t*/) const {
        const MeanFieldTangent d = mf_rhs(p, unpack(x), offset);
        dxdt = {d.a.real(), d.a.imag(), d.j_minus.real(), d.j_minus.imag(), d.jz};
    }
};

double tangent_norm(const MeanFieldTangent& d) {
    return std::sqrt(std::norm(d.a) + std::norm(d.j_minus) + d.jz * d.jz);
}

} // namespace

MeanFieldTangent mf_rhs(const ModelParams& params, const MeanFieldState& state,
                        double omega_L_offset) {
    const double ks = params.pump_w + params.gamma + params.gamma_phi;
    const double de = effective_detuning(params, state.jz);
    const Complex I(0.0, 1.0);

    MeanFieldTangent d;
    d.a = (I * omega_L_offset - 0.5 * params.kappa) * state.a + params.g * state.j_minus;
    d.j_minus = (-I * (de - omega_L_offset) - 0.5 * ks) * state.j_minus +
                2.0 * params.g * state.jz * state.a;
    d.jz = 0.5 * params.n_spins * (params.pump_w - params.gamma) -
           (params.pump_w + params.gamma) * state.jz -
           2.0 * params.g * std::real(state.a * std::conj(state.j_minus));
    return d;
}

double residual_norm(const ModelParams& params, const MeanFieldState& state,
                     double omega_L_offset) {
    return tangent_norm(mf_rhs(params, state, omega_L_offset));
}

std::pair<double, double> corotating_residual(const ModelParams& params,
                                              const MeanFieldState& state) {
    const MeanFieldTangent d = mf_rhs(params, state, 0.0);
    const double weight = std::norm(state.a) + std::norm(state.j_minus);
    double omega = 0.0;
    if (weight > 0.0) {
        omega = std::imag(std::conj(state.a) * d.a + std::conj(state.j_minus) * d.j_minus) /
                weight;
    }
    const Complex I(0.0, 1.0);
    const Complex ra = d.a - I * omega * state.a;
    const Complex rj = d.j_minus - I * omega * state.j_minus;
    return {std::sqrt(std::norm(ra) + std::norm(rj) + d.jz * d.jz), omega};
}

Trajectory integrate(const ModelParams& params, const MeanFieldState& initial,
                     double t0, double t1, const IntegrateControls& controls) {
    namespace ode = boost::numeric::odeint;
    using Stepper = ode::runge_kutta_dopri5<State5>;

    auto stepper = ode::make_controlled<Stepper>(controls.atol, controls.rtol);
    MfSystem sys{params, controls.omega_L_offset};

    State5 x = pack(initial);
    double t = t0;
    double dt = std::min(controls.initial_dt, t1 - t0);
    const double dt_min = controls.min_dt_fraction * (t1 - t0);
    const double jz_bound = 0.5 * params.n_spins * (1.0 + 1e-6) + 1e-9 * params.n_spins;

    Trajectory out;
    out.times.push_back(t);
    out.states.push_back(initial);

    long step = 0;
    while (t < t1) {
        dt = std::min(dt, t1 - t);
        ode::controlled_step_result res = stepper.try_step(sys, x, t, dt);
        if (res == ode::fail) {
            if (dt < dt_min) throw StepFailure("adaptive step underflow");
            continue;
        }
        if (std::abs(x[4]) > jz_bound)
            throw StepFailure("|jz| bound violated during integration");
        if (++step % controls.sample_stride == 0 || t >= t1) {
            out.times.push_back(t);
            out.states.push_back(unpack(x));
        }
        if (dt < dt_min) throw StepFailure("adaptive step underflow");
    }
    if (out.times.back() != t) {
        out.times.push_back(t);
        out.states.push_back(unpack(x));
    }
    out.terminal_residual = residual_norm(params, out.states.back(), controls.omega_L_offset);
    return out;
}

RelaxResult relax_to_stationary(const ModelParams& params, const MeanFieldState& initial,
                                double tol_scale, double t_max,
                                const IntegrateControls& controls) {
    namespace ode = boost::numeric::odeint;
    using Stepper = ode::runge_kutta_dopri5<State5>;

    const DerivedRates r = derive_rates(params);
    if (t_max <= 0.0) t_max = 1e4 / r.gamma_total;
    const double tol = tol_scale * params.n_spins * r.gamma_total;

    auto stepper = ode::make_controlled<Stepper>(controls.atol, controls.rtol);
    MfSystem sys{params, controls.omega_L_offset};

    State5 x = pack(initial);
    double t = 0.0;
    double dt = controls.initial_dt;
    const double dt_min = controls.min_dt_fraction * t_max;

    RelaxResult out;
    int since_check = 0;
    while (t < t_max) {
        dt = std::min(dt, t_max - t);
        ode::controlled_step_result res = stepper.try_step(sys, x, t, dt);
        if (res == ode::fail) {
            if (dt < dt_min) throw StepFailure("adaptive step underflow");
            continue;
        }
        if (++since_check >= 16) {
            since_check = 0;
            auto [rn, omega] = corotating_residual(params, unpack(x));
            if (rn < tol) {
                out.state = unpack(x);
                out.time = t;
                out.residual = rn;
                return out;
            }
        }
    }
    out.state = unpack(x);
    out.time = t;
    out.residual = corotating_residual(params, out.state).first;
    out.timed_out = out.residual >= tol;
    return out;
}

namespace {

StationarySolution make_normal_solution(const ModelParams& params, const DerivedRates& r) {
    StationarySolution s;
    s.branch = BranchKind::Normal;
    s.state = MeanFieldState{Complex(0, 0), Complex(0, 0),
                             0.5 * params.n_spins * r.pump_factor};
    const double de = effective_detuning(params, s.state.jz);
    const double G2 = r.gamma_total * r.gamma_total;
    s.cooperativity = r.c0 * r.pump_factor * G2 / (G2 + 4.0 * de * de);
    s.laser_freq_offset = params.kappa * de / r.gamma_total;
    return s;
}

StationarySolution make_lasing_solution(const ModelParams& params, const DerivedRates& r,
                                        double c, BranchKind kind) {
    StationarySolution s;
    s.branch = kind;
    s.cooperativity = c;
    const double jz = 0.5 * params.n_spins * r.pump_factor / c;
    const double de = effective_detuning(params, jz);
    const double wg = params.pump_w + params.gamma;
    const double a_mag = std::sqrt(std::abs(jz) * wg * (c - 1.0) / params.kappa);
    // global phase fixed: a real positive; J^- follows from the a-equation
    const Complex a(a_mag, 0.0);
    const Complex jm = a * (0.5 * params.kappa / params.g) *
                       Complex(1.0, -2.0 * de / r.gamma_total);
    s.state = MeanFieldState{a, jm, jz};
    s.laser_freq_offset = params.kappa * de / r.gamma_total;
    return s;
}

} // namespace

JacobianResult jacobian_stability(const ModelParams& params, const MeanFieldState& sol) {
    const DerivedRates r = derive_rates(params);
    const double scale = params.n_spins * r.gamma_total;
    if (corotating_residual(params, sol).first > 1e-6 * scale)
        throw NotStationary("jacobian requested at a non-stationary point");

    const double de = effective_detuning(params, sol.jz);
    const double G = r.gamma_total;
    const Complex I(0.0, 1.0);
    const double g = params.g;
    const Complex a = sol.a;
    const Complex jm = sol.j_minus;
    const Complex jp = std::conj(jm);
    const double eps_n = 2.0 * params.epsilon / params.n_spins;

    JacobianResult out;
    auto& M = out.matrix;
    const Complex ka = -0.5 * params.kappa + I * params.kappa * de / G;
    const Complex ks = -0.5 * r.kappa_s - I * r.kappa_s * de / G;
    M[0] = {ka, 0.0, g, 0.0, 0.0};
    M[1] = {0.0, std::conj(ka), 0.0, g, 0.0};
    M[2] = {2.0 * g * sol.jz, 0.0, ks, 0.0, I * eps_n * jm + 2.0 * g * a};
    M[3] = {0.0, 2.0 * g * sol.jz, 0.0, std::conj(ks), -I * eps_n * jp + 2.0 * g * std::conj(a)};
    M[4] = {-g * jp, -g * jm, -g * std::conj(a), -g * a, -(params.pump_w + params.gamma)};

    Eigen::Matrix<Complex, 5, 5> em;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) em(i, j) = M[i][j];
    Eigen::ComplexEigenSolver<Eigen::Matrix<Complex, 5, 5>> es(em, false);
    for (int i = 0; i < 5; ++i) out.eigenvalues[i] = es.eigenvalues()(i);

    // the U(1) Goldstone mode of a lasing state sits in this band around zero
    const double band = 1e-9 * G;
    out.stable = std::all_of(out.eigenvalues.begin(), out.eigenvalues.end(),
                             [band](const Complex& ev) { return ev.real() <= band; });
    return out;
}

std::vector<StationarySolution> solve_stationary(const ModelParams& params) {
    const DerivedRates r = derive_rates(params);
    std::vector<StationarySolution> out;
    out.push_back(make_normal_solution(params, r));

    const CooperativityBranches b = try_cooperativity_branches(params);
    if (b.c_plus && *b.c_plus > 1.0 && r.pump_factor > 0.0)
        out.push_back(make_lasing_solution(params, r, *b.c_plus, BranchKind::PlusBranch));
    if (b.c_minus && *b.c_minus > 1.0 && r.pump_factor > 0.0)
        out.push_back(make_lasing_solution(params, r, *b.c_minus, BranchKind::MinusBranch));

    for (auto& s : out) {
        const JacobianResult jr = jacobian_stability(params, s.state);
        s.jacobian_eigenvalues = jr.eigenvalues;
        s.stable = jr.stable;
    }
    return out;
}

PhaseBoundaries phase_boundaries(const ModelParams& params) {
    const DerivedRates r = derive_rates(params);
    const double G = r.gamma_total;
    const double root = std::sqrt(G * G + 4.0 * params.delta * params.delta);

    PhaseBoundaries pb;
    pb.eps1 = 0.25 * r.c0 * (2.0 * params.delta - root);
    pb.eps2 = 0.25 * r.c0 * (2.0 * params.delta + root);

    const double arg = r.c0 * r.pump_factor - 1.0;
    if (arg >= 0.0 && params.pump_w != params.gamma) {
        const double wg = params.pump_w + params.gamma;
        const double pre = G * wg / (2.0 * (params.pump_w - params.gamma));
        const double s = std::sqrt(arg);
        pb.eps3 = pre * (2.0 * params.delta / G + s);
        pb.eps4 = pre * (2.0 * params.delta / G - s);
        if (*pb.eps4 > *pb.eps3) std::swap(pb.eps3, pb.eps4);
    }
    return pb;
}

Phase region_from_boundaries(const ModelParams& params) {
    const DerivedRates r = derive_rates(params);
    const PhaseBoundaries pb = phase_boundaries(params);
    const double eps = params.epsilon;

    if (eps < pb.eps1 || eps > pb.eps2) return Phase::Normal; // complex branches
    if (pb.eps3 && eps > *pb.eps4 && eps < *pb.eps3) return Phase::SuperradiantLasing;
    // outside the lasing window both branches sit on the same side of 1;
    // they are both above iff their (linear-in-eps) sum exceeds 2
    const double G2 = r.gamma_total * r.gamma_total;
    const double sum = r.pump_factor * (r.c0 * G2 + 8.0 * eps * params.delta) /
                       (G2 + 4.0 * params.delta * params.delta);
    return sum > 2.0 ? Phase::Bistable : Phase::Normal;
}

std::vector<RampPoint> hysteresis_ramp(const ModelParams& params, double w_start,
                                       double w_end, int n_steps, double tol_scale) {
    if (n_steps < 2) throw InvalidParams("hysteresis_ramp needs n_steps >= 2");
    std::vector<RampPoint> out;
    out.reserve(n_steps);

    ModelParams p = params;
    p.pump_w = w_start;
    const double seed = 1e-6 * std::sqrt(static_cast<double>(params.n_spins));
    {
        const DerivedRates r0 = derive_rates(p);
        MeanFieldState s{Complex(seed, 0.0), Complex(0, 0),
                         0.5 * params.n_spins * r0.pump_factor};
        out.push_back(RampPoint{w_start, s, BranchKind::Normal, false});
    }

    MeanFieldState current = out.front().state;
    for (int i = 0; i < n_steps; ++i) {
        const double w = w_start + (w_end - w_start) * i / (n_steps - 1.0);
        p.pump_w = w;
        // reseed the cavity so an unstable normal state can actually decay
        if (std::abs(current.a) < seed) current.a += Complex(seed, 0.0);
        RelaxResult rr = relax_to_stationary(p, current, tol_scale);
        current = rr.state;

        RampPoint pt;
        pt.pump_w = w;
        pt.state = current;
        pt.timed_out = rr.timed_out;
        pt.branch = BranchKind::Normal;
        double best = std::numeric_limits<double>::max();
        for (const auto& s : solve_stationary(p)) {
            const double d = std::abs(std::abs(s.state.a) - std::abs(current.a)) +
                             std::abs(s.state.jz - current.jz);
            if (d < best) {
                best = d;
                pt.branch = s.branch;
            }
        }
        out.push_back(pt);
    }
    out.erase(out.begin()); // drop the synthetic seed point
    return out;
}

} // namespace srlaser
