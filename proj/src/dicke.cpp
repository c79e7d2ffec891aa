#include "srlaser/dicke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "srlaser/errors.hpp"
#include "sparse_steady.hpp"

namespace srlaser {

namespace {

using Cx = std::complex<double>;

std::uint64_t binomial_exact(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t b = 1;
    for (int i = 1; i <= k; ++i) b = b * static_cast<std::uint64_t>(n - k + i) / i;
    return b;
}

struct IndexKey {
    int two_q, two_j, two_m, n;
    friend auto operator<=>(const IndexKey&, const IndexKey&) = default;
};

IndexKey key_of(const DickeIndex& d) {
    return {d.two_q(), d.two_j, d.two_m, d.n};
}

} // namespace

std::uint64_t multiplicity(int n_spins, int two_j) {
    if (two_j < 0 || two_j > n_spins || (n_spins - two_j) % 2 != 0)
        throw DomainError("multiplicity: 2J out of range or wrong parity");
    // D_J = C(N, N/2 - J) - C(N, N/2 - J - 1), equivalently N!(2J+1)/((N/2+J+1)!(N/2-J)!)
    const int k = (n_spins - two_j) / 2;
    return binomial_exact(n_spins, k) - binomial_exact(n_spins, k - 1);
}

int DickeBasis::find(const DickeIndex& idx) const {
    const IndexKey k = key_of(idx);
    auto it = std::lower_bound(indices.begin(), indices.end(), k,
                               [](const DickeIndex& a, const IndexKey& b) { return key_of(a) < b; });
    if (it == indices.end() || key_of(*it) != k) return -1;
    return static_cast<int>(it - indices.begin());
}

int DickeBasis::conjugate_of(int i) const {
    const DickeIndex& d = indices[i];
    return find({d.two_j, d.two_m_prime, d.two_m, d.n_prime, d.n});
}

DickeBasis enumerate_basis(int n_spins, int n_cut) {
    if (n_spins < 1 || n_cut < 0) throw InvalidParams("enumerate_basis: bad arguments");
    DickeBasis b;
    b.n_spins = n_spins;
    b.n_cut = n_cut;
    const int parity = n_spins % 2;
    for (int tj = parity == 0 ? 0 : 1; tj <= n_spins; tj += 2) {
        for (int tm = -tj; tm <= tj; tm += 2) {
            for (int tmp = -tj; tmp <= tj; tmp += 2) {
                // selection rule fixes n' = n + (M - M')
                const int dm = (tm - tmp) / 2;
                for (int n = std::max(0, -dm); n <= std::min(n_cut, n_cut - dm); ++n)
                    b.indices.push_back({tj, tm, tmp, n, n + dm});
            }
        }
    }
    std::sort(b.indices.begin(), b.indices.end(),
              [](const DickeIndex& a, const DickeIndex& c) { return key_of(a) < key_of(c); });

    for (int i = 0; i < b.size(); ++i) {
        const int q = b.indices[i].two_q();
        if (b.sectors.empty() || b.sectors.back().two_q != q)
            b.sectors.push_back({q, i, i + 1});
        else
            b.sectors.back().end = i + 1;
    }
    return b;
}

LiouvillianMatrix assemble_liouvillian(const ModelParams& params, const DickeBasis& basis) {
    params.validate();
    if (basis.n_spins != params.n_spins)
        throw InvalidParams("basis/params spin number mismatch");

    const double N = params.n_spins;
    const double w = params.pump_w, ga = params.gamma, gphi = params.gamma_phi;
    const double g = params.g, kap = params.kappa;

    std::vector<Eigen::Triplet<Cx>> trips;
    trips.reserve(basis.indices.size() * 16);

    auto add = [&](int row, const DickeIndex& src, Cx value) {
        if (value == Cx(0.0, 0.0)) return;
        const int col = basis.find(src);
        if (col < 0) return; // photon-space truncation
        trips.emplace_back(row, col, value);
    };

    for (int i = 0; i < basis.size(); ++i) {
        const DickeIndex d = basis.indices[i];
        const double J = 0.5 * d.two_j;
        const double M = 0.5 * d.two_m;
        const double Mp = 0.5 * d.two_m_prime;
        const int n = d.n, np = d.n_prime;

        // -i H - cavity anticommutator (diagonal)
        const double h_real =
            params.delta * (M - Mp) - params.epsilon / N * (M * M - Mp * Mp);
        Cx diag(-0.5 * kap * (n + np), -h_real);

        // pump / decay / dephasing anticommutators (diagonal)
        double x = 0.5 * w * (N - M - Mp) + 0.5 * ga * (N + M + Mp);
        if (d.two_j > 0)
            x += 0.5 * gphi * (N - M * Mp * (N + 2.0) / (J * (J + 1.0)));
        else
            x += 0.5 * gphi * N;
        diag -= x;
        trips.emplace_back(i, i, diag);

        // cavity decay refill
        add(i, {d.two_j, d.two_m, d.two_m_prime, n + 1, np + 1},
            kap * std::sqrt(double(n + 1) * double(np + 1)));

        // coherent coupling, H_int = i g (adag J- - a J+)
        add(i, {d.two_j, d.two_m + 2, d.two_m_prime, n - 1, np},
            g * std::sqrt(double(n)) * std::sqrt((J + M + 1.0) * (J - M)));
        add(i, {d.two_j, d.two_m, d.two_m_prime + 2, n, np - 1},
            g * std::sqrt(double(np)) * std::sqrt((J + Mp + 1.0) * (J - Mp)));
        add(i, {d.two_j, d.two_m - 2, d.two_m_prime, n + 1, np},
            -g * std::sqrt(double(n + 1)) * std::sqrt((J - M + 1.0) * (J + M)));
        add(i, {d.two_j, d.two_m, d.two_m_prime - 2, n, np + 1},
            -g * std::sqrt(double(np + 1)) * std::sqrt((J - Mp + 1.0) * (J + Mp)));

        // dephasing, J-conserving part is in the diagonal; J +- 1 flows:
        {
            const double J1 = J + 1.0;
            const double f = (J1 + M) * (J1 - M) * (J1 + Mp) * (J1 - Mp);
            if (f > 0.0)
                add(i, {d.two_j + 2, d.two_m, d.two_m_prime, n, np},
                    0.5 * gphi * (N + 2.0 * J1 + 2.0) / (J1 * (2.0 * J1 + 1.0)) * std::sqrt(f));
        }
        if (d.two_j >= 2) {
            const double J1 = J - 1.0;
            const double f =
                (J1 + M + 1.0) * (J1 - M + 1.0) * (J1 + Mp + 1.0) * (J1 - Mp + 1.0);
            if (f > 0.0)
                add(i, {d.two_j - 2, d.two_m, d.two_m_prime, n, np},
                    0.5 * gphi * (N - 2.0 * J1) / ((J1 + 1.0) * (2.0 * J1 + 1.0)) * std::sqrt(f));
        }

        // spontaneous emission recycling (M+1, M'+1 sources)
        {
            const double M1 = M + 1.0, M1p = Mp + 1.0;
            if (d.two_j > 0) {
                const double f = (J + M1) * (J - M1 + 1.0) * (J + M1p) * (J - M1p + 1.0);
                if (f > 0.0)
                    add(i, {d.two_j, d.two_m + 2, d.two_m_prime + 2, n, np},
                        0.25 * ga * (N + 2.0) / (J * (J + 1.0)) * std::sqrt(f));
            }
            {
                const double J1 = J + 1.0;
                const double f = (J1 + M1) * (J1 + M1 - 1.0) * (J1 + M1p) * (J1 + M1p - 1.0);
                if (f > 0.0)
                    add(i, {d.two_j + 2, d.two_m + 2, d.two_m_prime + 2, n, np},
                        0.25 * ga * (N + 2.0 * J1 + 2.0) / (J1 * (2.0 * J1 + 1.0)) * std::sqrt(f));
            }
            if (d.two_j >= 2) {
                const double J1 = J - 1.0;
                const double f = (J1 - M1 + 1.0) * (J1 - M1 + 2.0) * (J1 - M1p + 1.0) *
                                 (J1 - M1p + 2.0);
                if (f > 0.0)
                    add(i, {d.two_j - 2, d.two_m + 2, d.two_m_prime + 2, n, np},
                        0.25 * ga * (N - 2.0 * J1) / ((J1 + 1.0) * (2.0 * J1 + 1.0)) * std::sqrt(f));
            }
        }

        // pump recycling (M-1, M'-1 sources)
        {
            const double M1 = M - 1.0, M1p = Mp - 1.0;
            if (d.two_j > 0) {
                const double f = (J - M1) * (J + M1 + 1.0) * (J - M1p) * (J + M1p + 1.0);
                if (f > 0.0)
                    add(i, {d.two_j, d.two_m - 2, d.two_m_prime - 2, n, np},
                        0.25 * w * (N + 2.0) / (J * (J + 1.0)) * std::sqrt(f));
            }
            {
                const double J1 = J + 1.0;
                const double f = (J1 - M1) * (J1 - M1 - 1.0) * (J1 - M1p) * (J1 - M1p - 1.0);
                if (f > 0.0)
                    add(i, {d.two_j + 2, d.two_m - 2, d.two_m_prime - 2, n, np},
                        0.25 * w * (N + 2.0 * J1 + 2.0) / (J1 * (2.0 * J1 + 1.0)) * std::sqrt(f));
            }
            if (d.two_j >= 2) {
                const double J1 = J - 1.0;
                const double f = (J1 + M1 + 1.0) * (J1 + M1 + 2.0) * (J1 + M1p + 1.0) *
                                 (J1 + M1p + 2.0);
                if (f > 0.0)
                    add(i, {d.two_j - 2, d.two_m - 2, d.two_m_prime - 2, n, np},
                        0.25 * w * (N - 2.0 * J1) / ((J1 + 1.0) * (2.0 * J1 + 1.0)) * std::sqrt(f));
            }
        }
    }

    LiouvillianMatrix out;
    out.basis = basis;
    out.matrix = SparseC(basis.size(), basis.size());
    out.matrix.setFromTriplets(trips.begin(), trips.end());
    out.matrix.makeCompressed();
    return out;
}

namespace {

std::vector<int> diagonal_positions(const DickeBasis& basis) {
    std::vector<int> out;
    for (int i = 0; i < basis.size(); ++i)
        if (basis.indices[i].diagonal()) out.push_back(i);
    return out;
}

void finalize_solution(SteadyStateSolution& sol, const SparseC& L) {
    const auto diag = diagonal_positions(sol.basis);
    Cx trace(0.0, 0.0);
    for (int i : diag) trace += sol.coefficients(i);
    if (std::abs(trace) < 1e-300) throw DegenerateNullSpace("null vector has zero trace");
    sol.coefficients /= trace;
    sol.null_residual = (L * sol.coefficients).norm() / sol.coefficients.norm();

    double tr = 0.0;
    for (int i : diag) {
        tr += sol.coefficients(i).real();
        if (sol.coefficients(i).real() < -1e-10)
            throw DegenerateNullSpace("negative diagonal population");
    }
    sol.trace_residual = std::abs(tr - 1.0);
}

} // namespace

SteadyStateSolution steady_state(const LiouvillianMatrix& liouvillian,
                                 const SteadyStateOptions& options) {
    const SparseC& L = liouvillian.matrix;
    const DickeBasis& basis = liouvillian.basis;
    const auto diag = diagonal_positions(basis);

    SteadyStateSolution sol;
    sol.basis = basis;

    if (options.method == NullSpaceMethod::TraceReplace) {
        auto r = detail::nullvec_trace_replace(L, diag, diag.front());
        if (r.singular) throw DegenerateNullSpace("gauge-fixed system is singular");
        sol.coefficients = r.x;
    } else {
        double scale = 0.0;
        for (int k = 0; k < L.outerSize(); ++k)
            for (SparseC::InnerIterator it(L, k); it; ++it)
                scale = std::max(scale, std::abs(it.value()));
        auto r = detail::nullvec_shift_invert(L, 1e-10 * scale, 1e-12 * scale);
        if (r.singular) throw DegenerateNullSpace("shift-invert factorization failed");
        sol.coefficients = r.x;
    }

    const bool check = options.check_degeneracy == 1 ||
                       (options.check_degeneracy < 0 && basis.size() <= 20000);
    if (check && options.method == NullSpaceMethod::TraceReplace) {
        auto r2 = detail::nullvec_trace_replace(L, diag, diag.back());
        if (r2.singular) throw DegenerateNullSpace("second gauge fixing is singular");
        Cx tr1(0.0, 0.0), tr2(0.0, 0.0);
        for (int i : diag) {
            tr1 += sol.coefficients(i);
            tr2 += r2.x(i);
        }
        if (std::abs(tr1) < 1e-300 || std::abs(tr2) < 1e-300)
            throw DegenerateNullSpace("null vector has zero trace");
        const Eigen::VectorXcd d = sol.coefficients / tr1 - r2.x / tr2;
        const double rel = d.norm() / (sol.coefficients / tr1).norm();
        if (rel > options.degeneracy_tol)
            throw DegenerateNullSpace("two gauge fixings disagree: near-degenerate null space");
    }

    finalize_solution(sol, L);
    if (sol.null_residual > options.residual_tol)
        throw DegenerateNullSpace("null residual above tolerance");

    // hermiticity pairing
    double herm = 0.0;
    for (int i = 0; i < basis.size(); ++i) {
        const int j = basis.conjugate_of(i);
        herm = std::max(herm,
                        std::abs(sol.coefficients(i) - std::conj(sol.coefficients(j))));
    }
    if (herm > 1e-10) throw DegenerateNullSpace("steady state is not hermitian");
    return sol;
}

std::complex<double> observables(const SteadyStateSolution& sol,
                                 const std::vector<ObservableTerm>& terms) {
    Cx total(0.0, 0.0);
    for (const ObservableTerm& t : terms) {
        if (t.p < 0 || t.r < 0 || t.q < 0 || t.k < 0 || t.k_prime < 0)
            throw InvalidParams("observable exponents must be nonnegative");
        if (t.p + t.k != t.q + t.k_prime) continue; // selection rule: exactly zero
        Cx acc(0.0, 0.0);
        for (int i = 0; i < sol.basis.size(); ++i) {
            const DickeIndex& d = sol.basis.indices[i];
            // photon deltas: n' - k = n - k'
            if (d.n_prime - t.k != d.n - t.k_prime) continue;
            // spin deltas: M' - p = M - q
            if (d.two_m_prime - 2 * t.p != d.two_m - 2 * t.q) continue;
            if (d.n < t.k_prime || d.n_prime < t.k) continue;

            const double J = 0.5 * d.two_j;
            const double M = 0.5 * d.two_m;
            const double Mp = 0.5 * d.two_m_prime;

            double amp = 1.0;
            for (int s = 0; s < t.k_prime; ++s) amp *= std::sqrt(double(d.n - s));
            for (int s = 0; s < t.k; ++s) amp *= std::sqrt(double(d.n_prime - s));
            bool ok = true;
            // J-^q acting on |J,M>
            for (int s = 0; s < t.q && ok; ++s) {
                const double f = (J + M - s) * (J - M + s + 1.0);
                if (f <= 0.0) ok = false;
                amp *= std::sqrt(std::max(f, 0.0));
            }
            // J+^p from |J, M-q> up to |J, M'>
            const double m0 = M - t.q;
            for (int s = 0; s < t.p && ok; ++s) {
                const double f = (J - m0 - s) * (J + m0 + s + 1.0);
                if (f <= 0.0) ok = false;
                amp *= std::sqrt(std::max(f, 0.0));
            }
            if (!ok) continue;

            double mzr = 1.0;
            for (int s = 0; s < t.r; ++s) mzr *= (M - t.q);
            acc += sol.coefficients(i) * amp * mzr;
        }
        total += t.weight * acc;
    }
    return total;
}

Distributions distributions(const SteadyStateSolution& sol) {
    const DickeBasis& b = sol.basis;
    Distributions out;
    out.photon_pmf.assign(b.n_cut + 1, 0.0);
    out.spin_pmf.assign(b.n_spins + 1, 0.0);

    const int parity = b.n_spins % 2;
    for (int tj = parity == 0 ? 0 : 1; tj <= b.n_spins; tj += 2)
        for (int tm = -tj; tm <= tj; tm += 2) {
            out.joint_two_j.push_back(tj);
            out.joint_two_m.push_back(tm);
        }
    out.joint_jm.assign(out.joint_two_j.size(), 0.0);

    auto joint_slot = [&](int tj, int tm) {
        // rows ordered by tj; within a row, tm ascending
        int off = 0;
        const int t0 = parity == 0 ? 0 : 1;
        for (int t = t0; t < tj; t += 2) off += t + 1;
        return off + (tm + tj) / 2;
    };

    for (int i = 0; i < b.size(); ++i) {
        const DickeIndex& d = b.indices[i];
        if (!d.diagonal()) continue;
        const double v = sol.coefficients(i).real();
        out.photon_pmf[d.n] += v;
        out.spin_pmf[(d.two_m + b.n_spins) / 2] += v;
        out.joint_jm[joint_slot(d.two_j, d.two_m)] += v;
    }
    return out;
}

ConvergedSolution converge_cutoff(const ModelParams& params, const CutoffPolicy& policy,
                                  const SteadyStateOptions& options) {
    bool have_prev = false;
    Cx prev_n, prev_jz;
    for (int n_cut = policy.start; n_cut <= policy.max_cutoff; n_cut *= 2) {
        const DickeBasis basis = enumerate_basis(params.n_spins, n_cut);
        const LiouvillianMatrix L = assemble_liouvillian(params, basis);
        SteadyStateSolution sol = steady_state(L, options);

        const Distributions dist = distributions(sol);
        double tail = 0.0;
        for (int n = std::max(0, n_cut - policy.tail_offset); n <= n_cut; ++n)
            tail += dist.photon_pmf[n];

        const Cx nbar = observables(sol, {{0, 0, 0, 1, 1}});
        const Cx jz = observables(sol, {{0, 1, 0, 0, 0}});
        if (tail < policy.tail_tol) {
            bool settled = true;
            if (have_prev) {
                const double dn = std::abs(nbar - prev_n) / std::max(1.0, std::abs(nbar));
                const double dj = std::abs(jz - prev_jz) / std::max(1.0, std::abs(jz));
                settled = dn < policy.obs_rel_tol && dj < policy.obs_rel_tol;
            }
            if (settled) return {n_cut, std::move(sol)};
        }
        prev_n = nbar;
        prev_jz = jz;
        have_prev = true;
    }
    throw CutoffExceeded("photon cutoff ladder exhausted");
}

std::string to_json(const SteadyStateSolution& sol) {
    nlohmann::json j;
    j["n_spins"] = sol.basis.n_spins;
    j["n_cut"] = sol.basis.n_cut;
    j["trace_residual"] = sol.trace_residual;
    j["null_residual"] = sol.null_residual;
    nlohmann::json idx = nlohmann::json::array();
    nlohmann::json coef = nlohmann::json::array();
    for (int i = 0; i < sol.basis.size(); ++i) {
        const DickeIndex& d = sol.basis.indices[i];
        idx.push_back({d.two_j, d.two_m, d.two_m_prime, d.n, d.n_prime});
        coef.push_back({sol.coefficients(i).real(), sol.coefficients(i).imag()});
    }
    j["indices"] = std::move(idx);
    j["coefficients"] = std::move(coef);
    return j.dump();
}

std::string to_json(const Distributions& dist) {
    nlohmann::json j;
    j["photon_pmf"] = dist.photon_pmf;
    j["spin_pmf"] = dist.spin_pmf;
    j["joint_two_j"] = dist.joint_two_j;
    j["joint_two_m"] = dist.joint_two_m;
    j["joint_jm"] = dist.joint_jm;
    return j.dump();
}

} // namespace srlaser
