#include "srlaser/brute_force.hpp"

#include <bit>
#include <cmath>

#include "srlaser/errors.hpp"
#include "sparse_steady.hpp"

namespace srlaser {

namespace {

using Cx = std::complex<double>;
using Trip = Eigen::Triplet<Cx>;

SparseC kron(const SparseC& a, const SparseC& b) {
    SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Trip> trips;
    trips.reserve(static_cast<size_t>(a.nonZeros()) * b.nonZeros());
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(),
                                       ia.col() * b.cols() + ib.col(),
                                       ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseC identity(int dim) {
    SparseC id(dim, dim);
    id.setIdentity();
    return id;
}

} // namespace

namespace full_space {

SparseC annihilator(int n_spins, int n_cut) {
    const int dc = n_cut + 1;
    SparseC a(dc, dc);
    std::vector<Trip> trips;
    for (int n = 1; n < dc; ++n) trips.emplace_back(n - 1, n, std::sqrt(double(n)));
    a.setFromTriplets(trips.begin(), trips.end());
    return kron(identity(1 << n_spins), a);
}

SparseC spin_op(int n_spins, int n_cut, int spin, char which) {
    const int ds = 1 << n_spins;
    SparseC op(ds, ds);
    std::vector<Trip> trips;
    const int bit = 1 << spin;
    for (int s = 0; s < ds; ++s) {
        const bool up = s & bit;
        switch (which) {
            case 'z': trips.emplace_back(s, s, up ? 0.5 : -0.5); break;
            case '+':
                if (!up) trips.emplace_back(s | bit, s, 1.0);
                break;
            case '-':
                if (up) trips.emplace_back(s & ~bit, s, 1.0);
                break;
            default: throw InvalidParams("spin_op: bad selector");
        }
    }
    op.setFromTriplets(trips.begin(), trips.end());
    return kron(op, identity(n_cut + 1));
}

SparseC collective(int n_spins, int n_cut, char which) {
    SparseC sum = spin_op(n_spins, n_cut, 0, which);
    for (int j = 1; j < n_spins; ++j) sum = sum + spin_op(n_spins, n_cut, j, which);
    return sum;
}

SparseC hamiltonian(const ModelParams& params, int n_cut) {
    const SparseC a = annihilator(params.n_spins, n_cut);
    const SparseC ad = SparseC(a.adjoint());
    const SparseC jm = collective(params.n_spins, n_cut, '-');
    const SparseC jp = collective(params.n_spins, n_cut, '+');
    const SparseC jz = collective(params.n_spins, n_cut, 'z');
    const Cx ig(0.0, params.g);
    SparseC h = ig * SparseC(ad * jm) - ig * SparseC(a * jp);
    h = h + params.delta * jz;
    h = h - (params.epsilon / params.n_spins) * SparseC(jz * jz);
    return h;
}

SparseC liouvillian_superop(const ModelParams& params, int n_cut) {
    params.validate();
    const int dim = (1 << params.n_spins) * (n_cut + 1);
    const SparseC id = identity(dim);

    const SparseC h = hamiltonian(params, n_cut);
    const Cx I(0.0, 1.0);
    SparseC L = -I * kron(id, h) + I * kron(SparseC(h.transpose()), id);

    auto dissipate = [&](double rate, const SparseC& op) {
        if (rate == 0.0) return;
        const SparseC od = SparseC(op.adjoint());
        const SparseC odo = SparseC(od * op);
        L = L - 0.5 * rate * kron(id, odo);
        L = L - 0.5 * rate * kron(SparseC(odo.transpose()), id);
        L = L + rate * kron(SparseC(op.conjugate()), op);
    };

    dissipate(params.kappa, annihilator(params.n_spins, n_cut));
    for (int j = 0; j < params.n_spins; ++j) {
        dissipate(params.gamma, spin_op(params.n_spins, n_cut, j, '-'));
        dissipate(params.pump_w, spin_op(params.n_spins, n_cut, j, '+'));
        dissipate(2.0 * params.gamma_phi, spin_op(params.n_spins, n_cut, j, 'z'));
    }
    L.makeCompressed();
    return L;
}

} // namespace full_space

BruteForceSolution brute_force_steady_state(const ModelParams& params, int n_cut) {
    if (params.n_spins > 3)
        throw DimensionTooLarge("brute force oracle is limited to N <= 3");
    const int dim = (1 << params.n_spins) * (n_cut + 1);

    const SparseC L = full_space::liouvillian_superop(params, n_cut);
    std::vector<int> diag;
    diag.reserve(dim);
    for (int i = 0; i < dim; ++i) diag.push_back(i * dim + i);

    auto r = detail::nullvec_trace_replace(L, diag, diag.front());
    if (r.singular) throw DegenerateNullSpace("gauge-fixed system is singular");

    BruteForceSolution out;
    out.n_spins = params.n_spins;
    out.n_cut = n_cut;
    out.rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int rr = 0; rr < dim; ++rr) out.rho(rr, c) = r.x(c * dim + rr);
    const Cx trace = out.rho.trace();
    out.rho /= trace;
    out.null_residual = r.null_residual;
    return out;
}

std::complex<double> BruteForceSolution::observable(
    const std::vector<ObservableTerm>& terms) const {
    const SparseC a = full_space::annihilator(n_spins, n_cut);
    const SparseC ad = SparseC(a.adjoint());
    const SparseC jm = full_space::collective(n_spins, n_cut, '-');
    const SparseC jp = full_space::collective(n_spins, n_cut, '+');
    const SparseC jz = full_space::collective(n_spins, n_cut, 'z');

    Cx total(0.0, 0.0);
    for (const ObservableTerm& t : terms) {
        SparseC op = identity(rho.rows());
        for (int s = 0; s < t.p; ++s) op = SparseC(op * jp);
        for (int s = 0; s < t.r; ++s) op = SparseC(op * jz);
        for (int s = 0; s < t.q; ++s) op = SparseC(op * jm);
        for (int s = 0; s < t.k; ++s) op = SparseC(op * ad);
        for (int s = 0; s < t.k_prime; ++s) op = SparseC(op * a);

        Cx tr(0.0, 0.0);
        for (int k = 0; k < op.outerSize(); ++k)
            for (SparseC::InnerIterator it(op, k); it; ++it)
                tr += rho(it.col(), it.row()) * it.value();
        total += t.weight * tr;
    }
    return total;
}

std::vector<double> BruteForceSolution::photon_pmf() const {
    const int dc = n_cut + 1;
    std::vector<double> pmf(dc, 0.0);
    for (int s = 0; s < (1 << n_spins); ++s)
        for (int n = 0; n < dc; ++n) pmf[n] += rho(s * dc + n, s * dc + n).real();
    return pmf;
}

std::vector<double> BruteForceSolution::spin_pmf() const {
    const int dc = n_cut + 1;
    std::vector<double> pmf(n_spins + 1, 0.0);
    for (int s = 0; s < (1 << n_spins); ++s) {
        const int two_m = 2 * std::popcount(static_cast<unsigned>(s)) - n_spins;
        for (int n = 0; n < dc; ++n)
            pmf[(two_m + n_spins) / 2] += rho(s * dc + n, s * dc + n).real();
    }
    return pmf;
}

double BruteForceSolution::swap_commutator_norm(int spin_i, int spin_j) const {
    const int dc = n_cut + 1;
    const int dim = (1 << n_spins) * dc;
    auto permute = [&](int idx) {
        const int s = idx / dc, n = idx % dc;
        const bool bi = s & (1 << spin_i), bj = s & (1 << spin_j);
        int sp = s & ~((1 << spin_i) | (1 << spin_j));
        if (bi) sp |= 1 << spin_j;
        if (bj) sp |= 1 << spin_i;
        return sp * dc + n;
    };
    double norm2 = 0.0;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            norm2 += std::norm(rho(permute(r), permute(c)) - rho(r, c));
    return std::sqrt(norm2);
}

} // namespace srlaser
