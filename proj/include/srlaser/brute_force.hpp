#ifndef SRLASER_BRUTE_FORCE_HPP
#define SRLASER_BRUTE_FORCE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "srlaser/dicke.hpp"
#include "srlaser/model.hpp"

namespace srlaser {

/// Steady state of the master equation on the full tensor-product space,
/// built from individual-spin Lindblad terms. Validation oracle for the
/// Dicke-basis solver; limited to N <= 3.
struct BruteForceSolution {
    int n_spins = 0;
    int n_cut = 0;
    Eigen::MatrixXcd rho; ///< dim = 2^N (n_cut + 1)
    double null_residual = 0.0;

    /// Same contraction interface as the Dicke solver.
    std::complex<double> observable(const std::vector<ObservableTerm>& terms) const;
    std::vector<double> photon_pmf() const;
    std::vector<double> spin_pmf() const; ///< index (two_m + N)/2
    /// Frobenius norm of [rho, P_ij] for the swap of spins i and j.
    double swap_commutator_norm(int spin_i, int spin_j) const;
};

/// Throws DimensionTooLarge for N > 3.
BruteForceSolution brute_force_steady_state(const ModelParams& params, int n_cut);

/// Sparse operators on the full space; exposed for oracle-projection tests.
namespace full_space {
SparseC annihilator(int n_spins, int n_cut);
SparseC spin_op(int n_spins, int n_cut, int spin, char which); ///< '+', '-', 'z'
SparseC collective(int n_spins, int n_cut, char which);
SparseC hamiltonian(const ModelParams& params, int n_cut);
/// The full Liouvillian as a superoperator on column-major vec(rho).
SparseC liouvillian_superop(const ModelParams& params, int n_cut);
} // namespace full_space

} // namespace srlaser

#endif
