#ifndef SRLASER_DICKE_HPP
#define SRLASER_DICKE_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "srlaser/model.hpp"

namespace srlaser {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

/// One density-matrix coefficient rho^{n,n'}_{J,M,M'}. Half-integer quantum
/// numbers are stored doubled (2J, 2M, 2M').
struct DickeIndex {
    int two_j = 0;
    int two_m = 0;
    int two_m_prime = 0;
    int n = 0;
    int n_prime = 0;

    /// Doubled charge 2(M + n); conserved combination under the U(1) symmetry.
    int two_q() const { return two_m + 2 * n; }
    bool diagonal() const { return two_m == two_m_prime && n == n_prime; }

    friend bool operator==(const DickeIndex&, const DickeIndex&) = default;
};

struct ChargeSector {
    int two_q = 0;
    int begin = 0; ///< first index of the sector in the sorted basis
    int end = 0;   ///< one past the last
};

/// All coefficients allowed by the U(1) selection rule M + n = M' + n',
/// sorted by (charge, 2J, 2M, n).
struct DickeBasis {
    int n_spins = 0;
    int n_cut = 0;
    std::vector<DickeIndex> indices;
    std::vector<ChargeSector> sectors;

    int size() const { return static_cast<int>(indices.size()); }
    /// Position in the sorted basis, or -1 when absent.
    int find(const DickeIndex& idx) const;
    /// Index of the hermitian partner (J, M', M, n', n).
    int conjugate_of(int i) const;
};

struct LiouvillianMatrix {
    SparseC matrix;
    DickeBasis basis;
};

enum class NullSpaceMethod { TraceReplace, ShiftInvert };

struct SteadyStateOptions {
    NullSpaceMethod method = NullSpaceMethod::TraceReplace;
    /// Solve a second gauge-fixed system and compare; detects a (near-)
    /// degenerate null space. -1 = auto (on for dimensions up to 20000).
    int check_degeneracy = -1;
    double degeneracy_tol = 1e-6;
    double residual_tol = 1e-9;
};

struct SteadyStateSolution {
    DickeBasis basis;
    Eigen::VectorXcd coefficients;
    double trace_residual = 0.0;
    double null_residual = 0.0;
};

/// One contraction term <(J+)^p (Jz)^r (J-)^q (adag)^k a^k'> with a weight.
struct ObservableTerm {
    int p = 0, r = 0, q = 0, k = 0, k_prime = 0;
    std::complex<double> weight{1.0, 0.0};
};

struct Distributions {
    std::vector<double> photon_pmf; ///< index n = 0..n_cut
    std::vector<double> spin_pmf;   ///< index (two_m + N)/2, two_m = -N..N
    /// joint (J, M) distribution; rows ordered by increasing two_j
    std::vector<int> joint_two_j;
    std::vector<int> joint_two_m;
    std::vector<double> joint_jm;
};

struct CutoffPolicy {
    double tail_tol = 1e-8;
    int tail_offset = 5;
    int start = 8;
    int max_cutoff = 256;
    double obs_rel_tol = 1e-6;
};

struct ConvergedSolution {
    int n_cut = 0;
    SteadyStateSolution solution;
};

/// Multiplicity D_J of the Dicke manifold, exact integer arithmetic.
/// Throws DomainError on parity or range violations.
std::uint64_t multiplicity(int n_spins, int two_j);

DickeBasis enumerate_basis(int n_spins, int n_cut);

/// Sparse generator of the master equation restricted to the selection-rule
/// basis (rotating frame omega_c = 0, omega_z = delta).
LiouvillianMatrix assemble_liouvillian(const ModelParams& params, const DickeBasis& basis);

/// Unique steady state via trace-row replacement and a sparse direct solve.
/// Throws DegenerateNullSpace when a second near-null direction is detected.
SteadyStateSolution steady_state(const LiouvillianMatrix& liouvillian,
                                 const SteadyStateOptions& options = {});

/// Contraction of the coefficient vector against operator strings.
/// Terms violating p + k = q + k' contribute exactly 0.
std::complex<double> observables(const SteadyStateSolution& solution,
                                 const std::vector<ObservableTerm>& terms);

Distributions distributions(const SteadyStateSolution& solution);

/// Smallest cutoff on a geometric ladder whose photon tail and observable
/// drift pass the policy. Throws CutoffExceeded.
ConvergedSolution converge_cutoff(const ModelParams& params, const CutoffPolicy& policy = {},
                                  const SteadyStateOptions& options = {});

/// JSON serialization of a steady state (indices as integer arrays, complex
/// values as [re, im] pairs).
std::string to_json(const SteadyStateSolution& solution);
std::string to_json(const Distributions& dist);

} // namespace srlaser

#endif
