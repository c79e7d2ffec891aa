#ifndef SRLASER_SPARSE_STEADY_HPP
#define SRLASER_SPARSE_STEADY_HPP

#include <complex>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace srlaser::detail {

using SpMat = Eigen::SparseMatrix<std::complex<double>>;

struct NullVecResult {
    Eigen::VectorXcd x;
    double null_residual = 0.0;
    bool singular = false;
};

// Null vector of a singular generator L: one row is replaced by the trace
// functional (ones over `diag_cols`) and the resulting nonsingular system is
// solved for the trace-one solution.
inline NullVecResult nullvec_trace_replace(const SpMat& L, const std::vector<int>& diag_cols,
                                           int replace_row) {
    const auto dim = L.rows();
    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    trips.reserve(L.nonZeros() + diag_cols.size());
    for (int k = 0; k < L.outerSize(); ++k)
        for (SpMat::InnerIterator it(L, k); it; ++it)
            if (it.row() != replace_row) trips.emplace_back(it.row(), it.col(), it.value());
    for (int c : diag_cols) trips.emplace_back(replace_row, c, 1.0);

    SpMat A(dim, dim);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    NullVecResult out;
    if (lu.info() != Eigen::Success) {
        out.singular = true;
        return out;
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    rhs(replace_row) = 1.0;
    out.x = lu.solve(rhs);
    out.null_residual = (L * out.x).norm() / out.x.norm();
    return out;
}

// Shift-invert power iteration toward the zero eigenvalue; fallback when the
// replaced system misbehaves.
inline NullVecResult nullvec_shift_invert(const SpMat& L, double shift_scale,
                                          double tol, int max_iter = 50) {
    const auto dim = L.rows();
    SpMat A = L;
    const std::complex<double> sigma(shift_scale, 0.0);
    A -= sigma * SpMat(Eigen::VectorXcd::Ones(dim).asDiagonal());
    A.makeCompressed();

    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    NullVecResult out;
    if (lu.info() != Eigen::Success) {
        out.singular = true;
        return out;
    }
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(dim).normalized();
    for (int it = 0; it < max_iter; ++it) {
        x = lu.solve(x);
        x.normalize();
        out.null_residual = (L * x).norm();
        if (out.null_residual < tol) break;
    }
    out.x = x;
    return out;
}

} // namespace srlaser::detail

#endif
