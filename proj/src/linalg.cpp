#include "conefock/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <sstream>

namespace conefock {

namespace {

Eigen::Index rank_from_singular_values(const Eigen::VectorXd& sv, double threshold) {
    if (sv.size() == 0) return 0;
    const double cut = threshold * std::max(1.0, sv(0));
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return r;
}

}  // namespace

Subspace orthonormalize(const CMatrix& columns, const Tolerances& tol) {
    if (columns.cols() == 0) return Subspace::zero(columns.rows());
    Eigen::BDCSVD<CMatrix> svd(columns, Eigen::ComputeThinU);
    const Eigen::Index r = rank_from_singular_values(svd.singularValues(), tol.rank_threshold);
    return Subspace{columns.rows(), svd.matrixU().leftCols(r)};
}

Subspace orthonormalize(const std::vector<CVector>& vectors, const Tolerances& tol) {
    if (vectors.empty())
        throw std::invalid_argument("orthonormalize: empty vector list has no ambient dimension");
    const Eigen::Index dim = vectors.front().size();
    CMatrix m(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != dim)
            throw std::invalid_argument("orthonormalize: dimension mismatch among input vectors");
        m.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return orthonormalize(m, tol);
}

Subspace kernel_of_adjoint(const CMatrix& m, const Tolerances& tol) {
    const Eigen::Index rows = m.rows();
    if (m.cols() == 0) return Subspace::full(rows);
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullU);
    const Eigen::Index r = rank_from_singular_values(svd.singularValues(), tol.rank_threshold);
    return Subspace{rows, svd.matrixU().rightCols(rows - r)};
}

Subspace subspace_intersect(const Subspace& u, const Subspace& w, const Tolerances& tol) {
    if (u.ambient_dim != w.ambient_dim)
        throw std::invalid_argument("subspace_intersect: ambient dimension mismatch");
    if (u.rank() == 0 || w.rank() == 0) return Subspace::zero(u.ambient_dim);
    // Singular values of basis_u^* basis_w equal the cosines of the principal
    // angles; directions with cosine ~ 1 lie in both subspaces.
    const CMatrix overlap = u.basis.adjoint() * w.basis;
    Eigen::BDCSVD<CMatrix> svd(overlap, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > 1.0 - tol.intersect_gap) ++r;
    return Subspace{u.ambient_dim, u.basis * svd.matrixU().leftCols(r)};
}

Subspace complement_within(const Subspace& u, const Subspace& ambient, const Tolerances& tol) {
    if (u.ambient_dim != ambient.ambient_dim)
        throw std::invalid_argument("complement_within: ambient dimension mismatch");
    double max_residual = 0.0;
    if (u.rank() > 0) {
        const CMatrix res = u.basis - ambient.projector() * u.basis;
        max_residual = res.colwise().norm().maxCoeff();
    }
    if (max_residual > tol.containment) {
        std::ostringstream msg;
        msg << "complement_within: subspace not contained in ambient, max residual "
            << max_residual;
        throw std::invalid_argument(msg.str());
    }
    if (u.rank() == 0) return ambient;
    const CMatrix diff = ambient.projector() - u.projector();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(diff);
    std::vector<CVector> cols;
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
        if (es.eigenvalues()(i) > 0.5) cols.push_back(es.eigenvectors().col(i));
    if (cols.empty()) return Subspace::zero(u.ambient_dim);
    CMatrix basis(u.ambient_dim, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = cols[i];
    return Subspace{u.ambient_dim, basis};
}

double op_norm(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double orthonormality_defect(const Subspace& s) {
    if (s.rank() == 0) return 0.0;
    const CMatrix g = s.basis.adjoint() * s.basis;
    return (g - CMatrix::Identity(s.rank(), s.rank())).cwiseAbs().maxCoeff();
}

}  // namespace conefock
