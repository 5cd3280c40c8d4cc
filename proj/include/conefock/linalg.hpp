#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace conefock {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Every epsilon used anywhere in the toolkit lives here, so runs can tune and
// report them uniformly.
struct Tolerances {
    double rank_threshold = 1e-8;   // singular values below this (relative) count as zero
    double orthonormality = 1e-10;  // allowed deviation of basis^* basis from identity
    double intersect_gap = 1e-8;    // sv of P_U P_W above 1 - gap count as intersection
    double containment = 1e-8;      // max residual allowed for subspace containment
    double isometry = 1e-10;        // allowed deviation of V^* V from identity
    double tol_zero = 1e-8;         // witness: "commutes" threshold
    double tol_pos = 1.0;           // witness: minimum CAR commutator norm
};

class CrossCheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A subspace of C^ambient_dim given by an orthonormal column basis.
// Rank 0 is a legitimate value (basis with zero columns).
struct Subspace {
    Eigen::Index ambient_dim = 0;
    CMatrix basis;  // ambient_dim x rank

    Eigen::Index rank() const { return basis.cols(); }
    CMatrix projector() const { return basis * basis.adjoint(); }

    bool contains(const CVector& v, double tol) const {
        if (v.size() != ambient_dim) return false;
        return (v - basis * (basis.adjoint() * v)).norm() <= tol * std::max(1.0, v.norm());
    }

    static Subspace zero(Eigen::Index ambient) {
        return Subspace{ambient, CMatrix::Zero(ambient, 0)};
    }
    static Subspace full(Eigen::Index ambient) {
        return Subspace{ambient, CMatrix::Identity(ambient, ambient)};
    }
};

Subspace orthonormalize(const CMatrix& columns, const Tolerances& tol = {});
Subspace orthonormalize(const std::vector<CVector>& vectors, const Tolerances& tol = {});

// Orthogonal complement of the column range of m, i.e. Ker(m^*).
Subspace kernel_of_adjoint(const CMatrix& m, const Tolerances& tol = {});

Subspace subspace_intersect(const Subspace& u, const Subspace& w, const Tolerances& tol = {});

// Orthogonal complement of u inside ambient; u must be contained in ambient.
Subspace complement_within(const Subspace& u, const Subspace& ambient, const Tolerances& tol = {});

// Largest singular value.
double op_norm(const CMatrix& m);

double orthonormality_defect(const Subspace& s);

}  // namespace conefock
