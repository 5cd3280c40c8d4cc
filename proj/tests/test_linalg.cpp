#include <doctest.h>

#include "conefock/linalg.hpp"
#include "conefock/rng.hpp"

using namespace conefock;

namespace {

// Independent rank oracle: pivoted LU instead of the SVD path under test.
Eigen::Index lu_rank(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::FullPivLU<CMatrix> lu(m);
    lu.setThreshold(1e-10);
    return lu.rank();
}

CMatrix random_matrix(DeterministicRng& rng, Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) m.col(j) = rng.complex_vector(rows);
    return m;
}

}  // namespace

TEST_CASE("orthonormalize matches the LU rank oracle and spans the input") {
    DeterministicRng rng(11);
    for (Eigen::Index r = 0; r <= 4; ++r) {
        const CMatrix cols = random_matrix(rng, 6, r) * random_matrix(rng, r, 5);
        const Subspace s = orthonormalize(cols);
        CHECK(s.rank() == lu_rank(cols));
        CHECK(orthonormality_defect(s) < 1e-12);
        const CMatrix p = s.projector();
        CHECK((p * cols - cols).norm() < 1e-10 * std::max(1.0, cols.norm()));
        CHECK((p * p - p).norm() < 1e-12);
        CHECK((p - p.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("orthonormalize of an empty or zero set has rank zero") {
    CHECK(orthonormalize(CMatrix::Zero(4, 3)).rank() == 0);
    // An empty vector list carries no ambient dimension and is rejected.
    CHECK_THROWS_AS((void)orthonormalize(std::vector<CVector>{}), std::invalid_argument);
}

TEST_CASE("kernel_of_adjoint is the orthogonal complement of the column range") {
    DeterministicRng rng(12);
    const CMatrix m = random_matrix(rng, 7, 3) * random_matrix(rng, 3, 4);
    const Subspace k = kernel_of_adjoint(m);
    CHECK(k.rank() == 7 - lu_rank(m));
    CHECK((m.adjoint() * k.basis).norm() < 1e-10);
    CHECK(orthonormality_defect(k) < 1e-12);
}

TEST_CASE("subspace_intersect on coordinate planes") {
    Subspace u{4, CMatrix::Identity(4, 4).leftCols(2)};   // span{e0, e1}
    CMatrix wb(4, 2);
    wb.setZero();
    wb(1, 0) = 1.0;
    wb(2, 1) = 1.0;
    Subspace w{4, wb};  // span{e1, e2}
    const Subspace i = subspace_intersect(u, w);
    REQUIRE(i.rank() == 1);
    CVector e1 = CVector::Zero(4);
    e1(1) = 1.0;
    CHECK(i.contains(e1, 1e-10));
}

TEST_CASE("subspace_intersect finds a planted shared vector") {
    DeterministicRng rng(13);
    CVector shared = rng.complex_vector(6).normalized();
    std::vector<CVector> ub{shared, rng.complex_vector(6), rng.complex_vector(6)};
    std::vector<CVector> wb{shared, rng.complex_vector(6), rng.complex_vector(6)};
    const Subspace i = subspace_intersect(orthonormalize(ub), orthonormalize(wb));
    REQUIRE(i.rank() == 1);
    CHECK(i.contains(shared, 1e-8));
}

TEST_CASE("complement_within splits a containing subspace") {
    Subspace inner{3, CMatrix::Identity(3, 3).leftCols(1)};
    Subspace outer{3, CMatrix::Identity(3, 3).leftCols(2)};
    const Subspace c = complement_within(inner, outer);
    REQUIRE(c.rank() == 1);
    CVector e1 = CVector::Zero(3);
    e1(1) = 1.0;
    CHECK(c.contains(e1, 1e-10));
    CHECK((inner.basis.adjoint() * c.basis).norm() < 1e-12);
}

TEST_CASE("complement_within rejects non-contained subspaces") {
    CMatrix b(3, 1);
    b << Complex(0, 0), Complex(0, 0), Complex(1, 0);
    Subspace not_inside{3, b};
    Subspace outer{3, CMatrix::Identity(3, 3).leftCols(2)};
    CHECK_THROWS_AS((void)complement_within(not_inside, outer), std::invalid_argument);
}

TEST_CASE("op_norm equals the largest singular value") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = Complex(0, 2.5);
    d(1, 1) = 1.0;
    CHECK(op_norm(d) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(op_norm(CMatrix::Zero(2, 2)) == doctest::Approx(0.0));
}

TEST_CASE("Subspace::contains respects tolerance") {
    Subspace s{3, CMatrix::Identity(3, 3).leftCols(1)};
    CVector in = CVector::Zero(3), out = CVector::Zero(3);
    in(0) = Complex(2.0, -1.0);
    out(1) = 1.0;
    CHECK(s.contains(in, 1e-12));
    CHECK(!s.contains(out, 1e-6));
}
