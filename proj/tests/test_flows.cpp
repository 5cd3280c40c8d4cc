#include <doctest.h>

#include <cmath>

#include "conefock/flows.hpp"

using namespace conefock;

namespace {

Window box(std::vector<int> lo, std::vector<int> hi) {
    return Window{from_std(lo), from_std(hi)};
}

IsometricRep orthant_shift(int d) {
    std::vector<HalfSpace> hs;
    for (int i = 0; i < d; ++i) {
        IVec n = IVec::Zero(d);
        n(i) = 1;
        hs.push_back(HalfSpace{n, 0});
    }
    return IsometricRep::lattice_shift(
        LatticeModule::from_halfspaces(ConeSpec::orthant(d), std::move(hs)), 1);
}

Mode mode(std::vector<int> p, int ch = 0) { return Mode{std::move(p), ch}; }

AdditiveCocycle scaled(const AdditiveCocycle& c, double s) {
    AdditiveCocycle out;
    for (const auto& v : c.generator_values) out.generator_values.push_back(sv_scale(v, s));
    return out;
}

}  // namespace

TEST_CASE("FlowModel assembles window modes and densify counts drops") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {5}), 3);
    CHECK(model.modes().size() == 6);
    CHECK(model.fock().dim() == 84);  // C(6+3, 3)
    SparseVec f{{mode({2}), Complex(1, 0)}, {mode({9}), Complex(0, 1)}};
    long long dropped = 0;
    const CVector v = model.densify(f, &dropped);
    CHECK(dropped == 1);
    CHECK(v(model.mode_index(mode({2}))) == Complex(1, 0));
}

TEST_CASE("flow_apply rejects windows misaligned with the module") {
    // A = {p1 + p2 >= 2}: the window corner (0,3) is neither a kernel mode of
    // V_(1,0) nor a shifted image inside the window.
    const auto rep = IsometricRep::lattice_shift(
        LatticeModule::from_halfspaces(ConeSpec::orthant(2), {HalfSpace{from_std({1, 1}), 2}}),
        1);
    const auto model = FlowModel::make(rep, Flavor::ccr, box({0, 0}, {3, 3}), 1);
    const CMatrix t = CMatrix::Identity(model.fock().dim(), model.fock().dim());
    CHECK_THROWS_AS((void)flow_apply(model, from_std({1, 0}), t), std::invalid_argument);
}

TEST_CASE("CCR flow covariance on Weyl operators, observed below the cutoff edge") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {1}), 12);
    SparseVec u{{mode({0}), Complex(0.3, 0.2)}};
    const CMatrix w_u = weyl_operator(model.fock(), model.densify(u));
    const CMatrix moved = flow_apply(model, from_std({1}), w_u);
    const CMatrix w_vu =
        weyl_operator(model.fock(), model.densify(apply(model.rep(), from_std({1}), u)));
    // Observed away from the cutoff edge, where the truncated Weyl calculus
    // is reliable.
    CHECK(sector_compressed_norm(model.fock(), moved - w_vu, 4) < 1e-6);
}

TEST_CASE("CCR flow semigroup law on Weyl generators") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {2}), 12);
    SparseVec u{{mode({0}), Complex(0.25, -0.1)}};
    const std::vector<CMatrix> gens{weyl_operator(model.fock(), model.densify(u))};
    CHECK(flow_semigroup_check(model, from_std({1}), from_std({1}), gens, 4) < 1e-6);
}

TEST_CASE("flows act exactly on linear generators for both statistics") {
    const auto rep = orthant_shift(2);
    const IVec x = from_std({1, 0});
    for (const Flavor flavor : {Flavor::ccr, Flavor::car}) {
        const auto model = FlowModel::make(rep, flavor, box({0, 0}, {2, 2}), 2);
        SparseVec u{{mode({0, 0}), Complex(0.7, 0.1)}, {mode({1, 1}), Complex(-0.2, 0.5)}};
        const CVector uu = model.densify(u);
        const CVector vu = model.densify(apply(rep, x, u));
        CHECK(op_norm(flow_apply(model, x, annihilation(model.fock(), uu)) -
                      annihilation(model.fock(), vu)) < 1e-12);
        CHECK(op_norm(flow_apply(model, x, creation(model.fock(), uu)) -
                      creation(model.fock(), vu)) < 1e-12);
    }
}

TEST_CASE("CAR flow semigroup law is exact at full norm") {
    const auto model = FlowModel::make(orthant_shift(2), Flavor::car, box({0, 0}, {2, 2}), 3);
    SparseVec u{{mode({0, 0}), Complex(0.6, 0.3)}};
    const CVector uu = model.densify(u);
    const std::vector<CMatrix> gens{annihilation(model.fock(), uu),
                                    creation(model.fock(), uu)};
    CHECK(flow_semigroup_check(model, from_std({1, 0}), from_std({0, 1}), gens) < 1e-12);
}

TEST_CASE("product map for a one-parameter shift is unitary and maps exponential pairs") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {5}), 3);
    const auto pm = product_map(model, from_std({2}), from_std({3}));
    CHECK(pm.dropped_modes == 0);
    CHECK(pm.fiber_x.modes.size() == 2);
    CHECK(pm.fiber_y.modes.size() == 3);
    CHECK(pm.fiber_xy.modes.size() == 5);
    const Eigen::Index dj = pm.fiber_xy.fock.dim();
    CHECK(op_norm(pm.map * pm.map.adjoint() - CMatrix::Identity(dj, dj)) < 1e-12);
    CHECK(pm.dropped_pairs > 0);

    DeterministicRng rng(21);
    const CVector xi = 0.5 * rng.complex_vector(2), eta = 0.5 * rng.complex_vector(3);
    CVector joint = CVector::Zero(pm.fiber_x.fock.dim() * pm.fiber_y.fock.dim());
    const CVector ex = exponential_vector(pm.fiber_x.fock, xi);
    const CVector ey = exponential_vector(pm.fiber_y.fock, eta);
    for (Eigen::Index i1 = 0; i1 < ex.size(); ++i1)
        for (Eigen::Index i2 = 0; i2 < ey.size(); ++i2)
            joint(i1 * ey.size() + i2) = ex(i1) * ey(i2);
    // V_x shifts eta's support to {2,3,4}; the combined vector lives on K_5.
    CVector sum = CVector::Zero(5);
    sum.head(2) = xi;
    sum.tail(3) = eta;
    CHECK((pm.map * joint - exponential_vector(pm.fiber_xy.fock, sum)).norm() < 1e-12);
}

TEST_CASE("windowed lattice product map drops escaping modes but stays isometric onto E_xy") {
    const auto model = FlowModel::make(orthant_shift(2), Flavor::ccr, box({0, 0}, {2, 2}), 2);
    const auto pm = product_map(model, from_std({1, 0}), from_std({0, 1}));
    CHECK(pm.dropped_modes == 1);  // (2,0) + x = (3,0) leaves the window
    CHECK(pm.fiber_xy.modes.size() == 5);
    const Eigen::Index dj = pm.fiber_xy.fock.dim();
    CHECK(op_norm(pm.map * pm.map.adjoint() - CMatrix::Identity(dj, dj)) < 1e-12);
}

TEST_CASE("decomposable vectors of a one-parameter flow: the diagonal-pair picture") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {7}), 2);
    const auto d2 = decomposable_space(model, from_std({2}));
    CHECK(d2.sector_dims == std::vector<Eigen::Index>{1, 2, 2});
    CHECK(!d2.vacuous);

    // Brute-force oracle at x = M: a two-particle state splits at every
    // intermediate y only if both particles sit in the same mode.
    for (const int m : {2, 4}) {
        const auto d = decomposable_space(model, from_std({m}));
        CHECK(d.sector_dims == std::vector<Eigen::Index>{1, m, m});
        const ProductFiber fiber = make_fiber(model, from_std({m}));
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                std::vector<int> occ(static_cast<std::size_t>(m), 0);
                occ[static_cast<std::size_t>(i)] += 1;
                occ[static_cast<std::size_t>(j)] += 1;
                CVector state = CVector::Zero(fiber.fock.dim());
                state(fiber.fock.index_of(occ)) = 1.0;
                CHECK(d.basis.contains(state, 1e-8) == (i == j));
            }
    }
}

TEST_CASE("empty subdivision set makes every vector vacuously decomposable") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {5}), 2);
    const std::vector<IVec> none;
    const auto d = decomposable_space(model, from_std({3}), &none);
    CHECK(d.vacuous);
    CHECK(d.basis.rank() == make_fiber(model, from_std({3})).fock.dim());
}

TEST_CASE("decomposability is inductive and embeddable for the one-parameter flow") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                       box({0}, {5}), 2);
    double residual = 0.0;
    CHECK(inductive_decomposability_check(model, from_std({1}), from_std({1}), &residual));
    CHECK(residual < 1e-8);
    CHECK(embeddability_check(model, from_std({1}), from_std({1}), &residual));
    CHECK(residual < 1e-8);
}

TEST_CASE("exponential units multiply across the product map and obey the inner-product law") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1, 1}), Flavor::ccr,
                                       box({0, 0}, {3, 3}), 8);
    const auto cocycles = solve_cocycles(model.rep());
    REQUIRE(cocycles.basis.size() == 2);
    const AdditiveCocycle c = scaled(cocycles.basis[0], 0.3);
    const AdditiveCocycle c2 = scaled(cocycles.basis[1], 0.3);
    const auto report =
        exponential_unit_check(model, c, c2, from_std({1, 1}), from_std({1, 1}));
    CHECK(report.product_deviation < 1e-12);
    CHECK(report.inner_product_closed_form < 1e-12);
    CHECK(report.inner_product_truncated < 1e-8);
}

TEST_CASE("gauge cocycle law: closed-form kernels exactly, truncated matrices approximately") {
    const auto model = FlowModel::make(IsometricRep::direct_sum({1, 1}), Flavor::ccr,
                                       box({0, 0}, {1, 1}), 8);
    const auto cocycles = solve_cocycles(model.rep());
    REQUIRE(!cocycles.basis.empty());
    const AdditiveCocycle c = scaled(cocycles.basis[0], 0.25);
    DeterministicRng rng(31);
    const auto report =
        gauge_cocycle_check(model, c, from_std({1, 1}), from_std({1, 1}), rng, 40);
    CHECK(report.phase_residual < 1e-12);
    CHECK(report.kernel_residual < 1e-12);
    CHECK(report.matrix_residual < 1e-4);
}
