// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "conefock/commands.hpp"

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

LatticeModule orthant_module(int d) { return orthant_shift(d).as_lattice_shift().module; }

CVector scaled_random(DeterministicRng& rng, int dim, double max_norm) {
    CVector u = rng.complex_vector(dim);
    const double n = u.norm();
    return n == 0.0 ? u : CVector(u * (max_norm * rng.uniform() / n));
}

bool weyl_kernel_relation() {
    DeterministicRng rng(101);
    const int dim = 6;
    for (int t = 0; t < 100; ++t) {
        const CVector u = scaled_random(rng, dim, 1.0);
        const CVector v = scaled_random(rng, dim, 1.0);
        const Complex phase = std::exp(Complex(0.0, -u.dot(v).imag()));
        for (int s = 0; s < 100; ++s) {
            const CVector a = rng.complex_vector(dim);
            const CVector b = rng.complex_vector(dim);
            const Complex lhs = weyl_kernel_eval2(u, v, a, b);
            const Complex rhs = phase * weyl_kernel_eval(CVector(u + v), a, b);
            if (std::abs(lhs - rhs) > 1e-12 * std::max(1e-300, std::abs(rhs))) return false;
        }
    }
    return true;
}

bool weyl_matrix_relation() {
    DeterministicRng rng(102);
    const int cutoff = 12, observed = 4;
    for (int m = 1; m <= 3; ++m) {
        const FockModel fock = FockModel::symmetric(m, cutoff);
        for (int t = 0; t < 3; ++t) {
            const CVector u = scaled_random(rng, m, 0.5);
            const CVector v = scaled_random(rng, m, 0.5);
            const Complex phase = std::exp(Complex(0.0, -u.dot(v).imag()));
            const CMatrix lhs = weyl_operator(fock, u) * weyl_operator(fock, v);
            const CMatrix rhs = phase * weyl_operator(fock, CVector(u + v));
            if (sector_compressed_norm(fock, lhs - rhs, observed) > 1e-6) return false;
        }
    }
    return true;
}

bool car_relations_exact() {
    const int m = 6;
    const FockModel fock = FockModel::antisymmetric(m, m);
    const CMatrix id = CMatrix::Identity(fock.dim(), fock.dim());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            CVector ei = CVector::Zero(m), ej = CVector::Zero(m);
            ei(i) = 1.0;
            ej(j) = 1.0;
            const CMatrix ai = annihilation(fock, ei);
            const CMatrix aj = annihilation(fock, ej);
            const CMatrix cj = creation(fock, ej);
            if (op_norm(ai * cj + cj * ai - (i == j ? 1.0 : 0.0) * id) > 1e-12) return false;
            if (op_norm(ai * aj + aj * ai) > 1e-13) return false;
        }
    return true;
}

bool flow_laws() {
    // CAR: semigroup and covariance on linear generators, exact.
    {
        const auto model =
            FlowModel::make(orthant_shift(2), Flavor::car, box({0, 0}, {2, 2}), 3);
        SparseVec u{{Mode{{0, 0}, 0}, Complex(0.6, 0.3)}, {Mode{{1, 1}, 0}, Complex(-0.4, 0.2)}};
        const CVector uu = model.densify(u);
        const std::vector<CMatrix> gens{annihilation(model.fock(), uu),
                                        creation(model.fock(), uu)};
        const IVec x = from_std({1, 0}), y = from_std({0, 1});
        if (flow_semigroup_check(model, x, y, gens) > 1e-12) return false;
        const CVector vu = model.densify(apply(model.rep(), x, u));
        if (op_norm(flow_apply(model, x, annihilation(model.fock(), uu)) -
                    annihilation(model.fock(), vu)) > 1e-12)
            return false;
    }
    // CCR: Weyl generators at N = 12, observed below the cutoff edge.
    {
        const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                           box({0}, {2}), 12);
        SparseVec u{{Mode{{0}, 0}, Complex(0.25, -0.15)}};
        const std::vector<CMatrix> gens{weyl_operator(model.fock(), model.densify(u))};
        if (flow_semigroup_check(model, from_std({1}), from_std({1}), gens, 4) > 1e-6)
            return false;
        const CMatrix moved = flow_apply(model, from_std({1}), gens[0]);
        const CMatrix target = weyl_operator(
            model.fock(), model.densify(apply(model.rep(), from_std({1}), u)));
        if (sector_compressed_norm(model.fock(), moved - target, 4) > 1e-6) return false;
    }
    return true;
}

// Independent oracle: a two-particle state over K_M splits at every
// intermediate point iff both particles occupy the same mode.
long long decomposable_sector2_oracle(int m) {
    long long count = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            bool splits = true;
            for (int y = 1; y < m && splits; ++y)
                if (i < y && y <= j) splits = false;
            if (splits) ++count;
        }
    return count;
}

bool decomposability() {
    {
        const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                           box({0}, {7}), 2);
        const auto ds = decomposable_space(model, from_std({2}));
        if (ds.sector_dims != std::vector<Eigen::Index>{1, 2, 2}) return false;
        if (ds.sector_dims[2] != decomposable_sector2_oracle(2)) return false;
    }
    for (const int m : {2, 4, 8, 16}) {
        const auto model = FlowModel::make(IsometricRep::direct_sum({1}), Flavor::ccr,
                                           box({0}, {m}), 2);
        const auto ds = decomposable_space(model, IVec(IVec::Constant(1, m)));
        const long long dim2 = ds.sector_dims[2];
        if (dim2 != decomposable_sector2_oracle(m)) return false;
        const long long full2 = static_cast<long long>(m) * (m + 1) / 2;
        if (dim2 * (m + 1) != 2 * full2) return false;  // ratio 2/(m+1) exactly
    }
    return true;
}

bool cocycle_space() {
    for (const auto& [k1, k2] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}}) {
        const auto rep = IsometricRep::direct_sum({k1, k2});
        const auto res = solve_cocycles(rep);
        if (!res.exact || static_cast<int>(res.basis.size()) != k1 + k2) return false;
        const auto div = divisibility_check(rep, res.basis, from_std({1, 1}));
        if (!div.divisible) return false;
    }
    return true;
}

bool properness() {
    const auto certs = proper_search(orthant_module(2), 1, box({0, 0}, {3, 3}));
    bool found = false;
    for (const auto& c : certs)
        found = found || (to_std(c.x) == std::vector<int>{1, 0} &&
                          to_std(c.y) == std::vector<int>{0, 1} && c.disjoint_verified);
    if (!found) return false;
    if (!proper_search(orthant_module(1), 3, box({0}, {10})).empty()) return false;
    return proper_search(orthant_module(1), 1, box({0}, {5})).empty();
}

bool distinguishing_witness() {
    const auto planar = nonconjugacy_witness(orthant_shift(2), 1, box({0, 0}, {3, 3}), 12);
    if (planar.verdict != "distinguished") return false;
    if (planar.ccr_max_commutator > 1e-8) return false;
    if (planar.car_max_anticommutator > 1e-8) return false;
    if (planar.car_min_commutator < 1.9) return false;

    const auto sums =
        nonconjugacy_witness(IsometricRep::direct_sum({1, 1}), 1, box({0, 0}, {4, 4}), 12);
    return sums.verdict == "distinguished";
}

bool gauge_identity() {
    const auto rep = IsometricRep::direct_sum({1, 1});
    const auto cocycles = solve_cocycles(rep);
    if (cocycles.basis.size() != 2) return false;
    AdditiveCocycle c, c2;
    for (const auto& v : cocycles.basis[0].generator_values)
        c.generator_values.push_back(sv_scale(v, 0.25));
    for (const auto& v : cocycles.basis[1].generator_values)
        c2.generator_values.push_back(sv_scale(v, 0.25));

    const auto gauge_model = FlowModel::make(rep, Flavor::ccr, box({0, 0}, {1, 1}), 8);
    DeterministicRng rng(109);
    const auto gauge =
        gauge_cocycle_check(gauge_model, c, from_std({1, 1}), from_std({1, 1}), rng, 50);
    if (gauge.kernel_residual > 1e-12 || gauge.phase_residual > 1e-12) return false;

    const auto unit_model = FlowModel::make(rep, Flavor::ccr, box({0, 0}, {3, 3}), 8);
    const auto unit =
        exponential_unit_check(unit_model, c, c2, from_std({1, 1}), from_std({1, 1}));
    return unit.product_deviation <= 1e-12 && unit.inner_product_closed_form <= 1e-12;
}

bool determinism() {
    const std::vector<std::pair<std::string, std::string>> runs{
        {"verify-relations", R"({"seed": 17, "kernel_trials": 10, "matrix_trials": 1})"},
        {"cocycles",
         R"({"seed": 17, "rep": {"kind": "direct_sum", "multiplicities": [2, 1]},
             "expected_dimension": 3})"},
        {"divisibility",
         R"({"seed": 17, "rep": {"kind": "direct_sum", "multiplicities": [1, 1]},
             "z_list": [[1, 1]]})"},
        {"decomposables",
         R"({"seed": 17, "rep": {"kind": "direct_sum", "multiplicities": [1]},
             "window": {"lower": [0], "upper": [7]}, "cutoff": 2, "x": [2],
             "expected_sector_dims": [1, 2, 2], "refinement": [2, 4]})"},
        {"proper-search",
         R"({"seed": 17,
             "rep": {"kind": "lattice_shift",
                     "cone": {"dim": 2, "generators": [[1, 0], [0, 1]]},
                     "module": {"halfspaces": [{"normal": [1, 0]}, {"normal": [0, 1]}]}},
             "window": {"lower": [0, 0], "upper": [3, 3]}, "budget": 1,
             "expect_nonempty": true})"},
        {"witness",
         R"({"seed": 17,
             "rep": {"kind": "lattice_shift",
                     "cone": {"dim": 2, "generators": [[1, 0], [0, 1]]},
                     "module": {"halfspaces": [{"normal": [1, 0]}, {"normal": [0, 1]}]}},
             "window": {"lower": [0, 0], "upper": [3, 3]}})"}};
    for (const auto& [command, text] : runs) {
        const Json config = Json::parse(text);
        const auto first = run_command(command, config);
        const auto second = run_command(command, config);
        if (first.exit_code != kExitPass || second.exit_code != kExitPass) return false;
        if (report_without_timing(first.report).dump() !=
            report_without_timing(second.report).dump())
            return false;
    }
    return true;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<bool()>>> criteria{
        {"weyl relation, kernel level", weyl_kernel_relation},
        {"weyl relation, matrix level (observed sector)", weyl_matrix_relation},
        {"car relations exact", car_relations_exact},
        {"flow semigroup and covariance laws", flow_laws},
        {"decomposable vectors vs. splitting oracle", decomposability},
        {"cocycle space dimension and divisibility", cocycle_space},
        {"proper pair search", properness},
        {"distinguishing witness", distinguishing_witness},
        {"gauge cocycle and exponential units", gauge_identity},
        {"deterministic reports", determinism}};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string note;
        try {
            ok = criteria[i].second();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::printf("[%2zu/10] %s: %s%s (%lld ms)\n", i + 1, ok ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), note.c_str(), static_cast<long long>(ms));
        if (!ok) ++failures;
    }
    return failures;
}
