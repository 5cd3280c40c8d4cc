#include "conefock/distinguish.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace conefock {

namespace {

bool domain_has_preimage(const IsometricRep& rep, const Mode& m, const IVec& x) {
    const Mode back = mode_shifted(rep, m, x, -1);
    // The shifted point may leave the nonnegative orthant of a direct sum;
    // domain_contains handles both representation kinds.
    return rep.domain_contains(back);
}

Subspace indicator_subspace(const std::vector<Mode>& modes,
                            const std::map<Mode, Eigen::Index>& ambient_index) {
    const Eigen::Index ambient = static_cast<Eigen::Index>(ambient_index.size());
    CMatrix basis = CMatrix::Zero(ambient, static_cast<Eigen::Index>(modes.size()));
    for (std::size_t c = 0; c < modes.size(); ++c) {
        auto it = ambient_index.find(modes[c]);
        if (it == ambient_index.end())
            throw CrossCheckError(
                "properness_subspaces: shifted kernel mode not inside K_{x+y}");
        basis(it->second, static_cast<Eigen::Index>(c)) = 1.0;
    }
    return Subspace{ambient, basis};
}

}  // namespace

PropernessSubspaces properness_subspaces(const IsometricRep& rep, const IVec& x,
                                         const IVec& y, const Window& w,
                                         const Tolerances& tol) {
    if (!cone_contains(rep.cone(), x) || !cone_contains(rep.cone(), y))
        throw std::invalid_argument("properness_subspaces: x, y must lie in the cone");
    PropernessSubspaces out;
    out.x = x;
    out.y = y;
    out.ambient_modes = kernel_modes(rep, IVec(x + y), &w).modes;

    std::map<Mode, Eigen::Index> ambient_index;
    for (std::size_t i = 0; i < out.ambient_modes.size(); ++i)
        ambient_index[out.ambient_modes[i]] = static_cast<Eigen::Index>(i);

    // V_x(K_y) = {m : m - x in the domain, m - x - y outside it}, and the
    // mirror image; exact set computations, no shifting of windowed lists.
    const IVec xy = x + y;
    for (const Mode& m : out.ambient_modes) {
        const bool in_vx_ky = domain_has_preimage(rep, m, x) && !domain_has_preimage(rep, m, xy);
        const bool in_vy_kx = domain_has_preimage(rep, m, y) && !domain_has_preimage(rep, m, xy);
        if (in_vx_ky) out.vx_ky_modes.push_back(m);
        if (in_vy_kx) out.vy_kx_modes.push_back(m);
        if (in_vx_ky && in_vy_kx) out.core_modes.push_back(m);
    }

    const Subspace vx_ky = indicator_subspace(out.vx_ky_modes, ambient_index);
    const Subspace vy_kx = indicator_subspace(out.vy_kx_modes, ambient_index);
    out.core = subspace_intersect(vx_ky, vy_kx, tol);
    if (out.core.rank() != static_cast<Eigen::Index>(out.core_modes.size()))
        throw CrossCheckError(
            "properness_subspaces: subspace intersection disagrees with the mode-set core");
    out.u1 = complement_within(out.core, vx_ky, tol);
    out.u2 = complement_within(out.core, vy_kx, tol);
    if (out.u1.rank() !=
            static_cast<Eigen::Index>(out.vx_ky_modes.size() - out.core_modes.size()) ||
        out.u2.rank() !=
            static_cast<Eigen::Index>(out.vy_kx_modes.size() - out.core_modes.size()))
        throw CrossCheckError(
            "properness_subspaces: complement dimensions disagree with the mode-set counts");

    if (out.u1.rank() > 0 && out.u2.rank() > 0)
        out.orthogonality_defect = op_norm(out.u1.basis.adjoint() * out.u2.basis);
    out.proper = out.u1.rank() > 0 && out.u2.rank() > 0 &&
                 out.orthogonality_defect <= tol.containment;

    // Set-level cross-check for lattice shifts: the window differences of the
    // shifted regions must be nonempty exactly when U1, U2 are nonzero.
    if (rep.is_lattice_shift()) {
        const auto& module = rep.as_lattice_shift().module;
        const auto cx = cone_coordinates(module.cone(), x);
        const auto cy = cone_coordinates(module.cone(), y);
        if (cx && !cx->isZero() && cy && !cy->isZero()) {
            const auto set_result = proper_pair_check(module, x, y, w);
            const bool set_proper = std::holds_alternative<ProperPairCertificate>(set_result);
            const bool subspace_proper = out.u1.rank() > 0 && out.u2.rank() > 0;
            if (set_proper != subspace_proper)
                throw CrossCheckError(
                    "properness_subspaces: set-level and subspace-level verdicts disagree");
        }
    }
    return out;
}

GeneratorFamilies relative_commutant_generators(const IsometricRep& rep, const IVec& x,
                                                const IVec& y, const Window& w, int cutoff,
                                                Flavor flavor, const Tolerances& tol) {
    GeneratorFamilies out;
    out.subspaces = properness_subspaces(rep, x, y, w, tol);
    out.flavor = flavor;
    if (!out.subspaces.proper)
        throw std::invalid_argument(
            "relative_commutant_generators: the pair is not proper; generators undefined");

    const int num_modes = static_cast<int>(out.subspaces.ambient_modes.size());
    if (flavor == Flavor::ccr) {
        out.fock = FockModel::symmetric(num_modes, cutoff);
        for (Eigen::Index c = 0; c < out.subspaces.u1.rank(); ++c)
            out.family_1.push_back(weyl_operator(out.fock, out.subspaces.u1.basis.col(c)));
        for (Eigen::Index c = 0; c < out.subspaces.u2.rank(); ++c)
            out.family_2.push_back(weyl_operator(out.fock, out.subspaces.u2.basis.col(c)));
        return out;
    }

    out.fock = FockModel::antisymmetric(num_modes, cutoff);
    const IVec xy = out.subspaces.x + out.subspaces.y;
    for (int i = 0; i < num_modes; ++i) {
        // Range parity marks the modes of V_{x+y}K; the ambient is K_{x+y},
        // so for exact kernels this set is empty and the parity is trivial.
        if (domain_has_preimage(rep, out.subspaces.ambient_modes[static_cast<std::size_t>(i)],
                                xy))
            out.marked_range.push_back(i);
    }
    {
        std::set<Mode> core(out.subspaces.core_modes.begin(), out.subspaces.core_modes.end());
        for (int i = 0; i < num_modes; ++i)
            if (core.count(out.subspaces.ambient_modes[static_cast<std::size_t>(i)]))
                out.marked_core.push_back(i);
    }
    out.range_parity_identity = out.marked_range.empty();
    const CMatrix twist = parity_operator(out.fock, out.marked_range) *
                          parity_operator(out.fock, out.marked_core);
    auto push_pair = [&](std::vector<CMatrix>& family, const CVector& xi) {
        family.push_back(annihilation(out.fock, xi) * twist);
        family.push_back(creation(out.fock, xi) * twist);
    };
    for (Eigen::Index c = 0; c < out.subspaces.u1.rank(); ++c)
        push_pair(out.family_1, out.subspaces.u1.basis.col(c));
    for (Eigen::Index c = 0; c < out.subspaces.u2.rank(); ++c)
        push_pair(out.family_2, out.subspaces.u2.basis.col(c));
    return out;
}

CommutationReport commutation_report(const std::vector<CMatrix>& family_1,
                                     const std::vector<CMatrix>& family_2) {
    CommutationReport out;
    out.min_commutator = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const CMatrix& g : family_1)
        for (const CMatrix& h : family_2) {
            const CMatrix gh = g * h;
            const CMatrix hg = h * g;
            const double comm = op_norm(gh - hg);
            out.max_commutator = std::max(out.max_commutator, comm);
            out.min_commutator = std::min(out.min_commutator, comm);
            out.max_anticommutator = std::max(out.max_anticommutator, op_norm(gh + hg));
            any = true;
        }
    if (!any) out.min_commutator = 0.0;
    return out;
}

WitnessReport nonconjugacy_witness(const IsometricRep& rep, int budget, const Window& w,
                                   int bosonic_cutoff, const Tolerances& tol) {
    WitnessReport report;
    report.window = w;
    report.bosonic_cutoff = bosonic_cutoff;
    report.tol = tol;
    if (budget < 1) {
        report.verdict = "inconclusive";
        report.reason = "empty search";
        return report;
    }

    const int d = rep.dim();
    std::vector<IVec> coeffs;
    {
        IVec c = IVec::Zero(d);
        while (true) {
            if (!c.isZero()) coeffs.push_back(c);
            Eigen::Index i = d;
            bool done = true;
            while (i > 0) {
                --i;
                if (c(i) < budget) {
                    ++c(i);
                    for (Eigen::Index j = i + 1; j < d; ++j) c(j) = 0;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
    }

    PropernessSubspaces found;
    for (const IVec& nx : coeffs) {
        const IVec x = rep.cone().generators * nx;
        bool stop = false;
        for (const IVec& ny : coeffs) {
            const IVec y = rep.cone().generators * ny;
            auto ps = properness_subspaces(rep, x, y, w, tol);
            if (ps.proper) {
                found = std::move(ps);
                report.found_pair = true;
                stop = true;
                break;
            }
        }
        if (stop) break;
    }
    if (!report.found_pair) {
        report.verdict = "inconclusive";
        report.reason = "no proper pair within budget";
        return report;
    }

    report.x = found.x;
    report.y = found.y;
    report.dim_u1 = found.u1.rank();
    report.dim_u2 = found.u2.rank();
    report.dim_core = found.core.rank();
    report.ambient_mode_count = static_cast<Eigen::Index>(found.ambient_modes.size());

    // CCR side, kernel level: ||[W(xi), W(eta)]|| = 2 |sin Im<xi, eta>| exactly.
    for (Eigen::Index i = 0; i < found.u1.rank(); ++i)
        for (Eigen::Index j = 0; j < found.u2.rank(); ++j) {
            const Complex ip = found.u1.basis.col(i).dot(found.u2.basis.col(j));
            report.ccr_max_commutator =
                std::max(report.ccr_max_commutator, 2.0 * std::abs(std::sin(ip.imag())));
        }
    // Matrix corroboration on the joint support of each generator pair, with
    // the norms scaled to 1/2 and the commutator observed away from the
    // cutoff edge (truncated Weyl operators are only faithful there).
    for (Eigen::Index i = 0; i < found.u1.rank(); ++i)
        for (Eigen::Index j = 0; j < found.u2.rank(); ++j) {
            std::vector<Eigen::Index> support;
            for (Eigen::Index m = 0; m < found.u1.basis.rows(); ++m)
                if (std::abs(found.u1.basis(m, i)) > 1e-12 ||
                    std::abs(found.u2.basis(m, j)) > 1e-12)
                    support.push_back(m);
            CVector xi(static_cast<Eigen::Index>(support.size()));
            CVector eta(static_cast<Eigen::Index>(support.size()));
            for (std::size_t s = 0; s < support.size(); ++s) {
                xi(static_cast<Eigen::Index>(s)) = 0.5 * found.u1.basis(support[s], i);
                eta(static_cast<Eigen::Index>(s)) = 0.5 * found.u2.basis(support[s], j);
            }
            // Keep the model tractable when a pair spans many modes.
            const int cutoff = support.size() <= 3 ? bosonic_cutoff
                                                   : std::min(bosonic_cutoff, 6);
            const FockModel fock =
                FockModel::symmetric(static_cast<int>(support.size()), cutoff);
            const CMatrix w1 = weyl_operator(fock, xi);
            const CMatrix w2 = weyl_operator(fock, eta);
            report.ccr_matrix_commutator = std::max(
                report.ccr_matrix_commutator,
                sector_compressed_norm(fock, w1 * w2 - w2 * w1, cutoff / 3));
        }

    // CAR side at the full fermionic cutoff: relations hold exactly there.
    report.fermionic_cutoff = static_cast<int>(found.ambient_modes.size());
    {
        const auto car = relative_commutant_generators(rep, found.x, found.y, w,
                                                       report.fermionic_cutoff, Flavor::car,
                                                       tol);
        report.marked_range = car.marked_range;
        report.marked_core = car.marked_core;
        report.range_parity_identity = car.range_parity_identity;
        const auto cr = commutation_report(car.family_1, car.family_2);
        report.car_min_commutator = cr.min_commutator;
        report.car_max_anticommutator = cr.max_anticommutator;
    }

    const bool distinguished = report.ccr_max_commutator <= tol.tol_zero &&
                               report.car_min_commutator >= tol.tol_pos &&
                               report.car_max_anticommutator <= tol.tol_zero;
    report.verdict = distinguished ? "distinguished" : "inconclusive";
    if (!distinguished) report.reason = "deviations outside tolerance";
    return report;
}

}  // namespace conefock
