#include "conefock/flows.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace conefock {

namespace {

std::string mode_str(const Mode& m) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < m.point.size(); ++i)
        os << (i ? "," : "") << m.point[i];
    os << ";ch" << m.channel << ")";
    return os.str();
}

FockModel make_fock(Flavor flavor, int num_modes, int cutoff) {
    return flavor == Flavor::ccr ? FockModel::symmetric(num_modes, cutoff)
                                 : FockModel::antisymmetric(num_modes, cutoff);
}

// 0/1 mode inclusion matrix: column j is the unit vector at target(modes[j]).
CMatrix inclusion_matrix(const std::vector<Mode>& sub, const FlowModel& model,
                         const char* op) {
    CMatrix j = CMatrix::Zero(static_cast<Eigen::Index>(model.modes().size()),
                              static_cast<Eigen::Index>(sub.size()));
    for (std::size_t c = 0; c < sub.size(); ++c) {
        const Eigen::Index r = model.mode_index(sub[c]);
        if (r < 0) {
            std::ostringstream msg;
            msg << op << ": mode " << mode_str(sub[c]) << " outside the window";
            throw std::invalid_argument(msg.str());
        }
        j(r, static_cast<Eigen::Index>(c)) = 1.0;
    }
    return j;
}

}  // namespace

FlowModel FlowModel::make(IsometricRep rep, Flavor flavor, Window window, int cutoff) {
    window.validate();
    if (cutoff < 0) throw std::invalid_argument("FlowModel: cutoff must be nonnegative");
    FlowModel m;
    m.rep_ = std::move(rep);
    m.flavor_ = flavor;
    m.window_ = std::move(window);
    m.cutoff_ = cutoff;
    m.modes_ = window_modes(m.rep_, m.window_);
    if (m.modes_.empty()) throw std::invalid_argument("FlowModel: window holds no modes");
    for (std::size_t i = 0; i < m.modes_.size(); ++i)
        m.index_[m.modes_[i]] = static_cast<Eigen::Index>(i);
    m.fock_ = make_fock(flavor, static_cast<int>(m.modes_.size()), cutoff);
    return m;
}

Eigen::Index FlowModel::mode_index(const Mode& m) const {
    auto it = index_.find(m);
    return it == index_.end() ? Eigen::Index(-1) : it->second;
}

CVector FlowModel::densify(const SparseVec& f, long long* dropped) const {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(modes_.size()));
    long long lost = 0;
    for (const auto& [m, c] : f) {
        const Eigen::Index i = mode_index(m);
        if (i < 0) {
            if (c != Complex(0.0, 0.0)) ++lost;
            continue;
        }
        v(i) = c;
    }
    if (dropped) *dropped = lost;
    return v;
}

CMatrix flow_apply(const FlowModel& model, const IVec& x, const CMatrix& t) {
    if (t.rows() != model.fock().dim() || t.cols() != model.fock().dim())
        throw std::invalid_argument("flow_apply: operand dimension mismatch");
    const auto kernel = kernel_modes(model.rep(), x, &model.window());

    // Modes the shift keeps inside the window.
    std::vector<Mode> kept, shifted;
    for (const Mode& m : model.modes()) {
        const Mode img = mode_shifted(model.rep(), m, x, +1);
        if (model.mode_index(img) >= 0) {
            kept.push_back(m);
            shifted.push_back(img);
        }
    }

    // The kernel modes and the shifted image must partition the window modes.
    {
        std::set<Mode> seen(kernel.modes.begin(), kernel.modes.end());
        for (const Mode& m : shifted) {
            if (!seen.insert(m).second)
                throw CrossCheckError("flow_apply: kernel and shifted image overlap at " +
                                      mode_str(m));
        }
        if (seen.size() != model.modes().size()) {
            for (const Mode& m : model.modes())
                if (!seen.count(m))
                    throw std::invalid_argument(
                        "flow_apply: window mode " + mode_str(m) +
                        " is neither in the shift kernel nor in the shifted image; "
                        "use a window aligned with the module");
        }
    }

    const FockModel kernel_fock =
        make_fock(model.flavor(), static_cast<int>(kernel.modes.size()), model.cutoff());
    const FockModel sub_fock =
        make_fock(model.flavor(), static_cast<int>(kept.size()), model.cutoff());

    const CMatrix embed_1 = inclusion_matrix(kernel.modes, model, "flow_apply");
    const CMatrix embed_2 = inclusion_matrix(shifted, model, "flow_apply");
    const CMatrix u = factorization(kernel_fock, sub_fock, model.fock(), embed_1, embed_2).map;

    // Compress the operand to the sub-Fock over the kept modes.
    const CMatrix incl = inclusion_matrix(kept, model, "flow_apply");
    const CMatrix j = second_quantization(sub_fock, model.fock(), incl);
    const CMatrix compressed = j.adjoint() * t * j;

    // The factorization wedges second-factor creators leftmost, so operators
    // carried on the second factor intertwine without a parity twist in both
    // statistics: a#(embed_2 f) U = U (1 (x) a#(f)).
    const CMatrix id_kernel = CMatrix::Identity(kernel_fock.dim(), kernel_fock.dim());
    return u * Eigen::kroneckerProduct(id_kernel, compressed).eval() * u.adjoint();
}

double flow_semigroup_check(const FlowModel& model, const IVec& x, const IVec& y,
                            const std::vector<CMatrix>& generators, int observe_cutoff) {
    double worst = 0.0;
    for (const CMatrix& g : generators) {
        const CMatrix two_step = flow_apply(model, x, flow_apply(model, y, g));
        const CMatrix one_step = flow_apply(model, IVec(x + y), g);
        const CMatrix diff = two_step - one_step;
        worst = std::max(worst, observe_cutoff < 0
                                    ? op_norm(diff)
                                    : sector_compressed_norm(model.fock(), diff,
                                                             observe_cutoff));
    }
    return worst;
}

ProductFiber make_fiber(const FlowModel& model, const IVec& x) {
    const auto kernel = kernel_modes(model.rep(), x, &model.window());
    ProductFiber f{x, kernel.modes,
                   make_fock(model.flavor(), static_cast<int>(kernel.modes.size()),
                             model.cutoff()),
                   kernel.exact};
    return f;
}

ProductMapResult product_map(const FlowModel& model, const IVec& x, const IVec& y) {
    ProductMapResult out{make_fiber(model, x), make_fiber(model, y),
                         make_fiber(model, IVec(x + y)), CMatrix(), 0, 0};

    std::map<Mode, Eigen::Index> joint_index;
    for (std::size_t i = 0; i < out.fiber_xy.modes.size(); ++i)
        joint_index[out.fiber_xy.modes[i]] = static_cast<Eigen::Index>(i);

    // Second-factor modes whose shift stays inside the window; the rest only
    // exist because the kernel was windowed, and their columns are zeroed.
    std::vector<Mode> kept_images;
    std::vector<Eigen::Index> kept_pos;
    for (std::size_t c = 0; c < out.fiber_y.modes.size(); ++c) {
        const Mode img = mode_shifted(model.rep(), out.fiber_y.modes[c], x, +1);
        if (joint_index.count(img)) {
            kept_images.push_back(img);
            kept_pos.push_back(static_cast<Eigen::Index>(c));
        } else {
            ++out.dropped_modes;
        }
    }

    if (out.fiber_x.modes.size() + kept_images.size() != out.fiber_xy.modes.size()) {
        std::ostringstream msg;
        msg << "product_map: kernel splitting violated: |K_x| = " << out.fiber_x.modes.size()
            << ", |V_x K_y cap w| = " << kept_images.size()
            << ", |K_{x+y}| = " << out.fiber_xy.modes.size();
        throw CrossCheckError(msg.str());
    }

    const Eigen::Index joint_modes = static_cast<Eigen::Index>(out.fiber_xy.modes.size());
    CMatrix embed_1 =
        CMatrix::Zero(joint_modes, static_cast<Eigen::Index>(out.fiber_x.modes.size()));
    for (std::size_t c = 0; c < out.fiber_x.modes.size(); ++c) {
        auto it = joint_index.find(out.fiber_x.modes[c]);
        if (it == joint_index.end())
            throw CrossCheckError(
                "product_map: kernel mode of x missing from the joint kernel: " +
                mode_str(out.fiber_x.modes[c]));
        embed_1(it->second, static_cast<Eigen::Index>(c)) = 1.0;
    }
    CMatrix embed_2 =
        CMatrix::Zero(joint_modes, static_cast<Eigen::Index>(kept_images.size()));
    for (std::size_t c = 0; c < kept_images.size(); ++c)
        embed_2(joint_index.at(kept_images[c]), static_cast<Eigen::Index>(c)) = 1.0;

    const FockModel fock_yk =
        make_fock(model.flavor(), static_cast<int>(kept_images.size()), model.cutoff());
    const auto fact =
        factorization(out.fiber_x.fock, fock_yk, out.fiber_xy.fock, embed_1, embed_2);
    out.dropped_pairs = fact.dropped_pairs;

    // Scatter the kept-mode columns into the full E_x (x) E_y index space.
    // Remapping is order-preserving, so fermionic signs carry over unchanged.
    std::vector<Eigen::Index> kept_of_full(out.fiber_y.modes.size(), -1);
    for (std::size_t k = 0; k < kept_pos.size(); ++k)
        kept_of_full[static_cast<std::size_t>(kept_pos[k])] = static_cast<Eigen::Index>(k);

    const Eigen::Index d1 = out.fiber_x.fock.dim();
    const Eigen::Index d2 = out.fiber_y.fock.dim();
    const Eigen::Index d2k = fock_yk.dim();
    out.map = CMatrix::Zero(out.fiber_xy.fock.dim(), d1 * d2);
    for (Eigen::Index i2 = 0; i2 < d2; ++i2) {
        const auto& state = out.fiber_y.fock.state(i2);
        std::vector<int> remapped;
        bool representable = true;
        if (model.flavor() == Flavor::car) {
            for (int m : state) {
                const Eigen::Index k = kept_of_full[static_cast<std::size_t>(m)];
                if (k < 0) {
                    representable = false;
                    break;
                }
                remapped.push_back(static_cast<int>(k));
            }
        } else {
            remapped.assign(static_cast<std::size_t>(fock_yk.num_modes()), 0);
            for (std::size_t m = 0; m < state.size(); ++m) {
                if (state[m] == 0) continue;
                const Eigen::Index k = kept_of_full[m];
                if (k < 0) {
                    representable = false;
                    break;
                }
                remapped[static_cast<std::size_t>(k)] = state[m];
            }
        }
        if (!representable) continue;  // zero columns for dropped-mode states
        const Eigen::Index i2k = fock_yk.index_of(remapped);
        if (i2k < 0)
            throw CrossCheckError("product_map: remapped second-factor state missing");
        for (Eigen::Index i1 = 0; i1 < d1; ++i1)
            out.map.col(i1 * d2 + i2) = fact.map.col(i1 * d2k + i2k);
    }
    return out;
}

namespace {

std::vector<IVec> default_subdivision(const IsometricRep& rep, const IVec& x) {
    const auto cx = cone_coordinates(rep.cone(), x);
    if (!cx) throw std::invalid_argument("decomposable_space: x not in the cone");
    const int d = rep.dim();
    std::vector<IVec> out;
    IVec c = IVec::Zero(d);
    while (true) {
        if (!c.isZero() && c != *cx) out.push_back(IVec(rep.cone().generators * c));
        Eigen::Index i = d;
        bool done = true;
        while (i > 0) {
            --i;
            if (c(i) < (*cx)(i)) {
                ++c(i);
                for (Eigen::Index j = i + 1; j < d; ++j) c(j) = 0;
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return out;
}

// Sector-n subspaces spanned by U(b (x) vac) and U(vac (x) c).
Subspace split_sector(const ProductMapResult& pm, int n, const Tolerances& tol) {
    const Eigen::Index d2 = pm.fiber_y.fock.dim();
    const Eigen::Index vac1 = pm.fiber_x.fock.vacuum_index();
    const Eigen::Index vac2 = pm.fiber_y.fock.vacuum_index();
    std::vector<CVector> cols;
    for (Eigen::Index i1 = 0; i1 < pm.fiber_x.fock.dim(); ++i1)
        if (pm.fiber_x.fock.particle_number(i1) == n)
            cols.push_back(pm.map.col(i1 * d2 + vac2));
    for (Eigen::Index i2 = 0; i2 < d2; ++i2)
        if (pm.fiber_y.fock.particle_number(i2) == n)
            cols.push_back(pm.map.col(vac1 * d2 + i2));
    if (cols.empty()) return Subspace::zero(pm.fiber_xy.fock.dim());
    return orthonormalize(cols, tol);
}

}  // namespace

DecomposableSpace decomposable_space(const FlowModel& model, const IVec& x,
                                     const std::vector<IVec>* subdivision,
                                     const Tolerances& tol) {
    DecomposableSpace out;
    out.x = x;
    out.subdivision = subdivision ? *subdivision : default_subdivision(model.rep(), x);
    const ProductFiber fiber = make_fiber(model, x);
    const Eigen::Index dim = fiber.fock.dim();

    std::vector<Eigen::Index> sector_index;  // basis indices by sector, for the vacuous case
    out.sector_dims.assign(static_cast<std::size_t>(model.cutoff()) + 1, 0);
    out.sector_dims[0] = 1;  // the vacuum line always splits

    std::vector<CVector> basis_cols;
    CVector vac = fiber.fock.vacuum();
    basis_cols.push_back(vac);

    if (out.subdivision.empty()) {
        out.vacuous = true;
        out.basis = Subspace::full(dim);
        for (Eigen::Index i = 1; i < dim; ++i)
            ++out.sector_dims[static_cast<std::size_t>(fiber.fock.particle_number(i))];
        return out;
    }

    std::vector<ProductMapResult> maps;
    for (const IVec& y : out.subdivision) {
        const IVec z = x - y;
        if (!cone_contains(model.rep().cone(), z))
            throw std::invalid_argument("decomposable_space: subdivision point outside [0, x]");
        maps.push_back(product_map(model, y, z));
    }

    for (int n = 1; n <= model.cutoff(); ++n) {
        Subspace sector = split_sector(maps[0], n, tol);
        for (std::size_t k = 1; k < maps.size() && sector.rank() > 0; ++k)
            sector = subspace_intersect(sector, split_sector(maps[k], n, tol), tol);
        out.sector_dims[static_cast<std::size_t>(n)] = sector.rank();
        for (Eigen::Index c = 0; c < sector.rank(); ++c)
            basis_cols.push_back(sector.basis.col(c));
    }
    out.basis = orthonormalize(basis_cols, tol);
    return out;
}

bool inductive_decomposability_check(const FlowModel& model, const IVec& x, const IVec& y,
                                     double* max_residual, const Tolerances& tol) {
    const auto d_sum = decomposable_space(model, IVec(x + y), nullptr, tol);
    const auto d_x = decomposable_space(model, x, nullptr, tol);
    const auto d_y = decomposable_space(model, y, nullptr, tol);
    const auto pm = product_map(model, x, y);
    const Eigen::Index d2 = pm.fiber_y.fock.dim();
    const Eigen::Index vac1 = pm.fiber_x.fock.vacuum_index();
    const Eigen::Index vac2 = pm.fiber_y.fock.vacuum_index();

    bool ok = true;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < d_sum.basis.rank(); ++c) {
        const CVector w = pm.map.adjoint() * d_sum.basis.basis.col(c);
        CVector a = CVector::Zero(pm.fiber_x.fock.dim());
        for (Eigen::Index i1 = 0; i1 < a.size(); ++i1) a(i1) = w(i1 * d2 + vac2);
        CVector b = CVector::Zero(d2);
        for (Eigen::Index i2 = 0; i2 < d2; ++i2) b(i2) = w(vac1 * d2 + i2);
        const Complex c0 = w(vac1 * d2 + vac2);

        CVector rebuilt = CVector::Zero(w.size());
        for (Eigen::Index i1 = 0; i1 < a.size(); ++i1) rebuilt(i1 * d2 + vac2) += a(i1);
        for (Eigen::Index i2 = 0; i2 < d2; ++i2) rebuilt(vac1 * d2 + i2) += b(i2);
        rebuilt(vac1 * d2 + vac2) -= c0;

        worst = std::max(worst, (w - rebuilt).norm());
        ok = ok && d_x.basis.contains(a, tol.containment);
        ok = ok && d_y.basis.contains(b, tol.containment);
    }
    ok = ok && worst <= tol.containment;
    if (max_residual) *max_residual = worst;
    return ok;
}

bool embeddability_check(const FlowModel& model, const IVec& x, const IVec& y,
                         double* max_residual, const Tolerances& tol) {
    const auto d_sum = decomposable_space(model, IVec(x + y), nullptr, tol);
    const auto d_x = decomposable_space(model, x, nullptr, tol);
    const auto d_y = decomposable_space(model, y, nullptr, tol);
    const auto pm = product_map(model, x, y);
    const Eigen::Index d2 = pm.fiber_y.fock.dim();
    const Eigen::Index vac1 = pm.fiber_x.fock.vacuum_index();
    const Eigen::Index vac2 = pm.fiber_y.fock.vacuum_index();

    bool ok = true;
    double worst = 0.0;
    auto probe = [&](const CVector& image) {
        const CVector proj = d_sum.basis.basis * (d_sum.basis.basis.adjoint() * image);
        worst = std::max(worst, (image - proj).norm());
        ok = ok && d_sum.basis.contains(image, tol.containment);
    };
    for (Eigen::Index c = 0; c < d_x.basis.rank(); ++c) {
        CVector joint = CVector::Zero(pm.fiber_x.fock.dim() * d2);
        for (Eigen::Index i1 = 0; i1 < pm.fiber_x.fock.dim(); ++i1)
            joint(i1 * d2 + vac2) = d_x.basis.basis(i1, c);
        probe(pm.map * joint);
    }
    for (Eigen::Index c = 0; c < d_y.basis.rank(); ++c) {
        CVector joint = CVector::Zero(pm.fiber_x.fock.dim() * d2);
        for (Eigen::Index i2 = 0; i2 < d2; ++i2)
            joint(vac1 * d2 + i2) = d_y.basis.basis(i2, c);
        probe(pm.map * joint);
    }
    if (max_residual) *max_residual = worst;
    return ok;
}

namespace {

void require_ccr(const FlowModel& model, const char* op) {
    if (model.flavor() != Flavor::ccr)
        throw std::invalid_argument(std::string(op) + ": requires the symmetric flavor");
}

CVector densify_over(const std::vector<Mode>& modes, const SparseVec& f) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(modes.size()));
    std::map<Mode, Eigen::Index> index;
    for (std::size_t i = 0; i < modes.size(); ++i)
        index[modes[i]] = static_cast<Eigen::Index>(i);
    for (const auto& [m, c] : f) {
        auto it = index.find(m);
        if (it == index.end())
            throw std::invalid_argument("cocycle value supported outside the fiber modes");
        v(it->second) = c;
    }
    return v;
}

}  // namespace

UnitCheckReport exponential_unit_check(const FlowModel& model, const AdditiveCocycle& c,
                                       const AdditiveCocycle& c_other, const IVec& x,
                                       const IVec& y) {
    require_ccr(model, "exponential_unit_check");
    UnitCheckReport report;
    const auto& rep = model.rep();
    const SparseVec hx = extend_cocycle(rep, c, x);
    const SparseVec hy = extend_cocycle(rep, c, y);
    const SparseVec hxy = extend_cocycle(rep, c, IVec(x + y));

    const auto pm = product_map(model, x, y);
    const CVector ex = exponential_vector(pm.fiber_x.fock, densify_over(pm.fiber_x.modes, hx));
    const CVector ey = exponential_vector(pm.fiber_y.fock, densify_over(pm.fiber_y.modes, hy));
    const CVector exy =
        exponential_vector(pm.fiber_xy.fock, densify_over(pm.fiber_xy.modes, hxy));
    CVector joint = CVector::Zero(ex.size() * ey.size());
    for (Eigen::Index i1 = 0; i1 < ex.size(); ++i1)
        for (Eigen::Index i2 = 0; i2 < ey.size(); ++i2)
            joint(i1 * ey.size() + i2) = ex(i1) * ey(i2);
    report.product_deviation = (pm.map * joint - exy).norm();

    const SparseVec hx2 = extend_cocycle(rep, c_other, x);
    const CVector ex2 = exponential_vector(pm.fiber_x.fock, densify_over(pm.fiber_x.modes, hx2));
    const Complex truncated = ex.dot(ex2);  // conjugates the first argument
    const Complex closed = std::exp(sv_inner(hx, hx2));
    report.inner_product_truncated = std::abs(truncated - closed);

    // <h_{x+y}, h'_{x+y}> = <h_x, h'_x> + <h_y, h'_y>: the cross terms vanish
    // because kernel values are orthogonal to the shifted range.
    const SparseVec hy2 = extend_cocycle(rep, c_other, y);
    const SparseVec hxy2 = extend_cocycle(rep, c_other, IVec(x + y));
    const Complex law = std::exp(sv_inner(hxy, hxy2)) -
                        std::exp(sv_inner(hx, hx2)) * std::exp(sv_inner(hy, hy2));
    report.inner_product_closed_form = std::abs(law);
    return report;
}

GaugeCheckReport gauge_cocycle_check(const FlowModel& model, const AdditiveCocycle& c,
                                     const IVec& x, const IVec& y, DeterministicRng& rng,
                                     int kernel_trials) {
    require_ccr(model, "gauge_cocycle_check");
    GaugeCheckReport report;
    const auto& rep = model.rep();
    const SparseVec hx = extend_cocycle(rep, c, x);
    const SparseVec hy = extend_cocycle(rep, c, y);
    const SparseVec hxy = extend_cocycle(rep, c, IVec(x + y));
    const SparseVec vx_hy = apply(rep, x, hy);

    const Complex overlap = sv_inner(hx, vx_hy);
    report.phase_residual = std::abs(overlap.imag());
    const Complex phase = std::exp(Complex(0.0, -overlap.imag()));

    // Closed-form matrix elements over the union support plus random probes.
    std::set<Mode> support;
    for (const auto* f : {&hx, &vx_hy, &hxy})
        for (const auto& [m, coeff] : *f) support.insert(m);
    const std::vector<Mode> packed(support.begin(), support.end());
    const CVector u1 = densify_over(packed, hx);
    const CVector u2 = densify_over(packed, vx_hy);
    const CVector u12 = densify_over(packed, hxy);
    double worst = (u1 + u2 - u12).norm();  // additivity of the extension
    for (int t = 0; t < kernel_trials; ++t) {
        const CVector a = rng.complex_vector(static_cast<int>(packed.size()));
        const CVector b = rng.complex_vector(static_cast<int>(packed.size()));
        const Complex lhs = weyl_kernel_eval2(u1, u2, a, b);
        const Complex rhs = phase * weyl_kernel_eval(u12, a, b);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    report.kernel_residual = worst;

    // Truncated operators on the window model.
    const CVector hx_w = model.densify(hx);
    const CVector hy_w = model.densify(hy);
    const CVector hxy_w = model.densify(hxy);
    const CMatrix lhs = weyl_operator(model.fock(), hx_w) *
                        flow_apply(model, x, weyl_operator(model.fock(), hy_w));
    const CMatrix rhs = phase * weyl_operator(model.fock(), hxy_w);
    report.matrix_residual =
        sector_compressed_norm(model.fock(), lhs - rhs, model.cutoff() / 3);
    return report;
}

}  // namespace conefock
