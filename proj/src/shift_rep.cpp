#include "conefock/shift_rep.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace conefock {

SparseVec sv_add(const SparseVec& a, const SparseVec& b) {
    SparseVec out = a;
    for (const auto& [m, c] : b) out[m] += c;
    return sv_prune(std::move(out));
}

SparseVec sv_sub(const SparseVec& a, const SparseVec& b) {
    SparseVec out = a;
    for (const auto& [m, c] : b) out[m] -= c;
    return sv_prune(std::move(out));
}

SparseVec sv_scale(const SparseVec& a, Complex c) {
    SparseVec out;
    for (const auto& [m, v] : a) out[m] = v * c;
    return sv_prune(std::move(out));
}

Complex sv_inner(const SparseVec& a, const SparseVec& b) {
    Complex out = 0.0;
    for (const auto& [m, v] : a) {
        auto it = b.find(m);
        if (it != b.end()) out += std::conj(v) * it->second;
    }
    return out;
}

double sv_norm(const SparseVec& a) { return std::sqrt(std::abs(sv_inner(a, a))); }

SparseVec sv_prune(SparseVec a, double eps) {
    for (auto it = a.begin(); it != a.end();) {
        if (std::abs(it->second) <= eps)
            it = a.erase(it);
        else
            ++it;
    }
    return a;
}

IsometricRep IsometricRep::lattice_shift(LatticeModule module, int multiplicity) {
    if (multiplicity < 1)
        throw std::invalid_argument("IsometricRep: multiplicity must be >= 1");
    IsometricRep rep;
    rep.cone_ = module.cone();
    rep.flavor_ = LatticeShift{std::move(module), multiplicity};
    return rep;
}

IsometricRep IsometricRep::direct_sum(std::vector<int> multiplicities) {
    if (multiplicities.empty())
        throw std::invalid_argument("IsometricRep: direct sum needs at least one component");
    for (int k : multiplicities)
        if (k < 1) throw std::invalid_argument("IsometricRep: multiplicity must be >= 1");
    IsometricRep rep;
    rep.cone_ = ConeSpec::orthant(static_cast<int>(multiplicities.size()));
    rep.flavor_ = DirectSumShift{std::move(multiplicities)};
    return rep;
}

int IsometricRep::total_channels() const {
    if (is_lattice_shift()) return as_lattice_shift().multiplicity;
    const auto& mult = as_direct_sum().multiplicities;
    return std::accumulate(mult.begin(), mult.end(), 0);
}

int IsometricRep::component_of_channel(int channel) const {
    const auto& mult = as_direct_sum().multiplicities;
    int acc = 0;
    for (std::size_t i = 0; i < mult.size(); ++i) {
        acc += mult[i];
        if (channel < acc) return static_cast<int>(i);
    }
    throw std::invalid_argument("component_of_channel: channel out of range");
}

bool IsometricRep::domain_contains(const Mode& m) const {
    if (static_cast<int>(m.point.size()) != dim()) return false;
    if (m.channel < 0 || m.channel >= total_channels()) return false;
    if (is_lattice_shift()) return as_lattice_shift().module.contains(from_std(m.point));
    // Direct sum: the mode must sit on the axis of its channel's component.
    const int comp = component_of_channel(m.channel);
    for (int i = 0; i < dim(); ++i) {
        if (i == comp) {
            if (m.point[static_cast<std::size_t>(i)] < 0) return false;
        } else if (m.point[static_cast<std::size_t>(i)] != 0) {
            return false;
        }
    }
    return true;
}

namespace {

IVec require_cone(const IsometricRep& rep, const IVec& x, const char* op) {
    auto coords = cone_coordinates(rep.cone(), x);
    if (!coords) {
        std::ostringstream msg;
        msg << op << ": shift vector not in the cone";
        throw std::invalid_argument(msg.str());
    }
    return *coords;
}

}  // namespace

Mode mode_shifted(const IsometricRep& rep, const Mode& m, const IVec& x, int direction) {
    Mode out = m;
    if (rep.is_lattice_shift()) {
        for (int i = 0; i < rep.dim(); ++i)
            out.point[static_cast<std::size_t>(i)] += direction * x(i);
    } else {
        const int comp = rep.component_of_channel(m.channel);
        out.point[static_cast<std::size_t>(comp)] += direction * x(comp);
    }
    return out;
}

SparseVec apply(const IsometricRep& rep, const IVec& x, const SparseVec& f) {
    require_cone(rep, x, "apply");
    SparseVec out;
    for (const auto& [m, c] : f) {
        if (!rep.domain_contains(m))
            throw std::invalid_argument("apply: input supported outside the domain");
        out[mode_shifted(rep, m, x, +1)] = c;
    }
    return out;
}

SparseVec adjoint_apply(const IsometricRep& rep, const IVec& x, const SparseVec& f) {
    require_cone(rep, x, "adjoint_apply");
    SparseVec out;
    for (const auto& [m, c] : f) {
        const Mode back = mode_shifted(rep, m, x, -1);
        if (rep.domain_contains(back)) out[back] = c;
    }
    return out;
}

KernelModes kernel_modes(const IsometricRep& rep, const IVec& x, const Window* w) {
    require_cone(rep, x, "kernel_modes");
    KernelModes out;
    out.x = x;
    if (rep.is_lattice_shift()) {
        if (w == nullptr)
            throw std::invalid_argument("kernel_modes: lattice shifts require a window");
        const auto& mod = rep.as_lattice_shift().module;
        for (const IVec& p : w->points()) {
            if (!mod.contains(p) || mod.contains(p - x)) continue;
            for (int ch = 0; ch < rep.total_channels(); ++ch)
                out.modes.push_back(Mode{to_std(p), ch});
        }
        out.exact = false;
    } else {
        const int d = rep.dim();
        int ch = 0;
        for (int comp = 0; comp < d; ++comp) {
            const int k = rep.as_direct_sum().multiplicities[static_cast<std::size_t>(comp)];
            for (int local = 0; local < k; ++local, ++ch)
                for (int n = 0; n < x(comp); ++n) {
                    std::vector<int> p(static_cast<std::size_t>(d), 0);
                    p[static_cast<std::size_t>(comp)] = n;
                    out.modes.push_back(Mode{std::move(p), ch});
                }
        }
        out.exact = true;
    }
    std::sort(out.modes.begin(), out.modes.end());
    return out;
}

std::vector<Mode> window_modes(const IsometricRep& rep, const Window& w) {
    std::vector<Mode> out;
    if (rep.is_lattice_shift()) {
        const auto& mod = rep.as_lattice_shift().module;
        for (const IVec& p : w.points()) {
            if (!mod.contains(p)) continue;
            for (int ch = 0; ch < rep.total_channels(); ++ch)
                out.push_back(Mode{to_std(p), ch});
        }
    } else {
        const int d = rep.dim();
        int ch = 0;
        for (int comp = 0; comp < d; ++comp) {
            const int k = rep.as_direct_sum().multiplicities[static_cast<std::size_t>(comp)];
            const int lo = std::max(0, w.lower(comp));
            for (int local = 0; local < k; ++local, ++ch)
                for (int n = lo; n <= w.upper(comp); ++n) {
                    std::vector<int> p(static_cast<std::size_t>(d), 0);
                    p[static_cast<std::size_t>(comp)] = n;
                    out.push_back(Mode{std::move(p), ch});
                }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double semigroup_check(const IsometricRep& rep, const IVec& x, const IVec& y, int trials,
                       DeterministicRng& rng, const Window& support_window) {
    const std::vector<Mode> modes = window_modes(rep, support_window);
    if (modes.empty()) return 0.0;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        SparseVec f;
        const int support = 1 + static_cast<int>(rng.index(std::min<std::size_t>(20, modes.size())));
        for (int s = 0; s < support; ++s)
            f[modes[rng.index(modes.size())]] = rng.complex_box();
        const SparseVec lhs = apply(rep, x, apply(rep, y, f));
        const SparseVec rhs = apply(rep, IVec(x + y), f);
        worst = std::max(worst, sv_norm(sv_sub(lhs, rhs)));
    }
    return worst;
}

std::vector<long long> purity_probe(const IsometricRep& rep, const IVec& a, int n_max,
                                    const Window& w) {
    const IVec coords = require_cone(rep, a, "purity_probe");
    for (int j = 0; j < rep.dim(); ++j)
        if (coords(j) < 1)
            throw std::invalid_argument(
                "purity_probe: direction lies on the cone boundary, not in the interior");
    const std::vector<Mode> modes = window_modes(rep, w);
    std::vector<long long> dims;
    for (int n = 1; n <= n_max; ++n) {
        long long count = 0;
        const IVec na = n * a;
        for (const Mode& m : modes)
            if (rep.domain_contains(mode_shifted(rep, m, na, -1))) ++count;
        dims.push_back(count);
    }
    return dims;
}

namespace {

// Dense coordinates of a set of sparse vectors over their combined support.
struct DensePack {
    std::vector<Mode> modes;
    std::map<Mode, Eigen::Index> index;
};

DensePack pack_modes(const std::vector<SparseVec>& vecs) {
    DensePack pack;
    std::set<Mode> support;
    for (const auto& v : vecs)
        for (const auto& [m, c] : v) support.insert(m);
    pack.modes.assign(support.begin(), support.end());
    for (std::size_t i = 0; i < pack.modes.size(); ++i)
        pack.index[pack.modes[i]] = static_cast<Eigen::Index>(i);
    return pack;
}

}  // namespace

CocycleSolveResult solve_cocycles(const IsometricRep& rep, const Window* w,
                                  const Tolerances& tol) {
    const int d = rep.dim();
    std::vector<KernelModes> kernels;
    bool exact = true;
    for (int j = 0; j < d; ++j) {
        kernels.push_back(kernel_modes(rep, IVec(rep.cone().generators.col(j)), w));
        exact = exact && kernels.back().exact;
    }
    // Unknown layout: concatenated kernel-mode coefficients per generator.
    std::vector<std::pair<int, Mode>> unknowns;
    for (int j = 0; j < d; ++j)
        for (const Mode& m : kernels[static_cast<std::size_t>(j)].modes)
            unknowns.emplace_back(j, m);
    const Eigen::Index n_unknown = static_cast<Eigen::Index>(unknowns.size());

    CocycleSolveResult result;
    result.exact = exact;
    if (n_unknown == 0) return result;

    auto emit_basis = [&](const CMatrix& null_basis) {
        for (Eigen::Index col = 0; col < null_basis.cols(); ++col) {
            AdditiveCocycle c;
            c.generator_values.assign(static_cast<std::size_t>(d), SparseVec{});
            for (Eigen::Index u = 0; u < n_unknown; ++u) {
                const auto& [gen, mode] = unknowns[static_cast<std::size_t>(u)];
                const Complex val = null_basis(u, col);
                if (std::abs(val) > 1e-15)
                    c.generator_values[static_cast<std::size_t>(gen)][mode] = val;
            }
            result.basis.push_back(std::move(c));
        }
    };

    if (d == 1) {
        emit_basis(CMatrix::Identity(n_unknown, n_unknown));
        return result;
    }

    // Columns of the constraint matrix: the residual of
    // h_{g_i} + V_{g_i} h_{g_j} - h_{g_j} - V_{g_j} h_{g_i} per unit unknown.
    std::vector<SparseVec> columns(static_cast<std::size_t>(n_unknown));
    for (Eigen::Index u = 0; u < n_unknown; ++u) {
        const auto& [gen, mode] = unknowns[static_cast<std::size_t>(u)];
        SparseVec delta;
        delta[mode] = 1.0;
        SparseVec contrib;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const IVec gi = rep.cone().generators.col(i);
                const IVec gj = rep.cone().generators.col(j);
                SparseVec term;
                if (gen == i)
                    term = sv_sub(delta, apply(rep, gj, delta));
                else if (gen == j)
                    term = sv_sub(apply(rep, gi, delta), delta);
                else
                    continue;
                // Tag each pair's residual with a distinct channel block so the
                // constraints for different (i, j) never alias.
                const int block = i * d + j;
                for (auto& [m, c] : term) {
                    Mode tagged = m;
                    tagged.channel += block * rep.total_channels();
                    contrib[tagged] += c;
                }
            }
        columns[static_cast<std::size_t>(u)] = sv_prune(std::move(contrib));
    }
    const DensePack pack = pack_modes(columns);
    if (pack.modes.empty()) {
        // Every constraint vanished identically; the nullspace is everything.
        emit_basis(CMatrix::Identity(n_unknown, n_unknown));
        return result;
    }
    CMatrix system = CMatrix::Zero(static_cast<Eigen::Index>(pack.modes.size()), n_unknown);
    for (Eigen::Index u = 0; u < n_unknown; ++u)
        for (const auto& [m, c] : columns[static_cast<std::size_t>(u)])
            system(pack.index.at(m), u) = c;

    Eigen::BDCSVD<CMatrix> svd(system, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index rank = 0;
    const double cut = tol.rank_threshold * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    emit_basis(svd.matrixV().rightCols(n_unknown - rank));
    return result;
}

double cocycle_compatibility_residual(const IsometricRep& rep, const AdditiveCocycle& c) {
    const int d = rep.dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const IVec gi = rep.cone().generators.col(i);
            const IVec gj = rep.cone().generators.col(j);
            const SparseVec& hi = c.generator_values[static_cast<std::size_t>(i)];
            const SparseVec& hj = c.generator_values[static_cast<std::size_t>(j)];
            const SparseVec lhs = sv_add(hi, apply(rep, gi, hj));
            const SparseVec rhs = sv_add(hj, apply(rep, gj, hi));
            worst = std::max(worst, sv_norm(sv_sub(lhs, rhs)));
        }
    return worst;
}

SparseVec extend_cocycle(const IsometricRep& rep, const AdditiveCocycle& c, const IVec& x,
                         const std::vector<int>* generator_order) {
    const IVec coords = require_cone(rep, x, "extend_cocycle");
    std::vector<int> order;
    if (generator_order) {
        order = *generator_order;
    } else {
        order.resize(static_cast<std::size_t>(rep.dim()));
        std::iota(order.begin(), order.end(), 0);
    }
    SparseVec h;  // h_0 = 0
    IVec acc = IVec::Zero(rep.dim());
    for (int j : order) {
        const IVec g = rep.cone().generators.col(j);
        for (int step = 0; step < coords(j); ++step) {
            // h_{acc + g} = h_acc + V_acc h_g
            h = sv_add(h, apply(rep, acc, c.generator_values[static_cast<std::size_t>(j)]));
            acc += g;
        }
    }
    return h;
}

DivisibilityReport divisibility_check(const IsometricRep& rep,
                                      const std::vector<AdditiveCocycle>& basis, const IVec& z,
                                      const Window* w, const Tolerances& tol) {
    const IVec zc = require_cone(rep, z, "divisibility_check");
    const KernelModes kz = kernel_modes(rep, z, w);
    DivisibilityReport report;
    report.kernel_dim = static_cast<Eigen::Index>(kz.modes.size());
    if (report.kernel_dim == 0) {
        report.divisible = basis.empty() || true;  // vacuous
        return report;
    }
    std::map<Mode, Eigen::Index> index;
    for (std::size_t i = 0; i < kz.modes.size(); ++i)
        index[kz.modes[i]] = static_cast<Eigen::Index>(i);

    // Enumerate coefficient vectors 0 <= b <= zc (y = G b, y != 0), a <= zc - b.
    std::vector<CVector> spanning;
    std::function<void(IVec&, int, const IVec&, std::function<void(const IVec&)>)> rec =
        [&](IVec& cur, int pos, const IVec& limit, std::function<void(const IVec&)> sink) {
            if (pos == rep.dim()) {
                sink(cur);
                return;
            }
            for (int v = 0; v <= limit(pos); ++v) {
                cur(pos) = v;
                rec(cur, pos + 1, limit, sink);
            }
            cur(pos) = 0;
        };
    IVec b = IVec::Zero(rep.dim());
    rec(b, 0, zc, [&](const IVec& bc) {
        if (bc.isZero()) return;
        const IVec y = rep.cone().generators * bc;
        for (const auto& c : basis) {
            const SparseVec hy = extend_cocycle(rep, c, y);
            IVec a = IVec::Zero(rep.dim());
            const IVec rest = zc - bc;
            rec(a, 0, rest, [&](const IVec& ac) {
                const IVec x = rep.cone().generators * ac;
                const SparseVec v = apply(rep, x, hy);
                CVector dense = CVector::Zero(report.kernel_dim);
                for (const auto& [m, amp] : v) {
                    auto it = index.find(m);
                    if (it == index.end())
                        ++report.dropped_support;
                    else
                        dense(it->second) = amp;
                }
                if (dense.norm() > 1e-14) spanning.push_back(dense);
            });
        }
    });
    if (!spanning.empty())
        report.span_rank = orthonormalize(spanning, tol).rank();
    report.divisible = (report.span_rank == report.kernel_dim);
    return report;
}

}  // namespace conefock
