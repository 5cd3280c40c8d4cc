#pragma once

#include <compare>
#include <map>
#include <variant>
#include <vector>

#include "conefock/cone.hpp"
#include "conefock/linalg.hpp"
#include "conefock/rng.hpp"

namespace conefock {

// One basis mode of the representation space: a lattice point plus a
// multiplicity channel. Channels are a cartesian index, not separate spaces.
struct Mode {
    std::vector<int> point;
    int channel = 0;
    auto operator<=>(const Mode&) const = default;
};

// Finitely supported function on the modes; V_x acts on these exactly.
using SparseVec = std::map<Mode, Complex>;

SparseVec sv_add(const SparseVec& a, const SparseVec& b);
SparseVec sv_sub(const SparseVec& a, const SparseVec& b);
SparseVec sv_scale(const SparseVec& a, Complex c);
Complex sv_inner(const SparseVec& a, const SparseVec& b);  // antilinear in the first slot
double sv_norm(const SparseVec& a);
SparseVec sv_prune(SparseVec a, double eps = 1e-15);

// S^A on the module region, with multiplicity channels 0..k-1.
struct LatticeShift {
    LatticeModule module;
    int multiplicity = 1;
};

// Direct sum of d one-parameter shifts; component i carries multiplicities[i]
// channels. The cone is the standard orthant in Z^d. Channel indices are
// global: component(i) owns [offset_i, offset_i + multiplicities[i]).
struct DirectSumShift {
    std::vector<int> multiplicities;
};

class IsometricRep {
public:
    static IsometricRep lattice_shift(LatticeModule module, int multiplicity);
    static IsometricRep direct_sum(std::vector<int> multiplicities);

    const ConeSpec& cone() const { return cone_; }
    int dim() const { return cone_.dim; }
    bool is_lattice_shift() const { return std::holds_alternative<LatticeShift>(flavor_); }
    const LatticeShift& as_lattice_shift() const { return std::get<LatticeShift>(flavor_); }
    const DirectSumShift& as_direct_sum() const { return std::get<DirectSumShift>(flavor_); }

    int total_channels() const;
    // For DirectSumShift: which one-parameter component a channel belongs to.
    int component_of_channel(int channel) const;

    bool domain_contains(const Mode& m) const;

private:
    ConeSpec cone_;
    std::variant<LatticeShift, DirectSumShift> flavor_;
};

struct KernelModes {
    IVec x;
    std::vector<Mode> modes;  // sorted
    bool exact = false;       // complete enumeration (vs. windowed)
};

// The mode V_x delta_m lands on (direction +1) or comes from (direction -1).
Mode mode_shifted(const IsometricRep& rep, const Mode& m, const IVec& x, int direction = +1);

SparseVec apply(const IsometricRep& rep, const IVec& x, const SparseVec& f);
SparseVec adjoint_apply(const IsometricRep& rep, const IVec& x, const SparseVec& f);

// Modes spanning Ker(V_x^*): {p in A : p - x not in A} for lattice shifts
// (windowed), per-component intervals [0, x_i) for direct sums (exact).
KernelModes kernel_modes(const IsometricRep& rep, const IVec& x,
                         const Window* w = nullptr);

// All modes with points inside the window (lattice shifts: A cap w; direct
// sums: per-component positions clamped to [max(0, lower_i), upper_i]).
std::vector<Mode> window_modes(const IsometricRep& rep, const Window& w);

// Max over random sparse f of ||V_x V_y f - V_{x+y} f||; exact reps return 0.
double semigroup_check(const IsometricRep& rep, const IVec& x, const IVec& y, int trials,
                       DeterministicRng& rng, const Window& support_window);

// Dimensions of {p in w cap A : p - n a in A} for n = 1..n_max; a must be in
// the cone interior (all coefficients >= 1).
std::vector<long long> purity_probe(const IsometricRep& rep, const IVec& a, int n_max,
                                    const Window& w);

// {h_{g_j}} indexed by cone generator, each supported in Ker(V_{g_j}^*).
struct AdditiveCocycle {
    std::vector<SparseVec> generator_values;
};

struct CocycleSolveResult {
    std::vector<AdditiveCocycle> basis;  // orthonormal in the direct-sum inner product
    bool exact = false;                  // false when kernels were windowed
};

// Solve h_{g_i} + V_{g_i} h_{g_j} = h_{g_j} + V_{g_j} h_{g_i} over all
// generator pairs, unknowns confined to the kernel modes.
CocycleSolveResult solve_cocycles(const IsometricRep& rep, const Window* w = nullptr,
                                  const Tolerances& tol = {});

// Max deviation of the pairwise compatibility constraints.
double cocycle_compatibility_residual(const IsometricRep& rep, const AdditiveCocycle& c);

// h_x from the generator values by telescoping the cocycle law along the
// given generator order (default 0..d-1).
SparseVec extend_cocycle(const IsometricRep& rep, const AdditiveCocycle& c, const IVec& x,
                         const std::vector<int>* generator_order = nullptr);

struct DivisibilityReport {
    bool divisible = false;
    Eigen::Index span_rank = 0;
    Eigen::Index kernel_dim = 0;
    long long dropped_support = 0;  // support weight that fell outside the window
};

// Does span{V_x h_y : x + y <= z} fill Ker(V_z^*)?
DivisibilityReport divisibility_check(const IsometricRep& rep,
                                      const std::vector<AdditiveCocycle>& basis, const IVec& z,
                                      const Window* w = nullptr, const Tolerances& tol = {});

}  // namespace conefock
