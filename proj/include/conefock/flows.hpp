#pragma once

#include <optional>

#include "conefock/fock.hpp"
#include "conefock/shift_rep.hpp"

namespace conefock {

enum class Flavor { ccr, car };

// CCR or CAR flow at finite truncation: Fock space over the window modes of
// the representation, particle cutoff N.
class FlowModel {
public:
    static FlowModel make(IsometricRep rep, Flavor flavor, Window window, int cutoff);

    const IsometricRep& rep() const { return rep_; }
    Flavor flavor() const { return flavor_; }
    const Window& window() const { return window_; }
    int cutoff() const { return cutoff_; }
    const std::vector<Mode>& modes() const { return modes_; }
    const FockModel& fock() const { return fock_; }

    Eigen::Index mode_index(const Mode& m) const;  // -1 if absent
    // Dense window coordinates of a finitely supported function; entries that
    // fall outside the window are dropped and counted.
    CVector densify(const SparseVec& f, long long* dropped = nullptr) const;

private:
    IsometricRep rep_;
    Flavor flavor_ = Flavor::ccr;
    Window window_;
    int cutoff_ = 0;
    std::vector<Mode> modes_;
    std::map<Mode, Eigen::Index> index_;
    FockModel fock_;
};

// alpha_x / beta_x on window operators: conjugation by the factorization
// isometry with the identity on the kernel factor, the operand compressed to
// the sub-Fock over modes that V_x keeps inside the window.
CMatrix flow_apply(const FlowModel& model, const IVec& x, const CMatrix& t);

// Max over the generator set of ||alpha_x(alpha_y(G)) - alpha_{x+y}(G)||,
// compressed to particle numbers <= observe_cutoff (negative: full norm; CAR
// checks are exact at full norm, bosonic ones need the compression).
double flow_semigroup_check(const FlowModel& model, const IVec& x, const IVec& y,
                            const std::vector<CMatrix>& generators,
                            int observe_cutoff = -1);

// Product-system fiber E_x = Gamma(Ker(V_x^*)) at the cutoff.
struct ProductFiber {
    IVec x;
    std::vector<Mode> modes;
    FockModel fock;
    bool exact = false;
};

ProductFiber make_fiber(const FlowModel& model, const IVec& x);

struct ProductMapResult {
    ProductFiber fiber_x, fiber_y, fiber_xy;
    CMatrix map;  // dim E_{x+y} x (dim E_x * dim E_y)
    long long dropped_modes = 0;  // second-factor modes shifted out of the window
    long long dropped_pairs = 0;  // combined particle number above the cutoff
};

// U_{x,y}: E_x (x) E_y -> E_{x+y}, kernel splitting verified.
ProductMapResult product_map(const FlowModel& model, const IVec& x, const IVec& y);

struct DecomposableSpace {
    IVec x;
    std::vector<IVec> subdivision;
    Subspace basis;                // inside the fiber E_x
    std::vector<Eigen::Index> sector_dims;  // per particle number 0..cutoff
    bool vacuous = false;          // empty subdivision set: full fiber
};

// Vectors of E_x splitting at every y in the subdivision set as a
// vacuum-orthogonal sum across the product map, plus the vacuum line.
// Defaults to all lattice points strictly between 0 and x when Y is null.
DecomposableSpace decomposable_space(const FlowModel& model, const IVec& x,
                                     const std::vector<IVec>* subdivision = nullptr,
                                     const Tolerances& tol = {});

// For each basis vector of D_{x+y}, extract the split components at (x, y)
// and verify they lie in D_x and D_y.
bool inductive_decomposability_check(const FlowModel& model, const IVec& x, const IVec& y,
                                     double* max_residual = nullptr,
                                     const Tolerances& tol = {});

// U(D_x (x) Omega) and U(Omega (x) D_y) both land inside D_{x+y}.
bool embeddability_check(const FlowModel& model, const IVec& x, const IVec& y,
                         double* max_residual = nullptr, const Tolerances& tol = {});

struct UnitCheckReport {
    double product_deviation = 0.0;       // U(e(h_x) (x) e(h_y)) vs e(h_{x+y})
    double inner_product_truncated = 0.0; // |<e(h_x), e(h'_x)> - exp<h_x, h'_x>|
    double inner_product_closed_form = 0.0;  // closed-form law residual (exact)
};

// Exponential-unit laws for a pair of additive cocycles (CCR flavor).
UnitCheckReport exponential_unit_check(const FlowModel& model, const AdditiveCocycle& c,
                                       const AdditiveCocycle& c_other, const IVec& x,
                                       const IVec& y);

struct GaugeCheckReport {
    double kernel_residual = 0.0;   // closed-form matrix elements, exact
    double matrix_residual = 0.0;   // truncated operators, observed at n <= cutoff/3
    double phase_residual = 0.0;    // |Im <h_x, V_x h_y>|, zero by orthogonality
};

// W(h_x) alpha_x(W(h_y)) = W(h_{x+y}) for an additive cocycle (CCR flavor).
GaugeCheckReport gauge_cocycle_check(const FlowModel& model, const AdditiveCocycle& c,
                                     const IVec& x, const IVec& y, DeterministicRng& rng,
                                     int kernel_trials = 50);

}  // namespace conefock
