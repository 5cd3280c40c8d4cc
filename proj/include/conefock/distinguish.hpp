#pragma once

#include <string>

#include "conefock/flows.hpp"

namespace conefock {

// The two shifted kernels inside K_{x+y}, their core, and the parts outside
// it. Proper means both outside parts are nonzero and mutually orthogonal.
struct PropernessSubspaces {
    IVec x, y;
    std::vector<Mode> ambient_modes;  // K_{x+y} within the window, the coordinate frame
    std::vector<Mode> vx_ky_modes, vy_kx_modes, core_modes;
    Subspace u1, u2, core;  // U1 = V_x(K_y) minus the core, U2 likewise, inside the ambient
    double orthogonality_defect = 0.0;  // ||U1^* U2||
    bool proper = false;
};

PropernessSubspaces properness_subspaces(const IsometricRep& rep, const IVec& x,
                                         const IVec& y, const Window& w,
                                         const Tolerances& tol = {});

// Generators of the two relative-commutant families on the Fock space over
// K_{x+y}. CCR: Weyl operators over U1 / U2 bases. CAR: a(xi) R R' and
// a*(xi) R R' with R the range parity and R' the core parity.
struct GeneratorFamilies {
    PropernessSubspaces subspaces;
    Flavor flavor = Flavor::ccr;
    FockModel fock;  // over the ambient modes
    std::vector<CMatrix> family_1, family_2;
    std::vector<int> marked_range, marked_core;  // parity mode indices (CAR only)
    bool range_parity_identity = false;  // the range marks miss the ambient entirely
};

GeneratorFamilies relative_commutant_generators(const IsometricRep& rep, const IVec& x,
                                                const IVec& y, const Window& w, int cutoff,
                                                Flavor flavor, const Tolerances& tol = {});

struct CommutationReport {
    double max_commutator = 0.0;
    double max_anticommutator = 0.0;
    double min_commutator = 0.0;  // over all cross pairs
};

CommutationReport commutation_report(const std::vector<CMatrix>& family_1,
                                     const std::vector<CMatrix>& family_2);

struct WitnessReport {
    bool found_pair = false;
    IVec x, y;
    std::string reason;  // set when inconclusive
    double ccr_max_commutator = 0.0;     // kernel level, exact — drives the verdict
    double ccr_matrix_commutator = 0.0;  // truncated-matrix corroboration
    double car_min_commutator = 0.0;
    double car_max_anticommutator = 0.0;
    Eigen::Index dim_u1 = 0, dim_u2 = 0, dim_core = 0;
    Eigen::Index ambient_mode_count = 0;
    std::vector<int> marked_range, marked_core;
    bool range_parity_identity = false;
    Window window;
    int fermionic_cutoff = 0, bosonic_cutoff = 0;
    Tolerances tol;
    std::string verdict;  // "distinguished" | "inconclusive"
};

// Search for a proper pair within the coefficient budget, then evaluate the
// CCR commutator (kernel level plus matrix corroboration) and the CAR
// (anti)commutators at the full fermionic cutoff over K_{x+y}.
WitnessReport nonconjugacy_witness(const IsometricRep& rep, int budget, const Window& w,
                                   int bosonic_cutoff, const Tolerances& tol = {});

}  // namespace conefock
