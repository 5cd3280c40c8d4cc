#pragma once

#include <map>
#include <vector>

#include "conefock/linalg.hpp"

namespace conefock {

enum class Statistics { symmetric, antisymmetric };

// Truncated Fock space over an ordered finite mode list. Symmetric basis
// states are occupation vectors with total <= cutoff; antisymmetric states
// are mode subsets with size <= min(num_modes, cutoff). Basis order is graded
// lexicographic and deterministic.
class FockModel {
public:
    static FockModel symmetric(int num_modes, int cutoff);
    static FockModel antisymmetric(int num_modes, int cutoff);

    Statistics statistics() const { return statistics_; }
    int num_modes() const { return num_modes_; }
    int cutoff() const { return cutoff_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_.size()); }
    Eigen::Index vacuum_index() const { return 0; }

    // Occupation vector (symmetric) or ascending mode subset (antisymmetric).
    const std::vector<int>& state(Eigen::Index idx) const {
        return basis_[static_cast<std::size_t>(idx)];
    }
    int particle_number(Eigen::Index idx) const;
    Eigen::Index index_of(const std::vector<int>& state) const;  // -1 if absent

    CVector vacuum() const;

private:
    Statistics statistics_ = Statistics::symmetric;
    int num_modes_ = 0;
    int cutoff_ = 0;
    std::vector<std::vector<int>> basis_;
    std::map<std::vector<int>, Eigen::Index> index_;
};

// e(u) truncated at the cutoff; symmetric models only.
CVector exponential_vector(const FockModel& model, const CVector& u);

// a^*(f), linear in f; bosonic normalization sqrt(n+1), fermionic signs by
// insertion position in the mode order.
CMatrix creation(const FockModel& model, const CVector& f);
CMatrix annihilation(const FockModel& model, const CVector& f);

// exp(a^*(u) - a(u)) on the truncated space.
CMatrix weyl_operator(const FockModel& model, const CVector& u);

// Exact matrix element <e(v), W(u) e(w)> = exp(-|u|^2/2 - <u,w> + <v, u+w>),
// free of truncation.
Complex weyl_kernel_eval(const CVector& u, const CVector& v, const CVector& w);

// <e(a), W(u1) W(u2) e(b)> in closed form.
Complex weyl_kernel_eval2(const CVector& u1, const CVector& u2, const CVector& a,
                          const CVector& b);

// Gamma(U) for an isometry U on modes; statistics and cutoffs must match.
CMatrix second_quantization(const FockModel& model_in, const FockModel& model_out,
                            const CMatrix& u, const Tolerances& tol = {});

struct FactorizationResult {
    CMatrix map;  // dim_joint x (dim_1 * dim_2); column index i1 * dim_2 + i2
    long long dropped_pairs = 0;  // basis pairs with combined particle number > cutoff
};

// The isometry Gamma(K_1) (x) Gamma(K_2) -> Gamma(K_1 + K_2) determined by the
// two mode embeddings. Symmetric: e(xi) (x) e(eta) -> e(embed_1 xi + embed_2 eta).
// Antisymmetric: second-factor images wedge first, then first-factor vectors.
// embed_1, embed_2 must be isometries with orthogonal ranges.
FactorizationResult factorization(const FockModel& model_1, const FockModel& model_2,
                                  const FockModel& joint, const CMatrix& embed_1,
                                  const CMatrix& embed_2, const Tolerances& tol = {});

// Diagonal sign operator (-1)^{|S cap marked|} on an antisymmetric model.
CMatrix parity_operator(const FockModel& model, const std::vector<int>& marked);

// ||P m P|| with P the projector onto particle numbers <= n_max: the
// observation-sector norm. Truncated bosonic identities hold only away from
// the cutoff edge, so matrix-level checks compress before taking norms.
double sector_compressed_norm(const FockModel& model, const CMatrix& m, int n_max);

}  // namespace conefock
