#include "conefock/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conefock {

namespace {

void enumerate_occupations(int num_modes, int total, std::vector<int>& cur, int pos,
                           std::vector<std::vector<int>>& out) {
    if (pos == num_modes - 1) {
        cur[static_cast<std::size_t>(pos)] = total;
        out.push_back(cur);
        return;
    }
    for (int n = 0; n <= total; ++n) {
        cur[static_cast<std::size_t>(pos)] = n;
        enumerate_occupations(num_modes, total - n, cur, pos + 1, out);
    }
}

void enumerate_subsets(int num_modes, int size, int start, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == size) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i < num_modes; ++i) {
        cur.push_back(i);
        enumerate_subsets(num_modes, size, i + 1, cur, out);
        cur.pop_back();
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

FockModel FockModel::symmetric(int num_modes, int cutoff) {
    if (num_modes < 0 || cutoff < 0)
        throw std::invalid_argument("FockModel: negative size");
    FockModel m;
    m.statistics_ = Statistics::symmetric;
    m.num_modes_ = num_modes;
    m.cutoff_ = cutoff;
    if (num_modes == 0) {
        m.basis_.push_back({});
    } else {
        for (int n = 0; n <= cutoff; ++n) {
            std::vector<int> cur(static_cast<std::size_t>(num_modes), 0);
            enumerate_occupations(num_modes, n, cur, 0, m.basis_);
        }
    }
    for (std::size_t i = 0; i < m.basis_.size(); ++i)
        m.index_[m.basis_[i]] = static_cast<Eigen::Index>(i);
    return m;
}

FockModel FockModel::antisymmetric(int num_modes, int cutoff) {
    if (num_modes < 0 || cutoff < 0)
        throw std::invalid_argument("FockModel: negative size");
    FockModel m;
    m.statistics_ = Statistics::antisymmetric;
    m.num_modes_ = num_modes;
    m.cutoff_ = cutoff;
    const int max_n = std::min(num_modes, cutoff);
    for (int n = 0; n <= max_n; ++n) {
        std::vector<int> cur;
        enumerate_subsets(num_modes, n, 0, cur, m.basis_);
    }
    for (std::size_t i = 0; i < m.basis_.size(); ++i)
        m.index_[m.basis_[i]] = static_cast<Eigen::Index>(i);
    return m;
}

int FockModel::particle_number(Eigen::Index idx) const {
    const auto& s = state(idx);
    if (statistics_ == Statistics::antisymmetric) return static_cast<int>(s.size());
    int n = 0;
    for (int v : s) n += v;
    return n;
}

Eigen::Index FockModel::index_of(const std::vector<int>& state) const {
    auto it = index_.find(state);
    return it == index_.end() ? -1 : it->second;
}

CVector FockModel::vacuum() const {
    CVector v = CVector::Zero(dim());
    v(vacuum_index()) = 1.0;
    return v;
}

CVector exponential_vector(const FockModel& model, const CVector& u) {
    if (model.statistics() != Statistics::symmetric)
        throw std::invalid_argument("exponential_vector: symmetric models only");
    if (u.size() != model.num_modes())
        throw std::invalid_argument("exponential_vector: mode dimension mismatch");
    CVector out(model.dim());
    for (Eigen::Index idx = 0; idx < model.dim(); ++idx) {
        const auto& occ = model.state(idx);
        Complex coeff = 1.0;
        for (int i = 0; i < model.num_modes(); ++i) {
            const int n = occ[static_cast<std::size_t>(i)];
            Complex power = 1.0;
            for (int k = 0; k < n; ++k) power *= u(i);
            coeff *= power / std::sqrt(factorial(n));
        }
        out(idx) = coeff;
    }
    return out;
}

CMatrix creation(const FockModel& model, const CVector& f) {
    if (f.size() != model.num_modes())
        throw std::invalid_argument("creation: mode dimension mismatch");
    CMatrix a = CMatrix::Zero(model.dim(), model.dim());
    for (Eigen::Index idx = 0; idx < model.dim(); ++idx) {
        const auto& s = model.state(idx);
        for (int i = 0; i < model.num_modes(); ++i) {
            if (f(i) == Complex(0.0)) continue;
            if (model.statistics() == Statistics::symmetric) {
                std::vector<int> raised = s;
                ++raised[static_cast<std::size_t>(i)];
                const Eigen::Index target = model.index_of(raised);
                if (target < 0) continue;  // truncation: above the cutoff
                a(target, idx) += f(i) * std::sqrt(double(s[static_cast<std::size_t>(i)] + 1));
            } else {
                if (std::binary_search(s.begin(), s.end(), i)) continue;  // nilpotence
                std::vector<int> raised = s;
                const auto pos = std::lower_bound(raised.begin(), raised.end(), i);
                const int before = static_cast<int>(pos - raised.begin());
                raised.insert(pos, i);
                const Eigen::Index target = model.index_of(raised);
                if (target < 0) continue;
                const double sign = (before % 2 == 0) ? 1.0 : -1.0;
                a(target, idx) += f(i) * sign;
            }
        }
    }
    return a;
}

CMatrix annihilation(const FockModel& model, const CVector& f) {
    return creation(model, f).adjoint();
}

CMatrix weyl_operator(const FockModel& model, const CVector& u) {
    if (model.statistics() != Statistics::symmetric)
        throw std::invalid_argument("weyl_operator: symmetric models only");
    const CMatrix generator = creation(model, u) - annihilation(model, u);
    return generator.exp();
}

Complex weyl_kernel_eval(const CVector& u, const CVector& v, const CVector& w) {
    if (u.size() != v.size() || u.size() != w.size())
        throw std::invalid_argument("weyl_kernel_eval: dimension mismatch");
    const Complex exponent =
        -0.5 * u.squaredNorm() - u.dot(w) + v.dot(u + w);
    return std::exp(exponent);
}

Complex weyl_kernel_eval2(const CVector& u1, const CVector& u2, const CVector& a,
                          const CVector& b) {
    const Complex prefactor = std::exp(Complex(-0.5 * u2.squaredNorm()) - u2.dot(b));
    return prefactor * weyl_kernel_eval(u1, a, CVector(u2 + b));
}

namespace {

void check_isometry(const CMatrix& u, double tol, const char* op) {
    const CMatrix g = u.adjoint() * u;
    const double defect =
        (g - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    if (defect > tol) {
        throw std::invalid_argument(std::string(op) + ": mode map is not an isometry");
    }
}

// Apply the creation chain for one basis state. Symmetric: occupation powers;
// antisymmetric: ascending subset, rightmost factor applied first.
CVector apply_state_chain(const FockModel& target, const std::vector<CMatrix>& mode_creators,
                          const FockModel& source, Eigen::Index idx, CVector vec,
                          double* norm_factor) {
    const auto& s = source.state(idx);
    *norm_factor = 1.0;
    if (source.statistics() == Statistics::symmetric) {
        for (int i = 0; i < source.num_modes(); ++i) {
            const int n = s[static_cast<std::size_t>(i)];
            for (int rep = 0; rep < n; ++rep) vec = mode_creators[static_cast<std::size_t>(i)] * vec;
            *norm_factor *= factorial(n);
        }
    } else {
        for (auto it = s.rbegin(); it != s.rend(); ++it)
            vec = mode_creators[static_cast<std::size_t>(*it)] * vec;
    }
    return vec;
}

}  // namespace

CMatrix second_quantization(const FockModel& model_in, const FockModel& model_out,
                            const CMatrix& u, const Tolerances& tol) {
    if (model_in.statistics() != model_out.statistics())
        throw std::invalid_argument("second_quantization: statistics mismatch");
    if (model_in.cutoff() != model_out.cutoff())
        throw std::invalid_argument("second_quantization: particle cutoffs must match");
    if (u.rows() != model_out.num_modes() || u.cols() != model_in.num_modes())
        throw std::invalid_argument("second_quantization: mode map shape mismatch");
    check_isometry(u, tol.isometry, "second_quantization");

    std::vector<CMatrix> creators;
    creators.reserve(static_cast<std::size_t>(model_in.num_modes()));
    for (int i = 0; i < model_in.num_modes(); ++i)
        creators.push_back(creation(model_out, u.col(i)));

    CMatrix out = CMatrix::Zero(model_out.dim(), model_in.dim());
    const CVector vac = model_out.vacuum();
    for (Eigen::Index idx = 0; idx < model_in.dim(); ++idx) {
        double nf = 1.0;
        const CVector col = apply_state_chain(model_out, creators, model_in, idx, vac, &nf);
        out.col(idx) = col / std::sqrt(nf);
    }
    return out;
}

FactorizationResult factorization(const FockModel& model_1, const FockModel& model_2,
                                  const FockModel& joint, const CMatrix& embed_1,
                                  const CMatrix& embed_2, const Tolerances& tol) {
    if (model_1.statistics() != joint.statistics() || model_2.statistics() != joint.statistics())
        throw std::invalid_argument("factorization: statistics mismatch");
    if (model_1.cutoff() != joint.cutoff() || model_2.cutoff() != joint.cutoff())
        throw std::invalid_argument("factorization: particle cutoffs must match");
    if (embed_1.rows() != joint.num_modes() || embed_2.rows() != joint.num_modes() ||
        embed_1.cols() != model_1.num_modes() || embed_2.cols() != model_2.num_modes())
        throw std::invalid_argument("factorization: embedding shape mismatch");
    check_isometry(embed_1, tol.isometry, "factorization");
    check_isometry(embed_2, tol.isometry, "factorization");
    if (embed_1.cols() > 0 && embed_2.cols() > 0) {
        const double overlap = (embed_1.adjoint() * embed_2).cwiseAbs().maxCoeff();
        if (overlap > tol.isometry)
            throw std::invalid_argument("factorization: embedding ranges are not orthogonal");
    }

    std::vector<CMatrix> creators_1, creators_2;
    for (int i = 0; i < model_1.num_modes(); ++i)
        creators_1.push_back(creation(joint, embed_1.col(i)));
    for (int j = 0; j < model_2.num_modes(); ++j)
        creators_2.push_back(creation(joint, embed_2.col(j)));

    FactorizationResult result;
    result.map = CMatrix::Zero(joint.dim(), model_1.dim() * model_2.dim());
    const CVector vac = joint.vacuum();
    for (Eigen::Index i1 = 0; i1 < model_1.dim(); ++i1) {
        double nf1 = 1.0;
        const CVector partial = apply_state_chain(joint, creators_1, model_1, i1, vac, &nf1);
        const int n1 = model_1.particle_number(i1);
        for (Eigen::Index i2 = 0; i2 < model_2.dim(); ++i2) {
            const Eigen::Index col = i1 * model_2.dim() + i2;
            if (n1 + model_2.particle_number(i2) > joint.cutoff()) {
                ++result.dropped_pairs;  // drop and report, never renormalize
                continue;
            }
            double nf2 = 1.0;
            const CVector img = apply_state_chain(joint, creators_2, model_2, i2, partial, &nf2);
            result.map.col(col) = img / std::sqrt(nf1 * nf2);
        }
    }
    return result;
}

CMatrix parity_operator(const FockModel& model, const std::vector<int>& marked) {
    if (model.statistics() != Statistics::antisymmetric)
        throw std::invalid_argument("parity_operator: antisymmetric models only");
    for (int m : marked)
        if (m < 0 || m >= model.num_modes())
            throw std::invalid_argument("parity_operator: marked mode out of range");
    std::vector<int> sorted_marked = marked;
    std::sort(sorted_marked.begin(), sorted_marked.end());
    CMatrix r = CMatrix::Zero(model.dim(), model.dim());
    for (Eigen::Index idx = 0; idx < model.dim(); ++idx) {
        const auto& s = model.state(idx);
        int hits = 0;
        for (int m : s)
            if (std::binary_search(sorted_marked.begin(), sorted_marked.end(), m)) ++hits;
        r(idx, idx) = (hits % 2 == 0) ? 1.0 : -1.0;
    }
    return r;
}

double sector_compressed_norm(const FockModel& model, const CMatrix& m, int n_max) {
    if (m.rows() != model.dim() || m.cols() != model.dim())
        throw std::invalid_argument("sector_compressed_norm: operator dimension mismatch");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < model.dim(); ++i)
        if (model.particle_number(i) <= n_max) keep.push_back(i);
    CMatrix block(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t c = 0; c < keep.size(); ++c)
            block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(keep[r], keep[c]);
    return op_norm(block);
}

}  // namespace conefock
