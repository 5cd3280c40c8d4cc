#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace conefock {

using IVec = Eigen::VectorXi;

inline std::vector<int> to_std(const IVec& v) {
    return std::vector<int>(v.data(), v.data() + v.size());
}
inline IVec from_std(const std::vector<int>& v) {
    IVec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

// Simplicial integer cone: d linearly independent generator columns in Z^d.
// Spanning and pointed by construction.
struct ConeSpec {
    int dim = 0;
    Eigen::MatrixXi generators;  // dim x dim, column j = g_j

    static ConeSpec orthant(int d);
    void validate() const;  // throws on dependent generators / shape mismatch
};

long long int_det(const Eigen::MatrixXi& m);

// Nonnegative integer coordinates of v in the generator basis, if they exist.
std::optional<IVec> cone_coordinates(const ConeSpec& cone, const IVec& v);
bool cone_contains(const ConeSpec& cone, const IVec& v);

// Coordinatewise box [lower, upper], the finite truncation device.
struct Window {
    IVec lower, upper;

    void validate() const;
    bool contains(const IVec& p) const;
    long long point_count() const;
    std::vector<IVec> points() const;  // lexicographic order
};

struct HalfSpace {
    IVec normal;
    long long offset = 0;  // constraint <normal, y> >= offset
};

// Discrete P-module region A: either an integer half-space intersection or an
// explicit finite point set within a declared window.
class LatticeModule {
public:
    static LatticeModule from_halfspaces(ConeSpec cone, std::vector<HalfSpace> halfspaces);
    static LatticeModule from_points(ConeSpec cone, const std::vector<IVec>& points,
                                     Window declared);

    bool contains(const IVec& p) const;
    const ConeSpec& cone() const { return cone_; }
    bool is_explicit() const { return is_explicit_; }
    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
    const std::set<std::vector<int>>& explicit_points() const { return points_; }
    const Window& declared_window() const { return declared_; }

private:
    ConeSpec cone_;
    std::vector<HalfSpace> halfspaces_;
    std::set<std::vector<int>> points_;
    Window declared_{};
    bool is_explicit_ = false;
};

struct ModuleCheckResult {
    bool ok = true;
    std::optional<std::pair<IVec, IVec>> violation;  // (point, generator)
};

// Verify A + g_j subset A for every generator, on every point of the window.
ModuleCheckResult module_check(const LatticeModule& a, const Window& w);

// {p in w : p - x in A}; x must lie in the cone.
std::vector<IVec> shifted_region(const LatticeModule& a, const IVec& x, const Window& w);

struct ProperPairCertificate {
    IVec x, y;
    IVec t1_witness, t2_witness;
    bool disjoint_verified = false;
    Window window;
};
struct ProperPairFailure {
    std::string reason;  // names which difference set was empty within the window
};
using ProperPairResult = std::variant<ProperPairCertificate, ProperPairFailure>;

// Set-level properness conditions: with T1 = (A+x)\(A+x+y) and
// T2 = (A+y)\(A+x+y) inside w, both T1\T2 and T2\T1 must be nonempty.
// Emptiness within the window is reported as such, never as global emptiness.
ProperPairResult proper_pair_check(const LatticeModule& a, const IVec& x, const IVec& y,
                                   const Window& w);

// Exhaustive scan over pairs (x, y) with cone coefficients in [0, budget],
// x != 0 != y, lexicographic in the coefficient vectors.
std::vector<ProperPairCertificate> proper_search(const LatticeModule& a, int budget,
                                                 const Window& w);

}  // namespace conefock
