#include "conefock/cone.hpp"

#include "conefock/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace conefock {

ConeSpec ConeSpec::orthant(int d) {
    ConeSpec c;
    c.dim = d;
    c.generators = Eigen::MatrixXi::Identity(d, d);
    return c;
}

void ConeSpec::validate() const {
    if (dim <= 0) throw std::invalid_argument("ConeSpec: dimension must be positive");
    if (generators.rows() != dim || generators.cols() != dim)
        throw std::invalid_argument("ConeSpec: generator matrix must be dim x dim");
    if (int_det(generators) == 0)
        throw std::invalid_argument("ConeSpec: generators are linearly dependent");
}

long long int_det(const Eigen::MatrixXi& m) {
    // Bareiss fraction-free elimination, exact over long long for desk-scale inputs.
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("int_det: matrix not square");
    if (n == 0) return 1;
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<long long>();
    long long sign = 1;
    long long prev = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            Eigen::Index pivot = k + 1;
            while (pivot < n && a(pivot, k) == 0) ++pivot;
            if (pivot == n) return 0;
            a.row(k).swap(a.row(pivot));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::optional<IVec> cone_coordinates(const ConeSpec& cone, const IVec& v) {
    if (v.size() != cone.dim)
        throw std::invalid_argument("cone_coordinates: dimension mismatch");
    const long long det = int_det(cone.generators);
    IVec coords(cone.dim);
    for (int j = 0; j < cone.dim; ++j) {
        Eigen::MatrixXi replaced = cone.generators;
        replaced.col(j) = v;
        const long long dj = int_det(replaced);
        if (dj % det != 0) return std::nullopt;  // non-integer solution
        const long long c = dj / det;
        if (c < 0) return std::nullopt;
        coords(j) = static_cast<int>(c);
    }
    return coords;
}

bool cone_contains(const ConeSpec& cone, const IVec& v) {
    return cone_coordinates(cone, v).has_value();
}

void Window::validate() const {
    if (lower.size() != upper.size())
        throw std::invalid_argument("Window: lower/upper dimension mismatch");
    for (Eigen::Index i = 0; i < lower.size(); ++i)
        if (lower(i) > upper(i))
            throw std::invalid_argument("Window: lower exceeds upper");
}

bool Window::contains(const IVec& p) const {
    if (p.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) < lower(i) || p(i) > upper(i)) return false;
    return true;
}

long long Window::point_count() const {
    long long n = 1;
    for (Eigen::Index i = 0; i < lower.size(); ++i) n *= upper(i) - lower(i) + 1;
    return n;
}

std::vector<IVec> Window::points() const {
    validate();
    std::vector<IVec> out;
    out.reserve(static_cast<std::size_t>(point_count()));
    IVec p = lower;
    const Eigen::Index d = lower.size();
    while (true) {
        out.push_back(p);
        Eigen::Index i = d;
        while (i > 0) {
            --i;
            if (p(i) < upper(i)) {
                ++p(i);
                for (Eigen::Index j = i + 1; j < d; ++j) p(j) = lower(j);
                break;
            }
            if (i == 0) return out;
        }
    }
}

LatticeModule LatticeModule::from_halfspaces(ConeSpec cone, std::vector<HalfSpace> halfspaces) {
    cone.validate();
    LatticeModule m;
    m.cone_ = std::move(cone);
    for (const auto& h : halfspaces)
        if (h.normal.size() != m.cone_.dim)
            throw std::invalid_argument("LatticeModule: half-space dimension mismatch");
    m.halfspaces_ = std::move(halfspaces);
    m.is_explicit_ = false;
    return m;
}

LatticeModule LatticeModule::from_points(ConeSpec cone, const std::vector<IVec>& points,
                                         Window declared) {
    cone.validate();
    declared.validate();
    LatticeModule m;
    m.cone_ = std::move(cone);
    for (const auto& p : points) {
        if (p.size() != m.cone_.dim)
            throw std::invalid_argument("LatticeModule: point dimension mismatch");
        m.points_.insert(to_std(p));
    }
    m.declared_ = std::move(declared);
    m.is_explicit_ = true;
    return m;
}

bool LatticeModule::contains(const IVec& p) const {
    if (p.size() != cone_.dim) return false;
    if (is_explicit_) return points_.count(to_std(p)) > 0;
    for (const auto& h : halfspaces_) {
        long long dot = 0;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            dot += static_cast<long long>(h.normal(i)) * p(i);
        if (dot < h.offset) return false;
    }
    return true;
}

ModuleCheckResult module_check(const LatticeModule& a, const Window& w) {
    const auto& gens = a.cone().generators;
    for (const IVec& p : w.points()) {
        if (!a.contains(p)) continue;
        for (int j = 0; j < a.cone().dim; ++j) {
            const IVec q = p + gens.col(j);
            if (w.contains(q) && !a.contains(q))
                return ModuleCheckResult{false, std::make_pair(p, IVec(gens.col(j)))};
        }
    }
    return ModuleCheckResult{};
}

std::vector<IVec> shifted_region(const LatticeModule& a, const IVec& x, const Window& w) {
    if (!cone_contains(a.cone(), x))
        throw std::invalid_argument("shifted_region: shift vector not in the cone");
    std::vector<IVec> out;
    for (const IVec& p : w.points())
        if (a.contains(p - x)) out.push_back(p);
    return out;
}

ProperPairResult proper_pair_check(const LatticeModule& a, const IVec& x, const IVec& y,
                                   const Window& w) {
    const auto cx = cone_coordinates(a.cone(), x);
    const auto cy = cone_coordinates(a.cone(), y);
    if (!cx || cx->isZero() || !cy || cy->isZero())
        throw std::invalid_argument("proper_pair_check: x, y must lie in P \\ {0}");

    std::set<std::vector<int>> d1, d2;  // T1\T2 and T2\T1
    for (const IVec& p : w.points()) {
        const bool in_axy = a.contains(p - x - y);
        if (in_axy) continue;
        const bool t1 = a.contains(p - x);
        const bool t2 = a.contains(p - y);
        if (t1 && !t2) d1.insert(to_std(p));
        if (t2 && !t1) d2.insert(to_std(p));
    }
    if (d1.empty() || d2.empty()) {
        std::ostringstream reason;
        if (d1.empty()) reason << "T1\\T2 empty within window";
        if (d1.empty() && d2.empty()) reason << "; ";
        if (d2.empty()) reason << "T2\\T1 empty within window";
        return ProperPairFailure{reason.str()};
    }
    // The two difference sets are disjoint by construction; assert it anyway.
    for (const auto& p : d1)
        if (d2.count(p))
            throw CrossCheckError("proper_pair_check: difference sets intersect");
    ProperPairCertificate cert;
    cert.x = x;
    cert.y = y;
    cert.t1_witness = from_std(*d1.begin());
    cert.t2_witness = from_std(*d2.begin());
    cert.disjoint_verified = true;
    cert.window = w;
    return cert;
}

std::vector<ProperPairCertificate> proper_search(const LatticeModule& a, int budget,
                                                 const Window& w) {
    if (budget < 1) return {};
    const int d = a.cone().dim;
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
    std::vector<ProperPairCertificate> out;
    for (const IVec& nx : coeffs) {
        const IVec x = a.cone().generators * nx;
        for (const IVec& ny : coeffs) {
            const IVec y = a.cone().generators * ny;
            auto result = proper_pair_check(a, x, y, w);
            if (auto* cert = std::get_if<ProperPairCertificate>(&result))
                out.push_back(*cert);
        }
    }
    return out;
}

}  // namespace conefock
