#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace conefock {

// Counter-based generator (splitmix64). Output depends only on (seed, counter),
// so streams reproduce bit-exactly across platforms and runs.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * ++counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [-1, 1)
    double symmetric() { return 2.0 * uniform() - 1.0; }

    std::complex<double> complex_box() {
        double re = symmetric();
        double im = symmetric();
        return {re, im};
    }

    Eigen::VectorXcd complex_vector(Eigen::Index n) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_box();
        return v;
    }

    // index in [0, n)
    std::uint64_t index(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace conefock
