#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/numeric.hpp"

namespace bellfield::numeric {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, stream_(stream) {}

void CounterRng::refill() {
    buf_ = philox4x32({std::uint32_t(ctr_), std::uint32_t(ctr_ >> 32), std::uint32_t(stream_),
                       std::uint32_t(stream_ >> 32)},
                      key_);
    ++ctr_;
    pos_ = 0;
}

double CounterRng::uniform() {
    if (pos_ > 2) refill();
    std::uint64_t hi = buf_[pos_], lo = buf_[pos_ + 1];
    pos_ += 2;
    std::uint64_t bits = ((hi << 32) | lo) >> 11;  // 53 bits
    return (double(bits) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
}

std::vector<McResult> gaussian_mc_expectations(const linalg::Mat4& gamma,
                                               const std::vector<PhaseFunction>& gs,
                                               long n_samples, std::uint64_t seed) {
    if (n_samples < 1000) throw DomainError("gaussian_mc_expectation: need at least 1e3 samples");
    if (!linalg::is_symmetric(gamma, 1e-10)) throw MatrixError("covariance is not symmetric");
    linalg::Mat4 L = linalg::cholesky(gamma);
    const double norm = 4.0 * pi * pi;
    std::vector<double> sum(gs.size(), 0.0), sum2(gs.size(), 0.0);
    CounterRng rng(seed);
    PhasePoint z{}, q{};
    for (long s = 0; s < n_samples; ++s) {
        for (double& v : z) v = rng.normal();
        for (int i = 0; i < 4; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= i; ++k) acc += L[i][k] * z[k];
            q[i] = acc;
        }
        for (std::size_t j = 0; j < gs.size(); ++j) {
            double v = norm * gs[j](q);
            sum[j] += v;
            sum2[j] += v * v;
        }
    }
    std::vector<McResult> out(gs.size());
    double n = double(n_samples);
    for (std::size_t j = 0; j < gs.size(); ++j) {
        double mean = sum[j] / n;
        double var = std::max(0.0, sum2[j] / n - mean * mean) * n / (n - 1.0);
        out[j] = {mean, std::sqrt(var / n)};
    }
    return out;
}

McResult gaussian_mc_expectation(const linalg::Mat4& gamma, const PhaseFunction& g,
                                 long n_samples, std::uint64_t seed) {
    return gaussian_mc_expectations(gamma, {g}, n_samples, seed)[0];
}

}  // namespace bellfield::numeric
