#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "bellfield/linalg.hpp"

namespace bellfield::numeric {

using cplx = std::complex<double>;

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double pi = 3.14159265358979323846264338327950288;

struct Constants {
    double euler_gamma = numeric::euler_gamma;
};

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 4000;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
};

// special functions

double cosine_integral(double x);
double sine_integral(double x);

// generalized exponential integral E_n(z), n >= 1, z off the negative real axis
cplx expint(int n, cplx z);

double erf_real(double x);

// Faddeeva w(z) = exp(-z^2) erfc(-iz), valid for Im z >= 0 (extended by symmetry below)
cplx faddeeva(cplx z);

// threshold on Im(z)^2 - Re(z)^2 beyond which erf_complex reports a range error
inline constexpr double erf_overflow_exponent = 700.0;

cplx erf_complex(cplx z);

// exp(-Im(z)^2) * erf(z); bounded for any z, used where the caller carries the
// compensating Gaussian factor itself
cplx erf_complex_scaled(cplx z);

// quadrature

// adaptive Gauss-Kronrod (10/21 points per panel, refined where the error is
// largest). b may be +infinity.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

// integrate [a,b] as a sequence of equal panels, each adaptively
QuadResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                            int panels, const QuadratureSpec& spec = {});

struct GaussRule {
    std::vector<double> nodes;    // on [-1,1]
    std::vector<double> weights;
};

// Gauss-Legendre rule of order n (Newton on the Legendre recurrence), cached per n
const GaussRule& gauss_legendre(int n);

// truncated double series over square shells max(|n|,|m|) = N

struct DoubleSumResult {
    double value = 0.0;
    int shells = 0;           // last shell index summed
    double last_shell = 0.0;  // sum of |term| over that shell
};

DoubleSumResult truncated_double_sum(const std::function<double(int, int)>& term,
                                     double tail_tol, int max_order, int min_order = 0);

// counter-based random numbers and the Gaussian Monte-Carlo oracle

// Philox4x32-10: stateless map (key, counter) -> 4 random words
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);
    double uniform();          // (0,1)
    double normal();
    std::uint64_t counter() const { return ctr_; }

private:
    void refill();
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t ctr_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

using PhasePoint = std::array<double, 4>;
using PhaseFunction = std::function<double(const PhasePoint&)>;

struct McResult {
    double mean = 0.0;
    double std_error = 0.0;
};

// (2pi)^2 E[g(q)] for q ~ N(0, gamma): with g the Weyl symbol of an operator
// this is its expectation value (g = 1/(2pi)^2 gives 1)
McResult gaussian_mc_expectation(const linalg::Mat4& gamma, const PhaseFunction& g,
                                 long n_samples, std::uint64_t seed);

// several functionals on one shared sample stream
std::vector<McResult> gaussian_mc_expectations(const linalg::Mat4& gamma,
                                               const std::vector<PhaseFunction>& gs,
                                               long n_samples, std::uint64_t seed);

}  // namespace bellfield::numeric
