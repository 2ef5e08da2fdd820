#pragma once

#include <vector>

#include "bellfield/numeric.hpp"

namespace bellfield::window {

double F_of(double delta);
double G_of(double delta);

// compact window: plateau on [0,1], linear ramp to zero on (1, 1+delta]
class WindowSpec {
public:
    explicit WindowSpec(double delta);

    double delta() const { return delta_; }
    double F() const { return F_; }
    double G() const { return G_; }
    double edge() const { return 1.0 + delta_; }

    // Maclaurin coefficients: Wt(z) = sum w[m] z^(2m), Wt^2(z) = sum g[k] z^(2k)
    const std::vector<double>& wt_coefficients() const { return w_; }
    const std::vector<double>& wt2_coefficients() const { return g_; }

private:
    double delta_, F_, G_;
    std::vector<double> w_, g_;
};

double window_value(double x, const WindowSpec& w);

// Fourier transform normalized to Wt(0) = 1
double window_fourier(double z, const WindowSpec& w);

// delta -> 0 limit (top hat): 3 (sin z - z cos z) / z^3
double window_fourier_tophat(double z);

// below this |(1+delta) z| the Maclaurin series replaces the closed form
inline constexpr double series_switch = 1.5;

// ---- moment integrals K_mu(beta, delta) and L_mu(alpha, beta, delta)

struct IntegralParams {
    int mu = 1;            // -1, 1 or 3
    double alpha = 0.0;    // separation in units of R
    double beta = 0.0;     // infrared cutoff
    double delta = 0.1;    // window ramp width; 0 means top hat

    void validate(bool needs_alpha) const;
};

enum class Method { Split, Multipole, Quadrature };
const char* method_name(Method m);

struct IntegralResult {
    double value = 0.0;
    Method method = Method::Split;
};

// analytic evaluation: Maclaurin series below a matching point, exact
// exponential-integral pieces above it, or a multipole series for L at large
// alpha. Falls back to quadrature where neither is well conditioned.
IntegralResult integral_K_detailed(const IntegralParams& p);
IntegralResult integral_L_detailed(const IntegralParams& p);
double integral_K(const IntegralParams& p);
double integral_L(const IntegralParams& p);

// quadrature path (panelled Gauss-Kronrod up to a far cutoff plus an exact tail)
double integral_K_quadrature(const IntegralParams& p, const numeric::QuadratureSpec& spec = {});
double integral_L_quadrature(const IntegralParams& p, const numeric::QuadratureSpec& spec = {});

}  // namespace bellfield::window
