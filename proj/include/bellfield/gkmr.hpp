#pragma once

#include "bellfield/model.hpp"
#include "bellfield/numeric.hpp"

namespace bellfield::gkmr {

struct CorrelatorSet {
    double sxsx = 0.0;
    double szsz = 0.0;
    double sxsz = 0.0;
    double bell = 0.0;
    double purity = 0.0;
};

// Tr(rho^2); same code path as model::purity
double szsz(const model::CovarianceMatrix& g);

// -(2/pi) arctan(a12 / sqrt(det a)) with a the Schur complement of gamma^-1
double sxsx(const model::CovarianceMatrix& g);

// vanishes identically: its phase-space integrand is odd in the first field
double sxsz(const model::CovarianceMatrix& g);

// B = 2 sqrt(szsz^2 + sxsx^2), the CHSH value at the optimal (xz)-plane angles
CorrelatorSet bell(const model::CovarianceMatrix& g);

// explicit CHSH with a = S_z, a' = S_x, b = sin t S_x + cos t S_z, b' likewise with t'
struct SpinCorrelations {
    double zz = 0.0, zx = 0.0, xz = 0.0, xx = 0.0;  // <S_i(x1) S_j(x2)>
};

double chsh(const SpinCorrelations& c, double theta, double theta_prime);

struct ChshMax {
    double value = 0.0;
    double theta = 0.0;
    double theta_prime = 0.0;
};

// numerical maximum of chsh over both angles
ChshMax chsh_maximize(const SpinCorrelations& c);

// ---- asymptotic forms

// small delta, large alpha; delta = 0 gives 16 / (9 pi alpha^2)
double minkowski_bell_approx(double alpha, double delta);
double minkowski_bell_plateau(double delta);

struct SpinPair {
    double sxsx = 0.0;
    double szsz = 0.0;
};

SpinPair desitter_smallHR_approx(double alpha, double beta, double delta, double HR);
SpinPair desitter_largeHR_approx(double alpha, double beta, double delta, double HR);

// ---- phase-space oracle
//
// Weyl symbols of the product operators sampled under the Wigner function.
// The S_z symbol is a product of delta functions; it is replaced by Gaussians of
// width h, whose exact expectation is szsz(gamma + h^2 I); that term is sampled
// from the kernel side (Wigner function averaged over N(0, h^2 I)).
struct McCorrelators {
    numeric::McResult sxsx, szsz_smoothed, sxsz;
    double szsz_smoothed_exact = 0.0;
};

McCorrelators mc_correlators(const model::CovarianceMatrix& g, int n_samples, std::uint64_t seed,
                             double h = 0.05);

// (2pi)^2 W(0) / 4 with the Wigner function normalized from a Cholesky factor
double szsz_from_wigner_origin(const model::CovarianceMatrix& g);

}  // namespace bellfield::gkmr
