#pragma once

#include <functional>

#include "bellfield/linalg.hpp"
#include "bellfield/numeric.hpp"
#include "bellfield/window.hpp"

namespace bellfield::model {

enum class Background { Minkowski, DeSitter };

const char* background_name(Background b);

struct SceneParams {
    Background background = Background::Minkowski;
    double HR = 0.0;     // patch radius over Hubble radius (de Sitter only)
    double alpha = 3.0;  // separation over radius
    double beta = 0.0;   // R / R_obs infrared cutoff
    double delta = 0.1;  // window ramp width

    double alpha_min() const { return 2.0 * (1.0 + delta); }
    void validate() const;
};

// reduced spectra in z = kR/a, already in the units of the covariance integrand
//   gamma_ab = 1/(3 pi G) int dz/z Wt^2(z) p_ab(z) [sinc(alpha z) off the diagonal blocks]
struct PowerSpectra {
    std::function<double(double)> p_phiphi;
    std::function<double(double)> p_phipi;
    std::function<double(double)> p_pipi;
};

PowerSpectra minkowski_spectra();
PowerSpectra desitter_spectra(double HR);

// the six independent entries; q = (phi1, pi1, phi2, pi2)
struct CovarianceMatrix {
    double g11 = 0.5, g12 = 0.0, g22 = 0.5, g13 = 0.0, g14 = 0.0, g24 = 0.0;

    linalg::Mat4 full() const;
    static CovarianceMatrix from_full(const linalg::Mat4& m);
};

struct ReducedA {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    double det() const { return a11 * a22 - a12 * a12; }
};

// gamma^{-1} split into field/momentum blocks, rows and columns ordered (patch 1, patch 2)
struct InverseBlocks {
    linalg::Mat2 ff, fp, pp;  // (gamma^-1)^{phi phi}, ^{phi pi}, ^{pi pi}
};

CovarianceMatrix build_covariance(const SceneParams& s);

// oracle path: direct quadrature of the spectral integrals
CovarianceMatrix covariance_from_spectra(const PowerSpectra& p, const SceneParams& s,
                                         const numeric::QuadratureSpec& spec = {});

double det(const CovarianceMatrix& g);

// Tr(rho^2) = 1/(4 sqrt(det gamma))
double purity(const CovarianceMatrix& g);

inline constexpr double kMaxCondition = 1e12;

InverseBlocks inverse_blocks(const CovarianceMatrix& g);

// Schur complement of the momentum block of gamma^{-1}
ReducedA reduced_a(const CovarianceMatrix& g);

}  // namespace bellfield::model
