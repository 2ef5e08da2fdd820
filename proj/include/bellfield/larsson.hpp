#pragma once

#include <cstdint>

#include "bellfield/gkmr.hpp"
#include "bellfield/model.hpp"
#include "bellfield/numeric.hpp"

namespace bellfield::larsson {

struct LarssonConfig {
    double ell = 1.0;        // bin width on the field axis
    double tail_tol = 1e-10; // stop once a whole shell contributes less than this
    int max_shell = 400;
    numeric::QuadratureSpec quad;

    void validate() const;
};

// a~ = (1/2) (gamma^-1)^{phi pi} [(gamma^-1)^{pi pi}]^-1 eps
struct LarssonAuxiliary {
    double a_tilde_1 = 0.0;
    double a_tilde_2 = 0.0;
};

LarssonAuxiliary auxiliary(const model::CovarianceMatrix& g, int eps1, int eps2);

// sign-alternating bins [n l, (n+1) l] x [m l, (m+1) l]
double z_term(int n, int m, const model::ReducedA& a, const LarssonConfig& cfg);

// one sign vector of the S_x term, including its exp(-l^2 eps.S.eps / 2) damping
numeric::cplx x_term_epsilon(int n, int m, const model::CovarianceMatrix& g, const LarssonConfig& cfg,
                             int eps1, int eps2);

// sum over the four sign vectors; the imaginary parts cancel in +-eps pairs
double x_term(int n, int m, const model::CovarianceMatrix& g, const LarssonConfig& cfg);

struct SumResult {
    double value = 0.0;
    int shells = 0;      // outermost shell summed
    double tail = 0.0;   // |contribution| of that shell
    bool approx = false; // small-l closed form used: shells needed exceed max_shell
};

SumResult szsz_larsson(const model::CovarianceMatrix& g, const LarssonConfig& cfg);
SumResult sxsx_larsson(const model::CovarianceMatrix& g, const LarssonConfig& cfg);
double sxsz_larsson();

struct LarssonSet {
    gkmr::CorrelatorSet correlators;
    int shells = 0;
    double tail = 0.0;
    bool approx = false;
};

LarssonSet bell_larsson(const model::CovarianceMatrix& g, const LarssonConfig& cfg);

// small-l closed forms
double small_ell_sxsx(const model::CovarianceMatrix& g, double ell);
double small_ell_szsz(const model::ReducedA& a, double ell);

// shells the sums start from, and the smallest l whose sums fit in max_shell
int initial_shell(const model::ReducedA& a, double ell);
double min_reachable_ell(const model::ReducedA& a, int max_shell);

// phase-space oracle for both correlators
struct McLarsson {
    numeric::McResult sxsx, szsz;
};

McLarsson mc_larsson(const model::CovarianceMatrix& g, double ell, int n_samples, std::uint64_t seed);

}  // namespace bellfield::larsson
