#include <cmath>
#include <limits>

#include "bellfield/errors.hpp"
#include "bellfield/numeric.hpp"

namespace bellfield::numeric {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double tiny = 1e-300;

// Ci and Si together; x > 0
void cisi(double x, double& ci, double& si) {
    if (x <= 2.0) {
        // power series, no cancellation worth mentioning for x <= 2
        double x2 = x * x;
        double sc = 0.0, ss = x;
        double tc = 1.0, ts = x;
        for (int k = 1; k < 60; ++k) {
            tc *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
            ts *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            double dc = tc / (2.0 * k);
            double ds = ts / (2.0 * k + 1.0);
            sc += dc;
            ss += ds;
            if (std::fabs(dc) < eps * 1e-2 * std::fabs(sc) + tiny &&
                std::fabs(ds) < eps * 1e-2 * std::fabs(ss))
                break;
        }
        ci = euler_gamma + std::log(x) + sc;
        si = ss;
        return;
    }
    // continued fraction for E1(ix), modified Lentz
    cplx b(1.0, x);
    cplx c(1.0 / tiny, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 2; i < 100000; ++i) {
        double a = -double(i - 1) * double(i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        cplx del = c * d;
        h *= del;
        if (std::fabs(del.real() - 1.0) + std::fabs(del.imag()) < eps) break;
    }
    h *= cplx(std::cos(x), -std::sin(x));
    ci = -h.real();
    si = pi / 2 + h.imag();
}

}  // namespace

double cosine_integral(double x) {
    if (!(x > 0.0)) throw DomainError("cosine_integral: x must be positive");
    if (std::isinf(x)) return 0.0;
    double ci, si;
    cisi(x, ci, si);
    return ci;
}

double sine_integral(double x) {
    if (x == 0.0) return 0.0;
    if (x < 0.0) return -sine_integral(-x);
    if (std::isinf(x)) return pi / 2;
    double ci, si;
    cisi(x, ci, si);
    return si;
}

cplx expint(int n, cplx z) {
    if (n < 1) throw DomainError("expint: order must be >= 1");
    if (z == cplx(0.0)) {
        if (n == 1) throw DomainError("expint: E1(0) diverges");
        return 1.0 / double(n - 1);
    }
    if (z.real() < 0.0 && z.imag() == 0.0)
        throw DomainError("expint: branch cut on the negative real axis");
    if (std::abs(z) <= 1.0) {
        // ascending series
        cplx ans = (n - 1 != 0) ? cplx(1.0 / (n - 1)) : -std::log(z) - euler_gamma;
        cplx fact = 1.0;
        for (int i = 1; i < 200; ++i) {
            fact *= -z / double(i);
            cplx del;
            if (i != n - 1) {
                del = -fact / double(i - n + 1);
            } else {
                double psi = -euler_gamma;
                for (int k = 1; k <= n - 1; ++k) psi += 1.0 / k;
                del = fact * (-std::log(z) + psi);
            }
            ans += del;
            if (std::abs(del) < std::abs(ans) * eps * 0.5) break;
        }
        return ans;
    }
    // continued fraction, modified Lentz
    cplx b = z + double(n);
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 200000; ++i) {
        double a = -double(i) * double(n - 1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h * std::exp(-z);
    }
    throw ConvergenceError("expint: continued fraction did not converge", 0.0, 0.0);
}

double erf_real(double x) { return std::erf(x); }

}  // namespace bellfield::numeric
