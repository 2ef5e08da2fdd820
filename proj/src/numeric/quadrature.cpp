#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <vector>

#include "bellfield/errors.hpp"
#include "bellfield/numeric.hpp"

namespace bellfield::numeric {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21)
constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478278, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * wgk[10];
    double resg = 0.0;
    for (int j = 0; j < 10; ++j) {
        double dx = h * xgk[j];
        double s = f(c - dx) + f(c + dx);
        resk += wgk[j] * s;
        if (j % 2 == 1) resg += wg[j / 2] * s;
    }
    resk *= h;
    resg *= h;
    return {a, b, resk, std::fabs(resk - resg)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return {};
    if (std::isinf(b)) {
        if (b < 0) throw DomainError("integrate: lower-infinite ranges are not supported");
        // z = a + t/(1-t)
        auto g = [&](double t) {
            double u = 1.0 - t;
            double v = f(a + t / u) / (u * u);
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate(g, 0.0, 1.0, spec);
    }
    if (b < a) {
        QuadResult r = integrate(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Panel> heap;
    Panel first = gk21(f, a, b);
    heap.push(first);
    double total = first.value, err = first.error;
    int evals = 21, subdiv = 1;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
        if (subdiv >= spec.max_subdivisions)
            throw ConvergenceError("integrate: subdivision limit reached", total, err);
        Panel p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            // interval cannot be split further in double precision
            throw ConvergenceError("integrate: roundoff limit reached", total, err);
        }
        Panel l = gk21(f, p.a, m), r = gk21(f, m, p.b);
        evals += 42;
        ++subdiv;
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        if (heap.size() % 64 == 0) {
            // refresh the running sums against drift
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, err, subdiv, evals};
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec) {
    return integrate(f, a, b, spec).value;
}

QuadResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                            int panels, const QuadratureSpec& spec) {
    if (panels < 1) panels = 1;
    QuadResult out;
    double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        double lo = a + i * h;
        double hi = (i + 1 == panels) ? b : a + (i + 1) * h;
        QuadratureSpec s = spec;
        // each panel gets its share of the absolute budget
        s.abs_tol = spec.abs_tol / panels;
        QuadResult r = integrate(f, lo, hi, s);
        out.value += r.value;
        out.error += r.error;
        out.subdivisions += r.subdivisions;
        out.evaluations += r.evaluations;
    }
    return out;
}

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

DoubleSumResult truncated_double_sum(const std::function<double(int, int)>& term,
                                     double tail_tol, int max_order, int min_order) {
    if (!(tail_tol > 0.0)) throw DomainError("truncated_double_sum: tail_tol must be > 0");
    DoubleSumResult res;
    res.value = term(0, 0);
    res.last_shell = std::fabs(res.value);
    res.shells = 0;
    if (res.last_shell < tail_tol && min_order <= 0) return res;
    for (int N = 1; N <= max_order; ++N) {
        double s = 0.0, a = 0.0;
        // fixed order: top and bottom rows, then the two side columns
        for (int n = -N; n <= N; ++n) {
            double t1 = term(n, N), t2 = term(n, -N);
            s += t1 + t2;
            a += std::fabs(t1) + std::fabs(t2);
        }
        for (int m = -N + 1; m <= N - 1; ++m) {
            double t1 = term(N, m), t2 = term(-N, m);
            s += t1 + t2;
            a += std::fabs(t1) + std::fabs(t2);
        }
        res.value += s;
        res.shells = N;
        res.last_shell = a;
        if (a < tail_tol && N >= min_order) return res;
    }
    throw ConvergenceError("truncated_double_sum: max_order reached before tail_tol",
                           res.value, res.last_shell);
}

}  // namespace bellfield::numeric
