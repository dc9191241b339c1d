#include "rkm/eigensym.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "rkm/errors.hpp"

namespace rkm {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, working on
// the lower triangle. Produces the diagonal d and subdiagonal e (e[0] = 0);
// the orthogonal transform is not accumulated since only eigenvalues are
// needed.
void householder_tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                                std::vector<double>& e) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    double gg = 0.0;
                    for (int k = 0; k <= j; ++k) gg += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) gg += at(k, j) * at(i, k);
                    e[j] = gg / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    const double gg = e[j] - hh * f;
                    e[j] = gg;
                    for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + gg * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
    }
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues land in d.
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e, int n, double tol) {
    const double eps = std::max(tol, std::numeric_limits<double>::epsilon());
    constexpr int kMaxIterationsPerEigenvalue = 50;

    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxIterationsPerEigenvalue) {
                    throw ConvergenceFailureError(
                        "QL iteration exceeded " + std::to_string(kMaxIterationsPerEigenvalue) +
                        " steps for one eigenvalue");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        // Recover from underflow by deflating early.
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n, double tol) {
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    if (n == 0) return d;
    if (n == 1) {
        d[0] = a[0];
        return d;
    }
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    householder_tridiagonalize(a, n, d, e);
    ql_implicit_shift(d, e, n, tol);
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace rkm
