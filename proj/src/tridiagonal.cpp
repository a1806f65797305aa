#include "qfel/tridiagonal.hpp"

#include "qfel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qfel {

void SymmetricTridiagonal::multiply(std::span<const double> x, std::span<double> y) const
{
    const auto n = dimension();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diagonal[i] * x[i];
        if (i > 0)
            acc += off_diagonal[i - 1] * x[i - 1];
        if (i + 1 < n)
            acc += off_diagonal[i] * x[i + 1];
        y[i] = acc;
    }
}

double SymmetricTridiagonal::norm_inf() const noexcept
{
    const auto n = dimension();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diagonal[i]);
        if (i > 0)
            row += std::abs(off_diagonal[i - 1]);
        if (i + 1 < n)
            row += std::abs(off_diagonal[i]);
        norm = std::max(norm, row);
    }
    return norm;
}

namespace {

constexpr int kMaxSweepsPerEigenvalue = 60;

// QL sweeps on (d, e) with e[n-1] == 0 on entry. When z is non-null the plane
// rotations are accumulated into the column-major n x n matrix z.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, double* z)
{
    const std::size_t n = d.size();
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int sweeps = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd)
                    break;
            }
            if (m == l)
                break;
            if (++sweeps > kMaxSweepsPerEigenvalue)
                throw NumericError("tridiagonal QL failed to converge for eigenvalue " + std::to_string(l)
                                   + " of " + std::to_string(n) + " after "
                                   + std::to_string(kMaxSweepsPerEigenvalue)
                                   + " sweeps; residual off-diagonal " + std::to_string(e[l]));

            // Wilkinson shift from the leading 2x2 block.
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool deflated = false;
            for (std::size_t i = m; i-- > l;) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                if (z != nullptr) {
                    double* zi = z + i * n;
                    double* zi1 = z + (i + 1) * n;
                    for (std::size_t k = 0; k < n; ++k) {
                        const double t = zi1[k];
                        zi1[k] = s * zi[k] + c * t;
                        zi[k] = c * zi[k] - s * t;
                    }
                }
            }
            if (deflated)
                continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

void prepare(const SymmetricTridiagonal& t, std::vector<double>& d, std::vector<double>& e)
{
    const auto n = t.dimension();
    if (n == 0)
        throw DomainError("cannot diagonalize an empty matrix");
    if (t.off_diagonal.size() + 1 != n)
        throw DomainError("off-diagonal length must be dimension - 1");
    d = t.diagonal;
    e.assign(n, 0.0);
    std::copy(t.off_diagonal.begin(), t.off_diagonal.end(), e.begin());
}

} // namespace

Spectrum diagonalize(const SymmetricTridiagonal& t)
{
    std::vector<double> d;
    std::vector<double> e;
    prepare(t, d, e);
    const auto n = d.size();

    std::vector<double> z(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        z[i * n + i] = 1.0;
    ql_implicit(d, e, z.data());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    Spectrum spectrum;
    spectrum.eigenvalues.resize(n);
    spectrum.eigenvectors.resize(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        spectrum.eigenvalues[j] = d[order[j]];
        std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(order[j] * n), n,
                    spectrum.eigenvectors.begin() + static_cast<std::ptrdiff_t>(j * n));
    }
    return spectrum;
}

std::vector<double> eigenvalues(const SymmetricTridiagonal& t)
{
    std::vector<double> d;
    std::vector<double> e;
    prepare(t, d, e);
    ql_implicit(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace qfel
