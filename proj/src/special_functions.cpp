#include "qfel/special_functions.hpp"

#include "qfel/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qfel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAgmSteps = 64;

} // namespace

EllipticModulus EllipticModulus::from_modulus(double k)
{
    if (!(k >= 0.0 && k < 1.0))
        throw DomainError("elliptic modulus must satisfy 0 <= k < 1, got " + std::to_string(k));
    // (1 - k)(1 + k) keeps full relative precision for k near 1.
    return EllipticModulus(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

EllipticModulus EllipticModulus::from_complementary(double kc)
{
    if (!(kc > 0.0 && kc <= 1.0))
        throw DomainError("complementary modulus must satisfy 0 < k' <= 1, got " + std::to_string(kc));
    return EllipticModulus(std::sqrt((1.0 - kc) * (1.0 + kc)), kc);
}

double complete_elliptic_k(const EllipticModulus& m)
{
    double a = 1.0;
    double b = m.complementary();
    for (int i = 0; i < kMaxAgmSteps && std::abs(a - b) > kEps * a; ++i) {
        const double next = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = next;
    }
    return std::numbers::pi / (a + b);
}

double complete_elliptic_k(double k)
{
    return complete_elliptic_k(EllipticModulus::from_modulus(k));
}

double complete_elliptic_k_asymptote(const EllipticModulus& m)
{
    return std::log(4.0 / m.complementary());
}

JacobiValues jacobi_elliptic(double u, const EllipticModulus& m)
{
    if (!std::isfinite(u))
        throw DomainError("jacobi elliptic functions need a finite argument");

    const double k = m.k();
    const double kc = m.complementary();
    if (k == 0.0)
        return {std::sin(u), std::cos(u), 1.0};

    const double period = 4.0 * complete_elliptic_k(m);
    if (std::abs(u) > period)
        u = std::remainder(u, period);

    // Descending AGM sequence with c_n = c_{n-1}^2 / (4 a_n), which avoids the
    // cancellation in (a - b) / 2 once a and b have nearly met.
    std::array<double, kMaxAgmSteps + 1> a{};
    std::array<double, kMaxAgmSteps + 1> c{};
    a[0] = 1.0;
    c[0] = k;
    double b = kc;
    int n = 0;
    while (std::abs(c[n]) > kEps * a[n]) {
        if (n == kMaxAgmSteps)
            throw NumericError("AGM for jacobi elliptic functions did not converge");
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.25 * c[n] * c[n] / a[n + 1];
        b = std::sqrt(a[n] * b);
        ++n;
    }

    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i > 0; --i)
        phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));

    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn^2 = k'^2 + k^2 cn^2 stays accurate when k'^2 is tiny.
    const double dn = std::sqrt(kc * kc + k * k * cn * cn);
    return {sn, cn, dn};
}

double jacobi_sn(double u, double k)
{
    return jacobi_elliptic(u, EllipticModulus::from_modulus(k)).sn;
}

double jacobi_cn(double u, double k)
{
    return jacobi_elliptic(u, EllipticModulus::from_modulus(k)).cn;
}

double jacobi_dn(double u, double k)
{
    return jacobi_elliptic(u, EllipticModulus::from_modulus(k)).dn;
}

JacobiValues jacobi_elliptic_unit_limit(double u)
{
    if (!std::isfinite(u))
        throw DomainError("jacobi elliptic functions need a finite argument");
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
}

} // namespace qfel
