#pragma once

// Complete elliptic integral of the first kind and the Jacobi elliptic
// functions sn, cn, dn for real argument and real modulus 0 <= k < 1.
//
// Both are evaluated through the arithmetic-geometric mean. The modulus is
// carried together with its complement k' = sqrt(1 - k^2) so that callers
// working close to k = 1 can supply k' directly and avoid the cancellation
// in 1 - k^2.

namespace qfel {

class EllipticModulus {
public:
    /// Throws DomainError unless 0 <= k < 1.
    static EllipticModulus from_modulus(double k);
    /// Construct from the complementary modulus k' = sqrt(1 - k^2), 0 < k' <= 1.
    static EllipticModulus from_complementary(double kc);

    double k() const noexcept { return k_; }
    double complementary() const noexcept { return kc_; }

private:
    EllipticModulus(double k, double kc) noexcept : k_(k), kc_(kc) {}
    double k_;
    double kc_;
};

struct JacobiValues {
    double sn;
    double cn;
    double dn;
};

/// K(k) = integral_0^{pi/2} dy / sqrt(1 - k^2 sin^2 y).
double complete_elliptic_k(const EllipticModulus& m);
double complete_elliptic_k(double k);

/// sn, cn and dn at once. Throws DomainError for non-finite u.
JacobiValues jacobi_elliptic(double u, const EllipticModulus& m);

double jacobi_sn(double u, double k);
double jacobi_cn(double u, double k);
double jacobi_dn(double u, double k);

/// k = 1 limit: sn = tanh u, cn = dn = sech u.
JacobiValues jacobi_elliptic_unit_limit(double u);

/// Leading asymptote ln(4 / k') of K as k -> 1.
double complete_elliptic_k_asymptote(const EllipticModulus& m);

} // namespace qfel
