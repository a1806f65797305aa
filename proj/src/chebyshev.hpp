#pragma once

#include "qfel/tridiagonal.hpp"

#include <complex>
#include <span>
#include <vector>

namespace qfel::detail {

/// J_0(x) ... J_kmax(x) for x >= 0 by Miller's backward recurrence,
/// normalised with J_0 + 2 sum_k J_2k = 1.
std::vector<double> bessel_j_sequence(double x, int kmax);

/// In-place psi <- exp(-i H dt) psi by Chebyshev expansion. The spectrum of
/// H must lie inside [center - radius, center + radius].
class ChebyshevStepper {
public:
    ChebyshevStepper(const SymmetricTridiagonal& h, double center, double radius);

    void step(std::vector<std::complex<double>>& psi, double dt);

    /// Largest radius * dt handled by a single expansion.
    static constexpr double kMaxArgument = 200.0;

private:
    void apply_scaled(const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const;

    const SymmetricTridiagonal& h_;
    double center_;
    double radius_;
    std::vector<std::complex<double>> prev_, curr_, next_, acc_;
};

} // namespace qfel::detail
