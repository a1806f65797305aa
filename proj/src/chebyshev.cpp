#include "chebyshev.hpp"

#include "qfel/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qfel::detail {

std::vector<double> bessel_j_sequence(double x, int kmax)
{
    if (kmax < 0)
        kmax = 0;
    std::vector<double> j(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("bessel_j_sequence needs a finite non-negative argument");

    const double top = std::max(static_cast<double>(kmax), x);
    int start = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
    start += start % 2;

    std::vector<double> all(static_cast<std::size_t>(start) + 2, 0.0);
    all[static_cast<std::size_t>(start)] = 1e-300;
    const double two_over_x = 2.0 / x;
    for (int k = start; k > 0; --k) {
        const auto uk = static_cast<std::size_t>(k);
        all[uk - 1] = k * two_over_x * all[uk] - all[uk + 1];
        if (std::abs(all[uk - 1]) > 1e250) {
            for (std::size_t i = uk - 1; i < all.size(); ++i)
                all[i] *= 1e-250;
        }
    }
    double norm = all[0];
    for (std::size_t k = 2; k < all.size(); k += 2)
        norm += 2.0 * all[k];
    for (std::size_t k = 0; k < j.size(); ++k)
        j[k] = all[k] / norm;
    return j;
}

ChebyshevStepper::ChebyshevStepper(const SymmetricTridiagonal& h, double center, double radius)
    : h_(h), center_(center), radius_(radius)
{
    if (!(radius > 0.0))
        throw DomainError("Chebyshev stepper needs a positive spectral radius");
    const auto n = h.dimension();
    prev_.resize(n);
    curr_.resize(n);
    next_.resize(n);
    acc_.resize(n);
}

void ChebyshevStepper::apply_scaled(const std::vector<std::complex<double>>& in,
                                    std::vector<std::complex<double>>& out) const
{
    const auto n = in.size();
    const double inv = 1.0 / radius_;
    const auto& d = h_.diagonal;
    const auto& e = h_.off_diagonal;
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> acc = (d[i] - center_) * in[i];
        if (i > 0)
            acc += e[i - 1] * in[i - 1];
        if (i + 1 < n)
            acc += e[i] * in[i + 1];
        out[i] = acc * inv;
    }
}

void ChebyshevStepper::step(std::vector<std::complex<double>>& psi, double dt)
{
    if (dt == 0.0)
        return;
    const auto n = psi.size();
    const double x = radius_ * dt;
    const int kmax = static_cast<int>(std::ceil(x + 15.0 * std::cbrt(x) + 30.0));
    const auto bessel = bessel_j_sequence(x, kmax);

    int last = kmax;
    while (last > 0 && std::abs(bessel[static_cast<std::size_t>(last)]) < 1e-18)
        --last;

    // (-i)^k cycles through 1, -i, -1, i.
    static constexpr std::complex<double> kPhase[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};

    prev_ = psi;
    for (std::size_t i = 0; i < n; ++i)
        acc_[i] = bessel[0] * psi[i];
    if (last >= 1) {
        apply_scaled(prev_, curr_);
        const auto c1 = 2.0 * bessel[1] * kPhase[1];
        for (std::size_t i = 0; i < n; ++i)
            acc_[i] += c1 * curr_[i];
    }
    for (int k = 2; k <= last; ++k) {
        apply_scaled(curr_, next_);
        const auto ck = 2.0 * bessel[static_cast<std::size_t>(k)] * kPhase[k % 4];
        for (std::size_t i = 0; i < n; ++i) {
            next_[i] = 2.0 * next_[i] - prev_[i];
            acc_[i] += ck * next_[i];
        }
        std::swap(prev_, curr_);
        std::swap(curr_, next_);
    }

    const auto phase = std::polar(1.0, -center_ * dt);
    for (std::size_t i = 0; i < n; ++i)
        psi[i] = phase * acc_[i];
}

} // namespace qfel::detail
