#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qfel {

/// Real symmetric tridiagonal matrix. off_diagonal[i] couples rows i and i+1.
struct SymmetricTridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;

    std::size_t dimension() const noexcept { return diagonal.size(); }
    /// y = T x
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Max row sum of absolute values (infinity norm).
    double norm_inf() const noexcept;
};

/// Eigen-decomposition with eigenvalues ascending and orthonormal eigenvectors
/// stored column-major: eigenvector j occupies [j*n, (j+1)*n).
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;

    std::size_t dimension() const noexcept { return eigenvalues.size(); }
    std::span<const double> vector(std::size_t j) const
    {
        const auto n = dimension();
        return {eigenvectors.data() + j * n, n};
    }
};

/// Implicit QL with Wilkinson shifts. Throws NumericError if an eigenvalue
/// fails to converge within the iteration budget.
Spectrum diagonalize(const SymmetricTridiagonal& t);

/// Eigenvalues only, O(n^2).
std::vector<double> eigenvalues(const SymmetricTridiagonal& t);

} // namespace qfel
