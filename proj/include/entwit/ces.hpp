#ifndef ENTWIT_CES_HPP
#define ENTWIT_CES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "entwit/states.hpp"

namespace entwit {

/// Subspace of the ambient product space, held as orthonormal columns.
class Subspace {
  public:
    Subspace(Matrix basis, SystemDims dims);

    /// Orthonormalizes a spanning set (columns) first; drops dependent
    /// directions below a 1e-10 rank cutoff.
    static Subspace from_span(const Matrix& span, const SystemDims& dims);

    const Matrix& basis() const { return basis_; }
    const SystemDims& dims() const { return dims_; }
    int dimension() const { return static_cast<int>(basis_.cols()); }
    Matrix projector() const { return basis_ * basis_.adjoint(); }

  private:
    Matrix basis_;
    SystemDims dims_;
};

/// d1 d2 ... dk - (d1 + d2 + ... + dk) + k - 1, the maximal dimension of a
/// subspace containing no product vector.
int max_ces_dim(const SystemDims& dims);

struct CesOptions {
    int restarts = 256;
    std::uint64_t seed = 0;
    double tol = 1e-6;
};

struct SubspaceProductSearch {
    std::optional<ProductVector> vector;  // present when overlap > 1 - 1e-6
    double overlap = 0.0;                 // best squared subspace projection found
};

/// Multistart maximization of ||Pi_S (e x f)||^2 over unit product vectors.
SubspaceProductSearch subspace_contains_product(const Subspace& s, const CesOptions& opts = {});

/// Heuristic: true iff the product search comes back empty.
bool is_ces(const Subspace& s, const CesOptions& opts = {});

/// Mixed state of full rank on s, supported inside s.
DensityMatrix random_state_on(const Subspace& s, std::uint64_t seed);

}  // namespace entwit

#endif
