#ifndef ENTWIT_STATES_HPP
#define ENTWIT_STATES_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "entwit/linops.hpp"

namespace entwit {

/// Deterministic random stream around mt19937_64; every randomized
/// operation takes an explicit seed and owns its own stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform();                  // [0, 1)
    double gaussian();                 // standard normal
    Complex cgauss();                  // complex standard normal
    Vector gaussian_vector(int n);     // complex Gaussian entries
    std::uint64_t next_seed();         // derive an independent child seed

  private:
    std::mt19937_64 gen_;
};

/// Unit vectors e (dim d1) and f (dim d2); the product state is e (x) f.
/// Construction normalizes and fixes the global phase of each factor so
/// that its first nonzero component is real non-negative.
class ProductVector {
  public:
    ProductVector(Vector e, Vector f);

    const Vector& e() const { return e_; }
    const Vector& f() const { return f_; }
    Vector ket() const { return kron_vec(e_, f_); }
    Matrix projector() const;
    SystemDims dims() const;

  private:
    Vector e_, f_;
};

/// Positive-semidefinite unit-trace operator. Validation tolerances:
/// min eigenvalue >= -1e-9, |trace - 1| <= 1e-9.
class DensityMatrix {
  public:
    explicit DensityMatrix(HermitianOperator op);

    const HermitianOperator& op() const { return op_; }
    const Matrix& matrix() const { return op_.matrix(); }
    const SystemDims& dims() const { return op_.dims(); }
    int ambient() const { return op_.ambient(); }

  private:
    HermitianOperator op_;
};

DensityMatrix make_density(Matrix entries, SystemDims dims);

enum class SepTag { Separable, Entangled, Undetermined };

using ProductDecomposition = std::vector<std::pair<double, ProductVector>>;

struct SeparabilityVerdict {
    SepTag tag = SepTag::Undetermined;
    std::optional<ProductDecomposition> decomposition;   // Separable
    std::optional<HermitianOperator> witness;            // Entangled
};

struct SeparabilityOptions {
    int restarts = 64;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    bool certify = true;  // attach decomposition / witness certificates
};

// Fixtures.
enum class BellState { PsiPlus, PsiMinus, PhiSinglet };

DensityMatrix bell(BellState which);
Vector bell_vector(BellState which);

/// p |psi+><psi+| + (1-p) I/4 on (2,2).
DensityMatrix werner(double p);

/// q |psi-><psi-| + (1-q) |psi+><psi+| on (2,2).
DensityMatrix eta(double q);

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts);

ProductVector random_product_vector(const SystemDims& dims, std::uint64_t seed);
DensityMatrix random_state(const SystemDims& dims, int rank, std::uint64_t seed);

bool is_ppt(const DensityMatrix& rho);

/// Decides membership in the separable set. PPT is decisive for ambient
/// dimension <= 6; beyond that NPT states are Entangled, PPT states are
/// Separable only when the best-separable-approximation weight reaches
/// 1 - 1e-6, and Undetermined otherwise.
SeparabilityVerdict is_separable(const DensityMatrix& rho, const SeparabilityOptions& opts = {});

/// <v|rho|v> for a unit vector v; fidelity against a pure target.
double fidelity_with_pure(const DensityMatrix& rho, const Vector& v);

}  // namespace entwit

#endif
