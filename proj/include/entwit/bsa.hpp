#ifndef ENTWIT_BSA_HPP
#define ENTWIT_BSA_HPP

#include <cstdint>
#include <optional>
#include <utility>

#include "entwit/states.hpp"

namespace entwit {

struct BsaOptions {
    int restarts = 128;      // product-vector search restarts
    std::uint64_t seed = 0;
    double tol = 1e-6;
    int max_iters = 10000;   // subtraction rounds
};

/// Largest lambda >= 0 with rho - lambda |x><x| still PSD. Equals
/// 1/<x|pinv(rho)|x> when x lies in range(rho) (squared range overlap
/// above 1 - 1e-10, rank cutoff 1e-10 relative), zero otherwise.
double max_subtractable_weight(const DensityMatrix& rho, const Vector& x);

/// Multistart coordinate ascent of max_subtractable_weight over product
/// vectors; the search minimizes <x|pinv(rho)|x> with a penalty pushing x
/// into range(rho).
std::pair<ProductVector, double> best_product_subtraction(const DensityMatrix& rho,
                                                          const BsaOptions& opts = {});

/// rho = lambda rho_S + (1 - lambda) rho_E with rho_S a convex mixture of
/// product projectors and rho_E the entangled remainder.
struct BsaResult {
    double lambda = 0.0;
    ProductDecomposition separable_part;           // (weight, product vector) terms
    std::optional<DensityMatrix> separable_state;  // assembled rho_S; absent when lambda = 0
    std::optional<DensityMatrix> remainder;        // absent when lambda >= 1 - 1e-6
    /// Best single-direction weight still subtractable at the stop; below
    /// tol/ambient^2 when converged.
    double trace_residual = 0.0;
    bool converged = true;
    int iterations = 0;
};

/// Greedy damped subtraction: repeatedly remove half the maximal weight
/// along the best product direction (the full weight when the direction
/// repeats) until nothing above tol/ambient^2 remains.
BsaResult bsa_decompose(const DensityMatrix& rho, const BsaOptions& opts = {});

struct RangeProductSearch {
    std::optional<ProductVector> vector;  // present when overlap > 1 - 1e-6
    double overlap = 0.0;                 // best squared range projection found
};

/// Multistart maximization of ||Pi_range (e x f)||^2.
RangeProductSearch range_product_search(const DensityMatrix& rho, const BsaOptions& opts = {});

struct OptimalityReport {
    bool is_optimal = false;
    std::optional<ProductVector> violating_product;
    double max_range_overlap = 0.0;
    double subtractable_weight = 0.0;
};

/// An entangled state is optimal when its range holds no product vector
/// and no product projector can be subtracted. Throws on separable input.
OptimalityReport is_optimal_entangled(const DensityMatrix& rho, const BsaOptions& opts = {});

}  // namespace entwit

#endif
