#ifndef ENTWIT_WITNESS_HPP
#define ENTWIT_WITNESS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "entwit/states.hpp"

namespace entwit {

/// Heuristic global minimum of <e,f|h|e,f> over unit product vectors.
struct ProductMinimum {
    double value = 0.0;
    ProductVector argmin;
    int restarts_agreeing = 0;
    int restarts_total = 0;
};

struct ProductMinOptions {
    int restarts = 64;
    std::uint64_t seed = 0;
    double tol = 1e-6;  // restart-agreement tolerance
    std::vector<double>* descent_trace = nullptr;
};

ProductMinimum min_product_expectation(const HermitianOperator& h,
                                       const ProductMinOptions& opts = {});

/// True iff the minimum product expectation is >= -1e-6. Detection
/// thresholds elsewhere use -1e-9; the gap keeps a rounded operator from
/// landing on both sides.
bool is_block_positive(const HermitianOperator& h, const ProductMinOptions& opts = {});

enum class HierarchyTag { SeparableState, EntangledState, EntanglementWitness, NonBlockPositive };

/// Four-way placement of a Hermitian operator with numeric evidence:
/// S carries a product decomposition, E a detecting witness, W a detected
/// entangled state plus the minimizing product vector, O a product vector
/// with negative expectation.
struct HierarchyClass {
    HierarchyTag tag;
    std::optional<ProductDecomposition> decomposition;
    std::optional<HermitianOperator> detecting_witness;
    std::optional<DensityMatrix> detected_state;
    std::optional<ProductVector> product_vector;
    double min_product_value = 0.0;
    /// Set when a PSD input arrived with trace != 1 and was classified on
    /// the normalized copy; holds the original trace.
    std::optional<double> rescaled_from_trace;
};

struct ClassifyOptions {
    int restarts = 64;
    std::uint64_t seed = 0;
    double tol = 1e-6;
};

HierarchyClass classify(const HermitianOperator& h, const ClassifyOptions& opts = {});

/// For an NPT state, the partial transpose of the projector onto the most
/// negative eigenvector of rho^Gamma. Throws PreconditionError on PPT input.
HermitianOperator witness_for_state(const DensityMatrix& rho);

/// For a non-block-positive operator, the pure product state that detects
/// it. Throws PreconditionError on block-positive input.
DensityMatrix higher_level_witness_for(const HermitianOperator& o,
                                       const ProductMinOptions& opts = {});

enum class DecompTag { Decomposable, NonDecomposable, Undetermined };

struct DecomposabilityVerdict {
    DecompTag tag = DecompTag::Undetermined;
    double a = 0.0;                              // Decomposable: weight of the PSD part
    std::optional<HermitianOperator> p;          // absent when a = 0
    std::optional<HermitianOperator> q;          // absent when a = 1
    std::optional<DensityMatrix> ppt_state;      // NonDecomposable certificate
    double residual = 0.0;                       // distance to the decomposable cone
};

struct DecomposeOptions {
    int max_iters = 5000;
    double tol = 1e-6;
    int certificate_starts = 64;
    std::uint64_t seed = 0;
};

/// Splits a block-positive operator as a P + (1-a) Q^Gamma with P, Q PSD
/// via alternating projections, or certifies non-decomposability with a
/// PPT state it detects.
DecomposabilityVerdict decompose_witness(const HermitianOperator& w,
                                         const DecomposeOptions& opts = {});

/// Searches the PPT states for one with tr(w rho) < -1e-9 by projected
/// descent onto {rho >= 0, rho^Gamma >= 0, tr rho = 1}.
std::optional<DensityMatrix> nondecomposability_certificate(const HermitianOperator& w,
                                                            const DecomposeOptions& opts = {});

/// Finite sample of the detected set D_rho = {W : tr(rho W) < 0}.
struct WitnessSample {
    std::vector<HermitianOperator> witnesses;  // unit Frobenius norm
    DensityMatrix source_state;
    std::uint64_t seed = 0;
};

/// Witnesses of the form (|eta><eta|)^Gamma with eta drawn from mixtures
/// of the negative eigenvectors of rho^Gamma plus perturbations, kept only
/// if they detect rho. Separable input yields an empty sample.
WitnessSample sample_detecting_witnesses(const DensityMatrix& rho, int n, std::uint64_t seed);

}  // namespace entwit

#endif
