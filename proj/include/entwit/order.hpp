#ifndef ENTWIT_ORDER_HPP
#define ENTWIT_ORDER_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "entwit/witness.hpp"

namespace entwit {

struct OrderOptions {
    int sample_size = 200;     // witnesses drawn from the detected set
    int grid = 21;             // mixture-line resolution
    std::uint64_t seed = 0;
    double tol = 1e-6;
    double bisection_tol = 1e-10;
};

/// Sampled estimate of delta = inf |tr(W rho2)/tr(W rho1)| over witnesses
/// detecting rho1; an upper bound on the true infimum restricted to the
/// sampled directions. Throws on an empty sample.
double delta_hat(const DensityMatrix& rho1, const DensityMatrix& rho2,
                 const WitnessSample& sample);

enum class FinerTag { Finer, NotFiner, Undetermined };

/// Finer: rho1 = (1 - epsilon) rho2 + epsilon P with P separable (absent
/// when epsilon = 0, i.e. equal states). NotFiner: a witness detecting
/// rho1 but not rho2.
struct FinerVerdict {
    FinerTag tag = FinerTag::Undetermined;
    double epsilon = 0.0;
    std::optional<DensityMatrix> p;
    bool p_separable = false;
    std::optional<HermitianOperator> counterexample;
    double delta_hat = 0.0;
};

/// Decides whether rho2 is finer (more entangled) than rho1: every witness
/// detecting rho1 also detects rho2. Certifies via the largest epsilon
/// with rho1 = (1-epsilon) rho2 + epsilon P and P separable; refutes via a
/// sampled counterexample witness; Undetermined otherwise.
FinerVerdict is_finer(const DensityMatrix& rho2, const DensityMatrix& rho1,
                      const OrderOptions& opts = {});

/// P = (delta rho1 - rho2)/(delta - 1), epsilon = 1 - 1/delta. delta = 1
/// demands rho1 = rho2 and yields (0, none); P failing positivity signals
/// an underestimated delta.
std::pair<double, std::optional<DensityMatrix>> lemma2_decompose(const DensityMatrix& rho1,
                                                                 const DensityMatrix& rho2,
                                                                 double delta);

/// A family is named by its unique optimal entangled state, the BSA
/// remainder shared by every member.
struct FamilyId {
    DensityMatrix representative;
};

FamilyId family_of(const DensityMatrix& rho, const OrderOptions& opts = {});
bool same_family(const FamilyId& f1, const FamilyId& f2);
bool same_family(const DensityMatrix& rho1, const DensityMatrix& rho2,
                 const OrderOptions& opts = {});

/// Separability verdicts of lambda pi1 + (1-lambda) pi2 on a uniform
/// lambda grid with endpoints.
std::vector<std::pair<double, SeparabilityVerdict>> mixture_line_scan(const DensityMatrix& pi1,
                                                                      const DensityMatrix& pi2,
                                                                      int n);

enum class CommonWitnessTag { Found, None, Undetermined };

/// None is proved by a separable point on the mixture line; Found carries
/// a witness detecting both states; Undetermined means the grid search
/// was exhausted.
struct CommonWitnessResult {
    CommonWitnessTag tag = CommonWitnessTag::Undetermined;
    std::optional<HermitianOperator> witness;
};

CommonWitnessResult common_detected_witness(const DensityMatrix& pi1, const DensityMatrix& pi2,
                                            const OrderOptions& opts = {});

}  // namespace entwit

#endif
