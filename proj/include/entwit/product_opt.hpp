#ifndef ENTWIT_PRODUCT_OPT_HPP
#define ENTWIT_PRODUCT_OPT_HPP

#include <cstdint>
#include <vector>

#include "entwit/states.hpp"

namespace entwit {

/// One converged see-saw run: value = <e,f|H|e,f> at the final iterate.
struct SeesawResult {
    double value = 0.0;
    Vector e, f;
    int iterations = 0;
};

struct SeesawOptions {
    int max_iters = 500;
    double change_tol = 1e-12;
    /// When set, the per-iteration objective values of every start are
    /// appended here (used by descent-property tests).
    std::vector<double>* descent_trace = nullptr;
};

/// Alternating eigenvector minimization of <e,f|H|e,f> from a given start:
/// with f fixed, e is the bottom eigenvector of (I (x) <f|) H (I (x) |f>),
/// then the roles swap. The objective never increases.
SeesawResult seesaw_minimize(const Matrix& h, const SystemDims& dims, Vector e0, Vector f0,
                             const SeesawOptions& opts = {});

/// Best of `restarts` independent see-saw runs; starts drawn from `seed`.
/// agreeing = number of runs whose value is within agree_tol of the best.
struct MultistartResult {
    SeesawResult best;
    int agreeing = 0;
    int restarts = 0;
};

MultistartResult seesaw_multistart(const Matrix& h, const SystemDims& dims, int restarts,
                                   std::uint64_t seed, double agree_tol,
                                   const SeesawOptions& opts = {},
                                   const ProductVector* warm_start = nullptr);

}  // namespace entwit

#endif
