#include "entwit/order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entwit/bsa.hpp"

namespace entwit {

namespace {

constexpr double kDetectTol = 1e-9;

double pair_tr(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

void require_entangled(const DensityMatrix& rho, const char* who, std::uint64_t seed) {
    SeparabilityOptions sopts;
    sopts.seed = seed;
    sopts.certify = false;
    SeparabilityVerdict v = is_separable(rho, sopts);
    if (v.tag == SepTag::Separable) {
        throw PreconditionError(std::string(who) + ": input state is separable");
    }
    if (v.tag == SepTag::Undetermined) {
        throw Error(std::string(who) + ": separability undetermined on dims " +
                    rho.dims().to_string());
    }
}

/// Normalized point on the ray (rho1 - mu rho2)/(1 - mu).
DensityMatrix ray_point(const DensityMatrix& rho1, const DensityMatrix& rho2, double mu) {
    Matrix m = (rho1.matrix() - mu * rho2.matrix()) / (1.0 - mu);
    return make_density(psd_part(m), rho1.dims());
}

bool ray_point_separable(const DensityMatrix& rho1, const DensityMatrix& rho2, double mu,
                         std::uint64_t seed) {
    SeparabilityOptions sopts;
    sopts.seed = seed;
    sopts.certify = false;
    try {
        return is_separable(ray_point(rho1, rho2, mu), sopts).tag == SepTag::Separable;
    } catch (const ValidationError&) {
        return false;
    }
}

}  // namespace

double delta_hat(const DensityMatrix& rho1, const DensityMatrix& rho2,
                 const WitnessSample& sample) {
    if (sample.witnesses.empty()) {
        throw ValidationError("delta_hat: empty witness sample");
    }
    if (rho1.dims() != rho2.dims()) {
        throw DimensionError("delta_hat: dims mismatch " + rho1.dims().to_string() + " vs " +
                             rho2.dims().to_string());
    }
    double best = std::numeric_limits<double>::infinity();
    for (const HermitianOperator& w : sample.witnesses) {
        const double t1 = pair_tr(w.matrix(), rho1.matrix());
        const double t2 = pair_tr(w.matrix(), rho2.matrix());
        best = std::min(best, std::abs(t2 / t1));
    }
    return best;
}

FinerVerdict is_finer(const DensityMatrix& rho2, const DensityMatrix& rho1,
                      const OrderOptions& opts) {
    if (rho1.dims() != rho2.dims()) {
        throw DimensionError("is_finer: dims mismatch " + rho1.dims().to_string() + " vs " +
                             rho2.dims().to_string());
    }
    require_entangled(rho2, "is_finer", opts.seed);
    require_entangled(rho1, "is_finer", opts.seed);

    FinerVerdict out;
    WitnessSample sample = sample_detecting_witnesses(rho1, opts.sample_size, opts.seed);
    if (!sample.witnesses.empty()) out.delta_hat = delta_hat(rho1, rho2, sample);

    // Largest mu keeping rho1 - mu rho2 PSD.
    double mu_psd = 0.0;
    if (min_eigenvalue(rho1.matrix() - rho2.matrix()) >= -1e-10) {
        mu_psd = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > opts.bisection_tol) {
            const double mid = 0.5 * (lo + hi);
            if (min_eigenvalue(rho1.matrix() - mid * rho2.matrix()) >= -1e-10) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mu_psd = lo;
    }
    if (mu_psd >= 1.0 - 1e-9) {
        // rho1 and rho2 coincide; finer with an empty correction.
        out.tag = FinerTag::Finer;
        out.epsilon = 0.0;
        return out;
    }

    // The separable stretch of the ray is an interval; scan for a foothold,
    // then bisect its lower edge to reach the largest certified epsilon.
    const int scan_points = 33;
    double found = -1.0;
    double below = 0.0;  // rho1 itself is entangled
    for (int i = scan_points; i >= 1; --i) {
        const double mu = mu_psd * i / scan_points;
        if (ray_point_separable(rho1, rho2, mu, opts.seed)) {
            found = mu;
        } else if (found >= 0.0) {
            below = mu;
            break;
        }
    }
    if (found >= 0.0) {
        double lo = below, hi = found;
        while (hi - lo > opts.bisection_tol) {
            const double mid = 0.5 * (lo + hi);
            if (ray_point_separable(rho1, rho2, mid, opts.seed)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        DensityMatrix p = ray_point(rho1, rho2, hi);
        SeparabilityOptions sopts;
        sopts.seed = opts.seed;
        sopts.certify = false;
        if (is_separable(p, sopts).tag == SepTag::Separable) {
            out.tag = FinerTag::Finer;
            out.epsilon = 1.0 - hi;
            out.p = std::move(p);
            out.p_separable = true;
            return out;
        }
    }

    // Refutation: a sampled witness detecting rho1 but not rho2.
    for (const HermitianOperator& w : sample.witnesses) {
        if (pair_tr(w.matrix(), rho2.matrix()) >= -kDetectTol) {
            out.tag = FinerTag::NotFiner;
            out.counterexample = w;
            return out;
        }
    }
    out.tag = FinerTag::Undetermined;
    return out;
}

std::pair<double, std::optional<DensityMatrix>> lemma2_decompose(const DensityMatrix& rho1,
                                                                 const DensityMatrix& rho2,
                                                                 double delta) {
    if (rho1.dims() != rho2.dims()) {
        throw DimensionError("lemma2_decompose: dims mismatch");
    }
    if (delta < 1.0 - 1e-12) {
        throw ValidationError("lemma2_decompose: delta must be >= 1");
    }
    const double dist = frobenius(rho1.matrix() - rho2.matrix());
    if (delta <= 1.0 + 1e-9) {
        if (dist > 1e-6) {
            throw ValidationError("lemma2_decompose: delta = 1 requires equal states");
        }
        return {0.0, std::nullopt};
    }
    if (dist <= 1e-6) {
        throw ValidationError("lemma2_decompose: delta > 1 is inconsistent with equal states");
    }
    Matrix p = (delta * rho1.matrix() - rho2.matrix()) / (delta - 1.0);
    try {
        return {1.0 - 1.0 / delta, make_density(std::move(p), rho1.dims())};
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("lemma2_decompose: P is not a state "
                                          "(delta underestimated): ") +
                              e.what());
    }
}

FamilyId family_of(const DensityMatrix& rho, const OrderOptions& opts) {
    SeparabilityOptions sopts;
    sopts.seed = opts.seed;
    sopts.certify = false;
    SeparabilityVerdict v = is_separable(rho, sopts);
    if (v.tag == SepTag::Separable) {
        throw PreconditionError("NoFamily: separable states belong to no family");
    }
    if (v.tag == SepTag::Undetermined) {
        throw Error("family_of: separability undetermined on dims " + rho.dims().to_string());
    }
    BsaOptions bopts;
    bopts.seed = opts.seed;
    bopts.tol = std::min(opts.tol, 1e-7);  // remainders are compared at 1e-3
    BsaResult res = bsa_decompose(rho, bopts);
    if (!res.remainder) {
        throw Error("family_of: subtraction exhausted an entangled state");
    }
    return FamilyId{*res.remainder};
}

bool same_family(const FamilyId& f1, const FamilyId& f2) {
    return frobenius(f1.representative.matrix() - f2.representative.matrix()) <= 1e-3;
}

bool same_family(const DensityMatrix& rho1, const DensityMatrix& rho2,
                 const OrderOptions& opts) {
    return same_family(family_of(rho1, opts), family_of(rho2, opts));
}

std::vector<std::pair<double, SeparabilityVerdict>> mixture_line_scan(const DensityMatrix& pi1,
                                                                      const DensityMatrix& pi2,
                                                                      int n) {
    if (pi1.dims() != pi2.dims()) {
        throw DimensionError("mixture_line_scan: dims mismatch");
    }
    if (n < 2) throw ValidationError("mixture_line_scan: grid needs at least the endpoints");
    std::vector<std::pair<double, SeparabilityVerdict>> out;
    out.reserve(static_cast<std::size_t>(n));
    SeparabilityOptions sopts;
    sopts.certify = false;
    for (int i = 0; i < n; ++i) {
        const double lambda = static_cast<double>(i) / (n - 1);
        DensityMatrix mixed = mix({{lambda, pi1}, {1.0 - lambda, pi2}});
        out.emplace_back(lambda, is_separable(mixed, sopts));
    }
    return out;
}

CommonWitnessResult common_detected_witness(const DensityMatrix& pi1, const DensityMatrix& pi2,
                                            const OrderOptions& opts) {
    require_entangled(pi1, "common_detected_witness", opts.seed);
    require_entangled(pi2, "common_detected_witness", opts.seed);
    CommonWitnessResult out;
    auto scan = mixture_line_scan(pi1, pi2, opts.grid);
    for (const auto& [lambda, verdict] : scan) {
        if (verdict.tag == SepTag::Separable) {
            out.tag = CommonWitnessTag::None;
            return out;
        }
    }
    for (const auto& [lambda, verdict] : scan) {
        if (verdict.tag != SepTag::Entangled) continue;
        DensityMatrix mixed = mix({{lambda, pi1}, {1.0 - lambda, pi2}});
        HermitianOperator w = [&]() -> HermitianOperator {
            try {
                return witness_for_state(mixed);
            } catch (const PreconditionError&) {
                return identity_operator(mixed.dims());  // PPT point, skip below
            }
        }();
        if (pair_tr(w.matrix(), pi1.matrix()) < -kDetectTol &&
            pair_tr(w.matrix(), pi2.matrix()) < -kDetectTol) {
            out.tag = CommonWitnessTag::Found;
            out.witness = std::move(w);
            return out;
        }
    }
    out.tag = CommonWitnessTag::Undetermined;
    return out;
}

}  // namespace entwit
