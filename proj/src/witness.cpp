#include "entwit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entwit/product_opt.hpp"

namespace entwit {

namespace {

constexpr double kBlockPositiveTol = 1e-6;
constexpr double kDetectTol = 1e-9;

double pair_tr(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

Matrix gamma_mat(const Matrix& m, const SystemDims& dims) {
    return partial_transpose_matrix(m, dims, 1);
}

/// Nearest matrix that is PSD after partial transposition.
Matrix gamma_psd_part(const Matrix& m, const SystemDims& dims) {
    return gamma_mat(psd_part(gamma_mat(m, dims)), dims);
}

struct DykstraOut {
    Matrix projection;  // projection of x0 onto {X >= 0, X^Gamma >= 0}
    Matrix p, q;        // polar corrections: x0 = projection + p + q
    double gap = 0.0;
    int iterations = 0;
};

/// Dykstra alternating projections onto the PSD cone and the
/// Gamma-PSD cone. p stays negative semidefinite and q^Gamma stays
/// negative semidefinite throughout, so the split is exact at every stop.
DykstraOut project_ppt_cone(const Matrix& x0, const SystemDims& dims, int max_iters,
                            double stop_tol) {
    const auto d = x0.rows();
    DykstraOut out;
    Matrix x = x0;
    out.p = Matrix::Zero(d, d);
    out.q = Matrix::Zero(d, d);
    out.gap = std::numeric_limits<double>::infinity();
    for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
        Matrix y = psd_part(x + out.p);
        out.p = x + out.p - y;
        Matrix xn = gamma_psd_part(y + out.q, dims);
        out.q = y + out.q - xn;
        double change = frobenius(xn - x);
        x = xn;
        out.gap = frobenius(y - x);
        if (out.gap <= stop_tol && change <= stop_tol) {
            ++out.iterations;
            break;
        }
    }
    out.projection = x;
    return out;
}

/// Projection onto {X >= 0, X^Gamma >= 0, tr X = 1} by cyclic Dykstra
/// (cone corrections only; the trace plane needs none).
Matrix project_ppt_state(const Matrix& z, const SystemDims& dims, int max_iters) {
    const auto d = z.rows();
    Matrix x = z;
    Matrix p = Matrix::Zero(d, d), q = Matrix::Zero(d, d);
    for (int it = 0; it < max_iters; ++it) {
        Matrix y = psd_part(x + p);
        p = x + p - y;
        Matrix g = gamma_psd_part(y + q, dims);
        q = y + q - g;
        Matrix xn = g - ((g.trace().real() - 1.0) / static_cast<double>(d)) *
                            Matrix::Identity(d, d);
        double change = frobenius(xn - x);
        x = xn;
        if (change <= 1e-10) break;
    }
    return x;
}

/// Projected-gradient search for a PPT state with tr(w rho) < -1e-9.
std::optional<DensityMatrix> search_ppt_detector(const HermitianOperator& w,
                                                 const DecomposeOptions& opts) {
    const SystemDims& dims = w.dims();
    const int d = w.ambient();
    const double wnorm = frobenius(w.matrix());
    if (wnorm < 1e-14) return std::nullopt;
    Rng rng(opts.seed);
    double best = std::numeric_limits<double>::infinity();
    Matrix best_rho;
    for (int s = 0; s < opts.certificate_starts; ++s) {
        Matrix rho = random_state(dims, d, rng.next_seed()).matrix();
        double step = 0.5 / wnorm;
        for (int it = 0; it < 40; ++it) {
            rho = project_ppt_state(rho - step * w.matrix(), dims, 150);
            step *= 0.9;
        }
        double val = pair_tr(w.matrix(), rho);
        if (val < best) {
            best = val;
            best_rho = rho;
        }
    }
    if (best < -kDetectTol) {
        Matrix r = psd_part(best_rho);
        double tr = r.trace().real();
        if (tr > 1e-12) {
            r /= tr;
            try {
                DensityMatrix cand = make_density(r, dims);
                if (is_ppt(cand) && pair_tr(w.matrix(), cand.matrix()) < -kDetectTol) {
                    return cand;
                }
            } catch (const ValidationError&) {
            }
        }
    }
    return std::nullopt;
}

}  // namespace

ProductMinimum min_product_expectation(const HermitianOperator& h, const ProductMinOptions& opts) {
    if (!h.dims().bipartite()) {
        throw PreconditionError("min_product_expectation requires bipartite dims, got " +
                                h.dims().to_string());
    }
    SeesawOptions sopts;
    sopts.descent_trace = opts.descent_trace;
    MultistartResult ms =
        seesaw_multistart(h.matrix(), h.dims(), opts.restarts, opts.seed, opts.tol, sopts);
    return ProductMinimum{ms.best.value, ProductVector(ms.best.e, ms.best.f), ms.agreeing,
                          ms.restarts};
}

bool is_block_positive(const HermitianOperator& h, const ProductMinOptions& opts) {
    return min_product_expectation(h, opts).value >= -kBlockPositiveTol;
}

HierarchyClass classify(const HermitianOperator& h, const ClassifyOptions& opts) {
    if (!h.dims().bipartite()) {
        throw PreconditionError("classify requires bipartite dims, got " + h.dims().to_string());
    }
    const double scale = frobenius(h.matrix());
    if (scale < 1e-14) throw ValidationError("classify: zero operator has no hierarchy place");
    const Matrix hn = h.matrix() / scale;

    if (min_eigenvalue(hn) >= -kDetectTol) {
        // PSD branch: a state up to normalization.
        const double tr = h.trace();
        HierarchyClass out;
        out.tag = HierarchyTag::SeparableState;
        if (std::abs(tr - 1.0) > 1e-9) out.rescaled_from_trace = tr;
        DensityMatrix rho = make_density(h.matrix() / tr, h.dims());
        SeparabilityOptions sopts;
        sopts.restarts = opts.restarts;
        sopts.seed = opts.seed;
        sopts.tol = opts.tol;
        SeparabilityVerdict verdict = is_separable(rho, sopts);
        if (verdict.tag == SepTag::Separable) {
            out.decomposition = std::move(verdict.decomposition);
        } else if (verdict.tag == SepTag::Entangled) {
            out.tag = HierarchyTag::EntangledState;
            out.detecting_witness = std::move(verdict.witness);
        } else {
            throw Error("classify: separability undetermined for PPT state on dims " +
                        h.dims().to_string());
        }
        return out;
    }

    // Not PSD: witness or beyond, decided on the Frobenius-normalized copy.
    HermitianOperator hn_op(hn, h.dims());
    ProductMinOptions popts;
    popts.restarts = opts.restarts;
    popts.seed = opts.seed;
    popts.tol = opts.tol;
    ProductMinimum pm = min_product_expectation(hn_op, popts);
    HierarchyClass out;
    // Reported on the input scale; the tag decision stays scale-free.
    out.min_product_value = pm.value * scale;
    out.product_vector = pm.argmin;
    if (pm.value >= -kBlockPositiveTol) {
        out.tag = HierarchyTag::EntanglementWitness;
        EigenSystem es = eig_hermitian(hn_op);
        Vector v = es.vectors.col(0);
        out.detected_state = make_density(v * v.adjoint(), h.dims());
    } else {
        out.tag = HierarchyTag::NonBlockPositive;
    }
    return out;
}

HermitianOperator witness_for_state(const DensityMatrix& rho) {
    if (!rho.dims().bipartite()) {
        throw PreconditionError("witness_for_state requires bipartite dims, got " +
                                rho.dims().to_string());
    }
    HermitianOperator g = gamma(rho.op());
    EigenSystem es = eig_hermitian(g);
    if (es.values(0) >= -kDetectTol) {
        throw PreconditionError(
            "NoNptWitness: state is PPT, no partial-transpose witness detects it");
    }
    Vector eta = es.vectors.col(0);
    return HermitianOperator(gamma_mat(eta * eta.adjoint(), rho.dims()), rho.dims());
}

DensityMatrix higher_level_witness_for(const HermitianOperator& o, const ProductMinOptions& opts) {
    ProductMinimum pm = min_product_expectation(o, opts);
    if (pm.value >= -kBlockPositiveTol) {
        throw PreconditionError("NotWitnessable: operator is block-positive");
    }
    return make_density(pm.argmin.projector(), o.dims());
}

DecomposabilityVerdict decompose_witness(const HermitianOperator& w, const DecomposeOptions& opts) {
    if (!w.dims().bipartite()) {
        throw PreconditionError("decompose_witness requires bipartite dims, got " +
                                w.dims().to_string());
    }
    const SystemDims& dims = w.dims();
    const double scale = frobenius(w.matrix());
    if (scale < 1e-14) {
        DecomposabilityVerdict out;
        out.tag = DecompTag::Decomposable;
        out.a = 1.0;
        out.p = w;
        return out;
    }
    {
        ProductMinOptions popts;
        popts.seed = opts.seed;
        HermitianOperator wn(w.matrix() / scale, dims);
        if (!is_block_positive(wn, popts)) {
            throw PreconditionError("decompose_witness requires a block-positive operator");
        }
    }

    // Exact shortcuts: already PSD, or already a partial transpose of PSD.
    if (min_eigenvalue(w.matrix()) >= -kDetectTol) {
        DecomposabilityVerdict out;
        out.tag = DecompTag::Decomposable;
        out.a = 1.0;
        out.p = HermitianOperator(psd_part(w.matrix()), dims);
        out.residual = frobenius(w.matrix() - out.p->matrix());
        return out;
    }
    Matrix wg = gamma_mat(w.matrix(), dims);
    if (min_eigenvalue(wg) >= -kDetectTol) {
        DecomposabilityVerdict out;
        out.tag = DecompTag::Decomposable;
        out.a = 0.0;
        out.q = HermitianOperator(psd_part(wg), dims);
        out.residual = frobenius(w.matrix() - gamma_mat(out.q->matrix(), dims));
        return out;
    }

    // Distance of w to {P + Q^Gamma : P,Q >= 0} equals the norm of the
    // projection of -w onto the PPT cone; Dykstra's corrections hand back
    // the split.
    DykstraOut dk = project_ppt_cone(-w.matrix(), dims, opts.max_iters, 1e-11);
    Matrix p_raw = -dk.p;
    Matrix q_raw = gamma_mat(-dk.q, dims);
    const double s = p_raw.trace().real();
    const double t = q_raw.trace().real();
    const double residual_raw = frobenius(dk.projection);

    if (residual_raw <= opts.tol && s + t > 1e-12) {
        double a = std::clamp(s / (s + t), 0.0, 1.0);
        double rescale = w.trace() > 1e-12 ? w.trace() / (s + t) : 1.0;
        DecomposabilityVerdict out;
        out.tag = DecompTag::Decomposable;
        out.a = a;
        Matrix approx = Matrix::Zero(w.ambient(), w.ambient());
        if (a > 1e-12) {
            out.p = HermitianOperator(p_raw * (rescale / a), dims);
            approx += a * out.p->matrix();
        } else {
            out.a = 0.0;
        }
        if (1.0 - a > 1e-12) {
            out.q = HermitianOperator(q_raw * (rescale / (1.0 - a)), dims);
            approx += (1.0 - out.a) * gamma_mat(out.q->matrix(), dims);
        } else {
            out.a = 1.0;
        }
        out.residual = frobenius(w.matrix() - approx);
        if (out.residual <= opts.tol) return out;
    }

    DecomposabilityVerdict out;
    out.residual = residual_raw;
    if (auto cert = search_ppt_detector(w, opts)) {
        out.tag = DecompTag::NonDecomposable;
        out.ppt_state = std::move(cert);
    } else {
        out.tag = DecompTag::Undetermined;
    }
    return out;
}

std::optional<DensityMatrix> nondecomposability_certificate(const HermitianOperator& w,
                                                            const DecomposeOptions& opts) {
    // Decomposability probe first: tr(Q^Gamma rho) = tr(Q rho^Gamma) >= 0
    // for PPT rho, so a decomposable operator admits no certificate.
    DykstraOut dk = project_ppt_cone(-w.matrix(), w.dims(), opts.max_iters, 1e-11);
    if (frobenius(dk.projection) <= 1e-9) return std::nullopt;
    return search_ppt_detector(w, opts);
}

WitnessSample sample_detecting_witnesses(const DensityMatrix& rho, int n, std::uint64_t seed) {
    if (!rho.dims().bipartite()) {
        throw PreconditionError("sample_detecting_witnesses requires bipartite dims, got " +
                                rho.dims().to_string());
    }
    if (n < 0) throw ValidationError("sample_detecting_witnesses: negative sample size");
    const SystemDims& dims = rho.dims();
    WitnessSample out{{}, rho, seed};

    HermitianOperator g = gamma(rho.op());
    EigenSystem es = eig_hermitian(g);
    std::vector<Vector> negatives;
    for (int i = 0; i < es.values.size(); ++i) {
        if (es.values(i) < -kDetectTol) negatives.push_back(es.vectors.col(i));
    }
    // Separable (and PPT-entangled) states admit no witnesses of this form.
    if (negatives.empty()) return out;

    const int d = rho.ambient();
    Rng rng(seed);
    const long cap = 400L * std::max(n, 1) + 400L;
    for (long attempts = 0; attempts < cap && static_cast<int>(out.witnesses.size()) < n;
         ++attempts) {
        Vector eta = Vector::Zero(d);
        for (const Vector& v : negatives) eta += rng.cgauss() * v;
        const double amp = (rng.uniform() < 0.25) ? 0.0 : 0.3 * rng.uniform();
        if (amp > 0.0) eta += amp * rng.gaussian_vector(d);
        const double nrm = eta.norm();
        if (nrm < 1e-12) continue;
        eta /= nrm;
        // tr((|eta><eta|)^Gamma rho) = <eta|rho^Gamma|eta>
        const double pairing = (eta.adjoint() * g.matrix() * eta)(0, 0).real();
        if (!(pairing < -kDetectTol)) continue;
        Matrix wmat = gamma_mat(eta * eta.adjoint(), dims);
        wmat /= frobenius(wmat);
        // <e,f|(|eta><eta|)^Gamma|e,f> = |<eta|e,conj(f)>|^2, so the form is
        // block-positive; the screen guards the numerics only.
        bool screened = true;
        for (int t = 0; t < 8 && screened; ++t) {
            Vector k = random_product_vector(dims, rng.next_seed()).ket();
            if ((k.adjoint() * wmat * k)(0, 0).real() < -kDetectTol) screened = false;
        }
        if (!screened) continue;
        if (!(pair_tr(wmat, rho.matrix()) < -kDetectTol)) continue;
        out.witnesses.emplace_back(wmat, dims);
    }
    return out;
}

}  // namespace entwit
