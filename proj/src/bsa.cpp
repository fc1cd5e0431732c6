#include "entwit/bsa.hpp"

#include <algorithm>
#include <cmath>

#include "entwit/product_opt.hpp"

namespace entwit {

namespace {

constexpr double kRankCutoff = 1e-10;
constexpr double kRangeTol = 1e-10;

struct RangeData {
    Matrix proj;  // projector onto range(rho)
    Matrix pinv;  // inverse on the range
    double mu = 0.0;
    int rank = 0;
};

RangeData range_data(const Matrix& rho, const SystemDims& dims) {
    HermitianOperator op(rho, dims);
    EigenSystem es = eig_hermitian(op);
    const auto d = rho.rows();
    RangeData rd;
    rd.proj = Matrix::Zero(d, d);
    rd.pinv = Matrix::Zero(d, d);
    const double cutoff = kRankCutoff * std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
    double inv_max = 0.0;
    for (int i = 0; i < es.values.size(); ++i) {
        if (es.values(i) <= cutoff) continue;
        Matrix vv = es.vectors.col(i) * es.vectors.col(i).adjoint();
        rd.proj += vv;
        rd.pinv += vv / es.values(i);
        inv_max = std::max(inv_max, 1.0 / es.values(i));
        ++rd.rank;
    }
    rd.mu = 2.0 * inv_max + 1.0;
    return rd;
}

double quad(const Matrix& m, const Vector& x) { return (x.adjoint() * m * x)(0, 0).real(); }

double max_weight_raw(const RangeData& rd, const Vector& x) {
    if (quad(rd.proj, x) <= 1.0 - kRangeTol) return 0.0;
    const double denom = quad(rd.pinv, x);
    if (denom < 1e-14) return 0.0;
    return 1.0 / denom;
}

// Largest t keeping m - t q PSD, certified by eigenvalue bisection. The
// slack matches the documented PSD tolerance of remainders: directions carry
// O(1e-9) contamination from the product search, and level repulsion against
// a contaminated direction pushes the boundary eigenvalue to -eps^2/gap long
// before the true boundary.
double certified_cap(const Matrix& m, const Matrix& q, double hint) {
    auto stays_psd = [&](double t) { return min_eigenvalue(m - t * q) >= -1e-9; };
    double hi = std::max(hint, 1e-8);
    if (!stays_psd(hi)) {
        double lo = 0.0;
        if (!stays_psd(lo)) return 0.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (stays_psd(mid) ? lo : hi) = mid;
        }
        return lo;
    }
    double lo = hi;
    while (stays_psd(hi) && hi < 4.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (stays_psd(mid) ? lo : hi) = mid;
    }
    return lo;
}

double analytic_weight(const Matrix& m, const SystemDims& dims, const Vector& x) {
    return max_weight_raw(range_data(m, dims), x);
}

// Product vectors inside span{a, b}: x = alpha a + beta b is product iff its
// reshaped d1 x d2 matrix has rank one, i.e. every 2x2 minor vanishes. Each
// minor is a homogeneous quadratic in (alpha, beta); the best-conditioned one
// is solved and its roots checked against the rest via the singular values.
std::vector<ProductVector> products_in_plane(const Vector& a, const Vector& b,
                                             const SystemDims& dims) {
    const int d1 = dims[0], d2 = dims[1];
    auto reshape = [&](const Vector& v) {
        Matrix m(d1, d2);
        for (int r = 0; r < d1; ++r)
            for (int c = 0; c < d2; ++c) m(r, c) = v(r * d2 + c);
        return m;
    };
    const Matrix ra = reshape(a), rb = reshape(b);
    struct Quad {
        Complex m2, m1, m0;
    };
    std::vector<Quad> quads;
    for (int r1 = 0; r1 < d1; ++r1)
        for (int r2 = r1 + 1; r2 < d1; ++r2)
            for (int c1 = 0; c1 < d2; ++c1)
                for (int c2 = c1 + 1; c2 < d2; ++c2) {
                    Quad q;
                    q.m2 = ra(r1, c1) * ra(r2, c2) - ra(r1, c2) * ra(r2, c1);
                    q.m0 = rb(r1, c1) * rb(r2, c2) - rb(r1, c2) * rb(r2, c1);
                    q.m1 = ra(r1, c1) * rb(r2, c2) + rb(r1, c1) * ra(r2, c2) -
                           ra(r1, c2) * rb(r2, c1) - rb(r1, c2) * ra(r2, c1);
                    quads.push_back(q);
                }
    const Quad* pivot = nullptr;
    double best_norm = 1e-12;
    for (const auto& q : quads) {
        const double n = std::abs(q.m2) + std::abs(q.m1) + std::abs(q.m0);
        if (n > best_norm) {
            best_norm = n;
            pivot = &q;
        }
    }
    std::vector<ProductVector> out;
    if (pivot == nullptr) return out;
    std::vector<std::pair<Complex, Complex>> roots;
    const Complex disc = std::sqrt(pivot->m1 * pivot->m1 - 4.0 * pivot->m2 * pivot->m0);
    if (std::abs(pivot->m2) >= std::abs(pivot->m0)) {
        roots.emplace_back((-pivot->m1 + disc) / (2.0 * pivot->m2), 1.0);
        roots.emplace_back((-pivot->m1 - disc) / (2.0 * pivot->m2), 1.0);
    } else {
        roots.emplace_back(1.0, (-pivot->m1 + disc) / (2.0 * pivot->m0));
        roots.emplace_back(1.0, (-pivot->m1 - disc) / (2.0 * pivot->m0));
    }
    std::vector<Vector> kets;
    for (const auto& [alpha, beta] : roots) {
        Vector x = alpha * a + beta * b;
        const double n = x.norm();
        if (n < 1e-10) continue;
        x /= n;
        Eigen::JacobiSVD<Matrix> svd(reshape(x), Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svd.singularValues()(1) > 1e-6 * svd.singularValues()(0)) continue;
        bool dup = false;
        for (const auto& k : kets) {
            if (std::norm((k.adjoint() * x)(0, 0)) > 1.0 - 1e-9) dup = true;
        }
        if (dup) continue;
        kets.push_back(x);
        Vector f = svd.matrixV().col(0).conjugate();
        out.emplace_back(svd.matrixU().col(0), std::move(f));
    }
    return out;
}

std::pair<ProductVector, double> best_subtraction_raw(const Matrix& rho, const SystemDims& dims,
                                                      int restarts, std::uint64_t seed) {
    RangeData rd = range_data(rho, dims);
    const auto d = rho.rows();
    if (rd.rank == 0) {
        return {random_product_vector(dims, seed), 0.0};
    }
    // Minimizing <x|pinv|x> over range vectors maximizes the weight; the
    // penalty term keeps the iterates from drifting out of the range.
    Matrix m = rd.pinv + rd.mu * (Matrix::Identity(d, d) - rd.proj);
    MultistartResult ms = seesaw_multistart(m, dims, restarts, seed, 1e-9);
    ProductVector pv(ms.best.e, ms.best.f);
    return {pv, max_weight_raw(rd, pv.ket())};
}

}  // namespace

double max_subtractable_weight(const DensityMatrix& rho, const Vector& x) {
    if (x.size() != rho.ambient()) {
        throw DimensionError("max_subtractable_weight: vector length " +
                             std::to_string(x.size()) + " does not match ambient " +
                             std::to_string(rho.ambient()));
    }
    if (std::abs(x.norm() - 1.0) > 1e-9) {
        throw ValidationError("max_subtractable_weight: vector is not normalized");
    }
    RangeData rd = range_data(rho.matrix(), rho.dims());
    return max_weight_raw(rd, x);
}

std::pair<ProductVector, double> best_product_subtraction(const DensityMatrix& rho,
                                                          const BsaOptions& opts) {
    if (!rho.dims().bipartite()) {
        throw PreconditionError("best_product_subtraction requires bipartite dims, got " +
                                rho.dims().to_string());
    }
    return best_subtraction_raw(rho.matrix(), rho.dims(), opts.restarts, opts.seed);
}

// Joint reweighting of one pair of directions. Puts the pair's weight back
// into rem, then re-maximizes the total weight t subtractable along
// s P_i + (1-s) P_j. On range(A) the constraint A - t Q(s) >= 0 caps t at
// 1/eigmax(A^{-1/2} Q(s) A^{-1/2}), and that eigmax lives in the span of the
// two whitened kets, so it collapses to a closed-form 2x2 eigenvalue. eigmax
// is convex in s; a ternary search finds its minimum, which is the best
// total. This is what frees the greedy phase from split-the-difference traps
// where no single direction can move on its own.
struct PairRebalance {
    double total = 0.0;
    double s = 0.5;
};

PairRebalance rebalance_pair(const Matrix& rem_pair, const SystemDims& dims, const Vector& ki,
                             const Vector& kj) {
    EigenSystem es = eig_hermitian(HermitianOperator(0.5 * (rem_pair + rem_pair.adjoint()), dims));
    const double top = es.values(es.values.size() - 1);
    PairRebalance out;
    if (top <= 0.0) return out;
    const double cutoff = kRankCutoff * top;
    double aa = 0.0, cc = 0.0;
    Complex b = 0.0;
    for (int k = 0; k < es.values.size(); ++k) {
        if (es.values(k) <= cutoff) continue;
        const Complex ui = es.vectors.col(k).dot(ki);
        const Complex vi = es.vectors.col(k).dot(kj);
        aa += std::norm(ui) / es.values(k);
        cc += std::norm(vi) / es.values(k);
        b += std::conj(ui) * vi / es.values(k);
    }
    if (aa < 1e-14 || cc < 1e-14) return out;
    const double cross = std::max(aa * cc - std::norm(b), 0.0);
    auto eigmax = [&](double s) {
        const double tr = s * aa + (1.0 - s) * cc;
        const double disc = std::max(tr * tr - 4.0 * s * (1.0 - s) * cross, 0.0);
        return 0.5 * (tr + std::sqrt(disc));
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 70; ++it) {
        const double p = lo + (hi - lo) / 3.0;
        const double q = hi - (hi - lo) / 3.0;
        if (eigmax(p) > eigmax(q))
            lo = p;
        else
            hi = q;
    }
    out.s = 0.5 * (lo + hi);
    const double lam = eigmax(out.s);
    if (lam > 1e-12) out.total = 1.0 / lam;
    return out;
}

BsaResult bsa_decompose(const DensityMatrix& rho, const BsaOptions& opts) {
    if (!rho.dims().bipartite()) {
        throw PreconditionError("bsa_decompose requires bipartite dims, got " +
                                rho.dims().to_string());
    }
    const SystemDims& dims = rho.dims();
    const auto d = rho.ambient();
    const double stop_tol = opts.tol / (static_cast<double>(d) * d);

    struct Term {
        double w;
        ProductVector pv;
        Matrix proj;
        Vector ket;
    };
    std::vector<Term> terms;
    Matrix rem = rho.matrix();
    BsaResult out;
    Rng rng(opts.seed);
    out.converged = false;

    // Damped discovery: half the maximal weight along a fresh direction, the
    // full weight when the search lands on a direction already active.
    // Misallocations between directions are the pairwise phase's job.
    auto discover = [&]() {
        auto [pv, w] = best_subtraction_raw(rem, dims, opts.restarts, rng.next_seed());
        out.trace_residual = w;
        if (w < stop_tol) {
            // Near the boundary the search direction carries off-range mass
            // that zeroes the analytic formula; a certified step within the
            // PSD slack still drains what is left.
            Matrix proj = pv.projector();
            const double wc =
                certified_cap(rem, proj, std::max(rem.trace().real(), 1e-8));
            if (wc < stop_tol) return false;
            rem -= wc * proj;
            terms.push_back({wc, pv, std::move(proj), pv.ket()});
            ++out.iterations;
            return true;
        }
        const Vector ket = pv.ket();
        int match = -1;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (std::norm((terms[i].ket.adjoint() * ket)(0, 0)) > 1.0 - 1e-9) {
                match = static_cast<int>(i);
                break;
            }
        }
        if (match >= 0) {
            const double wf = analytic_weight(rem, dims, terms[match].ket);
            if (wf >= stop_tol) {
                rem -= wf * terms[match].proj;
                terms[match].w += wf;
                ++out.iterations;
                return true;
            }
        }
        const double step = 0.5 * w;
        Matrix proj = pv.projector();
        rem -= step * proj;
        terms.push_back({step, pv, std::move(proj), ket});
        ++out.iterations;
        return true;
    };

    auto exhaust_active = [&]() {
        bool any = true;
        while (any && out.iterations < opts.max_iters) {
            any = false;
            for (auto& t : terms) {
                const double w = analytic_weight(rem, dims, t.ket);
                if (w < stop_tol) continue;
                rem -= w * t.proj;
                t.w += w;
                ++out.iterations;
                any = true;
            }
        }
    };

    auto pairwise_phase = [&]() {
        double gained = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            for (std::size_t j = i + 1; j < terms.size(); ++j) {
                if (terms[i].w < stop_tol && terms[j].w < stop_tol) continue;
                const double held = terms[i].w + terms[j].w;
                const Matrix rem_pair =
                    rem + terms[i].w * terms[i].proj + terms[j].w * terms[j].proj;
                const PairRebalance rb = rebalance_pair(rem_pair, dims, terms[i].ket, terms[j].ket);
                if (rb.total <= held + stop_tol) continue;
                const Matrix q = rb.s * terms[i].proj + (1.0 - rb.s) * terms[j].proj;
                const double total = certified_cap(rem_pair, q, rb.total);
                if (total <= held + stop_tol) continue;
                terms[i].w = total * rb.s;
                terms[j].w = total * (1.0 - rb.s);
                rem = rem_pair - total * q;
                gained += total - held;
            }
        }
        terms.erase(std::remove_if(terms.begin(), terms.end(),
                                   [&](const Term& t) { return t.w < stop_tol * 1e-3; }),
                    terms.end());
        return gained;
    };

    // Escape for pure-remainder stalls: fresh usable directions all lie in
    // the plane spanned by the dominant remainder vector and a released
    // active one, so rebalance each release against the product vectors of
    // its plane.
    auto escape_phase = [&]() {
        double gained = 0.0;
        EigenSystem es = eig_hermitian(HermitianOperator(0.5 * (rem + rem.adjoint()), dims));
        const double top = es.values(es.values.size() - 1);
        if (top <= stop_tol) return gained;
        const Vector phi = es.vectors.col(es.values.size() - 1);
        const std::size_t held_terms = terms.size();
        for (std::size_t i = 0; i < held_terms; ++i) {
            if (terms[i].w < stop_tol) continue;
            std::vector<ProductVector> cands = products_in_plane(phi, terms[i].ket, dims);
            for (const auto& cand : cands) {
                const Vector ck = cand.ket();
                if (std::norm((terms[i].ket.adjoint() * ck)(0, 0)) > 1.0 - 1e-9) continue;
                const Matrix rem_i = rem + terms[i].w * terms[i].proj;
                const PairRebalance rb = rebalance_pair(rem_i, dims, terms[i].ket, ck);
                if (rb.total <= terms[i].w + stop_tol) continue;
                const Matrix cp = cand.projector();
                const Matrix q = rb.s * terms[i].proj + (1.0 - rb.s) * cp;
                const double total = certified_cap(rem_i, q, rb.total);
                if (total <= terms[i].w + stop_tol) continue;
                gained += total - terms[i].w;
                rem = rem_i - total * q;
                terms[i].w = total * rb.s;
                terms.push_back({total * (1.0 - rb.s), cand, cp, ck});
                break;
            }
        }
        return gained;
    };

    // Convergence needs two quiet sweeps in a row: discovery restarts are
    // stochastic, so one empty-handed multistart is weak evidence.
    int calm = 0;
    for (int sweep = 0; sweep < 400 && out.iterations < opts.max_iters; ++sweep) {
        bool moved = false;
        while (discover() && out.iterations < opts.max_iters) moved = true;
        const int before = out.iterations;
        exhaust_active();
        moved = moved || out.iterations > before;
        double gained = pairwise_phase();
        if (!moved && gained < stop_tol) gained += escape_phase();
        if (!moved && gained < stop_tol) {
            if (++calm >= 2) {
                out.converged = true;
                break;
            }
        } else {
            calm = 0;
        }
    }

    double lambda = 0.0;
    for (const auto& t : terms) lambda += t.w;
    out.lambda = std::min(lambda, 1.0);
    for (const auto& t : terms) out.separable_part.emplace_back(t.w, t.pv);

    if (!terms.empty()) {
        Matrix acc = Matrix::Zero(d, d);
        for (const auto& t : terms) acc += t.w * t.proj;
        out.separable_state = make_density(acc / lambda, dims);
    }
    if (out.lambda < 1.0 - 1e-6) {
        // Spectral polish: straggler eigenvalues of order stop_tol are
        // leftovers of the subtraction, not structure of the remainder.
        EigenSystem es = eig_hermitian(HermitianOperator(psd_part(rem), dims));
        const double top = es.values(es.values.size() - 1);
        Matrix kept = Matrix::Zero(d, d);
        for (int i = 0; i < es.values.size(); ++i) {
            if (es.values(i) <= 1e-6 * top) continue;
            kept += es.values(i) * (es.vectors.col(i) * es.vectors.col(i).adjoint());
        }
        out.remainder = make_density(kept / kept.trace().real(), dims);
    }
    return out;
}

RangeProductSearch range_product_search(const DensityMatrix& rho, const BsaOptions& opts) {
    if (!rho.dims().bipartite()) {
        throw PreconditionError("range_product_search requires bipartite dims, got " +
                                rho.dims().to_string());
    }
    RangeData rd = range_data(rho.matrix(), rho.dims());
    MultistartResult ms = seesaw_multistart(-rd.proj, rho.dims(), opts.restarts, opts.seed, 1e-9);
    RangeProductSearch out;
    out.overlap = -ms.best.value;
    if (out.overlap > 1.0 - 1e-6) out.vector = ProductVector(ms.best.e, ms.best.f);
    return out;
}

OptimalityReport is_optimal_entangled(const DensityMatrix& rho, const BsaOptions& opts) {
    SeparabilityOptions sopts;
    sopts.seed = opts.seed;
    sopts.tol = opts.tol;
    sopts.certify = false;
    SeparabilityVerdict verdict = is_separable(rho, sopts);
    if (verdict.tag == SepTag::Separable) {
        throw PreconditionError("NotEntangled: is_optimal_entangled needs an entangled state");
    }
    if (verdict.tag == SepTag::Undetermined) {
        throw Error("is_optimal_entangled: separability undetermined on dims " +
                    rho.dims().to_string());
    }
    RangeProductSearch rs = range_product_search(rho, opts);
    auto [pv, weight] = best_product_subtraction(rho, opts);
    OptimalityReport rep;
    rep.max_range_overlap = rs.overlap;
    rep.subtractable_weight = weight;
    rep.is_optimal = !rs.vector.has_value() && weight < 1e-6;
    if (!rep.is_optimal) {
        if (rs.vector) {
            rep.violating_product = rs.vector;
        } else {
            rep.violating_product = pv;
        }
    }
    return rep;
}

}  // namespace entwit
