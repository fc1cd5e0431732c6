#include "entwit/product_opt.hpp"

#include <cmath>
#include <limits>

namespace entwit {

namespace {

// (I (x) <f|) H (I (x) |f>), a d1 x d1 Hermitian matrix.
Matrix conditional_a(const Matrix& h, int d1, int d2, const Vector& f) {
    Matrix a = Matrix::Zero(d1, d1);
    for (int i1 = 0; i1 < d1; ++i1)
        for (int j1 = 0; j1 < d1; ++j1) {
            Complex acc = 0.0;
            for (int i2 = 0; i2 < d2; ++i2)
                for (int j2 = 0; j2 < d2; ++j2)
                    acc += std::conj(f[i2]) * h(i1 * d2 + i2, j1 * d2 + j2) * f[j2];
            a(i1, j1) = acc;
        }
    return ((a + a.adjoint()) / 2.0).eval();
}

// (<e| (x) I) H (|e> (x) I), a d2 x d2 Hermitian matrix.
Matrix conditional_b(const Matrix& h, int d1, int d2, const Vector& e) {
    Matrix b = Matrix::Zero(d2, d2);
    for (int i2 = 0; i2 < d2; ++i2)
        for (int j2 = 0; j2 < d2; ++j2) {
            Complex acc = 0.0;
            for (int i1 = 0; i1 < d1; ++i1)
                for (int j1 = 0; j1 < d1; ++j1)
                    acc += std::conj(e[i1]) * h(i1 * d2 + i2, j1 * d2 + j2) * e[j1];
            b(i2, j2) = acc;
        }
    return ((b + b.adjoint()) / 2.0).eval();
}

std::pair<double, Vector> bottom_eigenvector(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    return {solver.eigenvalues()[0], solver.eigenvectors().col(0)};
}

double objective(const Matrix& h, const Vector& e, const Vector& f) {
    const Vector x = kron_vec(e, f);
    return (x.adjoint() * h * x)(0, 0).real();
}

}  // namespace

SeesawResult seesaw_minimize(const Matrix& h, const SystemDims& dims, Vector e0, Vector f0,
                             const SeesawOptions& opts) {
    if (!dims.bipartite()) {
        throw DimensionError("seesaw_minimize: dims must be bipartite, got " + dims.to_string());
    }
    const int d1 = dims[0];
    const int d2 = dims[1];
    Vector e = e0.normalized();
    Vector f = f0.normalized();
    double value = objective(h, e, f);
    if (opts.descent_trace) opts.descent_trace->push_back(value);

    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        auto [va, ea] = bottom_eigenvector(conditional_a(h, d1, d2, f));
        e = ea;
        auto [vb, fb] = bottom_eigenvector(conditional_b(h, d1, d2, e));
        f = fb;
        if (opts.descent_trace) opts.descent_trace->push_back(vb);
        if (std::abs(value - vb) < opts.change_tol) {
            value = vb;
            ++iter;
            break;
        }
        value = vb;
    }
    // Re-evaluate at the final iterate so value matches (e, f) exactly.
    value = objective(h, e, f);
    return SeesawResult{value, std::move(e), std::move(f), iter};
}

MultistartResult seesaw_multistart(const Matrix& h, const SystemDims& dims, int restarts,
                                   std::uint64_t seed, double agree_tol, const SeesawOptions& opts,
                                   const ProductVector* warm_start) {
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(restarts) + 1);
    SeesawResult best;
    best.value = std::numeric_limits<double>::infinity();

    auto run = [&](Vector e0, Vector f0) {
        SeesawResult r = seesaw_minimize(h, dims, std::move(e0), std::move(f0), opts);
        values.push_back(r.value);
        if (r.value < best.value) best = std::move(r);
    };

    if (warm_start) run(warm_start->e(), warm_start->f());
    for (int k = 0; k < restarts; ++k) {
        run(rng.gaussian_vector(dims[0]), rng.gaussian_vector(dims[1]));
    }

    int agreeing = 0;
    for (double v : values) {
        if (std::abs(v - best.value) <= agree_tol) ++agreeing;
    }
    return MultistartResult{std::move(best), agreeing, static_cast<int>(values.size())};
}

}  // namespace entwit
