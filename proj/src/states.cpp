#include "entwit/states.hpp"

#include <cmath>

namespace entwit {

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(gen_);
}

Complex Rng::cgauss() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
}

Vector Rng::gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = cgauss();
    return v;
}

std::uint64_t Rng::next_seed() { return gen_(); }

namespace {

Vector gauge_fix(Vector v) {
    const double norm = v.norm();
    if (norm < 1e-300) {
        throw ValidationError("ProductVector: zero factor vector");
    }
    v /= norm;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 1e-14) {
            v *= std::conj(v[i]) / mag;
            break;
        }
    }
    return v;
}

}  // namespace

ProductVector::ProductVector(Vector e, Vector f)
    : e_(gauge_fix(std::move(e))), f_(gauge_fix(std::move(f))) {}

Matrix ProductVector::projector() const {
    const Vector k = ket();
    return k * k.adjoint();
}

SystemDims ProductVector::dims() const {
    return SystemDims({static_cast<int>(e_.size()), static_cast<int>(f_.size())});
}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
    const double tr = op_.trace();
    if (std::abs(tr - 1.0) > 1e-9) {
        throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }
    const double lam_min = min_eigenvalue(op_.matrix());
    if (lam_min < -1e-9) {
        throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(lam_min));
    }
}

DensityMatrix make_density(Matrix entries, SystemDims dims) {
    return DensityMatrix(HermitianOperator(std::move(entries), std::move(dims)));
}

Vector bell_vector(BellState which) {
    Vector v = Vector::Zero(4);
    const double s = 1.0 / std::sqrt(2.0);
    switch (which) {
        case BellState::PsiPlus:
            v[0] = s;  // |00>
            v[3] = s;  // |11>
            break;
        case BellState::PsiMinus:
            v[0] = s;
            v[3] = -s;
            break;
        case BellState::PhiSinglet:
            v[2] = s;   // |10>
            v[1] = -s;  // |01>
            break;
    }
    return v;
}

DensityMatrix bell(BellState which) {
    const Vector v = bell_vector(which);
    return make_density(v * v.adjoint(), SystemDims({2, 2}));
}

DensityMatrix werner(double p) {
    if (p < 0.0 || p > 1.0) {
        throw ValidationError("werner: p must lie in [0,1], got " + std::to_string(p));
    }
    const Vector v = bell_vector(BellState::PsiPlus);
    Matrix m = p * (v * v.adjoint()) + (1.0 - p) / 4.0 * Matrix::Identity(4, 4);
    return make_density(std::move(m), SystemDims({2, 2}));
}

DensityMatrix eta(double q) {
    if (q < 0.0 || q > 1.0) {
        throw ValidationError("eta: q must lie in [0,1], got " + std::to_string(q));
    }
    const Vector vm = bell_vector(BellState::PsiMinus);
    const Vector vp = bell_vector(BellState::PsiPlus);
    Matrix m = q * (vm * vm.adjoint()) + (1.0 - q) * (vp * vp.adjoint());
    return make_density(std::move(m), SystemDims({2, 2}));
}

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts) {
    if (parts.empty()) {
        throw ValidationError("mix: empty mixture");
    }
    const SystemDims& dims = parts.front().second.dims();
    double total = 0.0;
    Matrix m = Matrix::Zero(dims.ambient(), dims.ambient());
    for (const auto& [w, state] : parts) {
        if (w < 0.0) {
            throw ValidationError("mix: negative weight " + std::to_string(w));
        }
        if (state.dims() != dims) {
            throw DimensionError("mix: mismatched dims " + state.dims().to_string() + " vs " +
                                 dims.to_string());
        }
        total += w;
        m += w * state.matrix();
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("mix: weights sum to " + std::to_string(total) + ", expected 1");
    }
    return make_density(std::move(m), dims);
}

ProductVector random_product_vector(const SystemDims& dims, std::uint64_t seed) {
    if (!dims.bipartite()) {
        throw DimensionError("random_product_vector: dims must be bipartite, got " +
                             dims.to_string());
    }
    Rng rng(seed);
    Vector e = rng.gaussian_vector(dims[0]);
    Vector f = rng.gaussian_vector(dims[1]);
    return ProductVector(std::move(e), std::move(f));
}

DensityMatrix random_state(const SystemDims& dims, int rank, std::uint64_t seed) {
    const int n = dims.ambient();
    if (rank < 1 || rank > n) {
        throw ValidationError("random_state: rank " + std::to_string(rank) +
                              " invalid for ambient dimension " + std::to_string(n));
    }
    Rng rng(seed);
    Matrix g(n, rank);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = rng.cgauss();
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return make_density(std::move(m), dims);
}

bool is_ppt(const DensityMatrix& rho) {
    const Matrix pt = partial_transpose_matrix(rho.matrix(), rho.dims(), 1);
    return min_eigenvalue(pt) >= -1e-9;
}

double fidelity_with_pure(const DensityMatrix& rho, const Vector& v) {
    return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

}  // namespace entwit
