#include "entwit/ces.hpp"

#include <Eigen/QR>

#include "entwit/product_opt.hpp"

namespace entwit {

Subspace::Subspace(Matrix basis, SystemDims dims) : basis_(std::move(basis)), dims_(std::move(dims)) {
    if (basis_.rows() != dims_.ambient()) {
        throw DimensionError("Subspace: basis rows " + std::to_string(basis_.rows()) +
                             " do not match ambient " + std::to_string(dims_.ambient()));
    }
    if (basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
        throw ValidationError("Subspace: need between 1 and ambient basis columns");
    }
    Matrix gram = basis_.adjoint() * basis_;
    gram -= Matrix::Identity(basis_.cols(), basis_.cols());
    if (frobenius(gram) > 1e-10) {
        throw ValidationError("Subspace: basis columns are not orthonormal");
    }
}

Subspace Subspace::from_span(const Matrix& span, const SystemDims& dims) {
    if (span.rows() != dims.ambient()) {
        throw DimensionError("Subspace::from_span: rows do not match ambient dimension");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(span);
    qr.setThreshold(1e-10);
    const auto rank = qr.rank();
    if (rank < 1) throw ValidationError("Subspace::from_span: spanning set is zero");
    Matrix q = qr.householderQ() * Matrix::Identity(span.rows(), rank);
    return Subspace(std::move(q), dims);
}

int max_ces_dim(const SystemDims& dims) {
    if (dims.num_parties() < 2) {
        throw ValidationError("max_ces_dim needs at least two parties, got " + dims.to_string());
    }
    int sum = 0;
    for (int i = 0; i < dims.num_parties(); ++i) sum += dims[i];
    return dims.ambient() - sum + dims.num_parties() - 1;
}

SubspaceProductSearch subspace_contains_product(const Subspace& s, const CesOptions& opts) {
    if (!s.dims().bipartite()) {
        throw PreconditionError("subspace_contains_product requires bipartite dims, got " +
                                s.dims().to_string());
    }
    MultistartResult ms =
        seesaw_multistart(-s.projector(), s.dims(), opts.restarts, opts.seed, 1e-9);
    SubspaceProductSearch out;
    out.overlap = -ms.best.value;
    if (out.overlap > 1.0 - 1e-6) out.vector = ProductVector(ms.best.e, ms.best.f);
    return out;
}

bool is_ces(const Subspace& s, const CesOptions& opts) {
    return !subspace_contains_product(s, opts).vector.has_value();
}

DensityMatrix random_state_on(const Subspace& s, std::uint64_t seed) {
    const int r = s.dimension();
    Rng rng(seed);
    Matrix g(r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) g(i, j) = rng.cgauss();
    }
    Matrix w = g * g.adjoint();
    Matrix lifted = s.basis() * w * s.basis().adjoint();
    return make_density(lifted / lifted.trace().real(), s.dims());
}

}  // namespace entwit
