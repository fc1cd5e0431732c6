#include "entwit/linops.hpp"

#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace entwit {

SystemDims::SystemDims(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw DimensionError("SystemDims: empty dimension list");
    }
    for (int d : dims_) {
        if (d < 2) {
            throw DimensionError("SystemDims: every local dimension must be >= 2, got " +
                                 std::to_string(d));
        }
    }
}

int SystemDims::ambient() const {
    int n = 1;
    for (int d : dims_) n *= d;
    return n;
}

std::string SystemDims::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (i) os << ",";
        os << dims_[i];
    }
    os << ")";
    return os.str();
}

HermitianOperator::HermitianOperator(Matrix entries, SystemDims dims)
    : mat_(std::move(entries)), dims_(std::move(dims)) {
    if (mat_.rows() != mat_.cols()) {
        throw DimensionError("HermitianOperator: matrix is not square");
    }
    if (mat_.rows() != dims_.ambient()) {
        throw DimensionError("HermitianOperator: matrix dimension " + std::to_string(mat_.rows()) +
                             " does not match dims " + dims_.to_string());
    }
    const double scale = mat_.norm();
    const double dev = (mat_ - mat_.adjoint()).norm();
    if (dev > 1e-10 * std::max(scale, 1e-300)) {
        throw ValidationError("HermitianOperator: matrix is not Hermitian (relative deviation " +
                              std::to_string(scale > 0 ? dev / scale : dev) + ")");
    }
    mat_ = ((mat_ + mat_.adjoint()) / 2.0).eval();
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
    std::vector<int> dims = a.dims().list();
    for (int d : b.dims().list()) dims.push_back(d);
    Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix());
    return HermitianOperator(std::move(m), SystemDims(std::move(dims)));
}

Matrix partial_transpose_matrix(const Matrix& m, const SystemDims& dims, int subsystem) {
    if (!dims.bipartite()) {
        throw DimensionError("partial_transpose: operator must be bipartite, dims " +
                             dims.to_string());
    }
    if (subsystem != 0 && subsystem != 1) {
        throw DimensionError("partial_transpose: subsystem index must be 0 or 1");
    }
    const int d1 = dims[0];
    const int d2 = dims[1];
    Matrix out(m.rows(), m.cols());
    for (int i1 = 0; i1 < d1; ++i1)
        for (int i2 = 0; i2 < d2; ++i2)
            for (int j1 = 0; j1 < d1; ++j1)
                for (int j2 = 0; j2 < d2; ++j2) {
                    const int r = i1 * d2 + i2;
                    const int c = j1 * d2 + j2;
                    if (subsystem == 0) {
                        out(j1 * d2 + i2, i1 * d2 + j2) = m(r, c);
                    } else {
                        out(i1 * d2 + j2, j1 * d2 + i2) = m(r, c);
                    }
                }
    return out;
}

HermitianOperator partial_transpose(const HermitianOperator& h, int subsystem) {
    return HermitianOperator(partial_transpose_matrix(h.matrix(), h.dims(), subsystem), h.dims());
}

EigenSystem eig_hermitian(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw ValidationError("eig_hermitian: eigendecomposition failed to converge");
    }
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOperator pinv(const HermitianOperator& h, double cutoff) {
    EigenSystem es = eig_hermitian(h);
    const double lam_max = es.values.cwiseAbs().maxCoeff();
    Matrix out = Matrix::Zero(h.ambient(), h.ambient());
    if (lam_max <= 0) {
        return HermitianOperator(std::move(out), h.dims());
    }
    for (int i = 0; i < es.values.size(); ++i) {
        if (std::abs(es.values[i]) > cutoff * lam_max) {
            out += (1.0 / es.values[i]) * es.vectors.col(i) * es.vectors.col(i).adjoint();
        }
    }
    return HermitianOperator(std::move(out), h.dims());
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.ambient() != b.ambient()) {
        throw DimensionError("hs_inner: ambient dimensions differ (" +
                             std::to_string(a.ambient()) + " vs " + std::to_string(b.ambient()) +
                             ")");
    }
    return (a.matrix() * b.matrix()).trace().real();
}

HermitianOperator identity_operator(const SystemDims& dims) {
    return HermitianOperator(Matrix::Identity(dims.ambient(), dims.ambient()), dims);
}

double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

Matrix psd_part(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    Eigen::VectorXd vals = solver.eigenvalues().cwiseMax(0.0);
    return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
}

Vector kron_vec(const Vector& e, const Vector& f) {
    Vector out(e.size() * f.size());
    for (Eigen::Index i = 0; i < e.size(); ++i)
        for (Eigen::Index j = 0; j < f.size(); ++j) out[i * f.size() + j] = e[i] * f[j];
    return out;
}

double frobenius(const Matrix& m) { return m.norm(); }

}  // namespace entwit
