#ifndef ENTWIT_LINOPS_HPP
#define ENTWIT_LINOPS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entwit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Error taxonomy; the CLI maps these onto its exit-code contract.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct DimensionError : ValidationError {
    using ValidationError::ValidationError;
};
struct PreconditionError : Error {
    using Error::Error;
};

/// Local dimensions d_1..d_k of a tensor-product space. Single-party lists
/// are allowed (plain matrices); product-vector searches require k = 2.
class SystemDims {
  public:
    explicit SystemDims(std::vector<int> dims);
    SystemDims(std::initializer_list<int> dims) : SystemDims(std::vector<int>(dims)) {}

    int num_parties() const { return static_cast<int>(dims_.size()); }
    int ambient() const;
    int operator[](int i) const { return dims_.at(static_cast<std::size_t>(i)); }
    const std::vector<int>& list() const { return dims_; }
    bool bipartite() const { return dims_.size() == 2; }

    bool operator==(const SystemDims& other) const { return dims_ == other.dims_; }
    bool operator!=(const SystemDims& other) const { return !(*this == other); }

    std::string to_string() const;

  private:
    std::vector<int> dims_;
};

/// A finite-dimensional Hermitian matrix carrying its tensor-product
/// dimensions. Construction validates Hermiticity to 1e-10 (relative
/// Frobenius) and then stores the symmetrized (M + M^dag)/2.
class HermitianOperator {
  public:
    HermitianOperator(Matrix entries, SystemDims dims);

    const Matrix& matrix() const { return mat_; }
    const SystemDims& dims() const { return dims_; }
    int ambient() const { return static_cast<int>(mat_.rows()); }
    double trace() const { return mat_.trace().real(); }

  private:
    Matrix mat_;
    SystemDims dims_;
};

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // orthonormal columns, matching order
};

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/// Transposition of one tensor factor; requires exactly two subsystems.
HermitianOperator partial_transpose(const HermitianOperator& h, int subsystem);

/// Partial transpose on the second factor (the usual Gamma).
inline HermitianOperator gamma(const HermitianOperator& h) { return partial_transpose(h, 1); }

EigenSystem eig_hermitian(const HermitianOperator& h);

/// Moore-Penrose pseudo-inverse restricted to eigenvectors with
/// |eigenvalue| > cutoff * max|eigenvalue|.
HermitianOperator pinv(const HermitianOperator& h, double cutoff = 1e-12);

/// Trace pairing tr(a b); real for Hermitian arguments.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator identity_operator(const SystemDims& dims);

// Raw-matrix helpers shared across modules.
Matrix partial_transpose_matrix(const Matrix& m, const SystemDims& dims, int subsystem);
double min_eigenvalue(const Matrix& m);
Matrix psd_part(const Matrix& m);
Vector kron_vec(const Vector& e, const Vector& f);
double frobenius(const Matrix& m);

}  // namespace entwit

#endif
