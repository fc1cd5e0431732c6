#include <doctest.h>

#include <cmath>

#include "entwit/linops.hpp"
#include "entwit/states.hpp"

using namespace entwit;

namespace {

Matrix random_hermitian(Rng& rng, int n) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.cgauss();
    return (g + g.adjoint()) / 2.0;
}

const SystemDims kQubits({2, 2});

}  // namespace

TEST_CASE("SystemDims basics") {
    SystemDims d({2, 3});
    CHECK(d.ambient() == 6);
    CHECK(d.num_parties() == 2);
    CHECK(d[1] == 3);
    CHECK(d.bipartite());
    CHECK(d.to_string() == "(2,3)");
    CHECK(d == SystemDims({2, 3}));
    CHECK(d != kQubits);
    CHECK(!SystemDims({4}).bipartite());

    CHECK_THROWS_AS(SystemDims(std::vector<int>{}), DimensionError);
    CHECK_THROWS_AS(SystemDims({2, 1}), DimensionError);
    CHECK_THROWS_AS(SystemDims({0}), DimensionError);
}

TEST_CASE("HermitianOperator validation") {
    CHECK_THROWS_AS(HermitianOperator(Matrix::Zero(3, 4), SystemDims({2, 2})), DimensionError);
    CHECK_THROWS_AS(HermitianOperator(Matrix::Identity(2, 2), SystemDims({2, 2})),
                    DimensionError);

    Matrix m = Matrix::Zero(4, 4);
    m(0, 1) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(HermitianOperator(m, kQubits), ValidationError);

    // A deviation inside the 1e-10 relative band is symmetrized away.
    Matrix near = Matrix::Identity(4, 4);
    near(0, 1) = Complex(0.0, 2e-11);
    HermitianOperator h(near, kQubits);
    CHECK((h.matrix() - h.matrix().adjoint()).norm() == 0.0);
    CHECK(h.trace() == doctest::Approx(4.0));
}

TEST_CASE("kron stacks dims and multiplies entries") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = 3.0;
    b(1, 1) = 4.0;
    HermitianOperator k =
        kron(HermitianOperator(a, SystemDims({2})), HermitianOperator(b, SystemDims({2})));
    CHECK(k.dims() == kQubits);
    CHECK(k.matrix()(0, 0).real() == doctest::Approx(3.0));
    CHECK(k.matrix()(1, 1).real() == doctest::Approx(4.0));
    CHECK(k.matrix()(2, 2).real() == doctest::Approx(6.0));
    CHECK(k.matrix()(3, 3).real() == doctest::Approx(8.0));
}

TEST_CASE("partial transpose against a hand-built oracle") {
    // Blocks indexed by the first factor: transposing factor 1 transposes
    // each block in place, transposing factor 0 swaps blocks across the
    // diagonal without touching their interiors.
    Matrix m(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = Complex(r * 4 + c, 0.0);

    Matrix pt1 = partial_transpose_matrix(m, kQubits, 1);
    Matrix expect1(4, 4);
    expect1 << 0, 4, 2, 6,  //
        1, 5, 3, 7,         //
        8, 12, 10, 14,      //
        9, 13, 11, 15;
    CHECK((pt1 - expect1).norm() == doctest::Approx(0.0));

    Matrix pt0 = partial_transpose_matrix(m, kQubits, 0);
    Matrix expect0(4, 4);
    expect0 << 0, 1, 8, 9,  //
        4, 5, 12, 13,       //
        2, 3, 10, 11,       //
        6, 7, 14, 15;
    CHECK((pt0 - expect0).norm() == doctest::Approx(0.0));

    // Composing both subsystem transposes is the full transpose.
    Matrix both = partial_transpose_matrix(pt1, kQubits, 0);
    CHECK((both - m.transpose()).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(partial_transpose_matrix(m, SystemDims({4}), 0), DimensionError);
    CHECK_THROWS_AS(partial_transpose_matrix(m, kQubits, 2), DimensionError);
}

TEST_CASE("gamma of the maximally entangled projector") {
    const Vector v = bell_vector(BellState::PsiPlus);
    HermitianOperator proj(v * v.adjoint(), kQubits);
    HermitianOperator g = gamma(proj);

    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = 0.5;
    expect(3, 3) = 0.5;
    expect(1, 2) = 0.5;
    expect(2, 1) = 0.5;
    CHECK((g.matrix() - expect).norm() <= 1e-15);

    EigenSystem es = eig_hermitian(g);
    CHECK(es.values[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(es.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(es.values[3] == doctest::Approx(0.5).epsilon(1e-12));

    // The negative eigenvector is the singlet.
    const Vector phi = bell_vector(BellState::PhiSinglet);
    CHECK(std::abs((phi.adjoint() * es.vectors.col(0))(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("partial transpose is a trace-preserving involution") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const SystemDims dims = (trial % 3 == 0) ? SystemDims({2, 3}) : kQubits;
        HermitianOperator h(random_hermitian(rng, dims.ambient()), dims);
        HermitianOperator g = gamma(h);
        CHECK((g.matrix() - g.matrix().adjoint()).norm() <= 1e-12);
        CHECK(std::abs(g.trace() - h.trace()) <= 1e-12);
        CHECK((gamma(g).matrix() - h.matrix()).norm() <= 1e-12 * std::max(1.0, frobenius(h.matrix())));
    }
}

TEST_CASE("trace pairing moves gamma across the product") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        HermitianOperator a(random_hermitian(rng, 4), kQubits);
        HermitianOperator b(random_hermitian(rng, 4), kQubits);
        const double lhs = hs_inner(gamma(a), b);
        const double rhs = hs_inner(a, gamma(b));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("eig_hermitian reconstructs and orders") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        HermitianOperator h(random_hermitian(rng, 4), kQubits);
        EigenSystem es = eig_hermitian(h);
        Matrix rebuilt = es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Complex>() *
                         es.vectors.adjoint();
        CHECK((rebuilt - h.matrix()).norm() <= 1e-10 * std::max(1.0, frobenius(h.matrix())));
        for (int i = 1; i < es.values.size(); ++i) CHECK(es.values[i] >= es.values[i - 1]);
        CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(4, 4)).norm() <= 1e-12);
    }

    HermitianOperator id = identity_operator(kQubits);
    EigenSystem es = eig_hermitian(id);
    for (int i = 0; i < 4; ++i) CHECK(es.values[i] == doctest::Approx(1.0).epsilon(1e-12));

    const Vector v = bell_vector(BellState::PsiPlus);
    EigenSystem proj = eig_hermitian(HermitianOperator(v * v.adjoint(), kQubits));
    CHECK(proj.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(proj.values[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(proj.values[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pinv closed forms") {
    HermitianOperator quarter(Matrix::Identity(4, 4) / 4.0, kQubits);
    CHECK((pinv(quarter).matrix() - 4.0 * Matrix::Identity(4, 4)).norm() <= 1e-12);

    const Vector v = bell_vector(BellState::PsiPlus);
    HermitianOperator proj(v * v.adjoint(), kQubits);
    CHECK((pinv(proj).matrix() - proj.matrix()).norm() <= 1e-12);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    HermitianOperator dh(d, SystemDims({2}));
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 0.5;
    CHECK((pinv(dh).matrix() - expect).norm() <= 1e-15);

    HermitianOperator zero(Matrix::Zero(4, 4), kQubits);
    CHECK(frobenius(pinv(zero).matrix()) == 0.0);
}

TEST_CASE("pinv satisfies the Moore-Penrose identities") {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix g(4, 3);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = rng.cgauss();
        HermitianOperator a(g * g.adjoint(), kQubits);  // rank 3, singular
        const Matrix& am = a.matrix();
        const Matrix pm = pinv(a).matrix();
        const double scale = std::max(1.0, frobenius(am));
        CHECK((am * pm * am - am).norm() <= 1e-10 * scale);
        CHECK((pm * am * pm - pm).norm() <= 1e-10 * frobenius(pm));
        CHECK((am * pm - (am * pm).adjoint()).norm() <= 1e-10);
        CHECK((pm * am - (pm * am).adjoint()).norm() <= 1e-10);
    }
}

TEST_CASE("hs_inner values and symmetry") {
    HermitianOperator id = identity_operator(kQubits);
    HermitianOperator quarter(Matrix::Identity(4, 4) / 4.0, kQubits);
    CHECK(hs_inner(quarter, id) == doctest::Approx(1.0).epsilon(1e-15));

    const Vector phi = bell_vector(BellState::PhiSinglet);
    HermitianOperator flip = gamma(HermitianOperator(phi * phi.adjoint(), kQubits));
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        CHECK(std::abs(hs_inner(flip, werner(p).op()) - (1.0 - 3.0 * p) / 4.0) <= 1e-12);
    }

    Rng rng(15);
    HermitianOperator a(random_hermitian(rng, 4), kQubits);
    HermitianOperator b(random_hermitian(rng, 4), kQubits);
    CHECK(hs_inner(a, b) == doctest::Approx(hs_inner(b, a)).epsilon(1e-12));

    CHECK_THROWS_AS(hs_inner(a, identity_operator(SystemDims({2, 3}))), DimensionError);
}

TEST_CASE("psd_part splits into orthogonal positive and negative pieces") {
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = random_hermitian(rng, 4);
        Matrix pos = psd_part(m);
        Matrix neg = psd_part(-m);
        CHECK(min_eigenvalue(pos) >= -1e-12);
        CHECK(min_eigenvalue(neg) >= -1e-12);
        CHECK((m - (pos - neg)).norm() <= 1e-12 * std::max(1.0, m.norm()));
        CHECK(std::abs((pos * neg).trace()) <= 1e-10);
    }
}

TEST_CASE("kron_vec lays out amplitudes row-major") {
    Vector e(2), f(3);
    e << Complex(1, 0), Complex(0, 2);
    f << Complex(3, 0), Complex(0, 0), Complex(0, -1);
    Vector k = kron_vec(e, f);
    REQUIRE(k.size() == 6);
    CHECK(k[0] == Complex(3, 0));
    CHECK(k[2] == Complex(0, -1));
    CHECK(k[3] == Complex(0, 6));
    CHECK(k[5] == Complex(2, 0));
}

TEST_CASE("min_eigenvalue and frobenius agree with eig") {
    Rng rng(17);
    Matrix m = random_hermitian(rng, 4);
    EigenSystem es = eig_hermitian(HermitianOperator(m, kQubits));
    CHECK(min_eigenvalue(m) == doctest::Approx(es.values[0]).epsilon(1e-12));
    CHECK(frobenius(m) == doctest::Approx(m.norm()));
}
