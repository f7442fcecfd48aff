#include <doctest.h>

#include "robin/eigensolve.hpp"
#include "robin/errors.hpp"

#include <cmath>
#include <random>

using namespace robin;

namespace {

SymPencil dense_pencil(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    SymPencil p;
    const int n = static_cast<int>(A.rows());
    p.A.resize(n, n);
    p.B.resize(n, n);
    std::vector<Eigen::Triplet<double>> ta, tb;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (A(i, j) != 0) ta.emplace_back(i, j, A(i, j));
            if (B(i, j) != 0) tb.emplace_back(i, j, B(i, j));
        }
    p.A.setFromTriplets(ta.begin(), ta.end());
    p.B.setFromTriplets(tb.begin(), tb.end());
    return p;
}

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    auto u = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = u();
    return 0.5 * (M + M.transpose());
}

} // namespace

TEST_CASE("finite-difference Dirichlet Laplacian of size 3 has closed-form spectrum") {
    Eigen::MatrixXd A(3, 3);
    A << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    SymPencil p = dense_pencil(A, Eigen::MatrixXd::Identity(3, 3));
    Spectrum s = lowest_eigenpairs(p, 3);
    // 2 - 2cos(k pi/4), k = 1..3
    CHECK(s.values[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.values[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("diagonal pencil, k = 1") {
    Eigen::MatrixXd A = Eigen::Vector3d(1, 2, 3).asDiagonal();
    SymPencil p = dense_pencil(A, Eigen::MatrixXd::Identity(3, 3));
    Spectrum s = lowest_eigenpairs(p, 1);
    CHECK(s.values.size() == 1);
    CHECK(s.values[0] == doctest::Approx(1.0));
}

TEST_CASE("iterative path matches dense diagonalization to 1e-10") {
    const int n = 50;
    SymPencil p = dense_pencil(random_symmetric(n, 123), Eigen::MatrixXd::Identity(n, n));
    Spectrum dense = lowest_eigenpairs(p, 5);
    SolveOptions opts;
    opts.force_iterative = true;
    opts.tol = 1e-11;
    opts.want_vectors = true;
    Spectrum iter = lowest_eigenpairs(p, 5, opts);
    for (int j = 0; j < 5; ++j)
        CHECK(iter.values[j] == doctest::Approx(dense.values[j]).epsilon(1e-10));
    for (double r : iter.residuals) CHECK(r <= 1e-11);
    // B-orthonormality of the returned vectors
    const Eigen::MatrixXd G =
        iter.vectors->transpose() * Eigen::MatrixXd(p.B) * *iter.vectors;
    CHECK((G - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("deterministic output for a fixed seed") {
    const int n = 80;
    SymPencil p = dense_pencil(random_symmetric(n, 5), Eigen::MatrixXd::Identity(n, n));
    SolveOptions opts;
    opts.force_iterative = true;
    Spectrum a = lowest_eigenpairs(p, 3, opts);
    Spectrum b = lowest_eigenpairs(p, 3, opts);
    for (int j = 0; j < 3; ++j) CHECK(a.values[j] == b.values[j]);
}

TEST_CASE("indefinite mass matrix is rejected") {
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(4, 4);
    B(2, 2) = -1.0;
    SymPencil p = dense_pencil(random_symmetric(4, 9), B);
    CHECK_THROWS_AS(lowest_eigenpairs(p, 2), DefinitenessError);
}

TEST_CASE("asymmetric stiffness is rejected") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    A(0, 1) = 1.0;  // no transpose partner
    SymPencil p = dense_pencil(A, Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(lowest_eigenpairs(p, 1), std::invalid_argument);
}

TEST_CASE("argument validation") {
    SymPencil p = dense_pencil(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(lowest_eigenpairs(p, 0), std::invalid_argument);
    CHECK_THROWS_AS(lowest_eigenpairs(p, 4), std::invalid_argument);
    SolveOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(lowest_eigenpairs(p, 1, bad), std::invalid_argument);
}

TEST_CASE("form monotonicity: adding a PSD rank-one never lowers eigenvalues") {
    const int n = 40;
    std::mt19937_64 gen(77);
    auto u = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
    Eigen::MatrixXd A = random_symmetric(n, 31);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = u();
        Eigen::MatrixXd Aplus = A + v * v.transpose();
        Spectrum base = lowest_eigenpairs(dense_pencil(A, Eigen::MatrixXd::Identity(n, n)), 6);
        Spectrum bumped =
            lowest_eigenpairs(dense_pencil(Aplus, Eigen::MatrixXd::Identity(n, n)), 6);
        for (int j = 0; j < 6; ++j) CHECK(bumped.values[j] >= base.values[j] - 1e-11);
        A = Aplus;
    }
}

TEST_CASE("classify_discrete") {
    Spectrum s;
    s.values = {-110.0, -99.0, -50.0};
    s.residuals = {0, 0, 0};
    Spectrum out = classify_discrete(s, -100.0, 0.5);
    REQUIRE(out.discrete_flags.size() == 3);
    CHECK(out.discrete_flags[0]);
    CHECK_FALSE(out.discrete_flags[1]);
    CHECK_FALSE(out.discrete_flags[2]);
    CHECK(out.threshold == doctest::Approx(-100.0));

    // obstacle exterior: threshold 0, every negative value is discrete
    Spectrum ext;
    ext.values = {-56.4, -55.5, -0.01};
    ext.residuals = {0, 0, 0};
    Spectrum eo = classify_discrete(ext, 0.0, 0.0);
    CHECK(eo.discrete_flags[0]);
    CHECK(eo.discrete_flags[1]);
    CHECK(eo.discrete_flags[2]);

    Spectrum empty;
    Spectrum out2 = classify_discrete(empty, 0.0, 0.0);
    CHECK(out2.discrete_flags.empty());
    CHECK_THROWS_AS(classify_discrete(s, 0.0, -1.0), std::invalid_argument);
}
