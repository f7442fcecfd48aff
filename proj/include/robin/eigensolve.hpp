#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

namespace robin {

/// Discretized quadratic form pair: stiffness A (symmetric) and mass B
/// (symmetric positive definite).
struct SymPencil {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseMatrix<double> B;
    std::string provenance;

    int dim() const { return static_cast<int>(A.rows()); }
};

/// Ascending eigenvalue estimates with residual certificates. Vectors, when
/// kept, are B-orthonormal columns. `discrete_flags` is filled by
/// classify_discrete.
struct Spectrum {
    std::vector<double> values;
    std::vector<double> residuals;  // ||A v - lambda B v|| / ||B v||
    std::optional<Eigen::MatrixXd> vectors;
    std::optional<double> threshold;
    double margin = 0;
    std::vector<bool> discrete_flags;
};

struct SolveOptions {
    double tol = 1e-8;
    int dense_threshold = 2000;
    unsigned long seed = 0;
    int max_lanczos = 400;
    bool want_vectors = false;
    bool force_iterative = false;           // testing hook
    std::optional<double> shift_hint;       // starting point for the spectral shift
};

/// k smallest eigenpairs of A x = lambda B x. Dense direct solve for small
/// pencils, shift-invert Lanczos with B-inner-product reorthogonalization
/// above the dense threshold. Deterministic for a fixed seed.
Spectrum lowest_eigenpairs(const SymPencil& pencil, int k, const SolveOptions& opts = {});

/// Flags values strictly below threshold - margin as discrete.
Spectrum classify_discrete(Spectrum spectrum, double threshold, double margin);

} // namespace robin
