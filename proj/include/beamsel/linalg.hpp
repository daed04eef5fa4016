#pragma once
//
// Dense complex linear algebra for the selection pipeline: Gram matrices,
// Hermitian inversion via Cholesky, trace of the inverse, rank-1 inverse
// downdates and a Jacobi eigensolver. Everything is sized for small
// Hermitian systems (a few hundred at most); this is not a BLAS.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "beamsel/errors.hpp"

namespace beamsel {

using cdouble = std::complex<double>;

// Dense row-major complex matrix. Constructors that accept entries reject
// non-finite values.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);  // zero-initialized
  ComplexMatrix(std::size_t rows, std::size_t cols,
                std::vector<cdouble> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cdouble& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const cdouble& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const cdouble> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<cdouble> column(std::size_t c) const;
  const std::vector<cdouble>& entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

// Copy of the listed columns, in the listed order.
ComplexMatrix select_columns(const ComplexMatrix& m,
                             std::span<const std::size_t> indices);

// Hermitian matrix. Construction verifies G = G^H to 1e-12 relative
// Frobenius and then stores the exactly symmetrized (G + G^H) / 2, so the
// diagonal is real and drift from repeated updates cannot accumulate.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m);

  static HermitianMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  cdouble operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double trace_real() const;

 private:
  ComplexMatrix m_;
};

// Result of removing a rank-1 term from a Hermitian matrix whose inverse is
// known. `feasible` is false when the Sherman-Morrison pivot 1 - h^H G^-1 h
// falls below the singularity tolerance; `updated_inverse` is then empty.
struct DowndateOutcome {
  std::optional<HermitianMatrix> updated_inverse;
  double denominator = 0.0;
  bool feasible = false;
};

// A downdate with pivot at or below this is treated as rank-destroying.
inline constexpr double kDowndateTolerance = 1e-10;

// G = H H^H for a wide matrix (rows <= cols). Hermitian PSD by construction.
HermitianMatrix gram(const ComplexMatrix& h);

// Inverse of a Hermitian positive definite matrix (Cholesky). Throws
// SingularGram with the failing pivot index when a pivot collapses.
HermitianMatrix hermitian_inverse(const HermitianMatrix& g);

// Tr(G^-1) without forming the full inverse.
double trace_inverse(const HermitianMatrix& g);

// (G - h h^H)^-1 from G^-1 via the Sherman-Morrison identity
//   (G - h h^H)^-1 = G^-1 + (G^-1 h h^H G^-1) / (1 - h^H G^-1 h).
DowndateOutcome sherman_morrison_downdate(const HermitianMatrix& g_inv,
                                          std::span<const cdouble> h);

// ||H^+||_F^2 = Tr((H H^H)^-1) for a full-row-rank wide matrix.
double pinv_fro_norm_sq(const ComplexMatrix& h);

struct EigDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // unitary; column i pairs eigenvalues[i]
};

// Cyclic Jacobi for Hermitian matrices. Throws NumericalFailure if the
// off-diagonal mass has not collapsed after 100 * dim sweeps.
EigDecomposition hermitian_eig(const HermitianMatrix& g);

}  // namespace beamsel
