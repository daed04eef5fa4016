#include "beamsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace beamsel {

namespace {

bool entry_finite(const cdouble& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

void check_finite(const std::vector<cdouble>& data) {
  for (const auto& z : data) {
    if (!entry_finite(z)) {
      throw std::invalid_argument("matrix entries must be finite");
    }
  }
}

// Lower-triangular Cholesky factor of a Hermitian PD matrix, dense row-major.
std::vector<cdouble> cholesky_lower(const ComplexMatrix& g) {
  const std::size_t n = g.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(g(i, i).real()));
  }
  if (scale == 0.0) scale = 1.0;
  const double tol = scale * 1e-13;

  std::vector<cdouble> l(n * n, cdouble{});
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * n + k]);
    if (!(d > tol)) throw SingularGram(j, d);
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cdouble s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= l[i * n + k] * std::conj(l[j * n + k]);
      }
      l[i * n + j] = s / ljj;
    }
  }
  return l;
}

// Inverse of a lower-triangular matrix, in dense row-major storage.
std::vector<cdouble> invert_lower(const std::vector<cdouble>& l,
                                  std::size_t n) {
  std::vector<cdouble> inv(n * n, cdouble{});
  for (std::size_t j = 0; j < n; ++j) {
    inv[j * n + j] = 1.0 / l[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      cdouble s{};
      for (std::size_t k = j; k < i; ++k) s += l[i * n + k] * inv[k * n + j];
      inv[i * n + j] = -s / l[i * n + i];
    }
  }
  return inv;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cdouble{}) {
  if (rows == 0 || cols == 0) {
    rows_ = rows;
    cols_ = cols;
    data_.clear();
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cdouble> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("entry count must equal rows * cols");
  }
  check_finite(data_);
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cdouble>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("rows must have equal length");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<cdouble> ComplexMatrix::column(std::size_t c) const {
  std::vector<cdouble> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matrix product dimension mismatch");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cdouble aik = a(i, k);
      if (aik == cdouble{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix select_columns(const ComplexMatrix& m,
                             std::span<const std::size_t> indices) {
  ComplexMatrix out(m.rows(), indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const std::size_t src = indices[c];
    if (src >= m.cols()) {
      throw std::invalid_argument("column index out of range");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, c) = m(r, src);
  }
  return out;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("Hermitian matrix must be square");
  }
  const std::size_t n = m_.rows();
  double asym = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      asym += std::norm(m_(i, j) - std::conj(m_(j, i)));
      norm += std::norm(m_(i, j));
    }
  }
  if (std::sqrt(asym) > 2e-12 * std::max(std::sqrt(norm), 1e-300)) {
    throw std::invalid_argument("matrix is not Hermitian");
  }
  // Store (G + G^H)/2 exactly; the diagonal becomes exactly real.
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m_(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cdouble avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
      m_(i, j) = avg;
      m_(j, i) = std::conj(avg);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(ComplexMatrix::identity(n));
}

double HermitianMatrix::trace_real() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i).real();
  return t;
}

HermitianMatrix gram(const ComplexMatrix& h) {
  if (h.rows() > h.cols()) {
    throw std::invalid_argument("gram expects rows <= cols");
  }
  const std::size_t n = h.rows();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = h.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto rj = h.row(j);
      cdouble s{};
      for (std::size_t k = 0; k < h.cols(); ++k) {
        s += ri[k] * std::conj(rj[k]);
      }
      if (i == j) s = s.real();
      g(i, j) = s;
      g(j, i) = std::conj(s);
    }
  }
  return HermitianMatrix(std::move(g));
}

HermitianMatrix hermitian_inverse(const HermitianMatrix& g) {
  const std::size_t n = g.dim();
  const auto l = cholesky_lower(g.matrix());
  const auto linv = invert_lower(l, n);
  // G^-1 = L^-H L^-1, built Hermitian by construction.
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cdouble s{};
      for (std::size_t k = j; k < n; ++k) {
        s += std::conj(linv[k * n + i]) * linv[k * n + j];
      }
      if (i == j) s = s.real();
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
  }
  return HermitianMatrix(std::move(out));
}

double trace_inverse(const HermitianMatrix& g) {
  const std::size_t n = g.dim();
  const auto l = cholesky_lower(g.matrix());
  const auto linv = invert_lower(l, n);
  // Tr(G^-1) = ||L^-1||_F^2.
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) t += std::norm(linv[i * n + j]);
  }
  return t;
}

DowndateOutcome sherman_morrison_downdate(const HermitianMatrix& g_inv,
                                          std::span<const cdouble> h) {
  const std::size_t n = g_inv.dim();
  if (h.size() != n) {
    throw std::invalid_argument("vector length must match matrix dimension");
  }
  std::vector<cdouble> s(n, cdouble{});
  for (std::size_t i = 0; i < n; ++i) {
    cdouble acc{};
    for (std::size_t j = 0; j < n; ++j) acc += g_inv(i, j) * h[j];
    s[i] = acc;
  }
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    quad += (std::conj(h[i]) * s[i]).real();
  }
  const double d = 1.0 - quad;

  DowndateOutcome outcome;
  outcome.denominator = d;
  outcome.feasible = d > kDowndateTolerance;
  if (!outcome.feasible) return outcome;

  ComplexMatrix updated(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cdouble v = g_inv(i, j) + s[i] * std::conj(s[j]) / d;
      if (i == j) v = v.real();
      updated(i, j) = v;
      updated(j, i) = std::conj(v);
    }
  }
  outcome.updated_inverse = HermitianMatrix(std::move(updated));
  return outcome;
}

double pinv_fro_norm_sq(const ComplexMatrix& h) {
  return trace_inverse(gram(h));
}

EigDecomposition hermitian_eig(const HermitianMatrix& g) {
  const std::size_t n = g.dim();
  ComplexMatrix a = g.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double fro = a.frobenius_norm();
  const double target = std::max(fro, 1.0) * 1e-14;

  auto offdiag = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    }
    return std::sqrt(s);
  };

  const std::size_t max_sweeps = 100 * std::max<std::size_t>(n, 1);
  std::size_t sweep = 0;
  while (offdiag() > target) {
    if (++sweep > max_sweeps) {
      throw NumericalFailure("Jacobi eigensolver did not converge");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cdouble apq = a(p, q);
        const double beta = std::abs(apq);
        if (beta <= target / (n * n + 1.0)) continue;
        const cdouble phase = apq / beta;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();

        // Real rotation on the phase-absorbed 2x2 block [[app, b],[b, aqq]].
        // The annihilating tangent solves t^2 - 2 tau t - 1 = 0; take the
        // smaller-magnitude root.
        const double tau = (aqq - app) / (2.0 * beta);
        const double t = (tau >= 0.0)
                             ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sr = t * c;

        // Plane unitary: U_pp = c, U_pq = -sr, U_qp = conj(phase) sr,
        // U_qq = conj(phase) c.
        const cdouble upq = -sr;
        const cdouble uqp = std::conj(phase) * sr;
        const cdouble uqq = std::conj(phase) * c;

        // A <- U^H A U ; columns first, then rows.
        for (std::size_t i = 0; i < n; ++i) {
          const cdouble aip = a(i, p);
          const cdouble aiq = a(i, q);
          a(i, p) = aip * c + aiq * uqp;
          a(i, q) = aip * upq + aiq * uqq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cdouble apj = a(p, j);
          const cdouble aqj = a(q, j);
          a(p, j) = c * apj + std::conj(uqp) * aqj;
          a(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
        }
        a(p, q) = cdouble{};
        a(q, p) = cdouble{};
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t i = 0; i < n; ++i) {
          const cdouble vip = v(i, p);
          const cdouble viq = v(i, q);
          v(i, p) = vip * c + viq * uqp;
          v(i, q) = vip * upq + viq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) {
                     return diag[x] > diag[y];
                   });

  EigDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = diag[order[c]];
    for (std::size_t r = 0; r < n; ++r) {
      out.eigenvectors(r, c) = v(r, order[c]);
    }
  }
  return out;
}

}  // namespace beamsel
