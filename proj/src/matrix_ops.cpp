#include "povmkit/matrix_ops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace povmkit {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) return false;
  double dev = max_abs(ComplexMatrix(m - m.adjoint()));
  return dev <= tol.hermitian * (1.0 + max_abs(m));
}

void require_hermitian(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols())
    throw Error(Errc::dimension_mismatch, "matrix is not square");
  if (!is_hermitian(m, tol))
    throw Error(Errc::not_hermitian, "matrix is not Hermitian within tolerance");
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_eigenvalue_sym(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const ComplexMatrix& m, double eig_floor, const Tolerances& tol) {
  if (!is_hermitian(m, tol)) return false;
  return min_eigenvalue(m) >= -eig_floor;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  ComplexMatrix gram = m.adjoint() * m;
  gram -= ComplexMatrix::Identity(m.rows(), m.cols());
  return max_abs(gram) <= tol;
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m, const Tolerances& tol) {
  require_hermitian(m, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  RealVector vals = es.eigenvalues();
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < -tol.psd_reject)
      throw Error(Errc::not_psd, "matrix has eigenvalue " +
                                     std::to_string(vals[i]) +
                                     " below the PSD tolerance");
    if (vals[i] < 0.0) vals[i] = 0.0;
  }
  RealVector roots = vals.cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() *
         es.eigenvectors().adjoint();
}

namespace {

// Orthogonalizes `candidate` against the columns of `basis[0..count)`, twice
// for numerical stability. Returns false when the residual is too small to
// extend the basis.
bool gram_schmidt_extend(std::vector<Eigen::VectorXcd>& basis,
                         Eigen::VectorXcd candidate, double reject_tol) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& col : basis) {
      candidate -= col.dot(candidate) * col;
    }
  }
  double nrm = candidate.norm();
  if (nrm <= reject_tol) return false;
  basis.push_back(candidate / nrm);
  return true;
}

}  // namespace

PolarDecomposition polar_decompose(const ComplexMatrix& m,
                                   const Tolerances& tol) {
  if (m.rows() != m.cols())
    throw Error(Errc::dimension_mismatch, "polar decomposition needs a square matrix");
  (void)tol;
  // SVD route: M = W S V* gives U = W V* and P = V S V*. The SVD computes
  // the tiny singular values to full absolute accuracy, so the factors
  // reassemble M at machine precision even for singular input, where an
  // eigendecomposition of M*M would lose half the digits. The kernel of M
  // is covered by the SVD's own completion of W and V.
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ComplexMatrix u = svd.matrixU() * svd.matrixV().adjoint();
  ComplexMatrix p = svd.matrixV() * svd.singularValues().asDiagonal() *
                    svd.matrixV().adjoint();
  return {u, ComplexMatrix(0.5 * (p + p.adjoint()))};
}

ComplexMatrix complete_isometry(const ComplexMatrix& t, std::uint64_t seed,
                                const Tolerances& tol) {
  const int big = static_cast<int>(t.rows());
  const int small = static_cast<int>(t.cols());
  if (small > big)
    throw Error(Errc::dimension_mismatch, "isometry input has more columns than rows");
  ComplexMatrix gram = t.adjoint() * t;
  gram -= ComplexMatrix::Identity(small, small);
  if (max_abs(gram) > tol.isometry)
    throw Error(Errc::not_isometry, "columns are not orthonormal within tolerance");

  std::vector<Eigen::VectorXcd> cols;
  cols.reserve(big);
  for (int j = 0; j < small; ++j) cols.push_back(t.col(j));

  // Candidate completion vectors: standard basis by default, a seeded
  // permutation-with-phases variant when a seed is supplied.
  std::vector<int> order(big);
  for (int i = 0; i < big; ++i) order[i] = i;
  std::vector<Complex> phases(big, Complex(1.0, 0.0));
  if (seed != 0) {
    std::mt19937_64 gen(seed);
    std::shuffle(order.begin(), order.end(), gen);
    for (int i = 0; i < big; ++i) {
      double angle = 6.283185307179586 *
                     (static_cast<double>(gen() >> 11) * 0x1.0p-53);
      phases[i] = Complex(std::cos(angle), std::sin(angle));
    }
  }
  for (int e = 0; e < big && cols.size() < static_cast<size_t>(big); ++e) {
    Eigen::VectorXcd cand = Eigen::VectorXcd::Zero(big);
    cand[order[e]] = phases[e];
    gram_schmidt_extend(cols, cand, tol.completion_reject);
  }
  if (cols.size() != static_cast<size_t>(big))
    throw Error(Errc::not_isometry, "failed to complete isometry to a unitary");

  ComplexMatrix u(big, big);
  u.leftCols(small) = t;  // first columns are the input, exactly
  for (int j = small; j < big; ++j) u.col(j) = cols[j];
  return u;
}

RealMatrix real_embedding(const ComplexMatrix& h, const Tolerances& tol) {
  require_hermitian(h, tol);
  const int d = static_cast<int>(h.rows());
  RealMatrix s(2 * d, 2 * d);
  s.topLeftCorner(d, d) = h.real();
  s.topRightCorner(d, d) = -h.imag();
  s.bottomLeftCorner(d, d) = h.imag();
  s.bottomRightCorner(d, d) = h.real();
  return s;
}

ComplexMatrix from_real_embedding(const RealMatrix& s) {
  const int d2 = static_cast<int>(s.rows());
  if (d2 % 2 != 0 || s.rows() != s.cols())
    throw Error(Errc::dimension_mismatch, "embedded matrix must be square of even size");
  const int d = d2 / 2;
  // Average the four block copies; this is the projection onto the embedded
  // subspace and keeps symmetric PSD inputs PSD.
  RealMatrix re = 0.5 * (s.topLeftCorner(d, d) + s.bottomRightCorner(d, d));
  RealMatrix im = 0.5 * (s.bottomLeftCorner(d, d) - s.topRightCorner(d, d));
  ComplexMatrix h(d, d);
  h.real() = re;
  h.imag() = im;
  return ComplexMatrix(0.5 * (h + h.adjoint()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<ComplexMatrix> hermitian_basis(int d) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(a, a) = 1.0;
    basis.push_back(e);
  }
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      ComplexMatrix re = ComplexMatrix::Zero(d, d);
      re(a, b) = 1.0;
      re(b, a) = 1.0;
      basis.push_back(re);
      ComplexMatrix im = ComplexMatrix::Zero(d, d);
      im(a, b) = Complex(0.0, 1.0);
      im(b, a) = Complex(0.0, -1.0);
      basis.push_back(im);
    }
  }
  return basis;
}

double herm_inner(const ComplexMatrix& h, const ComplexMatrix& k) {
  return (h.adjoint() * k).trace().real();
}

}  // namespace povmkit
