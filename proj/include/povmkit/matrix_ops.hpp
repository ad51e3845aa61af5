#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "povmkit/error.hpp"
#include "povmkit/tolerances.hpp"

namespace povmkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Largest entry magnitude; the norm used by almost every tolerance check.
double max_abs(const ComplexMatrix& m);
double max_abs(const RealMatrix& m);

bool is_hermitian(const ComplexMatrix& m,
                  const Tolerances& tol = default_tolerances());
void require_hermitian(const ComplexMatrix& m,
                       const Tolerances& tol = default_tolerances());

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& m);
double min_eigenvalue_sym(const RealMatrix& m);

bool is_psd(const ComplexMatrix& m, double eig_floor,
            const Tolerances& tol = default_tolerances());

bool is_unitary(const ComplexMatrix& m, double tol);

// Principal square root of a Hermitian PSD matrix. Eigenvalues in
// [-eig_clamp, 0) are clamped to zero; anything below -psd_reject throws.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m,
                             const Tolerances& tol = default_tolerances());

struct PolarDecomposition {
  ComplexMatrix unitary;  // U
  ComplexMatrix psd;      // P, with M = U * P
};

// Polar decomposition M = U P with P = hermitian_sqrt(M* M). For singular M
// the unitary factor is extended over the kernel by deterministic
// Gram-Schmidt against the standard basis.
PolarDecomposition polar_decompose(const ComplexMatrix& m,
                                   const Tolerances& tol = default_tolerances());

// Completes a tall matrix with orthonormal columns to a full unitary whose
// first columns equal the input exactly. Completion columns come from
// Gram-Schmidt over a deterministic candidate basis (the standard basis when
// seed == 0, a seeded rotation of it otherwise).
ComplexMatrix complete_isometry(const ComplexMatrix& t, std::uint64_t seed = 0,
                                const Tolerances& tol = default_tolerances());

// [[Re H, -Im H], [Im H, Re H]]: real symmetric image of a Hermitian matrix.
// Positive semidefinite exactly when H is; every eigenvalue doubles in
// multiplicity and traces double.
RealMatrix real_embedding(const ComplexMatrix& h,
                          const Tolerances& tol = default_tolerances());

// Inverse of real_embedding. The input is first projected onto the image of
// the embedding (averaging with its rotation by the symplectic form), which
// preserves symmetry, PSD-ness and all inner products against embedded data.
ComplexMatrix from_real_embedding(const RealMatrix& s);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Fixed ordering of a real basis for d x d Hermitian matrices: the d
// diagonal units first, then for each a < b the symmetric pair
// e_a e_b^T + e_b e_a^T and i(e_a e_b^T - e_b e_a^T). Size d^2.
std::vector<ComplexMatrix> hermitian_basis(int d);

// Real Hilbert-Schmidt inner product Tr[H K] of two Hermitian matrices.
double herm_inner(const ComplexMatrix& h, const ComplexMatrix& k);

}  // namespace povmkit
