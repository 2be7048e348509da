#include "orecov/spectral_norm.hpp"

#include <algorithm>
#include <cmath>

#include "orecov/error.hpp"
#include "orecov/rng.hpp"

namespace orecov {

namespace {

TopSingular dense_top(const LinearMap& apply, Eigen::Index cols) {
  CMatrix t;
  for (Eigen::Index j = 0; j < cols; ++j) {
    CVector e = CVector::Zero(cols);
    e(j) = 1.0;
    CVector col = apply(e);
    if (j == 0) t.resize(col.size(), cols);
    t.col(j) = col;
  }
  const CMatrix h = t.adjoint() * t;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("top_singular: dense eigensolver failed");
  }
  TopSingular out;
  out.value = std::sqrt(std::max(0.0, solver.eigenvalues()(cols - 1)));
  out.right_vector = solver.eigenvectors().col(cols - 1);
  out.dense = true;
  return out;
}

}  // namespace

TopSingular top_singular(const LinearMap& apply, const LinearMap& apply_adjoint,
                         Eigen::Index cols, Eigen::Index dense_limit, double tol,
                         int max_iterations) {
  if (cols < 1) throw InvalidArgument("top_singular: empty operator");
  if (cols <= dense_limit) return dense_top(apply, cols);

  const Eigen::Index kmax = std::min<Eigen::Index>(cols, max_iterations);
  CMatrix basis(cols, kmax);
  Rng rng(0x5eed);
  CVector v(cols);
  for (Eigen::Index i = 0; i < cols; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v.normalize();

  std::vector<double> alpha;
  std::vector<double> beta;
  TopSingular out;
  Eigen::VectorXd ritz;
  for (Eigen::Index j = 0; j < kmax; ++j) {
    basis.col(j) = v;
    CVector w = apply_adjoint(apply(v));
    const double a = basis.col(j).dot(w).real();
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const CVector coeffs = basis.leftCols(j + 1).adjoint() * w;
      w -= basis.leftCols(j + 1) * coeffs;
    }
    const double b = w.norm();

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double theta = es.eigenvalues()(k - 1);
    ritz = es.eigenvectors().col(k - 1);
    out.iterations = static_cast<int>(k);
    const double residual = b * std::abs(ritz(k - 1));
    if (b <= 1e-300 || residual <= tol * std::max(theta, 1e-300) || k == kmax) {
      out.value = std::sqrt(std::max(0.0, theta));
      out.right_vector = basis.leftCols(k) * ritz.cast<Complex>();
      out.right_vector.normalize();
      return out;
    }
    beta.push_back(b);
    v = w / b;
  }
  return out;
}

}  // namespace orecov
