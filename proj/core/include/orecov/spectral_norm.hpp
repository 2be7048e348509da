#pragma once

#include <functional>

#include "orecov/trig.hpp"

namespace orecov {

struct TopSingular {
  double value = 0.0;
  CVector right_vector;
  int iterations = 0;
  bool dense = false;
};

using LinearMap = std::function<CVector(const CVector&)>;

/// Largest singular value of an operator given by its action and adjoint
/// action. Small problems are assembled densely; larger ones use Lanczos
/// with full reorthogonalization on T^H T.
TopSingular top_singular(const LinearMap& apply, const LinearMap& apply_adjoint,
                         Eigen::Index cols, Eigen::Index dense_limit = 600,
                         double tol = 1e-13, int max_iterations = 400);

}  // namespace orecov
