#pragma once

// Trigonometric subspaces T(Lambda) on the torus [0, 2pi)^d with the
// normalized Lebesgue measure, so that the exponentials e^{i(k,x)} form an
// orthonormal system.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orecov {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Integer multi-index k in Z^d.
using Frequency = std::vector<int>;
/// Point on the torus; coordinates are interpreted modulo 2pi.
using Point = std::vector<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Default caps on enumerated objects.
inline constexpr int kDefaultMaxComponent = 1 << 20;
inline constexpr std::size_t kDefaultFrequencyCap = 4'000'000;
inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 24;

/// Finite, duplicate-free set of frequencies in lexicographic order.
///
/// Storage is flat (N*d ints); `operator[]` returns a view of one multi-index.
class FrequencySet {
 public:
  FrequencySet() = default;

  /// Sorts lexicographically. Throws InvalidArgument on duplicates, on a
  /// component of the wrong length, or on |k_j| > max_component.
  FrequencySet(int dim, std::vector<Frequency> frequencies,
               int max_component = kDefaultMaxComponent);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept {
    return dim_ == 0 ? 0 : flat_.size() / static_cast<std::size_t>(dim_);
  }
  [[nodiscard]] bool empty() const noexcept { return flat_.empty(); }

  [[nodiscard]] std::span<const int> operator[](std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] Frequency frequency(std::size_t i) const;

  /// Position of k in the ordering, or -1 when absent.
  [[nodiscard]] std::ptrdiff_t index_of(std::span<const int> k) const;
  [[nodiscard]] bool contains(std::span<const int> k) const {
    return index_of(k) >= 0;
  }
  /// True when every member of *this is in `other`.
  [[nodiscard]] bool is_subset_of(const FrequencySet& other) const;

  /// max_j |k_j| along each axis.
  [[nodiscard]] std::vector<int> axis_radius() const;
  /// max over members and axes of |k_j|.
  [[nodiscard]] int max_abs_component() const;

  [[nodiscard]] const std::vector<int>& flat() const noexcept { return flat_; }

  friend bool operator==(const FrequencySet&, const FrequencySet&) = default;

 private:
  int dim_ = 0;
  std::vector<int> flat_;
};

/// Element of T(Lambda): a complex coefficient per frequency.
struct TrigPolynomial {
  FrequencySet basis;
  CVector coefficients;

  TrigPolynomial() = default;
  /// Throws InvalidArgument unless coefficients.size() == basis.size().
  TrigPolynomial(FrequencySet basis, CVector coefficients);
  /// Zero polynomial on `basis`.
  static TrigPolynomial zero(FrequencySet basis);
};

struct GridSpec {
  int dim = 1;
  int points_per_axis = 1;
};

/// Weight Prod_j max(1, |k_j|) that defines the hyperbolic cross.
double cross_weight(std::span<const int> k);

/// {k in Z^d : Prod_j max(1,|k_j|) <= radius}, lexicographically ordered.
/// Throws ResourceError when the set would exceed `cap` members.
FrequencySet hyperbolic_cross(int dim, double radius,
                              std::size_t cap = kDefaultFrequencyCap);

/// Full box {k : |k_j| <= radius for all j}.
FrequencySet frequency_box(int dim, int radius,
                           std::size_t cap = kDefaultFrequencyCap);

/// (e^{i(k,x)})_{k in Lambda}.
CVector basis_vector(const FrequencySet& lambda, std::span<const double> x);

/// Sum_k c_k e^{i(k,x)}.
Complex eval(const TrigPolynomial& u, std::span<const double> x);

/// m x N matrix with rows basis_vector(lambda, points[nu]).
CMatrix evaluation_matrix(const FrequencySet& lambda,
                          const std::vector<Point>& points);

/// Values of u at every point.
CVector eval_many(const TrigPolynomial& u, const std::vector<Point>& points);

/// L2 norm via Parseval: (Sum_k |c_k|^2)^{1/2}.
double parseval_norm(const TrigPolynomial& u);

/// Tensor grid x = 2pi j / s per axis, first axis slowest.
std::vector<Point> uniform_grid(const GridSpec& spec,
                                std::size_t cap = kDefaultGridCap);

/// Re-expands `u` on `target` (which must contain u.basis), zero-filling.
CVector embed_coefficients(const TrigPolynomial& u, const FrequencySet& target);

/// Wraps each coordinate into [0, 2pi).
Point wrap_point(std::span<const double> x);

}  // namespace orecov
