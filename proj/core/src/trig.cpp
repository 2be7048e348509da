#include "orecov/trig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "orecov/error.hpp"

namespace orecov {

namespace {

bool lex_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Powers e^{i j x} for j = 0..radius. Re-anchored with std::polar every
// 32 steps so the recurrence error stays near machine precision.
void fill_powers(double x, int radius, std::vector<Complex>& out) {
  out.resize(static_cast<std::size_t>(radius) + 1);
  out[0] = 1.0;
  if (radius == 0) return;
  x = std::remainder(x, kTwoPi);
  const Complex step = std::polar(1.0, x);
  for (int j = 1; j <= radius; ++j) {
    out[j] = (j % 32 == 0) ? std::polar(1.0, x * j) : out[j - 1] * step;
  }
}

void enumerate_cross(int dim, int axis, double budget, std::vector<int>& prefix,
                     std::vector<int>& flat, std::size_t cap) {
  if (axis == dim) {
    if (flat.size() / static_cast<std::size_t>(dim) >= cap) {
      throw ResourceError("hyperbolic_cross: more than " + std::to_string(cap) +
                          " frequencies");
    }
    flat.insert(flat.end(), prefix.begin(), prefix.end());
    return;
  }
  const int radius = static_cast<int>(std::floor(budget + 1e-9));
  for (int k = -radius; k <= radius; ++k) {
    prefix[axis] = k;
    const double w = std::max(1, std::abs(k));
    enumerate_cross(dim, axis + 1, budget / w, prefix, flat, cap);
  }
}

}  // namespace

FrequencySet::FrequencySet(int dim, std::vector<Frequency> frequencies,
                           int max_component)
    : dim_(dim) {
  if (dim < 1) throw InvalidArgument("FrequencySet: dimension must be >= 1");
  for (const auto& k : frequencies) {
    if (static_cast<int>(k.size()) != dim) {
      throw InvalidArgument("FrequencySet: frequency of length " +
                            std::to_string(k.size()) + " in dimension " +
                            std::to_string(dim));
    }
    for (int c : k) {
      if (std::abs(c) > max_component) {
        throw InvalidArgument("FrequencySet: component " + std::to_string(c) +
                              " exceeds the box radius");
      }
    }
  }
  std::sort(frequencies.begin(), frequencies.end());
  if (std::adjacent_find(frequencies.begin(), frequencies.end()) !=
      frequencies.end()) {
    throw InvalidArgument("FrequencySet: duplicate frequency");
  }
  flat_.reserve(frequencies.size() * static_cast<std::size_t>(dim));
  for (const auto& k : frequencies) flat_.insert(flat_.end(), k.begin(), k.end());
}

Frequency FrequencySet::frequency(std::size_t i) const {
  auto k = (*this)[i];
  return {k.begin(), k.end()};
}

std::ptrdiff_t FrequencySet::index_of(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) return -1;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (lex_less((*this)[mid], k)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::ranges::equal((*this)[lo], k)) {
    return static_cast<std::ptrdiff_t>(lo);
  }
  return -1;
}

bool FrequencySet::is_subset_of(const FrequencySet& other) const {
  if (other.dim_ != dim_) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!other.contains((*this)[i])) return false;
  }
  return true;
}

std::vector<int> FrequencySet::axis_radius() const {
  std::vector<int> r(static_cast<std::size_t>(dim_), 0);
  for (std::size_t i = 0; i < size(); ++i) {
    auto k = (*this)[i];
    for (int j = 0; j < dim_; ++j) r[j] = std::max(r[j], std::abs(k[j]));
  }
  return r;
}

int FrequencySet::max_abs_component() const {
  int r = 0;
  for (int c : flat_) r = std::max(r, std::abs(c));
  return r;
}

TrigPolynomial::TrigPolynomial(FrequencySet b, CVector c)
    : basis(std::move(b)), coefficients(std::move(c)) {
  if (static_cast<std::size_t>(coefficients.size()) != basis.size()) {
    throw InvalidArgument("TrigPolynomial: coefficient count " +
                          std::to_string(coefficients.size()) +
                          " does not match basis size " +
                          std::to_string(basis.size()));
  }
}

TrigPolynomial TrigPolynomial::zero(FrequencySet b) {
  const auto n = static_cast<Eigen::Index>(b.size());
  return {std::move(b), CVector::Zero(n)};
}

double cross_weight(std::span<const int> k) {
  double w = 1.0;
  for (int c : k) w *= std::max(1, std::abs(c));
  return w;
}

FrequencySet hyperbolic_cross(int dim, double radius, std::size_t cap) {
  if (dim < 1) throw InvalidArgument("hyperbolic_cross: dimension must be >= 1");
  if (!(radius >= 1.0)) throw InvalidArgument("hyperbolic_cross: radius must be >= 1");
  if (radius > kDefaultMaxComponent) {
    throw ResourceError("hyperbolic_cross: radius exceeds the component cap");
  }
  std::vector<int> prefix(static_cast<std::size_t>(dim), 0);
  std::vector<int> flat;
  enumerate_cross(dim, 0, radius, prefix, flat, cap);
  // Enumeration already runs in lexicographic order.
  std::vector<Frequency> freqs;
  freqs.reserve(flat.size() / dim);
  for (std::size_t i = 0; i < flat.size(); i += dim) {
    freqs.emplace_back(flat.begin() + i, flat.begin() + i + dim);
  }
  return {dim, std::move(freqs)};
}

FrequencySet frequency_box(int dim, int radius, std::size_t cap) {
  if (dim < 1 || radius < 0) throw InvalidArgument("frequency_box: bad arguments");
  const double count = std::pow(2.0 * radius + 1.0, dim);
  if (count > static_cast<double>(cap)) {
    throw ResourceError("frequency_box: more than " + std::to_string(cap) +
                        " frequencies");
  }
  std::vector<Frequency> freqs;
  Frequency k(static_cast<std::size_t>(dim), -radius);
  while (true) {
    freqs.push_back(k);
    int axis = dim - 1;
    while (axis >= 0 && k[axis] == radius) {
      k[axis] = -radius;
      --axis;
    }
    if (axis < 0) break;
    ++k[axis];
  }
  return {dim, std::move(freqs)};
}

CVector basis_vector(const FrequencySet& lambda, std::span<const double> x) {
  if (static_cast<int>(x.size()) != lambda.dim()) {
    throw InvalidArgument("basis_vector: point dimension mismatch");
  }
  return evaluation_matrix(lambda, {Point(x.begin(), x.end())}).row(0).transpose();
}

Complex eval(const TrigPolynomial& u, std::span<const double> x) {
  const CVector v = basis_vector(u.basis, x);
  return v.transpose() * u.coefficients;
}

CMatrix evaluation_matrix(const FrequencySet& lambda,
                          const std::vector<Point>& points) {
  const int dim = lambda.dim();
  const auto n = lambda.size();
  const auto radius = lambda.axis_radius();
  CMatrix out(static_cast<Eigen::Index>(points.size()),
              static_cast<Eigen::Index>(n));
  std::vector<std::vector<Complex>> tables(static_cast<std::size_t>(dim));
  for (std::size_t nu = 0; nu < points.size(); ++nu) {
    const Point& x = points[nu];
    if (static_cast<int>(x.size()) != dim) {
      throw InvalidArgument("evaluation_matrix: point dimension mismatch");
    }
    for (int j = 0; j < dim; ++j) fill_powers(x[j], radius[j], tables[j]);
    for (std::size_t i = 0; i < n; ++i) {
      auto k = lambda[i];
      Complex v = 1.0;
      for (int j = 0; j < dim; ++j) {
        const int kj = k[j];
        const Complex p = tables[j][static_cast<std::size_t>(std::abs(kj))];
        v *= (kj >= 0) ? p : std::conj(p);
      }
      out(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

CVector eval_many(const TrigPolynomial& u, const std::vector<Point>& points) {
  constexpr std::size_t kChunk = 1024;
  CVector out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t start = 0; start < points.size(); start += kChunk) {
    const std::size_t end = std::min(points.size(), start + kChunk);
    const std::vector<Point> chunk(points.begin() + static_cast<std::ptrdiff_t>(start),
                                   points.begin() + static_cast<std::ptrdiff_t>(end));
    out.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
        evaluation_matrix(u.basis, chunk) * u.coefficients;
  }
  return out;
}

double parseval_norm(const TrigPolynomial& u) { return u.coefficients.norm(); }

std::vector<Point> uniform_grid(const GridSpec& spec, std::size_t cap) {
  if (spec.dim < 1) throw InvalidArgument("uniform_grid: dimension must be >= 1");
  if (spec.points_per_axis < 1) {
    throw InvalidArgument("uniform_grid: points per axis must be >= 1");
  }
  const double total = std::pow(static_cast<double>(spec.points_per_axis), spec.dim);
  if (total > static_cast<double>(cap)) {
    throw ResourceError("uniform_grid: " + std::to_string(total) +
                        " points exceeds cap " + std::to_string(cap));
  }
  const int s = spec.points_per_axis;
  const double h = kTwoPi / s;
  std::vector<Point> grid;
  grid.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(static_cast<std::size_t>(spec.dim), 0);
  while (true) {
    Point x(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) x[j] = h * idx[j];
    grid.push_back(std::move(x));
    int axis = spec.dim - 1;
    while (axis >= 0 && idx[axis] == s - 1) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++idx[axis];
  }
  return grid;
}

CVector embed_coefficients(const TrigPolynomial& u, const FrequencySet& target) {
  CVector out = CVector::Zero(static_cast<Eigen::Index>(target.size()));
  for (std::size_t i = 0; i < u.basis.size(); ++i) {
    const auto pos = target.index_of(u.basis[i]);
    if (pos < 0) {
      throw InvalidArgument("embed_coefficients: basis is not contained in target");
    }
    out(pos) = u.coefficients(static_cast<Eigen::Index>(i));
  }
  return out;
}

Point wrap_point(std::span<const double> x) {
  Point out(x.begin(), x.end());
  for (double& c : out) {
    c = std::fmod(c, kTwoPi);
    if (c < 0) c += kTwoPi;
    if (c >= kTwoPi) c = 0.0;
  }
  return out;
}

}  // namespace orecov
