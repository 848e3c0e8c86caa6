#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <string>

#include "riemhess/ambient.hpp"
#include "riemhess/framework.hpp"
#include "riemhess/random.hpp"

namespace riemhess {

/// Cost with ambient gradient and ambient Hessian-vector product. All
/// callbacks take the ambient coordinates of the point (an extension of the
/// cost off the manifold), so they can be checked by plain finite
/// differences in E.
template <class V>
struct AmbientProblem {
  std::function<double(const V&)> cost;
  std::function<V(const V&)> egrad;
  std::function<V(const V&, const V&)> ehess;  // (x, xi) -> f_YY xi
};

/// The contract every manifold module implements. Tangent vectors are plain
/// ambient values; the base point is passed alongside them.
template <class M>
concept RiemannianManifold = requires(const M& m, const typename M::Point& x,
                                      const typename M::Vector& v, const AmbientVector& a,
                                      Rng& rng) {
  typename M::Point;
  typename M::Vector;
  { m.name() } -> std::convertible_to<std::string>;
  { m.coords(x) } -> std::convertible_to<typename M::Vector>;
  { m.inner(x, v, v) } -> std::convertible_to<double>;
  { m.metric_apply(x, v) } -> std::convertible_to<typename M::Vector>;
  { m.project(x, v) } -> std::convertible_to<typename M::Vector>;
  { m.rgrad(x, v) } -> std::convertible_to<typename M::Vector>;
  { m.gamma(x, v, v) } -> std::convertible_to<typename M::Vector>;
  { m.rhess11(x, v, v, v) } -> std::convertible_to<typename M::Vector>;
  { m.rhess02(x, v, 0.0, v, v) } -> std::convertible_to<double>;
  { m.retract(x, v) } -> std::same_as<typename M::Point>;
  { m.random_point(rng) } -> std::same_as<typename M::Point>;
  { m.random_tangent(x, rng) } -> std::convertible_to<typename M::Vector>;
  { m.random_ambient(x, rng) } -> std::convertible_to<typename M::Vector>;
  { m.zero_vector(x) } -> std::convertible_to<typename M::Vector>;
  { m.constraint_residual(x, v) } -> std::convertible_to<double>;
  { m.point_residual(x) } -> std::convertible_to<double>;
  { m.structure(x) } -> std::same_as<framework::AmbientStructure>;
  { m.to_ambient(v) } -> std::same_as<AmbientVector>;
  { m.from_ambient(a) } -> std::convertible_to<typename M::Vector>;
  { m.typical_distance() } -> std::convertible_to<double>;
  { v + v } -> std::convertible_to<typename M::Vector>;
  { v - v } -> std::convertible_to<typename M::Vector>;
  { 2.0 * v } -> std::convertible_to<typename M::Vector>;
};

template <RiemannianManifold M>
double metric_norm(const M& m, const typename M::Point& x, const typename M::Vector& v) {
  return std::sqrt(std::max(0.0, m.inner(x, v, v)));
}

}  // namespace riemhess
