// Copyright 2026 The trustmesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <initializer_list>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trustmesh/group.hpp"

namespace trustmesh {

/// Univariate polynomial over Z_q; coefficients[0] is the constant term.
/// Trailing zero coefficients are kept and do not affect evaluation.
template <PrimeOrderGroup G>
class Polynomial {
 public:
  using Scalar = typename G::Scalar;

  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coefficients)
      : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw std::invalid_argument("polynomial needs a coefficient");
  }

  /// secret + z_1 x + ... + z_d x^d with uniform z_i.
  static Polynomial random(const Scalar& secret, std::size_t degree, SeededRng& rng) {
    if (degree == 0) throw std::invalid_argument("threshold degree must be at least 1");
    std::vector<Scalar> c;
    c.reserve(degree + 1);
    c.push_back(secret);
    for (std::size_t i = 0; i < degree; ++i) c.push_back(Scalar::random(rng));
    return Polynomial(std::move(c));
  }

  static Polynomial from_u64(std::initializer_list<std::uint64_t> coeffs) {
    std::vector<Scalar> c;
    for (auto v : coeffs) c.push_back(Scalar::from_u64(v));
    return Polynomial(std::move(c));
  }

  [[nodiscard]] Scalar operator()(const Scalar& x) const {
    Scalar acc = coefficients_.back();
    for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }
  [[nodiscard]] Scalar at(ParticipantId id) const { return (*this)(id_scalar<G>(id)); }

  [[nodiscard]] std::size_t degree() const { return coefficients_.size() - 1; }
  [[nodiscard]] const std::vector<Scalar>& coefficients() const { return coefficients_; }
  [[nodiscard]] const Scalar& constant_term() const { return coefficients_.front(); }

  /// Overwrites every coefficient with zero.
  void wipe() {
    for (auto& c : coefficients_) c = Scalar::zero();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<Scalar> coefficients_;
};

/// 1..n.
inline std::vector<ParticipantId> id_range(std::size_t n) {
  std::vector<ParticipantId> ids;
  for (ParticipantId i = 1; i <= n; ++i) ids.push_back(i);
  return ids;
}

namespace detail {
inline void check_distinct_ids(std::span<const ParticipantId> ids) {
  std::set<ParticipantId> seen;
  for (auto id : ids) {
    if (id == 0) throw std::invalid_argument("participant id 0 is reserved");
    if (!seen.insert(id).second) {
      throw std::invalid_argument("duplicate participant id " + std::to_string(id));
    }
  }
}
}  // namespace detail

/// lambda_index = prod_{l != index} (x - l) / (index - l) over the coalition.
template <PrimeOrderGroup G>
typename G::Scalar lagrange_coefficient(ParticipantId index,
                                        std::span<const ParticipantId> coalition,
                                        const typename G::Scalar& x) {
  detail::check_distinct_ids(coalition);
  if (std::find(coalition.begin(), coalition.end(), index) == coalition.end()) {
    throw std::invalid_argument("index is not a coalition member");
  }
  using Scalar = typename G::Scalar;
  const Scalar xi = id_scalar<G>(index);
  Scalar num = Scalar::from_u64(1);
  Scalar den = Scalar::from_u64(1);
  for (auto other : coalition) {
    if (other == index) continue;
    const Scalar xl = id_scalar<G>(other);
    num *= x - xl;
    den *= xi - xl;
  }
  return num * den.inverse();
}

template <PrimeOrderGroup G>
typename G::Scalar lagrange_at_zero(ParticipantId index,
                                    std::span<const ParticipantId> coalition) {
  return lagrange_coefficient<G>(index, coalition, G::Scalar::from_u64(0));
}

/// Value at x of the unique degree-(len-1) polynomial through the points.
template <PrimeOrderGroup G>
typename G::Scalar interpolate_at(
    std::span<const std::pair<ParticipantId, typename G::Scalar>> points,
    const typename G::Scalar& x) {
  if (points.empty()) throw std::invalid_argument("interpolation needs at least one point");
  std::vector<ParticipantId> ids;
  ids.reserve(points.size());
  for (const auto& p : points) ids.push_back(p.first);
  detail::check_distinct_ids(ids);
  auto acc = G::Scalar::from_u64(0);
  for (const auto& [id, y] : points) acc += lagrange_coefficient<G>(id, ids, x) * y;
  return acc;
}

template <PrimeOrderGroup G>
typename G::Scalar interpolate_at(
    const std::vector<std::pair<ParticipantId, typename G::Scalar>>& points,
    const typename G::Scalar& x) {
  return interpolate_at<G>(
      std::span<const std::pair<ParticipantId, typename G::Scalar>>(points), x);
}

/// Coefficients of the unique degree-(len-1) polynomial through the points.
template <PrimeOrderGroup G>
Polynomial<G> interpolate_polynomial(
    const std::vector<std::pair<ParticipantId, typename G::Scalar>>& points) {
  using Scalar = typename G::Scalar;
  if (points.empty()) throw std::invalid_argument("interpolation needs at least one point");
  std::vector<ParticipantId> ids;
  for (const auto& p : points) ids.push_back(p.first);
  detail::check_distinct_ids(ids);

  std::vector<Scalar> result(points.size(), Scalar::zero());
  for (const auto& [id, y] : points) {
    // Basis numerator prod (x - x_l) built up coefficient-wise.
    std::vector<Scalar> basis{Scalar::one()};
    Scalar den = Scalar::one();
    const Scalar xi = id_scalar<G>(id);
    for (auto other : ids) {
      if (other == id) continue;
      const Scalar xl = id_scalar<G>(other);
      std::vector<Scalar> next(basis.size() + 1, Scalar::zero());
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= basis[k] * xl;
      }
      basis = std::move(next);
      den *= xi - xl;
    }
    const Scalar scale = y * den.inverse();
    for (std::size_t k = 0; k < basis.size(); ++k) result[k] += basis[k] * scale;
  }
  return Polynomial<G>(std::move(result));
}

/// sum_k x^k * entries[k], evaluated Horner-style in the group.
template <PrimeOrderGroup G>
typename G::Element evaluate_in_exponent(std::span<const typename G::Element> entries,
                                         const typename G::Scalar& x) {
  if (entries.empty()) return G::Element::identity();
  auto acc = entries.back();
  for (auto it = entries.rbegin() + 1; it != entries.rend(); ++it) acc = x * acc + *it;
  return acc;
}

}  // namespace trustmesh
