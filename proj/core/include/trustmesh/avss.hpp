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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trustmesh/group.hpp"
#include "trustmesh/hash.hpp"
#include "trustmesh/polynomial.hpp"

namespace trustmesh {

/// Square bivariate polynomial; coeffs[j][l] multiplies x^l * y^j, so each
/// variable has degree side-1 and side points reconstruct.
template <PrimeOrderGroup G>
class BivariatePolynomial {
 public:
  using Scalar = typename G::Scalar;
  using Matrix = std::vector<std::vector<Scalar>>;

  explicit BivariatePolynomial(Matrix coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("bivariate polynomial needs coefficients");
    for (const auto& row : coeffs_) {
      if (row.size() != coeffs_.size()) throw std::invalid_argument("coefficient matrix not square");
    }
  }

  /// f(0,0) = secret, every other coefficient uniform.
  static BivariatePolynomial random(const Scalar& secret, std::size_t side, SeededRng& rng) {
    if (side == 0) throw std::invalid_argument("threshold must be at least 1");
    Matrix m(side, std::vector<Scalar>(side));
    for (std::size_t j = 0; j < side; ++j) {
      for (std::size_t l = 0; l < side; ++l) {
        m[j][l] = (j == 0 && l == 0) ? secret : Scalar::random(rng);
      }
    }
    return BivariatePolynomial(std::move(m));
  }

  [[nodiscard]] std::size_t side() const { return coeffs_.size(); }
  [[nodiscard]] const Matrix& coefficients() const { return coeffs_; }
  [[nodiscard]] const Scalar& secret() const { return coeffs_[0][0]; }

  [[nodiscard]] Scalar operator()(const Scalar& x, const Scalar& y) const {
    return row(x)(y);
  }

  /// f(x0, y) as a polynomial in y.
  [[nodiscard]] Polynomial<G> row(const Scalar& x0) const {
    std::vector<Scalar> c(side(), Scalar::zero());
    for (std::size_t j = 0; j < side(); ++j) c[j] = Polynomial<G>(coeffs_[j])(x0);
    return Polynomial<G>(std::move(c));
  }

  /// f(x, y0) as a polynomial in x.
  [[nodiscard]] Polynomial<G> column(const Scalar& y0) const {
    std::vector<Scalar> c(side(), Scalar::zero());
    Scalar power = Scalar::one();
    for (std::size_t j = 0; j < side(); ++j) {
      for (std::size_t l = 0; l < side(); ++l) c[l] += coeffs_[j][l] * power;
      power *= y0;
    }
    return Polynomial<G>(std::move(c));
  }

 private:
  Matrix coeffs_;
};

/// entries[j][l] = f_{jl}*G + f'_{jl}*H.
template <PrimeOrderGroup G>
struct CommitmentMatrix {
  using Element = typename G::Element;
  std::vector<std::vector<Element>> entries;

  [[nodiscard]] std::size_t side() const { return entries.size(); }

  [[nodiscard]] Bytes encode() const {
    Bytes out;
    append_u32_be(out, static_cast<std::uint32_t>(side()));
    for (const auto& row : entries) {
      for (const auto& e : row) append(out, e.to_bytes());
    }
    return out;
  }

  /// Commitment to f(x, y): sum_{j,l} x^l y^j C[j][l].
  [[nodiscard]] Element evaluate(const typename G::Scalar& x, const typename G::Scalar& y) const {
    std::vector<Element> by_y;
    by_y.reserve(side());
    for (const auto& row : entries) by_y.push_back(evaluate_in_exponent<G>(row, x));
    return evaluate_in_exponent<G>(by_y, y);
  }

  friend bool operator==(const CommitmentMatrix&, const CommitmentMatrix&) = default;
};

template <PrimeOrderGroup G>
CommitmentMatrix<G> avss_commit(const BivariatePolynomial<G>& f,
                                const BivariatePolynomial<G>& f_prime) {
  if (f.side() != f_prime.side()) throw std::invalid_argument("f and f' differ in size");
  const auto h = G::blinding_generator();
  CommitmentMatrix<G> c;
  c.entries.resize(f.side());
  for (std::size_t j = 0; j < f.side(); ++j) {
    for (std::size_t l = 0; l < f.side(); ++l) {
      c.entries[j].push_back(G::mul_generator(f.coefficients()[j][l]) +
                             f_prime.coefficients()[j][l] * h);
    }
  }
  return c;
}

/// What the dealer sends node i: row polynomials a_i(y) = f(i,y),
/// a'_i(y) = f'(i,y) and column polynomials b_i(x) = f(x,i), b'_i(x) = f'(x,i).
template <PrimeOrderGroup G>
struct AvssDeal {
  ParticipantId recipient = 0;
  CommitmentMatrix<G> commitment;
  Polynomial<G> a, a_prime, b, b_prime;
};

template <PrimeOrderGroup G>
struct AvssDealing {
  CommitmentMatrix<G> commitment;
  std::vector<AvssDeal<G>> deals;
};

template <PrimeOrderGroup G>
AvssDealing<G> avss_deal_from(const BivariatePolynomial<G>& f,
                              const BivariatePolynomial<G>& f_prime,
                              std::span<const ParticipantId> ids) {
  if (f.side() > ids.size()) throw std::invalid_argument("threshold exceeds participant count");
  detail::check_distinct_ids(ids);
  AvssDealing<G> out{avss_commit(f, f_prime), {}};
  for (auto i : ids) {
    const auto x = id_scalar<G>(i);
    out.deals.push_back({i, out.commitment, f.row(x), f_prime.row(x), f.column(x),
                         f_prime.column(x)});
  }
  return out;
}

template <PrimeOrderGroup G>
AvssDealing<G> avss_deal_from(const BivariatePolynomial<G>& f,
                              const BivariatePolynomial<G>& f_prime, std::size_t n) {
  const auto ids = id_range(n);
  return avss_deal_from(f, f_prime, std::span<const ParticipantId>(ids));
}

/// Random f with f(0,0) = secret and fully random companion f'.
template <PrimeOrderGroup G>
AvssDealing<G> avss_deal(const typename G::Scalar& secret, std::size_t t, std::size_t n,
                         SeededRng& rng) {
  if (t < 1 || t > n) throw std::invalid_argument("avss requires 1 <= t <= n");
  auto f = BivariatePolynomial<G>::random(secret, t, rng);
  auto f_prime = BivariatePolynomial<G>::random(G::Scalar::random(rng), t, rng);
  return avss_deal_from(f, f_prime, n);
}

/// Checks sigma = f(m,0), sigma' = f'(m,0) against the commitment matrix:
/// sigma*G + sigma'*H == sum_l m^l C[0][l].
template <PrimeOrderGroup G>
bool avss_verify_share(const CommitmentMatrix<G>& c, ParticipantId m,
                       const typename G::Scalar& sigma, const typename G::Scalar& sigma_prime) {
  if (c.side() == 0 || m == 0 || m > G::kMaxParticipantId) return false;
  const auto lhs = G::mul_generator(sigma) + sigma_prime * G::blinding_generator();
  return lhs == evaluate_in_exponent<G>(c.entries[0], id_scalar<G>(m));
}

/// Checks a claimed evaluation p = f(x,y), p' = f'(x,y).
template <PrimeOrderGroup G>
bool avss_verify_point(const CommitmentMatrix<G>& c, const typename G::Scalar& x,
                       const typename G::Scalar& y, const typename G::Scalar& p,
                       const typename G::Scalar& p_prime) {
  if (c.side() == 0) return false;
  const auto lhs = G::mul_generator(p) + p_prime * G::blinding_generator();
  return lhs == c.evaluate(x, y);
}

/// Checks all four polynomials of a deal coefficient-wise against C.
template <PrimeOrderGroup G>
bool avss_verify_deal(const AvssDeal<G>& deal) {
  const auto& c = deal.commitment;
  const std::size_t t = c.side();
  if (t == 0 || deal.recipient == 0 || deal.recipient > G::kMaxParticipantId) return false;
  for (const auto* p : {&deal.a, &deal.a_prime, &deal.b, &deal.b_prime}) {
    if (p->coefficients().size() != t) return false;
  }
  const auto h = G::blinding_generator();
  const auto i = id_scalar<G>(deal.recipient);
  // a_i coefficient j commits to sum_l i^l C[j][l].
  for (std::size_t j = 0; j < t; ++j) {
    const auto lhs = G::mul_generator(deal.a.coefficients()[j]) + deal.a_prime.coefficients()[j] * h;
    if (!(lhs == evaluate_in_exponent<G>(c.entries[j], i))) return false;
  }
  // b_i coefficient l commits to sum_j i^j C[j][l].
  for (std::size_t l = 0; l < t; ++l) {
    std::vector<typename G::Element> column;
    for (std::size_t j = 0; j < t; ++j) column.push_back(c.entries[j][l]);
    const auto lhs = G::mul_generator(deal.b.coefficients()[l]) + deal.b_prime.coefficients()[l] * h;
    if (!(lhs == evaluate_in_exponent<G>(column, i))) return false;
  }
  return true;
}

/// Overlap point sent from one node to another during the exchange.
/// row = f(sender, recipient) lies on the recipient's column polynomial;
/// col = f(recipient, sender) lies on the recipient's row polynomial.
template <PrimeOrderGroup G>
struct AvssPoint {
  ParticipantId sender = 0;
  ParticipantId recipient = 0;
  CommitmentMatrix<G> commitment;
  typename G::Scalar row_value, row_blind, col_value, col_blind;

  [[nodiscard]] Bytes encode() const {
    Bytes out;
    append_u32_be(out, sender);
    append_u32_be(out, recipient);
    append(out, commitment.encode());
    for (const auto* s : {&row_value, &row_blind, &col_value, &col_blind}) append(out, s->to_bytes());
    return out;
  }
};

/// Per-node reconstruction state for the point exchange. A node completes
/// either from a valid deal or by interpolating t valid overlap points.
template <PrimeOrderGroup G>
class AvssNode {
 public:
  using Scalar = typename G::Scalar;
  using PointList = std::vector<std::pair<ParticipantId, Scalar>>;

  AvssNode(ParticipantId id, std::size_t threshold, std::vector<ParticipantId> members)
      : id_(id), threshold_(threshold), members_(std::move(members)) {
    if (threshold_ < 1 || threshold_ > members_.size()) {
      throw std::invalid_argument("avss requires 1 <= t <= n");
    }
  }

  /// Returns the overlap points to send if the deal verifies.
  std::vector<AvssPoint<G>> on_deal(const AvssDeal<G>& deal) {
    if (deal.recipient != id_ || !avss_verify_deal(deal)) {
      dealer_faulty_ = true;
      return {};
    }
    if (commitment_ && !(*commitment_ == deal.commitment)) {
      dealer_faulty_ = true;
      return {};
    }
    commitment_ = deal.commitment;
    if (!complete_) {
      a_ = deal.a;
      a_prime_ = deal.a_prime;
      b_ = deal.b;
      b_prime_ = deal.b_prime;
      complete_ = true;
      from_deal_ = true;
    }
    return emit_points();
  }

  /// Records a peer's overlap point. Returns points to send if this message
  /// completed the node.
  std::vector<AvssPoint<G>> on_point(const AvssPoint<G>& msg) {
    if (msg.recipient != id_ || msg.sender == id_ ||
        std::find(members_.begin(), members_.end(), msg.sender) == members_.end()) {
      return {};
    }
    if (!commitment_) {
      if (msg.commitment.side() != threshold_) {
        faulty_senders_.insert(msg.sender);
        return {};
      }
      commitment_ = msg.commitment;
    }
    if (!(msg.commitment == *commitment_)) {
      faulty_senders_.insert(msg.sender);
      return {};
    }
    const auto me = id_scalar<G>(id_);
    const auto them = id_scalar<G>(msg.sender);
    const bool row_ok = avss_verify_point<G>(*commitment_, them, me, msg.row_value, msg.row_blind);
    const bool col_ok = avss_verify_point<G>(*commitment_, me, them, msg.col_value, msg.col_blind);
    if (!row_ok || !col_ok) {
      faulty_senders_.insert(msg.sender);
      return {};
    }
    if (received_.count(msg.sender)) return {};
    received_.insert(msg.sender);
    b_points_.emplace_back(msg.sender, msg.row_value);
    b_prime_points_.emplace_back(msg.sender, msg.row_blind);
    a_points_.emplace_back(msg.sender, msg.col_value);
    a_prime_points_.emplace_back(msg.sender, msg.col_blind);

    if (complete_ || a_points_.size() < threshold_) return {};
    auto first_t = [this](const PointList& pts) {
      return interpolate_polynomial<G>(PointList(pts.begin(), pts.begin() + threshold_));
    };
    a_ = first_t(a_points_);
    a_prime_ = first_t(a_prime_points_);
    b_ = first_t(b_points_);
    b_prime_ = first_t(b_prime_points_);
    complete_ = true;
    return emit_points();
  }

  [[nodiscard]] ParticipantId id() const { return id_; }
  [[nodiscard]] bool complete() const { return complete_; }
  [[nodiscard]] bool completed_from_deal() const { return from_deal_; }
  [[nodiscard]] bool dealer_faulty() const { return dealer_faulty_; }
  [[nodiscard]] const std::set<ParticipantId>& faulty_senders() const { return faulty_senders_; }
  [[nodiscard]] std::size_t valid_points() const { return received_.size(); }
  [[nodiscard]] const std::optional<CommitmentMatrix<G>>& commitment() const { return commitment_; }

  [[nodiscard]] const Polynomial<G>& share_polynomial() const { return require(a_); }
  [[nodiscard]] const Polynomial<G>& share_blinding_polynomial() const { return require(a_prime_); }
  [[nodiscard]] const Polynomial<G>& sub_share_polynomial() const { return require(b_); }
  [[nodiscard]] const Polynomial<G>& sub_share_blinding_polynomial() const { return require(b_prime_); }

  /// sigma_i = f(i, 0).
  [[nodiscard]] Scalar share() const { return share_polynomial()(Scalar::zero()); }
  [[nodiscard]] Scalar share_blinding() const { return share_blinding_polynomial()(Scalar::zero()); }

 private:
  const Polynomial<G>& require(const Polynomial<G>& p) const {
    if (!complete_) throw std::logic_error("avss node has not completed");
    return p;
  }

  std::vector<AvssPoint<G>> emit_points() {
    if (points_sent_) return {};
    points_sent_ = true;
    std::vector<AvssPoint<G>> out;
    for (auto peer : members_) {
      if (peer == id_) continue;
      const auto y = id_scalar<G>(peer);
      // a_i(peer) = f(i, peer); b_i(peer) = f(peer, i).
      out.push_back({id_, peer, *commitment_, a_(y), a_prime_(y), b_(y), b_prime_(y)});
    }
    return out;
  }

  ParticipantId id_;
  std::size_t threshold_;
  std::vector<ParticipantId> members_;
  std::optional<CommitmentMatrix<G>> commitment_;
  Polynomial<G> a_, a_prime_, b_, b_prime_;
  bool complete_ = false;
  bool from_deal_ = false;
  bool points_sent_ = false;
  bool dealer_faulty_ = false;
  std::set<ParticipantId> received_;
  std::set<ParticipantId> faulty_senders_;
  PointList a_points_, a_prime_points_, b_points_, b_prime_points_;
};

/// Synchronous in-memory exchange: deals[i] is node (i+1)'s deal or nullopt
/// if the dealer never reached it. `tamper` may mutate any outgoing point.
template <PrimeOrderGroup G>
std::vector<AvssNode<G>> avss_exchange_and_interpolate(
    const std::vector<std::optional<AvssDeal<G>>>& deals, std::size_t t,
    const std::function<void(AvssPoint<G>&)>& tamper = {}) {
  std::vector<ParticipantId> members;
  for (ParticipantId i = 1; i <= deals.size(); ++i) members.push_back(i);
  std::vector<AvssNode<G>> nodes;
  for (auto id : members) nodes.emplace_back(id, t, members);

  std::vector<AvssPoint<G>> in_flight;
  auto send = [&](std::vector<AvssPoint<G>> pts) {
    for (auto& p : pts) {
      if (tamper) tamper(p);
      in_flight.push_back(std::move(p));
    }
  };
  for (std::size_t i = 0; i < deals.size(); ++i) {
    if (deals[i]) send(nodes[i].on_deal(*deals[i]));
  }
  while (!in_flight.empty()) {
    auto batch = std::move(in_flight);
    in_flight.clear();
    for (const auto& p : batch) send(nodes[p.recipient - 1].on_point(p));
  }
  return nodes;
}

/// f(0,0) from shares sigma_i = f(i,0).
template <PrimeOrderGroup G>
typename G::Scalar avss_recover_secret(
    const std::vector<std::pair<ParticipantId, typename G::Scalar>>& shares) {
  return interpolate_at<G>(shares, G::Scalar::zero());
}

}  // namespace trustmesh
