#pragma once

// Scalar reverse-mode differentiation on a linear tape.
//
// Every non-constant Var refers to a node on a Tape. Nodes have at most two
// parents and store the local partial derivatives, so a backward sweep is a
// single reverse pass over the node array. Constants never touch the tape.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace xfode::ad {

class Tape {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t lhs = kNone;
    std::uint32_t rhs = kNone;
    double d_lhs = 0.0;
    double d_rhs = 0.0;
  };

  std::uint32_t push(std::uint32_t lhs, double d_lhs, std::uint32_t rhs = kNone,
                     double d_rhs = 0.0) {
    nodes_.push_back({lhs, rhs, d_lhs, d_rhs});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t leaf() { return push(kNone, 0.0); }

  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  // Adjoints of every node with respect to `output`, seeded with `seed`.
  std::vector<double> adjoints(std::uint32_t output, double seed = 1.0) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (output == kNone) return adj;
    adj[output] = seed;
    for (std::size_t i = output + 1; i-- > 0;) {
      const double a = adj[i];
      if (a == 0.0) continue;
      const Node& n = nodes_[i];
      if (n.lhs != kNone) adj[n.lhs] += a * n.d_lhs;
      if (n.rhs != kNone) adj[n.rhs] += a * n.d_rhs;
    }
    return adj;
  }

 private:
  std::vector<Node> nodes_;
};

class Var {
 public:
  Var() = default;
  Var(double v) : value_(v) {}  // NOLINT: implicit constants are intended

  static Var independent(Tape& tape, double v) { return Var(v, tape.leaf(), &tape); }

  double value() const { return value_; }
  std::uint32_t index() const { return index_; }
  Tape* tape() const { return tape_; }
  bool is_constant() const { return tape_ == nullptr; }

  // Result of a unary primitive with local derivative `d`.
  Var unary(double v, double d) const {
    if (is_constant()) return Var(v);
    return Var(v, tape_->push(index_, d), tape_);
  }

  static Var binary(double v, const Var& a, double da, const Var& b, double db) {
    if (a.is_constant() && b.is_constant()) return Var(v);
    if (a.is_constant()) return b.unary(v, db);
    if (b.is_constant()) return a.unary(v, da);
    return Var(v, a.tape_->push(a.index_, da, b.index_, db), a.tape_);
  }

  Var& operator+=(const Var& o) { return *this = *this + o; }
  Var& operator-=(const Var& o) { return *this = *this - o; }
  Var& operator*=(const Var& o) { return *this = *this * o; }
  Var& operator/=(const Var& o) { return *this = *this / o; }

  friend Var operator+(const Var& a, const Var& b) {
    return binary(a.value_ + b.value_, a, 1.0, b, 1.0);
  }
  friend Var operator-(const Var& a, const Var& b) {
    return binary(a.value_ - b.value_, a, 1.0, b, -1.0);
  }
  friend Var operator*(const Var& a, const Var& b) {
    return binary(a.value_ * b.value_, a, b.value_, b, a.value_);
  }
  friend Var operator/(const Var& a, const Var& b) {
    const double q = a.value_ / b.value_;
    return binary(q, a, 1.0 / b.value_, b, -q / b.value_);
  }
  friend Var operator-(const Var& a) { return a.unary(-a.value_, -1.0); }

 private:
  Var(double v, std::uint32_t index, Tape* tape) : value_(v), index_(index), tape_(tape) {}

  double value_ = 0.0;
  std::uint32_t index_ = Tape::kNone;
  Tape* tape_ = nullptr;
};

inline double value(double x) { return x; }
inline double value(const Var& x) { return x.value(); }

inline Var exp(const Var& x) {
  const double e = std::exp(x.value());
  return x.unary(e, e);
}

inline Var log(const Var& x) { return x.unary(std::log(x.value()), 1.0 / x.value()); }

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline Var sigmoid(const Var& x) {
  const double s = sigmoid(x.value());
  return x.unary(s, s * (1.0 - s));
}

// ln(1 + e^x) without overflow for large |x|.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline Var softplus(const Var& x) { return x.unary(softplus(x.value()), sigmoid(x.value())); }

// Inverse of softplus on (0, inf).
inline double softplus_inverse(double y) {
  return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
}

}  // namespace xfode::ad
