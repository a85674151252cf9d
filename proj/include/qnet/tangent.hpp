#pragma once

namespace qnet {

// A (value, d value/dtheta) pair. Every timestamp and service time in the
// simulator is carried in this form, so pathwise derivatives propagate through
// each max/min/plus step along with the values themselves.
struct Tangent {
  double value = 0.0;
  double deriv = 0.0;

  friend Tangent operator+(Tangent a, Tangent b) { return {a.value + b.value, a.deriv + b.deriv}; }
  friend Tangent operator-(Tangent a, Tangent b) { return {a.value - b.value, a.deriv - b.deriv}; }
  Tangent& operator+=(Tangent o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  friend bool operator==(const Tangent&, const Tangent&) = default;
};

// Max/min return the first operand on equal values. Only derivative-ambiguous
// ties (equal value, different deriv) are counted; structural ties between
// identical tangents carry no selection ambiguity.
inline Tangent tmax(const Tangent& a, const Tangent& b, long long* ties = nullptr) {
  if (ties && a.value == b.value && a.deriv != b.deriv) ++*ties;
  return b.value > a.value ? b : a;
}

inline Tangent tmin(const Tangent& a, const Tangent& b, long long* ties = nullptr) {
  if (ties && a.value == b.value && a.deriv != b.deriv) ++*ties;
  return b.value < a.value ? b : a;
}

}  // namespace qnet
