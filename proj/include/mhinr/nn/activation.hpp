#pragma once

#include <cmath>
#include <string>

namespace mhinr::nn {

enum class ActivationKind { Identity, ReLU, Sine };

// Elementwise activation. Sine computes sin(omega * x).
struct Activation {
  ActivationKind kind = ActivationKind::Identity;
  double omega = 1.0;

  static Activation identity() { return {ActivationKind::Identity, 1.0}; }
  static Activation relu() { return {ActivationKind::ReLU, 1.0}; }
  static Activation sine(double omega) { return {ActivationKind::Sine, omega}; }

  double apply(double x) const {
    switch (kind) {
      case ActivationKind::ReLU: return x > 0.0 ? x : 0.0;
      case ActivationKind::Sine: return std::sin(omega * x);
      case ActivationKind::Identity: break;
    }
    return x;
  }

  double derivative(double x) const {
    switch (kind) {
      case ActivationKind::ReLU: return x > 0.0 ? 1.0 : 0.0;
      case ActivationKind::Sine: return omega * std::cos(omega * x);
      case ActivationKind::Identity: break;
    }
    return 1.0;
  }

  bool is_identity() const { return kind == ActivationKind::Identity; }

  std::string name() const {
    switch (kind) {
      case ActivationKind::ReLU: return "relu";
      case ActivationKind::Sine: return "sine";
      case ActivationKind::Identity: break;
    }
    return "identity";
  }

  friend bool operator==(const Activation&, const Activation&) = default;
};

}  // namespace mhinr::nn
