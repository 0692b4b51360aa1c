#include "fadjoint/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fadjoint {

namespace {

double logistic(double y) {
  if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

}  // namespace

double activate(ActivationKind kind, double y) {
  switch (kind) {
    case ActivationKind::identity: return y;
    case ActivationKind::sigmoid: return logistic(y);
    case ActivationKind::tanh: return std::tanh(y);
    case ActivationKind::relu: return y > 0.0 ? y : 0.0;
  }
  return y;
}

double activate_derivative(ActivationKind kind, double y) {
  switch (kind) {
    case ActivationKind::identity: return 1.0;
    case ActivationKind::sigmoid: {
      const double s = logistic(y);
      return s * (1.0 - s);
    }
    case ActivationKind::tanh: {
      const double t = std::tanh(y);
      return 1.0 - t * t;
    }
    case ActivationKind::relu: return y > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

Vector apply(ActivationKind kind, const Vector& y) {
  Vector x(y.dim());
  for (std::size_t i = 0; i < y.dim(); ++i) x[i] = activate(kind, y[i]);
  return x;
}

Vector derivative(ActivationKind kind, const Vector& y) {
  Vector d(y.dim());
  for (std::size_t i = 0; i < y.dim(); ++i) d[i] = activate_derivative(kind, y[i]);
  return d;
}

bool is_smooth(ActivationKind kind) { return kind != ActivationKind::relu; }

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::identity: return "identity";
    case ActivationKind::sigmoid: return "sigmoid";
    case ActivationKind::tanh: return "tanh";
    case ActivationKind::relu: return "relu";
  }
  return "identity";
}

ActivationKind parse_activation(std::string_view name) {
  if (name == "identity") return ActivationKind::identity;
  if (name == "sigmoid") return ActivationKind::sigmoid;
  if (name == "tanh") return ActivationKind::tanh;
  if (name == "relu") return ActivationKind::relu;
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "' (expected identity|sigmoid|tanh|relu)");
}

}  // namespace fadjoint
