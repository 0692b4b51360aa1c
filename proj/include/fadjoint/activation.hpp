#pragma once

#include <string_view>

#include "fadjoint/linalg.hpp"

namespace fadjoint {

/// Coordinate-wise activation shared by every layer of a network.
enum class ActivationKind { identity, sigmoid, tanh, relu };

double activate(ActivationKind kind, double y);
/// First derivative, evaluated at the pre-activation value. relu'(0) is 0.
double activate_derivative(ActivationKind kind, double y);

Vector apply(ActivationKind kind, const Vector& y);
Vector derivative(ActivationKind kind, const Vector& y);

/// True for kinds that are differentiable everywhere.
bool is_smooth(ActivationKind kind);

std::string_view to_string(ActivationKind kind);
/// Accepts "identity", "sigmoid", "tanh", "relu". Throws std::invalid_argument.
ActivationKind parse_activation(std::string_view name);

}  // namespace fadjoint
