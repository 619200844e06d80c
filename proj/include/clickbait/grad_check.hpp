#pragma once

#include <functional>
#include <string>

#include "clickbait/autodiff.hpp"

namespace clickbait {

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::string worst_parameter;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    std::size_t checked = 0;
};

/// Builds a scalar loss on the given tape from the current parameter values.
using LossFn = std::function<Var(Tape&)>;

/// Compares backprop gradients with central differences (f(x+h) - f(x-h)) / 2h.
/// Relative error is |a - n| / max(|a|, |n|, 1e-12). Every trainable entry of
/// every parameter in the set is perturbed.
GradCheckResult grad_check(const LossFn& loss, ParameterSet& params, double perturbation = 1e-5);

}  // namespace clickbait
