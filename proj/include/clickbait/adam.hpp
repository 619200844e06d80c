#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "clickbait/autodiff.hpp"

namespace clickbait {

struct AdamHyper {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    Tensor m;
    Tensor v;
    std::size_t t = 0;
    AdamHyper hyper;

    AdamState() = default;
    AdamState(const Shape& shape, AdamHyper h) : m(shape), v(shape), hyper(h) {}
};

/// Increments t, then applies one bias-corrected update from param.grad.
void adam_step(Parameter& param, AdamState& state);

/// One AdamState per named parameter.
class Adam {
public:
    explicit Adam(AdamHyper hyper = {}) : hyper_(hyper) {}

    /// Steps every trainable parameter, then zeroes its gradient.
    void step(ParameterSet& params);
    const AdamHyper& hyper() const { return hyper_; }

private:
    AdamHyper hyper_;
    std::map<std::string, AdamState> states_;
};

}  // namespace clickbait
