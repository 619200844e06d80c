#include "clickbait/adam.hpp"

#include <cmath>

#include "clickbait/error.hpp"

namespace clickbait {

void adam_step(Parameter& param, AdamState& state) {
    require_same_shape(param.value, param.grad, "adam_step (gradient)");
    require_same_shape(param.value, state.m, "adam_step (first moment)");
    require_same_shape(param.value, state.v, "adam_step (second moment)");
    const AdamHyper& h = state.hyper;
    ++state.t;
    const double t = static_cast<double>(state.t);
    const double c1 = 1.0 - std::pow(h.beta1, t);
    const double c2 = 1.0 - std::pow(h.beta2, t);
    for (std::size_t i = 0; i < param.value.size(); ++i) {
        const double g = param.grad[i];
        state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
        state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        param.value[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.epsilon);
    }
}

void Adam::step(ParameterSet& params) {
    for (auto& [name, p] : params) {
        if (!p.trainable) continue;
        auto it = states_.find(name);
        if (it == states_.end()) it = states_.emplace(name, AdamState(p.value.shape(), hyper_)).first;
        adam_step(p, it->second);
        p.zero_grad();
    }
}

}  // namespace clickbait
