#include "clickbait/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace clickbait {

GradCheckResult grad_check(const LossFn& loss, ParameterSet& params, double perturbation) {
    for (auto& [name, p] : params) p.grad = Tensor(p.value.shape());
    {
        Tape tape;
        tape.backward(loss(tape));
    }
    auto evaluate = [&] {
        Tape tape(false);
        return tape.value(loss(tape)).item();
    };

    GradCheckResult result;
    for (auto& [name, p] : params) {
        if (!p.trainable) continue;
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double saved = p.value[i];
            p.value[i] = saved + perturbation;
            const double up = evaluate();
            p.value[i] = saved - perturbation;
            const double down = evaluate();
            p.value[i] = saved;

            const double numeric = (up - down) / (2.0 * perturbation);
            const double analytic = p.grad[i];
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
            const double rel = std::abs(analytic - numeric) / denom;
            ++result.checked;
            if (rel > result.max_relative_error) {
                result.max_relative_error = rel;
                result.worst_parameter = name;
                result.worst_index = i;
                result.analytic = analytic;
                result.numeric = numeric;
            }
        }
    }
    return result;
}

}  // namespace clickbait
