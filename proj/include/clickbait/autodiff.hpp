#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clickbait/tensor.hpp"

namespace clickbait {

/// A trainable tensor and its accumulated gradient.
struct Parameter {
    Tensor value;
    Tensor grad;
    bool trainable = true;

    Parameter() = default;
    explicit Parameter(Tensor v) : value(std::move(v)), grad(value.shape()) {}

    void zero_grad() { grad.fill(0.0); }
};

/// Named parameters in a stable (lexicographic) order.
using ParameterSet = std::map<std::string, Parameter>;

class Tape;

/// Handle to a node recorded on a Tape.
struct Var {
    int id = -1;
};

/// Reverse-mode trace. Ops append nodes in evaluation order, so reverse
/// creation order is a valid topological order for backpropagation. A tape
/// belongs to one thread; it holds pointers into Parameters, which must
/// outlive it.
class Tape {
public:
    using BackwardFn = std::function<void(Tape&, Var self)>;

    explicit Tape(bool record_gradients = true) : recording_(record_gradients) {}
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    bool recording() const { return recording_; }

    Var constant(Tensor value);
    /// Leaf bound to a parameter; backward accumulates into p.grad.
    Var param(Parameter& p);
    /// Read-only leaf bound to a parameter (no gradient flows back).
    Var param(const Parameter& p);

    const Tensor& value(Var v) const;
    bool requires_grad(Var v) const { return node(v).requires_grad; }

    /// Gradient buffer of a node, allocated as zeros on first use.
    Tensor& grad(Var v);
    bool has_grad(Var v) const;

    /// Appends an op output. `backward` runs only if some input requires grad.
    Var push(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);
    Var push(Tensor value, const std::vector<Var>& inputs, BackwardFn backward);

    /// Seeds d(loss)/d(loss) = 1 and propagates to every reachable parameter.
    void backward(Var loss);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        const Tensor* external_value = nullptr;
        Tensor* external_grad = nullptr;
        bool requires_grad = false;
        BackwardFn backward;
    };

    const Node& node(Var v) const;
    Node& node(Var v);

    bool recording_;
    std::vector<Node> nodes_;
};

}  // namespace clickbait
