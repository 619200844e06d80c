#include "clickbait/autodiff.hpp"

#include "clickbait/error.hpp"

namespace clickbait {

const Tape::Node& Tape::node(Var v) const {
    if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) throw Error("invalid tape variable");
    return nodes_[static_cast<std::size_t>(v.id)];
}

Tape::Node& Tape::node(Var v) {
    if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) throw Error("invalid tape variable");
    return nodes_[static_cast<std::size_t>(v.id)];
}

Var Tape::constant(Tensor value) {
    Node n;
    n.value = std::move(value);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Tape::param(Parameter& p) {
    Node n;
    n.external_value = &p.value;
    if (recording_ && p.trainable) {
        if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape());
        n.external_grad = &p.grad;
        n.requires_grad = true;
    }
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Tape::param(const Parameter& p) {
    Node n;
    n.external_value = &p.value;
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size() - 1)};
}

const Tensor& Tape::value(Var v) const {
    const Node& n = node(v);
    return n.external_value ? *n.external_value : n.value;
}

Tensor& Tape::grad(Var v) {
    Node& n = node(v);
    if (n.external_grad) return *n.external_grad;
    if (n.grad.empty()) n.grad = Tensor(value(v).shape());
    return n.grad;
}

bool Tape::has_grad(Var v) const {
    const Node& n = node(v);
    return n.external_grad != nullptr || !n.grad.empty();
}

Var Tape::push(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
    Node n;
    n.value = std::move(value);
    if (recording_) {
        for (Var in : inputs) n.requires_grad = n.requires_grad || node(in).requires_grad;
        if (n.requires_grad) n.backward = std::move(backward);
    }
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Tape::push(Tensor value, const std::vector<Var>& inputs, BackwardFn backward) {
    Node n;
    n.value = std::move(value);
    if (recording_) {
        for (Var in : inputs) n.requires_grad = n.requires_grad || node(in).requires_grad;
        if (n.requires_grad) n.backward = std::move(backward);
    }
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size() - 1)};
}

void Tape::backward(Var loss) {
    if (!recording_) throw Error("backward on a tape that does not record gradients");
    const Tensor& lv = value(loss);
    if (lv.size() != 1) throw Error("backward requires a scalar loss, got shape " + shape_string(lv.shape()));
    if (!node(loss).requires_grad) return;
    grad(loss).fill(1.0);
    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (!n.backward || !has_grad(Var{i})) continue;
        n.backward(*this, Var{i});
    }
}

}  // namespace clickbait
