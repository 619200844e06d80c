#include "clickbait/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "clickbait/error.hpp"

namespace clickbait {

std::size_t shape_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

namespace {
void check_shape(const Shape& shape) {
    if (shape.empty()) throw Error("tensor shape must have at least one dimension");
    for (std::size_t d : shape)
        if (d == 0) throw Error("tensor shape entries must be positive: " + shape_string(shape));
}
}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != shape_size(shape_))
        throw Error("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                    shape_string(shape_));
}

double Tensor::item() const {
    if (data_.size() != 1) throw Error("item() on a tensor of shape " + shape_string(shape_));
    return data_[0];
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor Tensor::reshaped(Shape shape) const {
    if (shape_size(shape) != data_.size())
        throw Error("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    return Tensor(std::move(shape), data_);
}

void Tensor::add_(const Tensor& other) {
    require_same_shape(*this, other, "add_");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (a.shape() != b.shape())
        throw Error(std::string(what) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                    shape_string(b.shape()));
}

}  // namespace clickbait
