#pragma once

// Differentiable primitives recorded on a Tape. Shapes are row-major;
// sequence tensors are [batch, time, features].

#include <span>
#include <vector>

#include "clickbait/autodiff.hpp"

namespace clickbait::ops {

/// [n,k] x [k,m] -> [n,m]
Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
/// Adds bias [f] to every row of a tensor whose last dimension is f.
Var add_bias(Tape& t, Var a, Var bias);
Var mul(Tape& t, Var a, Var b);
Var sigmoid(Tape& t, Var a);
Var tanh(Tape& t, Var a);
Var relu(Tape& t, Var a);

/// Concatenates 2-D tensors with equal row counts along columns.
Var concat_cols(Tape& t, const std::vector<Var>& parts);
/// Columns [begin, end) of a 2-D tensor.
Var slice_cols(Tape& t, Var a, std::size_t begin, std::size_t end);
Var reshape(Tape& t, Var a, Shape shape);

/// Gathers rows of table [V,D] for indices [batch*len] -> [batch,len,D].
Var embedding(Tape& t, Var table, std::span<const int> indices, std::size_t batch, std::size_t len);
/// Valid 1-D convolution: x [b,L,c], w [k,c,f], bias [f] -> [b,L-k+1,f].
Var conv1d(Tape& t, Var x, Var w, Var bias);
/// Non-overlapping temporal max-pooling with window `pool` (trailing steps dropped).
Var max_pool1d(Tape& t, Var x, std::size_t pool);
/// Max over the time axis: [b,L,c] -> [b,c].
Var global_max_pool(Tape& t, Var x);
/// One time step of a sequence: [b,L,d] -> [b,d].
Var time_step(Tape& t, Var x, std::size_t step);

/// Mean of (pred - target)^2 over all entries -> scalar.
Var mse(Tape& t, Var pred, const Tensor& target);
Var sum(Tape& t, Var a);

}  // namespace clickbait::ops
