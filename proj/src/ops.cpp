#include "clickbait/ops.hpp"

#include <algorithm>
#include <cmath>

#include "clickbait/error.hpp"
#include "clickbait/kernels.hpp"

namespace clickbait::ops {

namespace {

void require_rank(const Tensor& x, std::size_t rank, const char* op) {
    if (x.rank() != rank)
        throw Error(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                    shape_string(x.shape()));
}

double stable_sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Applies f element-wise; df receives (input, output) and returns the local derivative.
template <class F, class DF>
Var unary(Tape& t, Var a, F f, DF df) {
    const Tensor& x = t.value(a);
    Tensor y(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
    return t.push(std::move(y), {a}, [a, df](Tape& tp, Var self) {
        if (!tp.requires_grad(a)) return;
        const Tensor& x = tp.value(a);
        const Tensor& y = tp.value(self);
        const Tensor& gy = tp.grad(self);
        Tensor& gx = tp.grad(a);
        for (std::size_t i = 0; i < x.size(); ++i) gx[i] += gy[i] * df(x[i], y[i]);
    });
}

}  // namespace

Var matmul(Tape& t, Var a, Var b) {
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    require_rank(av, 2, "matmul");
    require_rank(bv, 2, "matmul");
    const std::size_t n = av.dim(0), k = av.dim(1), m = bv.dim(1);
    if (bv.dim(0) != k)
        throw Error("matmul: inner dimensions differ " + shape_string(av.shape()) + " x " +
                    shape_string(bv.shape()));
    Tensor c({n, m});
    kernels::matmul(av.data(), bv.data(), c.data(), n, k, m, false);
    return t.push(std::move(c), {a, b}, [a, b, n, k, m](Tape& tp, Var self) {
        const Tensor& gc = tp.grad(self);
        if (tp.requires_grad(a)) kernels::matmul_nt(gc.data(), tp.value(b).data(), tp.grad(a).data(), n, m, k);
        if (tp.requires_grad(b)) kernels::matmul_tn(tp.value(a).data(), gc.data(), tp.grad(b).data(), n, k, m);
    });
}

Var add(Tape& t, Var a, Var b) {
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    require_same_shape(av, bv, "add");
    Tensor c = av;
    c.add_(bv);
    return t.push(std::move(c), {a, b}, [a, b](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        if (tp.requires_grad(a)) tp.grad(a).add_(g);
        if (tp.requires_grad(b)) tp.grad(b).add_(g);
    });
}

Var add_bias(Tape& t, Var a, Var bias) {
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(bias);
    require_rank(bv, 1, "add_bias");
    const std::size_t f = bv.dim(0);
    if (av.shape().back() != f)
        throw Error("add_bias: bias " + shape_string(bv.shape()) + " does not match " + shape_string(av.shape()));
    Tensor c = av;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += bv[i % f];
    return t.push(std::move(c), {a, bias}, [a, bias, f](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        if (tp.requires_grad(a)) tp.grad(a).add_(g);
        if (tp.requires_grad(bias)) {
            Tensor& gb = tp.grad(bias);
            for (std::size_t i = 0; i < g.size(); ++i) gb[i % f] += g[i];
        }
    });
}

Var mul(Tape& t, Var a, Var b) {
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    require_same_shape(av, bv, "mul");
    Tensor c(av.shape());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = av[i] * bv[i];
    return t.push(std::move(c), {a, b}, [a, b](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        const Tensor& av = tp.value(a);
        const Tensor& bv = tp.value(b);
        if (tp.requires_grad(a)) {
            Tensor& ga = tp.grad(a);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
        }
        if (tp.requires_grad(b)) {
            Tensor& gb = tp.grad(b);
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
        }
    });
}

Var sigmoid(Tape& t, Var a) {
    return unary(t, a, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Tape& t, Var a) {
    return unary(t, a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(Tape& t, Var a) {
    return unary(t, a, [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var concat_cols(Tape& t, const std::vector<Var>& parts) {
    if (parts.empty()) throw Error("concat_cols: no inputs");
    const std::size_t rows = t.value(parts.front()).dim(0);
    std::vector<std::size_t> widths;
    std::size_t total = 0;
    for (Var p : parts) {
        const Tensor& v = t.value(p);
        require_rank(v, 2, "concat_cols");
        if (v.dim(0) != rows) throw Error("concat_cols: row counts differ");
        widths.push_back(v.dim(1));
        total += v.dim(1);
    }
    Tensor out({rows, total});
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const Tensor& v = t.value(parts[p]);
        for (std::size_t r = 0; r < rows; ++r)
            std::copy_n(v.ptr() + r * widths[p], widths[p], out.ptr() + r * total + offset);
        offset += widths[p];
    }
    return t.push(std::move(out), parts, [parts, widths, rows, total](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        std::size_t offset = 0;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            if (tp.requires_grad(parts[p])) {
                Tensor& gp = tp.grad(parts[p]);
                for (std::size_t r = 0; r < rows; ++r)
                    for (std::size_t j = 0; j < widths[p]; ++j) gp[r * widths[p] + j] += g[r * total + offset + j];
            }
            offset += widths[p];
        }
    });
}

Var slice_cols(Tape& t, Var a, std::size_t begin, std::size_t end) {
    const Tensor& v = t.value(a);
    require_rank(v, 2, "slice_cols");
    if (begin >= end || end > v.dim(1)) throw Error("slice_cols: bad range");
    const std::size_t rows = v.dim(0), cols = v.dim(1), w = end - begin;
    Tensor out({rows, w});
    for (std::size_t r = 0; r < rows; ++r) std::copy_n(v.ptr() + r * cols + begin, w, out.ptr() + r * w);
    return t.push(std::move(out), {a}, [a, begin, rows, cols, w](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        Tensor& ga = tp.grad(a);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < w; ++j) ga[r * cols + begin + j] += g[r * w + j];
    });
}

Var reshape(Tape& t, Var a, Shape shape) {
    Tensor out = t.value(a).reshaped(std::move(shape));
    return t.push(std::move(out), {a}, [a](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        Tensor& ga = tp.grad(a);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    });
}

Var embedding(Tape& t, Var table, std::span<const int> indices, std::size_t batch, std::size_t len) {
    const Tensor& tv = t.value(table);
    require_rank(tv, 2, "embedding");
    if (indices.size() != batch * len) throw Error("embedding: index count does not match batch x length");
    const std::size_t rows = tv.dim(0), dim = tv.dim(1);
    for (int idx : indices)
        if (idx < 0 || static_cast<std::size_t>(idx) >= rows)
            throw Error("embedding: index " + std::to_string(idx) + " out of range");
    Tensor out({batch, len, dim});
    for (std::size_t i = 0; i < indices.size(); ++i)
        std::copy_n(tv.ptr() + static_cast<std::size_t>(indices[i]) * dim, dim, out.ptr() + i * dim);
    std::vector<int> idx(indices.begin(), indices.end());
    return t.push(std::move(out), {table}, [table, idx = std::move(idx), dim](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        Tensor& gt = tp.grad(table);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            double* row = gt.ptr() + static_cast<std::size_t>(idx[i]) * dim;
            const double* gi = g.ptr() + i * dim;
            for (std::size_t d = 0; d < dim; ++d) row[d] += gi[d];
        }
    });
}

Var conv1d(Tape& t, Var x, Var w, Var bias) {
    const Tensor& xv = t.value(x);
    const Tensor& wv = t.value(w);
    const Tensor& bv = t.value(bias);
    require_rank(xv, 3, "conv1d");
    require_rank(wv, 3, "conv1d");
    kernels::Conv1dDims d{xv.dim(0), xv.dim(1), xv.dim(2), wv.dim(0), wv.dim(2)};
    if (wv.dim(1) != d.channels) throw Error("conv1d: kernel channels do not match input");
    if (bv.shape() != Shape{d.filters}) throw Error("conv1d: bias shape mismatch");
    if (d.width > d.length)
        throw Error("conv1d: kernel width " + std::to_string(d.width) + " exceeds sequence length " +
                    std::to_string(d.length));
    Tensor y({d.batch, d.out_length(), d.filters});
    kernels::conv1d_forward(xv.data(), wv.data(), bv.data(), y.data(), d);
    return t.push(std::move(y), {x, w, bias}, [x, w, bias, d](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        if (tp.requires_grad(x)) kernels::conv1d_backward_input(g.data(), tp.value(w).data(), tp.grad(x).data(), d);
        if (tp.requires_grad(w)) kernels::conv1d_backward_kernel(tp.value(x).data(), g.data(), tp.grad(w).data(), d);
        if (tp.requires_grad(bias)) {
            Tensor& gb = tp.grad(bias);
            for (std::size_t i = 0; i < g.size(); ++i) gb[i % d.filters] += g[i];
        }
    });
}

Var max_pool1d(Tape& t, Var x, std::size_t pool) {
    const Tensor& xv = t.value(x);
    require_rank(xv, 3, "max_pool1d");
    const std::size_t b = xv.dim(0), len = xv.dim(1), c = xv.dim(2);
    if (pool == 0 || pool > len) throw Error("max_pool1d: pool size must be in [1, length]");
    const std::size_t out_len = len / pool;
    Tensor y({b, out_len, c});
    std::vector<std::size_t> argmax(y.size());
    for (std::size_t n = 0; n < b; ++n)
        for (std::size_t o = 0; o < out_len; ++o)
            for (std::size_t ch = 0; ch < c; ++ch) {
                std::size_t best = (n * len + o * pool) * c + ch;
                for (std::size_t s = 1; s < pool; ++s) {
                    const std::size_t i = (n * len + o * pool + s) * c + ch;
                    if (xv[i] > xv[best]) best = i;
                }
                const std::size_t out = (n * out_len + o) * c + ch;
                y[out] = xv[best];
                argmax[out] = best;
            }
    return t.push(std::move(y), {x}, [x, argmax = std::move(argmax)](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        Tensor& gx = tp.grad(x);
        for (std::size_t i = 0; i < argmax.size(); ++i) gx[argmax[i]] += g[i];
    });
}

Var global_max_pool(Tape& t, Var x) {
    const Tensor& xv = t.value(x);
    require_rank(xv, 3, "global_max_pool");
    const std::size_t b = xv.dim(0), len = xv.dim(1), c = xv.dim(2);
    Tensor y({b, c});
    std::vector<std::size_t> argmax(y.size());
    for (std::size_t n = 0; n < b; ++n)
        for (std::size_t ch = 0; ch < c; ++ch) {
            std::size_t best = n * len * c + ch;
            for (std::size_t s = 1; s < len; ++s) {
                const std::size_t i = (n * len + s) * c + ch;
                if (xv[i] > xv[best]) best = i;
            }
            y[n * c + ch] = xv[best];
            argmax[n * c + ch] = best;
        }
    return t.push(std::move(y), {x}, [x, argmax = std::move(argmax)](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        Tensor& gx = tp.grad(x);
        for (std::size_t i = 0; i < argmax.size(); ++i) gx[argmax[i]] += g[i];
    });
}

Var time_step(Tape& t, Var x, std::size_t step) {
    const Tensor& xv = t.value(x);
    require_rank(xv, 3, "time_step");
    const std::size_t b = xv.dim(0), len = xv.dim(1), d = xv.dim(2);
    if (step >= len) throw Error("time_step: step out of range");
    Tensor y({b, d});
    for (std::size_t n = 0; n < b; ++n) std::copy_n(xv.ptr() + (n * len + step) * d, d, y.ptr() + n * d);
    return t.push(std::move(y), {x}, [x, b, len, d, step](Tape& tp, Var self) {
        const Tensor& g = tp.grad(self);
        Tensor& gx = tp.grad(x);
        for (std::size_t n = 0; n < b; ++n)
            for (std::size_t j = 0; j < d; ++j) gx[(n * len + step) * d + j] += g[n * d + j];
    });
}

Var mse(Tape& t, Var pred, const Tensor& target) {
    const Tensor& p = t.value(pred);
    if (p.size() != target.size()) throw Error("mse: prediction and target sizes differ");
    const auto n = static_cast<double>(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - target[i];
        s += d * d;
    }
    return t.push(Tensor::scalar(s / n), {pred}, [pred, target, n](Tape& tp, Var self) {
        const double g = tp.grad(self)[0];
        const Tensor& p = tp.value(pred);
        Tensor& gp = tp.grad(pred);
        for (std::size_t i = 0; i < p.size(); ++i) gp[i] += g * 2.0 * (p[i] - target[i]) / n;
    });
}

Var sum(Tape& t, Var a) {
    const Tensor& v = t.value(a);
    double s = 0.0;
    for (double x : v.data()) s += x;
    return t.push(Tensor::scalar(s), {a}, [a](Tape& tp, Var self) {
        const double g = tp.grad(self)[0];
        Tensor& ga = tp.grad(a);
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
    });
}

}  // namespace clickbait::ops
