#include <doctest.h>

#include <cmath>

#include "clickbait/error.hpp"
#include "clickbait/features.hpp"
#include "clickbait/grad_check.hpp"
#include "clickbait/network.hpp"
#include "clickbait/ops.hpp"
#include "clickbait/rng.hpp"

using namespace clickbait;

namespace {

ModelConfig grad_config(Branch branch, bool vectors) {
    ModelConfig c;
    c.branch = branch;
    c.seq_length = 8;
    c.vocab_size = 20;
    c.embed_dim = 4;
    c.lstm_units = 3;
    c.cnn = CnnConfig{3, 3, 3, 2, 0};
    c.dense_units = 4;
    c.fusion_units = 3;
    c.image_dim = 6;
    c.vector_inputs.cues_tweet = vectors;
    c.vector_inputs.image = vectors;
    return c;
}

Batch random_batch(const ModelConfig& c, std::size_t n, Rng& rng) {
    Batch b;
    b.size = n;
    for (std::size_t i = 0; i < n * c.seq_length; ++i) {
        const bool pad = (i % c.seq_length) < 2 && rng.uniform() < 0.5;
        b.tokens.push_back(pad ? 0 : static_cast<int>(1 + rng.below(c.vocab_size)));
    }
    if (c.vector_inputs.any()) {
        b.vectors = Tensor({n, c.vector_width()});
        for (double& v : b.vectors.data()) v = rng.uniform();
    }
    return b;
}

// Gives every parameter O(1)-scale values so no gradient is vanishingly small.
void randomize(FusionNetwork& net, Rng& rng) {
    for (auto& [name, p] : net.parameters())
        for (double& v : p.value.data()) v = rng.uniform(-0.8, 0.8);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double relu(double x) { return x > 0 ? x : 0.0; }

// Plain-loop forward pass written from the architecture description.
std::vector<double> reference_forward(const ModelConfig& c, const ParameterSet& ps, const Batch& b) {
    auto P = [&](const char* n) -> const Tensor& { return ps.at(n).value; };
    std::vector<double> out;
    for (std::size_t s = 0; s < b.size; ++s) {
        std::vector<std::vector<double>> x(c.seq_length, std::vector<double>(c.embed_dim));
        for (std::size_t t = 0; t < c.seq_length; ++t)
            for (std::size_t d = 0; d < c.embed_dim; ++d)
                x[t][d] = P("embedding").at(static_cast<std::size_t>(b.tokens[s * c.seq_length + t]), d);

        std::vector<double> trunk;
        if (c.branch == Branch::lstm) {
            const std::size_t H = c.lstm_units;
            std::vector<double> h(H, 0.0), cell(H, 0.0);
            for (std::size_t t = 0; t < c.seq_length; ++t) {
                std::vector<double> z(4 * H);
                for (std::size_t j = 0; j < 4 * H; ++j) {
                    double acc = P("lstm/bias")[j];
                    for (std::size_t d = 0; d < c.embed_dim; ++d) acc += x[t][d] * P("lstm/kernel").at(d, j);
                    for (std::size_t k = 0; k < H; ++k) acc += h[k] * P("lstm/recurrent").at(k, j);
                    z[j] = acc;
                }
                for (std::size_t k = 0; k < H; ++k) {
                    const double i = sigmoid(z[k]), f = sigmoid(z[H + k]), g = std::tanh(z[2 * H + k]),
                                 o = sigmoid(z[3 * H + k]);
                    cell[k] = f * cell[k] + i * g;
                    h[k] = o * std::tanh(cell[k]);
                }
            }
            trunk = h;
        } else {
            auto conv = [](const std::vector<std::vector<double>>& in, const Tensor& w, const Tensor& bias) {
                const std::size_t width = w.dim(0), ch = w.dim(1), f = w.dim(2);
                std::vector<std::vector<double>> y(in.size() - width + 1, std::vector<double>(f));
                for (std::size_t t = 0; t < y.size(); ++t)
                    for (std::size_t o = 0; o < f; ++o) {
                        double acc = bias[o];
                        for (std::size_t k = 0; k < width; ++k)
                            for (std::size_t q = 0; q < ch; ++q) acc += in[t + k][q] * w[(k * ch + q) * f + o];
                        y[t][o] = relu(acc);
                    }
                return y;
            };
            auto h2 = conv(conv(x, P("conv1/kernel"), P("conv1/bias")), P("conv2/kernel"), P("conv2/bias"));
            trunk.assign(h2[0].size(), -INFINITY);
            for (const auto& row : h2)
                for (std::size_t o = 0; o < row.size(); ++o) trunk[o] = std::max(trunk[o], row[o]);
        }
        std::vector<double> head;
        for (std::size_t j = 0; j < c.dense_units; ++j) {
            double acc = P("text_dense/bias")[j];
            for (std::size_t k = 0; k < trunk.size(); ++k) acc += trunk[k] * P("text_dense/kernel").at(k, j);
            head.push_back(relu(acc));
        }
        if (c.vector_inputs.any()) {
            for (std::size_t j = 0; j < c.fusion_units; ++j) {
                double acc = P("fusion/bias")[j];
                for (std::size_t k = 0; k < c.vector_width(); ++k)
                    acc += b.vectors.at(s, k) * P("fusion/kernel").at(k, j);
                head.push_back(relu(acc));
            }
        }
        double logit = P("output/bias")[0];
        for (std::size_t k = 0; k < head.size(); ++k) logit += head[k] * P("output/kernel").at(k, 0);
        out.push_back(sigmoid(logit));
    }
    return out;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("forward pass matches a plain-loop reference") {
    for (Branch br : {Branch::lstm, Branch::cnn})
        for (bool vectors : {false, true}) {
            CAPTURE(to_string(br));
            CAPTURE(vectors);
            ModelConfig c = grad_config(br, vectors);
            FusionNetwork net(c, 5);
            Rng rng(6);
            randomize(net, rng);
            Batch b = random_batch(c, 4, rng);
            Tape tape(false);
            const Tensor& y = tape.value(static_cast<const FusionNetwork&>(net).forward(tape, b));
            auto ref = reference_forward(c, net.parameters(), b);
            REQUIRE(y.shape() == Shape{4, 1});
            for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-12));
        }
}

TEST_CASE("full-network gradient checks") {
    for (Branch br : {Branch::lstm, Branch::cnn})
        for (bool vectors : {false, true}) {
            CAPTURE(to_string(br));
            CAPTURE(vectors);
            ModelConfig c = grad_config(br, vectors);
            FusionNetwork net(c, 9);
            Rng rng(10);
            randomize(net, rng);
            Batch b = random_batch(c, 3, rng);
            Tensor target({3, 1}, std::vector<double>{0.1, 0.9, 0.4});
            GradCheckResult r = grad_check(
                [&](Tape& t) { return ops::mse(t, net.forward(t, b), target); }, net.parameters());
            INFO(r.worst_parameter << "[" << r.worst_index << "] analytic " << r.analytic << " numeric " << r.numeric);
            CHECK(r.checked == net.parameter_count());
            CHECK(r.max_relative_error < 1e-4);
        }
}

TEST_CASE("initialization") {
    ModelConfig c = grad_config(Branch::lstm, true);
    FusionNetwork a(c, 1), b(c, 1), d(c, 2);
    const Tensor& emb = a.parameters().at("embedding").value;
    for (std::size_t j = 0; j < c.embed_dim; ++j) CHECK(emb[j] == 0.0);
    for (std::size_t i = c.embed_dim; i < emb.size(); ++i) CHECK(std::abs(emb[i]) <= 0.05);
    for (double v : a.parameters().at("lstm/bias").value.data()) CHECK(v == 0.0);
    CHECK(a.parameters().at("lstm/kernel").value == b.parameters().at("lstm/kernel").value);
    CHECK_FALSE(a.parameters().at("lstm/kernel").value == d.parameters().at("lstm/kernel").value);
    const double limit = std::sqrt(6.0 / (4.0 + 12.0));
    for (double v : a.parameters().at("lstm/kernel").value.data()) CHECK(std::abs(v) <= limit);
}

TEST_CASE("parameter shapes by config") {
    ModelConfig c = grad_config(Branch::cnn, false);
    auto s = parameter_shapes(c);
    CHECK(s.at("embedding") == Shape{21, 4});
    CHECK(s.at("conv1/kernel") == Shape{3, 4, 3});
    CHECK(s.at("conv2/kernel") == Shape{2, 3, 3});
    CHECK(s.at("text_dense/kernel") == Shape{3, 4});
    CHECK(s.at("output/kernel") == Shape{4, 1});
    CHECK(s.count("fusion/kernel") == 0);

    c.cnn.pool = 2;  // conv output length 8-3-2+2 = 5 -> 2 windows
    CHECK(parameter_shapes(c).at("text_dense/kernel") == Shape{6, 4});

    ModelConfig v = grad_config(Branch::lstm, true);
    v.use_text = false;
    auto vs = parameter_shapes(v);
    CHECK(vs.count("embedding") == 0);
    CHECK(vs.at("fusion/kernel") == Shape{11, 3});
    CHECK(vs.at("output/kernel") == Shape{3, 1});
}

TEST_CASE("pooled cnn runs and matches its gradient") {
    ModelConfig c = grad_config(Branch::cnn, false);
    c.cnn.pool = 2;
    FusionNetwork net(c, 3);
    Rng rng(4);
    randomize(net, rng);
    Batch b = random_batch(c, 2, rng);
    Tensor target({2, 1}, std::vector<double>{0.2, 0.7});
    GradCheckResult r =
        grad_check([&](Tape& t) { return ops::mse(t, net.forward(t, b), target); }, net.parameters());
    CHECK(r.max_relative_error < 1e-4);
}

TEST_CASE("adopting parameters checks shapes") {
    ModelConfig c = grad_config(Branch::lstm, false);
    FusionNetwork net(c, 1);
    ParameterSet ps = net.parameters();
    CHECK_NOTHROW(FusionNetwork(c, ps));
    ps["lstm/bias"] = Parameter(Tensor({5}));
    CHECK_THROWS_AS(FusionNetwork(c, ps), Error);
    ParameterSet missing = net.parameters();
    missing.erase("output/bias");
    CHECK_THROWS_AS(FusionNetwork(c, missing), Error);
}

TEST_CASE("padding gradient mask and embedding replacement") {
    ModelConfig c = grad_config(Branch::lstm, false);
    FusionNetwork net(c, 1);
    Batch b;
    b.size = 1;
    b.tokens = {0, 0, 0, 1, 2, 3, 4, 5};
    Tape t;
    t.backward(ops::mse(t, net.forward(t, b), Tensor({1, 1}, 1.0)));
    net.mask_padding_gradient();
    for (std::size_t d = 0; d < c.embed_dim; ++d) CHECK(net.parameters().at("embedding").grad[d] == 0.0);

    Tensor table({21, 4}, 1.0);
    net.set_embedding(table);
    CHECK(net.parameters().at("embedding").value[0] == 0.0);
    CHECK(net.parameters().at("embedding").value[4] == 1.0);
    CHECK_THROWS_AS(net.set_embedding(Tensor({20, 4})), Error);
}

TEST_CASE("bad batches are rejected") {
    ModelConfig c = grad_config(Branch::lstm, true);
    FusionNetwork net(c, 1);
    Batch b;
    b.size = 1;
    b.tokens.assign(8, 1);
    Tape t;
    CHECK_THROWS_AS(net.forward(t, b), Error);  // missing vectors
    b.vectors = Tensor({1, 3});
    CHECK_THROWS_AS(net.forward(t, b), Error);
    Batch empty;
    CHECK_THROWS_AS(net.forward(t, empty), Error);
}

TEST_CASE("invalid configs are rejected") {
    ModelConfig c = grad_config(Branch::cnn, false);
    c.cnn.kernel_1 = 9;
    CHECK_THROWS_AS(FusionNetwork(c, 1), Error);
    ModelConfig e = grad_config(Branch::lstm, false);
    e.epochs = 0;
    CHECK_THROWS_AS(e.validate(), Error);
    ModelConfig v = grad_config(Branch::lstm, false);
    v.use_text = false;
    CHECK_THROWS_AS(v.validate(), Error);
}

}  // TEST_SUITE
