#include "osd/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "osd/kernels.hpp"

namespace osd {

namespace {

constexpr double kProbFloor = 1e-12;

double clamp_prob(double p) {
    return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

// y = W x + b, W row-major (rows x cols)
void gemv(std::span<const double> w, std::span<const double> b,
          std::span<const double> x, std::span<double> y) {
    const auto& ops = kern::active();
    const std::size_t rows = y.size();
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = ops.dot(w.data() + r * cols, x.data(), cols) + b[r];
}

void relu_inplace(std::span<double> v) {
    for (double& x : v) x = std::max(0.0, x);
}

void softmax_inplace(std::span<double> v) {
    const double mx = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - mx);
        sum += x;
    }
    for (double& x : v) x /= sum;
}

void sigmoid_inplace(std::span<double> v) {
    for (double& x : v) x = 1.0 / (1.0 + std::exp(-x));
}

struct ForwardCache {
    std::vector<double> h1, h2, out;
};

void forward_cached(const MlpModel& m, std::span<const double> x,
                    ForwardCache& c) {
    c.h1.resize(m.dims[1]);
    c.h2.resize(m.dims[2]);
    c.out.resize(m.dims[3]);
    gemv(m.w1, m.b1, x, c.h1);
    relu_inplace(c.h1);
    gemv(m.w2, m.b2, c.h1, c.h2);
    relu_inplace(c.h2);
    gemv(m.w3, m.b3, c.h2, c.out);
    if (m.mode == PredictorMode::classifier)
        softmax_inplace(c.out);
    else
        sigmoid_inplace(c.out);
}

double record_loss(const MlpModel& m, const TrainingData& data, std::size_t i,
                   std::span<const double> probs) {
    const std::size_t out = m.dims[3];
    if (m.mode == PredictorMode::classifier)
        return -std::log(clamp_prob(probs[data.l_star[i]]));
    double acc = 0.0;
    const std::uint8_t* bits = data.success.data() + i * data.num_orders;
    for (std::size_t j = 0; j < out; ++j) {
        const double p = clamp_prob(probs[j]);
        acc -= bits[j] ? std::log(p) : std::log(1.0 - p);
    }
    return acc / static_cast<double>(out);
}

}  // namespace

const char* to_string(PredictorMode mode) {
    return mode == PredictorMode::classifier ? "classifier" : "success";
}

PredictorMode predictor_mode_from_string(const std::string& s) {
    if (s == "classifier") return PredictorMode::classifier;
    if (s == "success") return PredictorMode::success;
    throw std::invalid_argument("unknown predictor mode: " + s);
}

MlpModel MlpModel::zeros(PredictorMode mode,
                         const std::array<std::size_t, 4>& dims) {
    for (std::size_t d : dims)
        if (d == 0) throw std::invalid_argument("MlpModel: zero layer size");
    MlpModel m;
    m.mode = mode;
    m.dims = dims;
    m.w1.assign(dims[1] * dims[0], 0.0);
    m.b1.assign(dims[1], 0.0);
    m.w2.assign(dims[2] * dims[1], 0.0);
    m.b2.assign(dims[2], 0.0);
    m.w3.assign(dims[3] * dims[2], 0.0);
    m.b3.assign(dims[3], 0.0);
    return m;
}

MlpModel MlpModel::glorot(PredictorMode mode,
                          const std::array<std::size_t, 4>& dims,
                          RngStream& rng) {
    MlpModel m = zeros(mode, dims);
    auto fill = [&rng](std::vector<double>& w, std::size_t fan_in,
                       std::size_t fan_out) {
        const double limit =
            std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& x : w) x = (2.0 * rng.next_uniform() - 1.0) * limit;
    };
    fill(m.w1, dims[0], dims[1]);
    fill(m.w2, dims[1], dims[2]);
    fill(m.w3, dims[2], dims[3]);
    return m;
}

std::vector<double> MlpModel::forward(std::span<const double> x) const {
    if (x.size() != dims[0])
        throw std::invalid_argument("MlpModel::forward: input size");
    ForwardCache c;
    forward_cached(*this, x, c);
    return std::move(c.out);
}

std::size_t MlpModel::param_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() +
           b3.size();
}

std::array<std::span<double>, 6> MlpModel::param_blocks() {
    return {std::span(w1), std::span(b1), std::span(w2),
            std::span(b2), std::span(w3), std::span(b3)};
}

std::array<std::span<const double>, 6> MlpModel::param_blocks() const {
    return {std::span(w1), std::span(b1), std::span(w2),
            std::span(b2), std::span(w3), std::span(b3)};
}

MlpGradients MlpGradients::zeros_like(const MlpModel& m) {
    MlpGradients g;
    g.w1.assign(m.w1.size(), 0.0);
    g.b1.assign(m.b1.size(), 0.0);
    g.w2.assign(m.w2.size(), 0.0);
    g.b2.assign(m.b2.size(), 0.0);
    g.w3.assign(m.w3.size(), 0.0);
    g.b3.assign(m.b3.size(), 0.0);
    return g;
}

std::array<std::span<double>, 6> MlpGradients::blocks() {
    return {std::span(w1), std::span(b1), std::span(w2),
            std::span(b2), std::span(w3), std::span(b3)};
}

double batch_loss(const MlpModel& model, const TrainingData& data,
                  std::span<const std::size_t> batch) {
    if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
    ForwardCache c;
    double acc = 0.0;
    for (std::size_t i : batch) {
        forward_cached(model, data.row(i), c);
        acc += record_loss(model, data, i, c.out);
    }
    return acc / static_cast<double>(batch.size());
}

double batch_loss_and_grad(const MlpModel& model, const TrainingData& data,
                           std::span<const std::size_t> batch,
                           MlpGradients& grad) {
    if (batch.empty())
        throw std::invalid_argument("batch_loss_and_grad: empty batch");
    const auto& ops = kern::active();
    const std::size_t in = model.dims[0];
    const std::size_t h1n = model.dims[1];
    const std::size_t h2n = model.dims[2];
    const std::size_t outn = model.dims[3];
    const double bs = static_cast<double>(batch.size());

    for (auto block : grad.blocks()) std::fill(block.begin(), block.end(), 0.0);

    ForwardCache c;
    std::vector<double> d_out(outn), d_h2(h2n), d_h1(h1n);
    double loss = 0.0;

    for (std::size_t i : batch) {
        const auto x = data.row(i);
        forward_cached(model, x, c);
        loss += record_loss(model, data, i, c.out);

        // gradient at the output pre-activations; softmax+CE and
        // sigmoid+BCE both collapse to (p - target)
        if (model.mode == PredictorMode::classifier) {
            for (std::size_t j = 0; j < outn; ++j) d_out[j] = c.out[j] / bs;
            d_out[data.l_star[i]] -= 1.0 / bs;
        } else {
            const std::uint8_t* bits = data.success.data() + i * data.num_orders;
            const double scale = 1.0 / (bs * static_cast<double>(outn));
            for (std::size_t j = 0; j < outn; ++j)
                d_out[j] = (c.out[j] - static_cast<double>(bits[j])) * scale;
        }

        std::fill(d_h2.begin(), d_h2.end(), 0.0);
        for (std::size_t r = 0; r < outn; ++r) {
            ops.axpy(d_out[r], c.h2.data(), grad.w3.data() + r * h2n, h2n);
            grad.b3[r] += d_out[r];
            ops.axpy(d_out[r], model.w3.data() + r * h2n, d_h2.data(), h2n);
        }
        for (std::size_t r = 0; r < h2n; ++r)
            if (c.h2[r] <= 0.0) d_h2[r] = 0.0;

        std::fill(d_h1.begin(), d_h1.end(), 0.0);
        for (std::size_t r = 0; r < h2n; ++r) {
            if (d_h2[r] == 0.0) continue;
            ops.axpy(d_h2[r], c.h1.data(), grad.w2.data() + r * h1n, h1n);
            grad.b2[r] += d_h2[r];
            ops.axpy(d_h2[r], model.w2.data() + r * h1n, d_h1.data(), h1n);
        }
        for (std::size_t r = 0; r < h1n; ++r)
            if (c.h1[r] <= 0.0) d_h1[r] = 0.0;

        for (std::size_t r = 0; r < h1n; ++r) {
            if (d_h1[r] == 0.0) continue;
            ops.axpy(d_h1[r], x.data(), grad.w1.data() + r * in, in);
            grad.b1[r] += d_h1[r];
        }
    }
    return loss / bs;
}

AdamState::AdamState(const MlpModel& model, double lr_) : lr(lr_) {
    m.assign(model.param_count(), 0.0);
    v.assign(model.param_count(), 0.0);
}

void AdamState::step(MlpModel& model, MlpGradients& grad) {
    ++step_count;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    std::size_t off = 0;
    auto params = model.param_blocks();
    auto grads = grad.blocks();
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto p = params[b];
        auto g = grads[b];
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = g[i];
            m[off + i] = beta1 * m[off + i] + (1.0 - beta1) * gi;
            v[off + i] = beta2 * v[off + i] + (1.0 - beta2) * gi * gi;
            const double mhat = m[off + i] / bc1;
            const double vhat = v[off + i] / bc2;
            p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
        off += p.size();
    }
}

TrainResult train_predictor(const TrainingData& data, PredictorMode mode,
                            const TrainOptions& options) {
    if (data.size() == 0)
        throw std::invalid_argument("train_predictor: empty dataset");
    if (options.epochs == 0 || options.batch_size == 0)
        throw std::invalid_argument("train_predictor: bad options");

    const std::size_t h1 =
        options.hidden1 ? options.hidden1 : std::max<std::size_t>(1, data.input_dim / 2);
    const std::size_t h2 = options.hidden2 ? options.hidden2
                                           : std::max<std::size_t>(1, h1 / 2);
    const std::array<std::size_t, 4> dims{data.input_dim, h1, h2,
                                          data.num_orders};

    // dedicated stream namespace so trial streams never collide with these
    constexpr std::uint64_t kTrainStreamBase = std::uint64_t(1) << 32;
    RngStream init_rng(options.seed, kTrainStreamBase);
    MlpModel model = MlpModel::glorot(mode, dims, init_rng);
    AdamState adam(model, options.learning_rate);
    MlpGradients grad = MlpGradients::zeros_like(model);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> epoch_loss;
    epoch_loss.reserve(options.epochs);

    for (unsigned epoch = 0; epoch < options.epochs; ++epoch) {
        RngStream shuffle_rng(options.seed, kTrainStreamBase + 1 + epoch);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_below(i)]);

        double acc = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += options.batch_size) {
            const std::size_t len =
                std::min(options.batch_size, order.size() - start);
            const double loss = batch_loss_and_grad(
                model, data, {order.data() + start, len}, grad);
            if (!std::isfinite(loss))
                throw std::runtime_error(
                    "train_predictor: non-finite loss at epoch " +
                    std::to_string(epoch));
            adam.step(model, grad);
            acc += loss;
            ++batches;
        }
        epoch_loss.push_back(acc / static_cast<double>(batches));
    }

    if (epoch_loss.back() >= epoch_loss.front())
        throw std::runtime_error(
            "train_predictor: training loss failed to decrease");
    return {std::move(model), std::move(epoch_loss)};
}

void save_model(const std::string& path, const MlpModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << "osd-mlp v1\n";
    out << "mode " << to_string(model.mode) << '\n';
    out << "dims " << model.dims[0] << ' ' << model.dims[1] << ' '
        << model.dims[2] << ' ' << model.dims[3] << '\n';
    out.precision(17);
    for (auto block : model.param_blocks()) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            out << block[i];
            out << ((i + 1) % 16 == 0 || i + 1 == block.size() ? '\n' : ' ');
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "osd-mlp" || version != "v1")
        throw std::runtime_error("not a model file: " + path);
    std::string tag, mode_str;
    in >> tag >> mode_str;
    if (tag != "mode") throw std::runtime_error("malformed model file: " + path);
    std::array<std::size_t, 4> dims{};
    in >> tag;
    if (tag != "dims") throw std::runtime_error("malformed model file: " + path);
    for (auto& d : dims) in >> d;
    if (!in) throw std::runtime_error("malformed model file: " + path);

    MlpModel model =
        MlpModel::zeros(predictor_mode_from_string(mode_str), dims);
    for (auto block : model.param_blocks())
        for (double& x : block)
            if (!(in >> x))
                throw std::runtime_error("model file truncated: " + path);
    double extra;
    if (in >> extra)
        throw std::runtime_error("trailing data in model file: " + path);
    return model;
}

}  // namespace osd
