#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "osd/rng.hpp"

// Small fully connected predictor: 2N-wide input (z and the antipodal image
// of a0), two rectifier hidden layers, and one output per candidate order.
// Classifier mode puts a softmax over "minimal successful order"; success
// mode puts an independent logistic on each "order i succeeds" event.

namespace osd {

enum class PredictorMode { classifier, success };

const char* to_string(PredictorMode mode);
PredictorMode predictor_mode_from_string(const std::string& s);

struct MlpModel {
    PredictorMode mode = PredictorMode::classifier;
    std::array<std::size_t, 4> dims{};  // input, hidden1, hidden2, output
    std::vector<double> w1, b1, w2, b2, w3, b3;  // weights row-major

    static MlpModel zeros(PredictorMode mode,
                          const std::array<std::size_t, 4>& dims);
    static MlpModel glorot(PredictorMode mode,
                           const std::array<std::size_t, 4>& dims,
                           RngStream& rng);

    // classifier: probability simplex; success: independent probabilities
    std::vector<double> forward(std::span<const double> x) const;

    std::size_t param_count() const;
    // parameter blocks in serialization order
    std::array<std::span<double>, 6> param_blocks();
    std::array<std::span<const double>, 6> param_blocks() const;
};

// training targets, decoupled from how trials were produced
struct TrainingData {
    std::size_t input_dim = 0;
    std::size_t num_orders = 0;  // l_m + 1
    std::vector<double> features;       // size() * input_dim, row-major
    std::vector<std::uint8_t> success;  // size() * num_orders
    std::vector<std::uint8_t> l_star;   // size()

    std::size_t size() const { return l_star.size(); }
    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * input_dim, input_dim};
    }
};

struct MlpGradients {
    std::vector<double> w1, b1, w2, b2, w3, b3;
    static MlpGradients zeros_like(const MlpModel& m);
    std::array<std::span<double>, 6> blocks();
};

// mean loss over the batch; probabilities clamped to [1e-12, 1-1e-12]
// before any log
double batch_loss(const MlpModel& model, const TrainingData& data,
                  std::span<const std::size_t> batch);

// same loss, plus analytic gradients (overwrites `grad`)
double batch_loss_and_grad(const MlpModel& model, const TrainingData& data,
                           std::span<const std::size_t> batch,
                           MlpGradients& grad);

struct AdamState {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t step_count = 0;
    std::vector<double> m, v;  // flat, param_count sized

    explicit AdamState(const MlpModel& model, double lr = 0.01);
    void step(MlpModel& model, MlpGradients& grad);
};

struct TrainOptions {
    unsigned epochs = 30;
    std::size_t batch_size = 128;
    double learning_rate = 0.01;
    std::uint64_t seed = 1;
    std::size_t hidden1 = 0;  // 0: input_dim / 2
    std::size_t hidden2 = 0;  // 0: hidden1 / 2
};

struct TrainResult {
    MlpModel model;
    std::vector<double> epoch_loss;
};

// Deterministic given (data, mode, options). Throws if the loss goes
// non-finite or fails to decrease from the first epoch to the last.
TrainResult train_predictor(const TrainingData& data, PredictorMode mode,
                            const TrainOptions& options);

// Text format: header with mode and layer dims, then decimal weights
// row-major per layer. Round trip preserves outputs bit-exactly.
void save_model(const std::string& path, const MlpModel& model);
MlpModel load_model(const std::string& path);

}  // namespace osd
