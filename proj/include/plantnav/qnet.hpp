#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "plantnav/rng.hpp"

namespace plantnav {

// Fully connected net: ReLU hidden layers, linear output, 64-bit floats
// throughout. Parameters live in one flat vector laid out layer by layer,
// weights (output-neuron-major, row-major) before biases; checkpoints dump
// that vector verbatim.
class QNetwork {
public:
    QNetwork() = default;

    // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
    // Draw order: layers first to last, each weight row by row, biases none.
    static QNetwork init(const std::vector<int>& layer_sizes, Rng& rng);

    // All-zero parameters; used by checkpoint loading and tests.
    static QNetwork zeros(const std::vector<int>& layer_sizes);

    bool empty() const { return sizes_.empty(); }
    const std::vector<int>& layer_sizes() const { return sizes_; }
    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    std::size_t parameter_count() const { return params_.size(); }

    std::span<const double> parameters() const { return params_; }
    std::span<double> parameters_mut() { return params_; }

    // Offsets into the flat vector, exposed for targeted tests.
    std::size_t weight_offset(int layer) const { return w_off_[layer]; }
    std::size_t bias_offset(int layer) const { return b_off_[layer]; }

    std::vector<double> forward(std::span<const double> input) const;

private:
    std::vector<int> sizes_;
    std::vector<double> params_;
    std::vector<std::size_t> w_off_;
    std::vector<std::size_t> b_off_;

    void build_offsets();
};

struct QTrainSample {
    std::span<const double> input;
    int action = 0;    // output index the target constrains
    double target = 0.0;
};

struct GradResult {
    double loss = 0.0;          // mean squared residual over the batch
    std::vector<double> grad;   // dloss/dparam, same layout as parameters()
};

// Backpropagation through the chosen action's output only; the other five
// outputs contribute nothing to loss or gradient.
GradResult loss_and_grad(const QNetwork& net, std::span<const QTrainSample> batch);

// In-place params -= lr * grad. Throws NumericError when grad is non-finite.
void sgd_step(QNetwork& net, std::span<const double> grad, double lr);

// Value copy; the returned network shares nothing with the source.
QNetwork sync_target(const QNetwork& net);

// Binary checkpoint: magic "DQNCKPT1", little-endian u32 layer count and
// sizes, u64 feature-layout hash, then the flat parameters as f64.
void save_checkpoint(const QNetwork& net, std::uint64_t layout_hash, const std::filesystem::path& path);

struct Checkpoint {
    QNetwork net;
    std::uint64_t layout_hash = 0;
};

// Throws CheckpointError with a distinct kind for bad magic, malformed
// shape, and truncation.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace plantnav
