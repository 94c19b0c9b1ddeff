#include "plantnav/qnet.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "plantnav/errors.hpp"

namespace plantnav {
namespace {

constexpr char kMagic[8] = {'D', 'Q', 'N', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxLayerSize = 1u << 20;

void validate_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("network needs at least input and output layers");
    for (const int s : sizes)
        if (s < 1) throw std::invalid_argument("layer sizes must be >= 1");
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    put_u64(out, bits);
}

class ByteReader {
public:
    ByteReader(const std::string& data) : data_(data) {}

    bool take(void* dst, std::size_t n) {
        if (pos_ + n > data_.size()) return false;
        std::memcpy(dst, data_.data() + pos_, n);
        pos_ += n;
        return true;
    }

    std::size_t remaining() const { return data_.size() - pos_; }

private:
    const std::string& data_;
    std::size_t pos_ = 0;
};

std::uint32_t read_u32(ByteReader& r, const char* what) {
    unsigned char b[4];
    if (!r.take(b, 4)) throw CheckpointError(CheckpointError::Kind::Truncated, std::string("checkpoint truncated in ") + what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t read_u64(ByteReader& r, const char* what) {
    unsigned char b[8];
    if (!r.take(b, 8)) throw CheckpointError(CheckpointError::Kind::Truncated, std::string("checkpoint truncated in ") + what);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

}  // namespace

void QNetwork::build_offsets() {
    w_off_.clear();
    b_off_.clear();
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        w_off_.push_back(off);
        off += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
        b_off_.push_back(off);
        off += sizes_[l + 1];
    }
    params_.assign(off, 0.0);
}

QNetwork QNetwork::zeros(const std::vector<int>& layer_sizes) {
    validate_sizes(layer_sizes);
    QNetwork net;
    net.sizes_ = layer_sizes;
    net.build_offsets();
    return net;
}

QNetwork QNetwork::init(const std::vector<int>& layer_sizes, Rng& rng) {
    QNetwork net = zeros(layer_sizes);
    for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
        const int fan_in = net.sizes_[l];
        const int fan_out = net.sizes_[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        double* w = net.params_.data() + net.w_off_[l];
        for (int o = 0; o < fan_out; ++o)
            for (int i = 0; i < fan_in; ++i) w[static_cast<std::size_t>(o) * fan_in + i] = limit * rng.uniform_signed();
        // Biases stay zero.
    }
    return net;
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
    if (empty()) throw std::logic_error("forward: empty network");
    if (static_cast<int>(input.size()) != input_dim()) throw std::invalid_argument("forward: wrong input size");

    std::vector<double> act(input.begin(), input.end());
    std::vector<double> next;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int in = sizes_[l];
        const int out = sizes_[l + 1];
        const double* w = params_.data() + w_off_[l];
        const double* b = params_.data() + b_off_[l];
        next.assign(static_cast<std::size_t>(out), 0.0);
        for (int o = 0; o < out; ++o) {
            const double* row = w + static_cast<std::size_t>(o) * in;
            double sum = b[o];
            for (int i = 0; i < in; ++i) sum += row[i] * act[i];
            next[o] = sum;
        }
        const bool hidden = l + 2 < sizes_.size();
        if (hidden)
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        act.swap(next);
    }
    return act;
}

GradResult loss_and_grad(const QNetwork& net, std::span<const QTrainSample> batch) {
    if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
    const std::vector<int>& sizes = net.layer_sizes();
    const std::size_t layers = sizes.size() - 1;
    const double inv_batch = 1.0 / static_cast<double>(batch.size());

    GradResult result;
    result.grad.assign(net.parameter_count(), 0.0);
    const double* params = net.parameters().data();

    // Post-activation values per layer, reused across samples.
    std::vector<std::vector<double>> act(sizes.size());
    std::vector<std::vector<double>> delta(layers);
    for (std::size_t l = 0; l < layers; ++l) delta[l].resize(static_cast<std::size_t>(sizes[l + 1]));

    for (const QTrainSample& sample : batch) {
        if (static_cast<int>(sample.input.size()) != net.input_dim())
            throw std::invalid_argument("loss_and_grad: wrong input size");
        if (sample.action < 0 || sample.action >= net.output_dim())
            throw std::invalid_argument("loss_and_grad: action out of range");

        act[0].assign(sample.input.begin(), sample.input.end());
        for (std::size_t l = 0; l < layers; ++l) {
            const int in = sizes[l];
            const int out = sizes[l + 1];
            const double* w = params + net.weight_offset(static_cast<int>(l));
            const double* b = params + net.bias_offset(static_cast<int>(l));
            act[l + 1].assign(static_cast<std::size_t>(out), 0.0);
            for (int o = 0; o < out; ++o) {
                const double* row = w + static_cast<std::size_t>(o) * in;
                double sum = b[o];
                for (int i = 0; i < in; ++i) sum += row[i] * act[l][i];
                act[l + 1][o] = (l + 1 < layers && sum < 0.0) ? 0.0 : sum;
            }
        }

        const double q = act[layers][static_cast<std::size_t>(sample.action)];
        const double residual = q - sample.target;
        result.loss += residual * residual * inv_batch;

        // Seed the backward pass with d(mean loss)/d(chosen output).
        std::fill(delta[layers - 1].begin(), delta[layers - 1].end(), 0.0);
        delta[layers - 1][static_cast<std::size_t>(sample.action)] = 2.0 * residual * inv_batch;

        for (std::size_t l = layers; l-- > 0;) {
            const int in = sizes[l];
            const int out = sizes[l + 1];
            const double* w = params + net.weight_offset(static_cast<int>(l));
            double* gw = result.grad.data() + net.weight_offset(static_cast<int>(l));
            double* gb = result.grad.data() + net.bias_offset(static_cast<int>(l));
            for (int o = 0; o < out; ++o) {
                const double d = delta[l][static_cast<std::size_t>(o)];
                if (d == 0.0) continue;
                gb[o] += d;
                double* grow = gw + static_cast<std::size_t>(o) * in;
                for (int i = 0; i < in; ++i) grow[i] += d * act[l][i];
            }
            if (l == 0) break;
            // ReLU subgradient: zero where the activation was clipped.
            std::vector<double>& prev = delta[l - 1];
            for (int i = 0; i < in; ++i) {
                if (act[l][static_cast<std::size_t>(i)] <= 0.0) {
                    prev[static_cast<std::size_t>(i)] = 0.0;
                    continue;
                }
                double sum = 0.0;
                for (int o = 0; o < out; ++o)
                    sum += w[static_cast<std::size_t>(o) * in + i] * delta[l][static_cast<std::size_t>(o)];
                prev[static_cast<std::size_t>(i)] = sum;
            }
        }
    }
    return result;
}

void sgd_step(QNetwork& net, std::span<const double> grad, double lr) {
    if (grad.size() != net.parameter_count()) throw std::invalid_argument("sgd_step: gradient size mismatch");
    for (const double g : grad)
        if (!std::isfinite(g)) throw NumericError("sgd_step: non-finite gradient component");
    double* p = net.parameters_mut().data();
    for (std::size_t i = 0; i < grad.size(); ++i) p[i] -= lr * grad[i];
}

QNetwork sync_target(const QNetwork& net) { return net; }

void save_checkpoint(const QNetwork& net, std::uint64_t layout_hash, const std::filesystem::path& path) {
    if (net.empty()) throw std::logic_error("save_checkpoint: empty network");
    std::string blob;
    blob.reserve(8 + 4 + 4 * net.layer_sizes().size() + 8 + 8 * net.parameter_count());
    blob.append(kMagic, sizeof kMagic);
    put_u32(blob, static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (const int s : net.layer_sizes()) put_u32(blob, static_cast<std::uint32_t>(s));
    put_u64(blob, layout_hash);
    for (const double v : net.parameters()) put_f64(blob, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(CheckpointError::Kind::Io, "cannot open checkpoint for writing: " + path.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw CheckpointError(CheckpointError::Kind::Io, "failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError(CheckpointError::Kind::Io, "cannot open checkpoint: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    ByteReader r(data);
    char magic[8];
    if (!r.take(magic, sizeof magic))
        throw CheckpointError(CheckpointError::Kind::Truncated, "checkpoint shorter than its magic");
    if (std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw CheckpointError(CheckpointError::Kind::BadMagic, "not a checkpoint file (bad magic)");

    const std::uint32_t layer_count = read_u32(r, "layer count");
    if (layer_count < 2 || layer_count > kMaxLayers)
        throw CheckpointError(CheckpointError::Kind::BadShape, "implausible layer count " + std::to_string(layer_count));

    std::vector<int> sizes(layer_count);
    for (std::uint32_t i = 0; i < layer_count; ++i) {
        const std::uint32_t s = read_u32(r, "layer sizes");
        if (s < 1 || s > kMaxLayerSize)
            throw CheckpointError(CheckpointError::Kind::BadShape, "implausible layer size " + std::to_string(s));
        sizes[i] = static_cast<int>(s);
    }

    Checkpoint ckpt;
    ckpt.layout_hash = read_u64(r, "layout hash");
    ckpt.net = QNetwork::zeros(sizes);

    const std::size_t want = ckpt.net.parameter_count() * 8;
    if (r.remaining() < want)
        throw CheckpointError(CheckpointError::Kind::Truncated, "checkpoint truncated in parameters");
    if (r.remaining() > want)
        throw CheckpointError(CheckpointError::Kind::BadShape, "checkpoint has trailing bytes");

    double* p = ckpt.net.parameters_mut().data();
    for (std::size_t i = 0; i < ckpt.net.parameter_count(); ++i) {
        const std::uint64_t bits = read_u64(r, "parameters");
        std::memcpy(&p[i], &bits, sizeof(double));
    }
    return ckpt;
}

}  // namespace plantnav
