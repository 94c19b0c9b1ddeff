#include "plantnav/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plantnav {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("replay capacity must be >= 1");
    slots_.reserve(std::min<std::size_t>(capacity, 1u << 16));
}

void ReplayMemory::push(Transition t) {
    if (t.phi_t.empty() || t.phi_t.size() != t.phi_next.size())
        throw std::invalid_argument("replay push: feature vectors must be non-empty and equally sized");
    if (!std::isfinite(t.reward)) throw std::invalid_argument("replay push: non-finite reward");
    if (slots_.size() < capacity_) {
        slots_.push_back(std::move(t));
    } else {
        slots_[static_cast<std::size_t>(insertions_ % capacity_)] = std::move(t);
    }
    ++insertions_;
}

const Transition& ReplayMemory::at(std::size_t i) const {
    if (i >= slots_.size()) throw std::out_of_range("replay at: index past size");
    if (insertions_ <= capacity_) return slots_[i];
    return slots_[static_cast<std::size_t>((insertions_ + i) % capacity_)];
}

std::vector<const Transition*> ReplayMemory::sample(std::size_t batch, Rng& rng) const {
    if (batch < 1 || batch > slots_.size()) throw std::invalid_argument("replay sample: batch must be in [1, size]");

    // Floyd's sampling: each size-batch subset is equally likely, and only
    // batch draws are consumed.
    std::vector<std::size_t> chosen;
    chosen.reserve(batch);
    for (std::size_t j = slots_.size() - batch; j < slots_.size(); ++j) {
        const std::size_t t = static_cast<std::size_t>(rng.below(j + 1));
        const bool taken = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
        chosen.push_back(taken ? j : t);
    }

    std::vector<const Transition*> out;
    out.reserve(batch);
    for (const std::size_t idx : chosen) out.push_back(&slots_[idx]);
    return out;
}

}  // namespace plantnav
