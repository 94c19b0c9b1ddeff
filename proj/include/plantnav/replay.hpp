#pragma once

#include <cstdint>
#include <vector>

#include "plantnav/dynamics.hpp"
#include "plantnav/features.hpp"
#include "plantnav/rng.hpp"

namespace plantnav {

struct Transition {
    FeatureVector phi_t;
    Action action = Action::PlusX;
    double reward = 0.0;
    FeatureVector phi_next;  // all-zero (and unread) when terminal by crash
    bool terminal = false;
};

// Fixed-capacity ring with FIFO eviction and uniform sampling without
// replacement. Single writer; sampled pointers stay valid until the next
// push.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity);

    void push(Transition t);

    // batch distinct transitions, uniform over the current contents. Order
    // is an artifact of the draw, not an API promise.
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

    std::size_t size() const { return slots_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t insertions() const { return insertions_; }

    // Logical index: 0 is the oldest transition currently held.
    const Transition& at(std::size_t i) const;

private:
    std::size_t capacity_;
    std::vector<Transition> slots_;
    std::uint64_t insertions_ = 0;
};

}  // namespace plantnav
