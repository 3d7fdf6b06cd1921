#include "spoilage/agents/replay_buffer.hpp"

#include <algorithm>

#include "spoilage/errors.hpp"

namespace spoilage::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t encoding_size)
    : capacity_(capacity), width_(encoding_size) {
  if (capacity == 0) throw InvalidConfig("replay capacity must be >= 1");
  if (encoding_size == 0) throw InvalidConfig("replay encoding width must be >= 1");
  states_.resize(capacity * width_);
  next_states_.resize(capacity * width_);
  rewards_.resize(capacity);
  actions_.resize(capacity);
  done_.resize(capacity);
}

void ReplayBuffer::push(std::span<const double> state, int action, double reward,
                        std::span<const double> next_state, bool done) {
  if (state.size() != width_ || next_state.size() != width_) {
    throw ShapeMismatch("transition encoding width differs from buffer width");
  }
  std::copy(state.begin(), state.end(), states_.begin() + static_cast<std::ptrdiff_t>(head_ * width_));
  std::copy(next_state.begin(), next_state.end(),
            next_states_.begin() + static_cast<std::ptrdiff_t>(head_ * width_));
  actions_[head_] = action;
  rewards_[head_] = reward;
  done_[head_] = done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size, Rng& rng) const {
  if (batch_size == 0) throw EmptyBatch();
  if (size_ < batch_size) throw InsufficientExperience(size_, batch_size);
  std::vector<std::size_t> idx(batch_size);
  for (auto& i : idx) i = rng.uniform_index(size_);
  return idx;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  std::vector<Transition> out;
  for (std::size_t i : sample_indices(batch_size, rng)) out.push_back(at(i));
  return out;
}

std::span<const double> ReplayBuffer::state(std::size_t i) const {
  if (i >= size_) throw ShapeMismatch("replay slot out of range");
  return {states_.data() + i * width_, width_};
}

std::span<const double> ReplayBuffer::next_state(std::size_t i) const {
  if (i >= size_) throw ShapeMismatch("replay slot out of range");
  return {next_states_.data() + i * width_, width_};
}

Transition ReplayBuffer::at(std::size_t i) const {
  const auto s = state(i);
  const auto n = next_state(i);
  return Transition{{s.begin(), s.end()}, actions_[i], rewards_[i], {n.begin(), n.end()}, done_[i] != 0};
}

Transition ReplayBuffer::oldest(std::size_t i) const {
  if (i >= size_) throw ShapeMismatch("replay age index out of range");
  const std::size_t start = size_ < capacity_ ? 0 : head_;
  return at((start + i) % capacity_);
}

}  // namespace spoilage::agents
