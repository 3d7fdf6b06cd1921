#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spoilage/random.hpp"

namespace spoilage::agents {

struct Transition {
  std::vector<double> state;  // encoded observation
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

/// Fixed-capacity FIFO of transitions with flat storage. Every stored state
/// has the same encoding width. Sampling is uniform with replacement.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t encoding_size);

  void push(std::span<const double> state, int action, double reward,
            std::span<const double> next_state, bool done);
  void push(const Transition& t) { push(t.state, t.action, t.reward, t.next_state, t.done); }

  /// Slot indices into the buffer; throws InsufficientExperience when fewer
  /// than `batch_size` transitions are stored.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;

  // Slot i in [0, size()); slot order is storage order, not age.
  std::span<const double> state(std::size_t i) const;
  std::span<const double> next_state(std::size_t i) const;
  int action(std::size_t i) const { return actions_.at(i); }
  double reward(std::size_t i) const { return rewards_.at(i); }
  bool done(std::size_t i) const { return done_.at(i) != 0; }
  Transition at(std::size_t i) const;

  /// Transition i in age order (0 = oldest still stored).
  Transition oldest(std::size_t i) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t encoding_size() const { return width_; }

 private:
  std::size_t capacity_;
  std::size_t width_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;  // next slot to write
  std::vector<double> states_, next_states_, rewards_;
  std::vector<int> actions_;
  std::vector<unsigned char> done_;
};

}  // namespace spoilage::agents
