#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <vector>

namespace parcheck {

/// Safra-style colored-token termination detection on a logical ring.
///
/// Each worker keeps a message balance (sent minus received) and a color;
/// receiving a message blackens the worker. Worker 0 initiates probe rounds
/// while idle; a worker holding the token forwards it only while idle, adding
/// its balance and its color. Termination is declared exactly when a white
/// token completes a full pass with total balance 0 and worker 0 still white,
/// i.e. all queues are empty and no message is in flight. A message received
/// since the last token pass forces a second, clean pass.
///
/// Balance and color of worker i are touched only by worker i's thread; the
/// token itself is guarded by a mutex.
class TerminationDetector {
 public:
  explicit TerminationDetector(int k) : k_(k), per_(static_cast<std::size_t>(k)) {}

  void on_sent(int worker, std::uint64_t n) {
    per_[static_cast<std::size_t>(worker)].balance += static_cast<std::int64_t>(n);
  }

  void on_received(int worker, std::uint64_t n) {
    auto& p = per_[static_cast<std::size_t>(worker)];
    p.balance -= static_cast<std::int64_t>(n);
    p.black = true;
  }

  /// Called by an idle worker (empty queue, empty inbox, flushed buffers).
  /// Returns true once global termination has been declared.
  bool try_advance(int worker) {
    if (terminated_.load(std::memory_order_acquire)) return true;
    std::lock_guard<std::mutex> lock(token_mutex_);
    if (terminated_.load(std::memory_order_relaxed)) return true;
    auto& me = per_[static_cast<std::size_t>(worker)];

    if (!token_active_) {
      if (worker != 0) return false;
      token_active_ = true;
      token_black_ = false;
      token_count_ = 0;
      me.black = false;
      token_at_ = 1 % k_;
      ++rounds_;
      if (k_ > 1) return false;
      // fall through: with one worker the probe returns immediately
    }
    if (token_at_ != worker) return false;

    if (worker == 0) {
      if (!token_black_ && !me.black && token_count_ + me.balance == 0) {
        terminated_.store(true, std::memory_order_release);
        return true;
      }
      token_black_ = false;
      token_count_ = 0;
      me.black = false;
      token_at_ = 1 % k_;
      ++rounds_;
      return false;
    }
    token_count_ += me.balance;
    if (me.black) token_black_ = true;
    me.black = false;
    token_at_ = (worker + 1) % k_;
    return false;
  }

  bool terminated() const { return terminated_.load(std::memory_order_acquire); }

  /// Probe rounds initiated so far.
  std::uint64_t rounds() const { return rounds_; }

 private:
  struct PerWorker {
    std::int64_t balance = 0;
    bool black = false;
  };

  int k_;
  std::vector<PerWorker> per_;
  std::mutex token_mutex_;
  bool token_active_ = false;
  bool token_black_ = false;
  std::int64_t token_count_ = 0;
  int token_at_ = 0;
  std::uint64_t rounds_ = 0;
  std::atomic<bool> terminated_{false};
};

}  // namespace parcheck
