#pragma once

#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "parcheck/graph_source.hpp"
#include "parcheck/partition.hpp"
#include "parcheck/random_graph.hpp"
#include "parcheck/termination.hpp"
#include "parcheck/verdict.hpp"

namespace parcheck {

enum class FlushReason { Explicit, Full, Idle };
enum class DriverKind { Deterministic, Parallel };

struct EngineConfig {
  int workers = 1;
  std::size_t buffer_capacity = 1024;  // B: states per outgoing buffer
  std::size_t poll_interval = 64;      // P: states processed between inbox polls
  DriverKind driver = DriverKind::Deterministic;
  std::uint64_t det_seed = 0;          // schedule seed, deterministic driver only
  SliceSpec slice;
  std::uint64_t hash_seed = kFnvOffsetBasis;

  // Test instrumentation: observes every transmitted batch.
  std::function<void(int from, int to, std::size_t size, FlushReason)> on_batch;
};

/// One unit of work or one network message: a state descriptor plus small
/// algorithm metadata (two words and an optional second descriptor, used for
/// parents and propagated ordering keys).
struct Message {
  StateDescriptor state;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  StateDescriptor aux;
};

struct ModelErrorInfo {
  StateDescriptor state;  // the state whose expansion failed
  std::string message;
};

class Engine;

/// Per-worker execution context. A worker owns its queue, its visited table
/// and its outgoing buffers; the only inter-worker channels are message
/// batches and the termination token. Handlers run on the owning worker only.
class Worker {
 public:
  int id() const { return id_; }
  int worker_count() const;
  int owner_of(const StateDescriptor& d) const;
  bool owns(const StateDescriptor& d) const { return owner_of(d) == id_; }

  /// Visited-table registration: returns (local index, inserted-now). A
  /// worker only ever holds descriptors it owns; routing bugs surface here.
  std::pair<std::uint32_t, bool> intern(const StateDescriptor& d) {
    auto [it, fresh] = table_.emplace(d, static_cast<std::uint32_t>(states_.size()));
    if (fresh) {
      if (!owns(d))
        throw std::logic_error("worker " + std::to_string(id_) +
                               " interned a descriptor it does not own");
      states_.push_back(d);
      ++stats_states_;
    }
    return {it->second, fresh};
  }

  std::optional<std::uint32_t> lookup(const StateDescriptor& d) const {
    auto it = table_.find(d);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  const StateDescriptor& state_at(std::uint32_t i) const { return states_[i]; }
  std::size_t size() const { return states_.size(); }

  /// Route one message: to the local queue when this worker owns the state,
  /// otherwise into the outgoing buffer of the owner (one cross message per
  /// cross edge; a buffer reaching capacity flushes itself).
  void dispatch(Message m);

  void send(StateDescriptor state, std::uint64_t a = 0, std::uint64_t b = 0,
            StateDescriptor aux = {}) {
    dispatch(Message{std::move(state), a, b, std::move(aux)});
  }

  void flush_explicit() { flush(FlushReason::Explicit); }

  /// Successor enumeration with edge accounting; an ill-defined expansion is
  /// recorded and stops the run.
  Expansion expand(const StateDescriptor& d);

  void note_edges(std::uint64_t n) { stats_edges_ += n; }
  void request_stop();

 private:
  friend class Engine;

  void flush(FlushReason reason);
  void transmit(int peer, FlushReason reason);
  std::size_t poll();

  Engine* engine_ = nullptr;
  int id_ = 0;

  std::deque<Message> local_;
  std::vector<std::vector<Message>> outbuf_;

  std::mutex inbox_mutex_;
  std::vector<std::vector<Message>> inbox_;

  std::unordered_map<StateDescriptor, std::uint32_t, DescriptorHash> table_;
  std::vector<StateDescriptor> states_;

  std::uint64_t stats_states_ = 0;
  std::uint64_t stats_edges_ = 0;
  std::uint64_t stats_cross_ = 0;
  std::uint64_t stats_msgs_ = 0;
  std::uint64_t fl_explicit_ = 0;
  std::uint64_t fl_full_ = 0;
  std::uint64_t fl_idle_ = 0;
  std::size_t since_poll_ = 0;
};

/// One engine phase: `begin` seeds per-worker work, `handle` processes one
/// queue entry at a time. The phase runs until global quiescence (detected by
/// the token) or until some worker requests a stop. Construction of all
/// workers strictly precedes the first phase, and every phase ends in a
/// barrier, so a coordinator may inspect worker state between phases.
struct Phase {
  std::function<void(Worker&)> begin;
  std::function<void(Worker&, Message&&)> handle;
};

class Engine {
 public:
  Engine(const GraphSource& source, const EngineConfig& cfg)
      : source_(&source),
        cfg_(cfg),
        partition_(make_partition(cfg.workers, cfg.slice, cfg.hash_seed,
                                  source.descriptor_len())),
        rng_(cfg.det_seed),
        workers_(static_cast<std::size_t>(cfg.workers)) {
    if (cfg.buffer_capacity < 1) throw ConfigError("buffer capacity must be >= 1");
    if (cfg.poll_interval < 1) throw ConfigError("poll interval must be >= 1");
    for (int i = 0; i < cfg.workers; ++i) {
      workers_[i].engine_ = this;
      workers_[i].id_ = i;
      workers_[i].outbuf_.resize(static_cast<std::size_t>(cfg.workers));
      workers_[i].inbox_.reserve(8);
    }
  }

  ~Engine() { shutdown_threads(); }

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  int worker_count() const { return cfg_.workers; }
  const GraphSource& source() const { return *source_; }
  const PartitionFn& partition() const { return partition_; }
  const EngineConfig& config() const { return cfg_; }

  Worker& worker(int i) { return workers_[static_cast<std::size_t>(i)]; }

  bool stopped() const { return stop_.load(std::memory_order_acquire); }
  std::optional<ModelErrorInfo> model_error() const {
    std::lock_guard<std::mutex> lock(error_mutex_);
    return model_error_;
  }

  std::uint64_t token_rounds() const { return last_token_rounds_; }

  void run_phase(const Phase& phase) {
    if (stopped()) return;
    for (Worker& w : workers_) {
      w.local_.clear();
      w.since_poll_ = 0;
    }
    term_ = std::make_unique<TerminationDetector>(cfg_.workers);
    phase_ = &phase;
    if (cfg_.driver == DriverKind::Deterministic) {
      run_phase_deterministic();
    } else {
      run_phase_parallel();
    }
    last_token_rounds_ = term_->rounds();
    // Residual buffers exist only after an early stop; flushing them keeps
    // the accounting identity sum(batch sizes) == messages_sent.
    for (Worker& w : workers_) w.flush(FlushReason::Explicit);
    for (Worker& w : workers_) {
      std::lock_guard<std::mutex> lock(w.inbox_mutex_);
      w.inbox_.clear();
    }
    phase_ = nullptr;
  }

  Stats collect_stats() const {
    Stats s;
    for (const Worker& w : workers_) {
      s.states_visited += w.stats_states_;
      s.edges_traversed += w.stats_edges_;
      s.cross_edges += w.stats_cross_;
      s.messages_sent += w.stats_msgs_;
      s.flushes.explicit_ += w.fl_explicit_;
      s.flushes.full += w.fl_full_;
      s.flushes.idle += w.fl_idle_;
    }
    return s;
  }

 private:
  friend class Worker;

  void report_model_error(const StateDescriptor& state, const std::string& msg) {
    {
      std::lock_guard<std::mutex> lock(error_mutex_);
      if (!model_error_) model_error_ = ModelErrorInfo{state, msg};
    }
    stop_.store(true, std::memory_order_release);
  }

  void run_phase_deterministic() {
    const int k = cfg_.workers;
    for (Worker& w : workers_)
      if (phase_->begin) phase_->begin(w);
    while (!stopped() && !term_->terminated()) {
      Worker& w = workers_[static_cast<std::size_t>(rng_.next_below(
          static_cast<std::uint64_t>(k)))];
      if (w.local_.empty() || w.since_poll_ >= cfg_.poll_interval) {
        w.poll();
        w.since_poll_ = 0;
      }
      if (!w.local_.empty()) {
        Message m = std::move(w.local_.front());
        w.local_.pop_front();
        ++w.since_poll_;
        phase_->handle(w, std::move(m));
      } else {
        w.flush(FlushReason::Idle);
        if (term_->try_advance(w.id_)) break;
      }
    }
    if (term_->terminated()) assert_quiescent();
  }

  // Termination was declared by the token; with the single-threaded driver we
  // can check the global condition directly.
  void assert_quiescent() {
    for (Worker& w : workers_) {
      bool inbox_empty;
      {
        std::lock_guard<std::mutex> lock(w.inbox_mutex_);
        inbox_empty = w.inbox_.empty();
      }
      bool buffers_empty = true;
      for (const auto& buf : w.outbuf_)
        if (!buf.empty()) buffers_empty = false;
      if (!w.local_.empty() || !inbox_empty || !buffers_empty)
        throw std::logic_error(
            "termination declared while worker " + std::to_string(w.id_) +
            " still had pending work");
    }
  }

  void run_phase_parallel() {
    ensure_threads();
    start_barrier_->arrive_and_wait();
    end_barrier_->arrive_and_wait();
    std::exception_ptr err;
    {
      std::lock_guard<std::mutex> lock(error_mutex_);
      err = worker_exception_;
      worker_exception_ = nullptr;
    }
    if (err) std::rethrow_exception(err);
  }

  void worker_loop(Worker& w) {
    if (phase_->begin) phase_->begin(w);
    int idle_spins = 0;
    while (!stopped() && !term_->terminated()) {
      w.poll();
      w.since_poll_ = 0;
      std::size_t processed = 0;
      while (processed < cfg_.poll_interval && !w.local_.empty()) {
        if (stopped()) return;
        Message m = std::move(w.local_.front());
        w.local_.pop_front();
        phase_->handle(w, std::move(m));
        ++processed;
      }
      if (processed > 0) {
        idle_spins = 0;
        continue;
      }
      w.flush(FlushReason::Idle);
      if (term_->try_advance(w.id_)) return;
      if (++idle_spins > 64) {
        std::this_thread::yield();
        if (idle_spins > 256) {
          std::this_thread::sleep_for(std::chrono::microseconds(50));
          idle_spins = 256;
        }
      }
    }
  }

  void ensure_threads() {
    if (!threads_.empty()) return;
    const int k = cfg_.workers;
    start_barrier_ = std::make_unique<std::barrier<>>(k + 1);
    end_barrier_ = std::make_unique<std::barrier<>>(k + 1);
    threads_.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      threads_.emplace_back([this, i] {
        for (;;) {
          start_barrier_->arrive_and_wait();
          if (shutdown_.load(std::memory_order_acquire)) return;
          try {
            worker_loop(workers_[static_cast<std::size_t>(i)]);
          } catch (...) {
            {
              std::lock_guard<std::mutex> lock(error_mutex_);
              if (!worker_exception_) worker_exception_ = std::current_exception();
            }
            stop_.store(true, std::memory_order_release);
          }
          end_barrier_->arrive_and_wait();
        }
      });
    }
  }

  void shutdown_threads() {
    if (threads_.empty()) return;
    shutdown_.store(true, std::memory_order_release);
    start_barrier_->arrive_and_wait();
    for (std::thread& t : threads_) t.join();
    threads_.clear();
  }

  const GraphSource* source_;
  EngineConfig cfg_;
  PartitionFn partition_;
  Xorshift64Star rng_;
  std::vector<Worker> workers_;
  const Phase* phase_ = nullptr;
  std::unique_ptr<TerminationDetector> term_;
  std::uint64_t last_token_rounds_ = 0;

  std::atomic<bool> stop_{false};
  mutable std::mutex error_mutex_;
  std::optional<ModelErrorInfo> model_error_;
  std::exception_ptr worker_exception_;

  std::vector<std::thread> threads_;
  std::unique_ptr<std::barrier<>> start_barrier_;
  std::unique_ptr<std::barrier<>> end_barrier_;
  std::atomic<bool> shutdown_{false};
};

inline int Worker::worker_count() const { return engine_->worker_count(); }

inline int Worker::owner_of(const StateDescriptor& d) const {
  return engine_->partition().owner(d);
}

inline void Worker::dispatch(Message m) {
  int target = owner_of(m.state);
  if (target == id_) {
    local_.push_back(std::move(m));
    return;
  }
  ++stats_msgs_;
  ++stats_cross_;
  auto& buf = outbuf_[static_cast<std::size_t>(target)];
  buf.push_back(std::move(m));
  if (buf.size() >= engine_->config().buffer_capacity)
    transmit(target, FlushReason::Full);
}

inline void Worker::flush(FlushReason reason) {
  const int k = engine_->worker_count();
  // Staggered start at (id + 1) mod k so workers flushing together do not all
  // hit peer 0 first.
  for (int step = 1; step < k; ++step) {
    int peer = (id_ + step) % k;
    if (!outbuf_[static_cast<std::size_t>(peer)].empty()) transmit(peer, reason);
  }
}

inline void Worker::transmit(int peer, FlushReason reason) {
  auto& buf = outbuf_[static_cast<std::size_t>(peer)];
  if (buf.empty()) return;
  std::vector<Message> batch;
  batch.swap(buf);
  switch (reason) {
    case FlushReason::Explicit: ++fl_explicit_; break;
    case FlushReason::Full: ++fl_full_; break;
    case FlushReason::Idle: ++fl_idle_; break;
  }
  engine_->term_->on_sent(id_, batch.size());
  if (engine_->config().on_batch)
    engine_->config().on_batch(id_, peer, batch.size(), reason);
  Worker& target = engine_->worker(peer);
  std::lock_guard<std::mutex> lock(target.inbox_mutex_);
  target.inbox_.push_back(std::move(batch));
}

inline std::size_t Worker::poll() {
  std::vector<std::vector<Message>> got;
  {
    std::lock_guard<std::mutex> lock(inbox_mutex_);
    got.swap(inbox_);
  }
  std::size_t n = 0;
  for (auto& batch : got) {
    n += batch.size();
    for (Message& m : batch) local_.push_back(std::move(m));
  }
  if (n > 0) engine_->term_->on_received(id_, n);
  return n;
}

inline Expansion Worker::expand(const StateDescriptor& d) {
  Expansion e = engine_->source().successors(d);
  stats_edges_ += e.states.size();
  if (!e.ok()) engine_->report_model_error(d, e.error);
  return e;
}

inline void Worker::request_stop() {
  engine_->stop_.store(true, std::memory_order_release);
}

}  // namespace parcheck
