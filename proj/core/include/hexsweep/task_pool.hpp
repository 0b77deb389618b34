#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace hexsweep {

/// Work-stealing task pool with one double-ended queue per worker. Owners
/// push and pop at the back (LIFO, work-first); thieves take from the front
/// (FIFO, coldest task). Victims are tried in a fixed per-worker order,
/// nearest ring neighbor first. Quiescence is tracked with a single shared
/// in-flight counter: incremented before enqueue, decremented after the
/// task body returns.
class TaskPool {
public:
    using Task = std::function<void()>;

    explicit TaskPool(int workers);
    /// steal_order[w] lists the victims worker w tries, in order. Missing or
    /// empty entries fall back to the ring order.
    TaskPool(int workers, std::vector<std::vector<int>> steal_order);
    ~TaskPool();

    TaskPool(const TaskPool&) = delete;
    TaskPool& operator=(const TaskPool&) = delete;

    /// Enqueue on the hinted worker's queue; unhinted tasks go to the
    /// spawning worker's own queue, or worker 0 when spawned from outside
    /// the pool. Throws SweepError after shutdown.
    void spawn(Task task);
    void spawn(Task task, int affinity_hint);

    /// Block until every task spawned before or during the call (including
    /// transitively spawned ones) has completed. Rethrows the first task
    /// exception, if any.
    void run_until_quiescent();

    int workers() const { return static_cast<int>(queues_.size()); }

    /// Id of the calling pool worker, or -1 off-pool.
    int current_worker() const;

    std::uint64_t steal_count() const { return steals_.load(std::memory_order_relaxed); }

private:
    struct Queue {
        std::mutex mx;
        std::deque<Task> dq;
    };

    void worker_loop(int id);
    bool try_pop_own(int id, Task& task);
    bool try_steal(int id, Task& task);
    bool any_queued() const;
    void enqueue(int target, Task task);
    void finish_task();

    std::vector<std::unique_ptr<Queue>> queues_;
    std::vector<std::vector<int>> steal_order_;
    std::vector<std::thread> threads_;

    std::atomic<std::int64_t> in_flight_{0};
    std::atomic<std::uint64_t> steals_{0};
    std::atomic<bool> stop_{false};

    std::atomic<int> sleepers_{0};
    std::mutex sleep_mx_;
    std::condition_variable sleep_cv_;

    std::mutex quiet_mx_;
    std::condition_variable quiet_cv_;

    std::mutex error_mx_;
    std::exception_ptr first_error_;
};

} // namespace hexsweep
