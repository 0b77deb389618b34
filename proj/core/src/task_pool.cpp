#include "hexsweep/task_pool.hpp"

#include <chrono>

#include "hexsweep/errors.hpp"

namespace hexsweep {

namespace {

struct WorkerTls {
    const TaskPool* pool = nullptr;
    int id = -1;
};
thread_local WorkerTls t_worker;

} // namespace

TaskPool::TaskPool(int workers) : TaskPool(workers, {}) {}

TaskPool::TaskPool(int workers, std::vector<std::vector<int>> steal_order) {
    if (workers < 1) {
        throw ConfigError("TaskPool: worker count must be >= 1");
    }
    queues_.resize(workers);
    for (auto& q : queues_) {
        q = std::make_unique<Queue>();
    }
    steal_order_.resize(workers);
    for (int w = 0; w < workers; ++w) {
        if (w < static_cast<int>(steal_order.size()) && !steal_order[w].empty()) {
            steal_order_[w] = steal_order[w];
        } else {
            for (int k = 1; k < workers; ++k) {
                steal_order_[w].push_back((w + k) % workers);
            }
        }
    }
    threads_.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

TaskPool::~TaskPool() {
    stop_.store(true);
    {
        std::lock_guard<std::mutex> lk(sleep_mx_);
        sleep_cv_.notify_all();
    }
    for (auto& t : threads_) {
        t.join();
    }
}

int TaskPool::current_worker() const {
    return t_worker.pool == this ? t_worker.id : -1;
}

void TaskPool::enqueue(int target, Task task) {
    {
        std::lock_guard<std::mutex> lk(queues_[target]->mx);
        queues_[target]->dq.push_back(std::move(task));
    }
    if (sleepers_.load(std::memory_order_relaxed) > 0) {
        std::lock_guard<std::mutex> lk(sleep_mx_);
        sleep_cv_.notify_all();
    }
}

void TaskPool::spawn(Task task) {
    const int self = current_worker();
    spawn(std::move(task), self >= 0 ? self : 0);
}

void TaskPool::spawn(Task task, int affinity_hint) {
    if (stop_.load(std::memory_order_relaxed)) {
        throw SweepError("TaskPool: spawn after shutdown");
    }
    int target = affinity_hint;
    if (target < 0 || target >= workers()) {
        target = 0;
    }
    in_flight_.fetch_add(1, std::memory_order_acq_rel);
    enqueue(target, std::move(task));
}

bool TaskPool::try_pop_own(int id, Task& task) {
    Queue& q = *queues_[id];
    std::lock_guard<std::mutex> lk(q.mx);
    if (q.dq.empty()) {
        return false;
    }
    task = std::move(q.dq.back());
    q.dq.pop_back();
    return true;
}

bool TaskPool::try_steal(int id, Task& task) {
    for (const int victim : steal_order_[id]) {
        Queue& q = *queues_[victim];
        std::lock_guard<std::mutex> lk(q.mx);
        if (q.dq.empty()) {
            continue;
        }
        task = std::move(q.dq.front());
        q.dq.pop_front();
        steals_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }
    return false;
}

bool TaskPool::any_queued() const {
    for (const auto& q : queues_) {
        std::lock_guard<std::mutex> lk(q->mx);
        if (!q->dq.empty()) {
            return true;
        }
    }
    return false;
}

void TaskPool::finish_task() {
    if (in_flight_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
        std::lock_guard<std::mutex> lk(quiet_mx_);
        quiet_cv_.notify_all();
    }
}

void TaskPool::worker_loop(int id) {
    t_worker.pool = this;
    t_worker.id = id;

    int idle_rounds = 0;
    Task task;
    while (true) {
        bool ran = false;
        if (try_pop_own(id, task) || try_steal(id, task)) {
            try {
                task();
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mx_);
                if (!first_error_) {
                    first_error_ = std::current_exception();
                }
            }
            task = nullptr;
            finish_task();
            ran = true;
        }
        if (ran) {
            idle_rounds = 0;
            continue;
        }
        if (stop_.load(std::memory_order_relaxed)) {
            break;
        }
        if (++idle_rounds < 64) {
            std::this_thread::yield();
            continue;
        }
        // Deep idle: sleep until a spawn notifies. The queue re-check under
        // the sleep mutex closes the race with a concurrent enqueue.
        sleepers_.fetch_add(1, std::memory_order_relaxed);
        {
            std::unique_lock<std::mutex> lk(sleep_mx_);
            if (!stop_.load(std::memory_order_relaxed) && !any_queued()) {
                sleep_cv_.wait_for(lk, std::chrono::microseconds(500));
            }
        }
        sleepers_.fetch_sub(1, std::memory_order_relaxed);
    }
    t_worker.pool = nullptr;
    t_worker.id = -1;
}

void TaskPool::run_until_quiescent() {
    {
        std::unique_lock<std::mutex> lk(quiet_mx_);
        quiet_cv_.wait(lk, [this] { return in_flight_.load(std::memory_order_acquire) == 0; });
    }
    std::exception_ptr err;
    {
        std::lock_guard<std::mutex> lk(error_mx_);
        err = first_error_;
        first_error_ = nullptr;
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

} // namespace hexsweep
