#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "hexsweep/errors.hpp"
#include "hexsweep/task_pool.hpp"

using namespace hexsweep;
using namespace std::chrono_literals;

TEST_CASE("quiescence with zero tasks returns immediately") {
    TaskPool pool(2);
    pool.run_until_quiescent();
    CHECK(true);
}

TEST_CASE("one worker runs queued tasks in LIFO order") {
    TaskPool pool(1);
    std::atomic<bool> gate{false};
    std::vector<int> order;
    std::mutex mx;

    pool.spawn([&] {
        while (!gate.load()) {
            std::this_thread::yield();
        }
    });
    for (int i = 0; i < 4; ++i) {
        pool.spawn([&, i] {
            std::lock_guard<std::mutex> lk(mx);
            order.push_back(i);
        });
    }
    gate.store(true);
    pool.run_until_quiescent();
    CHECK(order == std::vector<int>{3, 2, 1, 0});
}

TEST_CASE("10000 no-op tasks execute exactly 10000 times") {
    TaskPool pool(8);
    std::atomic<long> count{0};
    for (int i = 0; i < 10000; ++i) {
        pool.spawn([&] { count.fetch_add(1, std::memory_order_relaxed); });
    }
    pool.run_until_quiescent();
    CHECK(count.load() == 10000);
}

TEST_CASE("a chain of 100 tasks completes before quiescence returns") {
    TaskPool pool(4);
    std::atomic<int> count{0};
    std::function<void(int)> step = [&](int remaining) {
        count.fetch_add(1);
        if (remaining > 1) {
            pool.spawn([&, remaining] { step(remaining - 1); });
        }
    };
    pool.spawn([&] { step(100); });
    pool.run_until_quiescent();
    CHECK(count.load() == 100);
}

TEST_CASE("fan-out keeps every worker busy (statistical)") {
    int successes = 0;
    for (int run = 0; run < 10; ++run) {
        TaskPool pool(4);
        std::array<std::atomic<int>, 4> per_worker{};
        for (int i = 0; i < 1000; ++i) {
            pool.spawn([&] {
                std::this_thread::sleep_for(1ms);
                per_worker[pool.current_worker()].fetch_add(1);
            });
        }
        pool.run_until_quiescent();
        bool all = true;
        for (const auto& c : per_worker) {
            all = all && c.load() >= 1;
        }
        successes += all;
    }
    CHECK(successes >= 9);
}

TEST_CASE("thieves take the victim's oldest task") {
    TaskPool pool(2);
    std::atomic<bool> gate{false};
    std::vector<int> stolen_order;
    std::mutex mx;

    // Park worker 0 so its queue backs up, then have worker 1 steal.
    std::atomic<int> done{0};
    pool.spawn([&] {
        while (!gate.load()) {
            std::this_thread::yield();
        }
    }, 0);
    std::this_thread::sleep_for(5ms); // let worker 0 pick up the blocker
    for (int i = 0; i < 3; ++i) {
        pool.spawn([&, i] {
            std::lock_guard<std::mutex> lk(mx);
            stolen_order.push_back(i);
            done.fetch_add(1);
        }, 0);
    }
    while (done.load() < 3) { // worker 1 drains by stealing FIFO
        std::this_thread::yield();
    }
    gate.store(true);
    pool.run_until_quiescent();
    REQUIRE(stolen_order.size() == 3);
    CHECK(stolen_order == std::vector<int>{0, 1, 2});
    CHECK(pool.steal_count() >= 3);
}

TEST_CASE("affinity hint places tasks on the hinted worker") {
    TaskPool pool(2);
    std::atomic<bool> gate{false};
    std::atomic<int> wrong{0};
    // Keep worker 0 busy so it cannot steal the hinted tasks.
    pool.spawn([&] {
        while (!gate.load()) {
            std::this_thread::yield();
        }
    }, 0);
    std::this_thread::sleep_for(5ms);
    std::atomic<int> done{0};
    for (int i = 0; i < 64; ++i) {
        pool.spawn([&] {
            if (pool.current_worker() != 1) {
                wrong.fetch_add(1);
            }
            done.fetch_add(1);
        }, 1);
    }
    while (done.load() < 64) {
        std::this_thread::yield();
    }
    gate.store(true);
    pool.run_until_quiescent();
    CHECK(wrong.load() == 0);
}

TEST_CASE("exactly-once execution under random steal interleavings") {
    std::mt19937_64 rng(2024);
    for (int run = 0; run < 20; ++run) {
        TaskPool pool(4);
        constexpr int kTasks = 400;
        std::array<std::atomic<int>, kTasks> hits{};
        std::uniform_int_distribution<int> jitter(0, 40);
        for (int i = 0; i < kTasks; ++i) {
            const int us = jitter(rng);
            pool.spawn([&, i, us] {
                if (us > 30) {
                    std::this_thread::sleep_for(std::chrono::microseconds(us));
                }
                hits[i].fetch_add(1);
            }, i % 4);
        }
        pool.run_until_quiescent();
        for (int i = 0; i < kTasks; ++i) {
            CHECK(hits[i].load() == 1);
        }
    }
}

TEST_CASE("task exceptions surface at quiescence") {
    TaskPool pool(2);
    pool.spawn([] { throw Error("boom"); });
    CHECK_THROWS_AS(pool.run_until_quiescent(), Error);
    // The pool stays usable afterwards.
    std::atomic<int> ran{0};
    pool.spawn([&] { ran.fetch_add(1); });
    pool.run_until_quiescent();
    CHECK(ran.load() == 1);
}

TEST_CASE("custom steal order is honored") {
    // Worker 2 must steal from worker 0 first under the custom order.
    std::vector<std::vector<int>> order = {{1, 2}, {2, 0}, {0, 1}};
    TaskPool pool(3, order);
    CHECK(pool.workers() == 3);
    std::atomic<long> count{0};
    for (int i = 0; i < 100; ++i) {
        pool.spawn([&] { count.fetch_add(1); }, 0);
    }
    pool.run_until_quiescent();
    CHECK(count.load() == 100);
}

TEST_CASE("invalid worker counts are rejected") {
    CHECK_THROWS_AS(TaskPool(0), ConfigError);
}
