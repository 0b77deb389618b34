#include "hexsweep/sweep_bsp.hpp"

#include <atomic>
#include <barrier>

#include "hexsweep/errors.hpp"

namespace hexsweep {

BspTeam::BspTeam(int workers) {
    if (workers < 1) {
        throw ConfigError("BspTeam: worker count must be >= 1");
    }
    threads_.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads_.emplace_back([this, w] { loop(w); });
    }
}

BspTeam::~BspTeam() {
    {
        std::lock_guard<std::mutex> lk(mx_);
        stop_ = true;
        cv_.notify_all();
    }
    for (auto& t : threads_) {
        t.join();
    }
}

void BspTeam::loop(int id) {
    std::uint64_t seen = 0;
    while (true) {
        const std::function<void(int)>* job = nullptr;
        {
            std::unique_lock<std::mutex> lk(mx_);
            cv_.wait(lk, [&] { return stop_ || epoch_ != seen; });
            if (stop_) {
                return;
            }
            seen = epoch_;
            job = job_;
        }
        try {
            (*job)(id);
        } catch (...) {
            std::lock_guard<std::mutex> lk(mx_);
            if (!err_) {
                err_ = std::current_exception();
            }
        }
        {
            std::lock_guard<std::mutex> lk(mx_);
            if (++done_ == workers()) {
                cv_.notify_all();
            }
        }
    }
}

void BspTeam::run(const std::function<void(int)>& job) {
    std::exception_ptr err;
    {
        std::unique_lock<std::mutex> lk(mx_);
        job_ = &job;
        done_ = 0;
        ++epoch_;
        cv_.notify_all();
        cv_.wait(lk, [&] { return done_ == workers(); });
        job_ = nullptr;
        err = err_;
        err_ = nullptr;
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

namespace {

struct PassState {
    std::atomic<bool> failed{false};
    std::mutex err_mx;
    std::exception_ptr first_error;

    void fail(std::exception_ptr e) {
        std::lock_guard<std::mutex> lk(err_mx);
        if (!first_error) {
            first_error = e;
        }
        failed.store(true);
    }
};

// One schedule pass under the barrier discipline. The busy-span buffers are
// double-buffered by bucket parity: worker 0 aggregates bucket t right
// after its barrier while the others are already filling parity t+1.
void run_pass(int octant, const SweepSchedule& sched, AccumMode mode, int angle_label,
              BspTeam& team, SweepContext& ctx, BspStats* stats, PassState& pass) {
    const int W = team.workers();
    const int G = ctx.state.shape.groups;
    const int buckets = sched.bucket_count();
    std::barrier<> bar(W);
    std::vector<double> busy(2 * static_cast<std::size_t>(W), 0.0);

    team.run([&](int w) {
        for (int t = 0; t < buckets; ++t) {
            if (pass.failed.load(std::memory_order_acquire)) {
                break; // consistent: checked at the same bucket boundary everywhere
            }
            const double bucket_start = steady_seconds();
            const auto bucket = sched.bucket(t);
            const std::int64_t items = static_cast<std::int64_t>(bucket.size()) * G;
            const std::int64_t lo = items * w / W;
            const std::int64_t hi = items * (w + 1) / W;
            for (std::int64_t m = lo; m < hi && !pass.failed.load(std::memory_order_relaxed);
                 ++m) {
                const SweepEntry entry = bucket[m / G];
                const int g = static_cast<int>(m % G);
                const int angle = entry.angle >= 0 ? entry.angle : angle_label;
                try {
                    if (ctx.hooks && ctx.hooks->before_item) {
                        ctx.hooks->before_item(entry.elem, angle);
                    }
                    const double t0 = steady_seconds();
                    const auto psi = ctx.solvers[w].solve(octant, angle, g, entry.elem);
                    if (ctx.grind && ctx.grind->enabled()) {
                        ctx.grind->add(w, steady_seconds() - t0);
                    }
                    accumulate_flux(ctx.state, ctx.quad, octant, angle, g, entry.elem, psi, mode);
                    if (ctx.hooks && ctx.hooks->after_item) {
                        ctx.hooks->after_item(entry.elem, angle);
                    }
                    if (ctx.hooks && ctx.hooks->trace) {
                        ctx.hooks->trace->record({entry.elem, angle, g, w, t0, steady_seconds()});
                    }
                } catch (...) {
                    pass.fail(std::current_exception());
                }
            }
            busy[static_cast<std::size_t>(t & 1) * W + w] = steady_seconds() - bucket_start;
            bar.arrive_and_wait();
            if (w == 0 && stats) {
                const double* spans = &busy[static_cast<std::size_t>(t & 1) * W];
                double max_span = 0.0, mean = 0.0;
                for (int k = 0; k < W; ++k) {
                    max_span = std::max(max_span, spans[k]);
                    mean += spans[k];
                }
                mean /= W;
                stats->idle.push_back({octant, angle_label, t, max_span - mean});
                stats->barriers += 1;
                stats->items += items;
            }
        }
    });
}

} // namespace

void sweep_octant_bsp(int octant, AngleScheme scheme,
                      std::span<const SweepSchedule> angle_schedules,
                      const SweepSchedule* merged, BspTeam& team, SweepContext& ctx,
                      BspStats* stats) {
    PassState pass;
    if (scheme == AngleScheme::Sequential) {
        for (std::size_t a = 0; a < angle_schedules.size(); ++a) {
            run_pass(octant, angle_schedules[a], AccumMode::Exclusive, static_cast<int>(a), team,
                     ctx, stats, pass);
            if (pass.failed.load()) {
                break;
            }
        }
    } else {
        if (merged == nullptr) {
            throw ConfigError("sweep_octant_bsp: simultaneous scheme needs a merged schedule");
        }
        run_pass(octant, *merged, AccumMode::Atomic, -1, team, ctx, stats, pass);
    }
    if (pass.first_error) {
        std::rethrow_exception(pass.first_error);
    }
}

} // namespace hexsweep
