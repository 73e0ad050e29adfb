#include "nsdwt/worker_pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsdwt {

WorkerPool::WorkerPool(int size) {
    if (size < 1) {
        throw std::invalid_argument("worker pool needs at least one thread");
    }
    threads_.reserve(size - 1);
    for (int i = 1; i < size; ++i) {
        threads_.emplace_back([this, i] { loop(i); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) {
        t.join();
    }
}

void WorkerPool::run(int workers, const std::function<void(int)>& job) {
    workers = std::clamp(workers, 1, size());
    if (workers == 1) {
        job(0);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        job_ = &job;
        active_ = workers;
        pending_ = workers - 1;
        ++generation_;
    }
    start_cv_.notify_all();
    job(0);
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
}

void WorkerPool::loop(int index) {
    std::uint64_t seen = 0;
    while (true) {
        const std::function<void(int)>* job = nullptr;
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) {
                return;
            }
            seen = generation_;
            if (index >= active_) {
                continue;
            }
            job = job_;
        }
        (*job)(index);
        {
            std::lock_guard lock(mutex_);
            --pending_;
        }
        done_cv_.notify_one();
    }
}

}  // namespace nsdwt
