#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nsdwt {

/// Fixed set of worker threads. run() hands the same job to `workers`
/// participants (the caller is participant 0) and returns once all of them
/// have finished.
class WorkerPool {
public:
    explicit WorkerPool(int size);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    [[nodiscard]] int size() const { return static_cast<int>(threads_.size()) + 1; }

    /// Job must not throw. `workers` is clamped to [1, size()].
    void run(int workers, const std::function<void(int)>& job);

private:
    void loop(int index);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(int)>* job_ = nullptr;
    int active_ = 0;
    int pending_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

}  // namespace nsdwt
