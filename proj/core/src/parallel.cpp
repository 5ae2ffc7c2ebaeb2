#include "kvnlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kvnlab {

namespace {

std::atomic<std::size_t> override_threads{0};

std::size_t env_threads() {
    const char* env = std::getenv("KVNLAB_THREADS");
    if (env == nullptr) {
        return 0;
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v <= 0) {
        return 0;
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

std::size_t thread_count() {
    if (std::size_t o = override_threads.load(); o > 0) {
        return o;
    }
    if (std::size_t e = env_threads(); e > 0) {
        return e;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t n) {
    override_threads.store(n);
}

void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn) {
    if (end <= begin) {
        return;
    }
    const std::size_t total = end - begin;
    const std::size_t workers = std::min(thread_count(), total);
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) {
            fn(i);
        }
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto chunk = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t i = lo; i < hi; ++i) {
                fn(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    const std::size_t step = (total + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t lo = begin + w * step;
        const std::size_t hi = std::min(end, lo + step);
        if (lo < hi) {
            pool.emplace_back(chunk, lo, hi);
        }
    }
    chunk(begin, std::min(end, begin + step));
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace kvnlab
