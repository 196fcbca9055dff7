#pragma once

// Compensated, order-fixed summation. Every Cesaro and Wiener average in the
// library funnels through chunked_sum so results are bit-identical for any
// worker count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace wienerlab {

/// Neumaier's variant of Kahan summation.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexKahanSum {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_;
    KahanSum im_;
};

inline constexpr std::int64_t kSumChunk = 1 << 14;

/// Sum of term(n) for n in [first, last], split into fixed chunks of
/// kSumChunk indices. Chunks are summed independently (possibly on worker
/// threads) and merged left to right, so the result does not depend on
/// `workers`.
template <typename T, typename Term>
T chunked_sum(std::int64_t first, std::int64_t last, Term&& term, unsigned workers = 0) {
    using Acc = std::conditional_t<std::is_same_v<T, double>, KahanSum, ComplexKahanSum>;
    if (last < first) return T{};
    const std::int64_t count = last - first + 1;
    const std::int64_t chunks = (count + kSumChunk - 1) / kSumChunk;
    std::vector<T> partial(static_cast<std::size_t>(chunks));

    auto run_chunk = [&](std::int64_t c) {
        Acc acc;
        const std::int64_t lo = first + c * kSumChunk;
        const std::int64_t hi = std::min(last, lo + kSumChunk - 1);
        for (std::int64_t n = lo; n <= hi; ++n) acc.add(term(n));
        partial[static_cast<std::size_t>(c)] = acc.value();
    };

    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, chunks));
    if (workers <= 1) {
        for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::int64_t c = w; c < chunks; c += workers) run_chunk(c);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    Acc total;
    for (const T& p : partial) total.add(p);
    return total.value();
}

}  // namespace wienerlab
