#include "satkd/util.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace satkd::util {

std::string sig9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("log_spaced: count must be >= 1");
    if (!(lo > 0.0) || !(hi >= lo))
        throw std::invalid_argument("log_spaced: need 0 < lo <= hi");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double llo = std::log10(lo);
    const double lhi = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out.push_back(std::pow(10.0, llo + f * (lhi - llo)));
    }
    out.front() = lo;  // pin endpoints against pow/log round-trip error
    out.back() = hi;
    return out;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (workers == 0) workers = 1;
    if (workers > n) workers = static_cast<unsigned>(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace satkd::util
