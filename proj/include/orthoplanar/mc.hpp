#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orthoplanar/core.hpp"
#include "orthoplanar/sim.hpp"

namespace orthoplanar {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    void add(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.carry_);
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Replications per work unit. Work units are merged in index order, so the
/// result never depends on the worker count.
inline constexpr std::size_t kChunkSize = 4096;

/// 0 means std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested) noexcept;

/// Calls body(chunk, begin, end) for every chunk of [0, n) on up to `threads`
/// workers. Exceptions from the body are rethrown on the calling thread.
void for_each_chunk(std::size_t n, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n) noexcept {
    return (n + kChunkSize - 1) / kChunkSize;
}

struct McRun {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Writes k values per path into `out`; returns their compensated sums over
/// all n paths. Path i is simulated from RandomStream::for_replication(seed, i).
using PathFunctional = std::function<void(const SimOutcome&, std::span<double>)>;
std::vector<double> accumulate(const ModelParams& params, double t, const McRun& run,
                               std::size_t k, const PathFunctional& fn);

using EventPredicate = std::function<bool(const SimOutcome&)>;

/// Bernoulli frequency with stderr sqrt(p(1-p)/n).
McEstimate estimate_event(const ModelParams& params, double t, std::size_t n,
                          std::uint64_t seed, const EventPredicate& event,
                          unsigned threads = 0);

/// Several events from one set of paths.
std::vector<McEstimate> estimate_events(const ModelParams& params, double t, const McRun& run,
                                        const std::vector<EventPredicate>& events);

/// Phase and indicator of a restricted characteristic function
/// E[exp(i phase) 1{indicator}].
struct PhaseSample {
    double phase = 0.0;
    bool indicator = true;
};
using PhaseFunctional = std::function<PhaseSample(const SimOutcome&)>;

/// Means of cos(phase) 1{.} and sin(phase) 1{.}, with sample stderr.
std::pair<McEstimate, McEstimate> empirical_charfn(const ModelParams& params, double t,
                                                   std::size_t n, std::uint64_t seed,
                                                   const PhaseFunctional& fn,
                                                   unsigned threads = 0);

/// Mean and sample stderr from sums of x and x^2.
McEstimate moment_estimate(double sum, double sum_sq, std::size_t n);

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::uint64_t> counts;
    /// Replications, including those outside [lo, hi) or outside the event.
    std::size_t n = 0;

    std::size_t bins() const noexcept { return counts.size(); }
    double edge(std::size_t i) const noexcept {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins());
    }
    std::uint64_t inside() const noexcept;
    /// Bin of x, or nullopt outside [lo, hi).
    std::optional<std::size_t> bin_of(double x) const noexcept;
};

/// Counts samples in `bins` equal bins on [lo, hi). `n` defaults to the
/// number of samples and may be larger when samples were restricted to an
/// event. Throws std::invalid_argument for bins < 10 or hi <= lo.
Histogram density_histogram(std::span<const double> samples, double lo, double hi,
                            std::size_t bins, std::optional<std::size_t> n = std::nullopt);

/// Histogram of a path functional, nullopt meaning "outside the event".
using SampleFunctional = std::function<std::optional<double>(const SimOutcome&)>;
Histogram simulate_histogram(const ModelParams& params, double t, const McRun& run,
                             const SampleFunctional& fn, double lo, double hi,
                             std::size_t bins);

struct BinComparison {
    std::vector<double> expected_mass;
    std::vector<double> z;
    double max_abs_z = 0.0;
};

/// Per-bin z = (count - n m) / sqrt(n m (1 - m)) with m the integral of the
/// density over the bin.
BinComparison compare_histogram(const Histogram& hist,
                                const std::function<double(double)>& density);

}  // namespace orthoplanar
