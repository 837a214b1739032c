#include "orthoplanar/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "orthoplanar/quadrature.hpp"
#include "orthoplanar/rng.hpp"

namespace orthoplanar {

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void for_each_chunk(std::size_t n, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    const std::size_t chunks = chunk_count(n);
    if (chunks == 0) return;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t chunk = next.fetch_add(1);
            if (chunk >= chunks) return;
            const std::size_t begin = chunk * kChunkSize;
            const std::size_t end = std::min(n, begin + kChunkSize);
            try {
                body(chunk, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> accumulate(const ModelParams& params, double t, const McRun& run,
                               std::size_t k, const PathFunctional& fn) {
    const std::size_t chunks = chunk_count(run.n);
    std::vector<std::vector<CompensatedSum>> partial(chunks);

    for_each_chunk(run.n, run.threads, [&](std::size_t chunk, std::size_t begin,
                                           std::size_t end) {
        std::vector<CompensatedSum> sums(k);
        std::vector<double> values(k);
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng = RandomStream::for_replication(run.seed, i);
            const SimOutcome outcome = simulate(params, t, rng);
            std::fill(values.begin(), values.end(), 0.0);
            fn(outcome, values);
            for (std::size_t j = 0; j < k; ++j) sums[j].add(values[j]);
        }
        partial[chunk] = std::move(sums);
    });

    std::vector<CompensatedSum> total(k);
    for (const auto& sums : partial) {
        for (std::size_t j = 0; j < k; ++j) total[j].add(sums[j]);
    }
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j] = total[j].value();
    return out;
}

McEstimate moment_estimate(double sum, double sum_sq, std::size_t n) {
    McEstimate est;
    est.n = n;
    if (n == 0) return est;
    const double dn = static_cast<double>(n);
    est.mean = sum / dn;
    if (n > 1) {
        const double var = std::max(0.0, (sum_sq - dn * est.mean * est.mean) / (dn - 1.0));
        est.std_error = std::sqrt(var / dn);
    }
    return est;
}

namespace {

McEstimate bernoulli_estimate(double hits, std::size_t n) {
    McEstimate est;
    est.n = n;
    if (n == 0) return est;
    const double dn = static_cast<double>(n);
    est.mean = hits / dn;
    est.std_error = std::sqrt(std::max(0.0, est.mean * (1.0 - est.mean)) / dn);
    return est;
}

}  // namespace

std::vector<McEstimate> estimate_events(const ModelParams& params, double t, const McRun& run,
                                        const std::vector<EventPredicate>& events) {
    const std::size_t k = events.size();
    const auto sums = accumulate(params, t, run, k,
                                 [&](const SimOutcome& outcome, std::span<double> out) {
                                     for (std::size_t j = 0; j < k; ++j) {
                                         out[j] = events[j](outcome) ? 1.0 : 0.0;
                                     }
                                 });
    std::vector<McEstimate> out;
    out.reserve(k);
    for (double hits : sums) out.push_back(bernoulli_estimate(hits, run.n));
    return out;
}

McEstimate estimate_event(const ModelParams& params, double t, std::size_t n,
                          std::uint64_t seed, const EventPredicate& event, unsigned threads) {
    return estimate_events(params, t, McRun{n, seed, threads}, {event}).front();
}

std::pair<McEstimate, McEstimate> empirical_charfn(const ModelParams& params, double t,
                                                   std::size_t n, std::uint64_t seed,
                                                   const PhaseFunctional& fn,
                                                   unsigned threads) {
    const auto sums = accumulate(params, t, McRun{n, seed, threads}, 4,
                                 [&](const SimOutcome& outcome, std::span<double> out) {
                                     const PhaseSample sample = fn(outcome);
                                     if (!sample.indicator) return;
                                     const double re = std::cos(sample.phase);
                                     const double im = std::sin(sample.phase);
                                     out[0] = re;
                                     out[1] = re * re;
                                     out[2] = im;
                                     out[3] = im * im;
                                 });
    return {moment_estimate(sums[0], sums[1], n), moment_estimate(sums[2], sums[3], n)};
}

std::uint64_t Histogram::inside() const noexcept {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

std::optional<std::size_t> Histogram::bin_of(double x) const noexcept {
    if (!(x >= lo && x < hi)) return std::nullopt;
    const auto i = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins()));
    return std::min(i, bins() - 1);
}

namespace {

Histogram empty_histogram(double lo, double hi, std::size_t bins) {
    if (bins < 10) throw std::invalid_argument("histogram needs at least 10 bins");
    if (!(hi > lo)) throw std::invalid_argument("histogram interval is empty");
    Histogram hist;
    hist.lo = lo;
    hist.hi = hi;
    hist.counts.assign(bins, 0);
    return hist;
}

}  // namespace

Histogram density_histogram(std::span<const double> samples, double lo, double hi,
                            std::size_t bins, std::optional<std::size_t> n) {
    Histogram hist = empty_histogram(lo, hi, bins);
    hist.n = n.value_or(samples.size());
    for (double x : samples) {
        if (auto b = hist.bin_of(x)) ++hist.counts[*b];
    }
    return hist;
}

Histogram simulate_histogram(const ModelParams& params, double t, const McRun& run,
                             const SampleFunctional& fn, double lo, double hi,
                             std::size_t bins) {
    Histogram hist = empty_histogram(lo, hi, bins);
    hist.n = run.n;
    std::vector<std::vector<std::uint64_t>> partial(chunk_count(run.n));

    for_each_chunk(run.n, run.threads, [&](std::size_t chunk, std::size_t begin,
                                           std::size_t end) {
        std::vector<std::uint64_t> counts(bins, 0);
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng = RandomStream::for_replication(run.seed, i);
            const auto value = fn(simulate(params, t, rng));
            if (!value) continue;
            if (auto b = hist.bin_of(*value)) ++counts[*b];
        }
        partial[chunk] = std::move(counts);
    });

    for (const auto& counts : partial) {
        for (std::size_t b = 0; b < bins; ++b) hist.counts[b] += counts[b];
    }
    return hist;
}

BinComparison compare_histogram(const Histogram& hist,
                                const std::function<double(double)>& density) {
    BinComparison cmp;
    const double dn = static_cast<double>(hist.n);
    for (std::size_t b = 0; b < hist.bins(); ++b) {
        const double mass = integrate_open(density, hist.edge(b), hist.edge(b + 1), 1e-10);
        const double sd = std::sqrt(dn * mass * std::max(0.0, 1.0 - mass));
        const double diff = static_cast<double>(hist.counts[b]) - dn * mass;
        const double z = sd > 0.0 ? diff / sd : (diff == 0.0 ? 0.0 : INFINITY);
        cmp.expected_mass.push_back(mass);
        cmp.z.push_back(z);
        cmp.max_abs_z = std::max(cmp.max_abs_z, std::abs(z));
    }
    return cmp;
}

}  // namespace orthoplanar
