#pragma once

#include "palmlab/models.hpp"
#include "palmlab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace palmlab {

/// Replications per variance unit. Occurrence counts inside one
/// replication are dependent, so standard errors come from batch totals.
inline constexpr std::size_t batch_size = 64;

struct RunOptions {
    std::size_t reps = 100000;
    std::uint64_t seed = 20100101;
    /// Seed stream; sides of one comparison must use different streams.
    std::uint64_t stream = 0;
    /// Worker threads; 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Eventuality horizon R in mean gaps of the model.
    double horizon_gaps = 50.0;

    RunOptions with_stream(std::uint64_t s) const
    {
        RunOptions o = *this;
        o.stream = s;
        return o;
    }
    RunOptions with_reps(std::size_t n) const
    {
        RunOptions o = *this;
        o.reps = n;
        return o;
    }
};

/// A Monte Carlo result.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;
    std::size_t rejected = 0;
    /// (Σw)² / Σw² over accepted replications.
    double ess = 0.0;
    /// Σ of the (weighted) denominator; zero means nothing was observed.
    double denominator = 0.0;
};

/// Receives one replication's contributions. Each component j either gets
/// `accept(j, x, y)` (possibly several times) or is counted as rejected.
class RepSink {
public:
    explicit RepSink(std::size_t components) : x_(components), y_(components), seen_(components) {}

    void set_weight(double w) noexcept { weight_ = w; }
    double weight() const noexcept { return weight_; }

    void accept(std::size_t j, double x, double y) noexcept
    {
        x_[j] += x;
        y_[j] += y;
        seen_[j] = 1;
    }

    /// Marks component j rejected even if contributions were made.
    void reject(std::size_t j) noexcept { seen_[j] = 2; }
    void reject_all() noexcept { std::fill(seen_.begin(), seen_.end(), 2); }

private:
    friend class RatioAccumulator;
    void clear() noexcept
    {
        std::fill(x_.begin(), x_.end(), 0.0);
        std::fill(y_.begin(), y_.end(), 0.0);
        std::fill(seen_.begin(), seen_.end(), 0);
        weight_ = 1.0;
    }

    std::vector<double> x_, y_;
    std::vector<unsigned char> seen_;  // 0 untouched, 1 accepted, 2 rejected
    double weight_ = 1.0;
};

/// Mergeable accumulator of per-batch totals for a family of ratio
/// estimators Σ w x / Σ w y sharing one sample.
///
/// Components a replication never touches count as accepted with zero
/// contribution. Partial accumulators from disjoint batch ranges merge in
/// any order; `finalize` sorts by batch id, so the result is independent of
/// merge order and thread count.
class RatioAccumulator {
public:
    explicit RatioAccumulator(std::size_t components = 0) : components_(components) {}

    std::size_t components() const noexcept { return components_; }

    /// Starts batch `id`; subsequent replications add to it.
    void open_batch(std::uint64_t id);

    /// Folds one replication from `sink` into the open batch and clears it.
    void commit(RepSink& sink);

    void merge(const RatioAccumulator& other);

    /// Delta-method estimates over batch totals. `exact` forces zero
    /// standard errors (deterministic models).
    std::vector<Estimate> finalize(bool exact = false) const;

private:
    struct Batch {
        std::uint64_t id = 0;
        std::size_t reps = 0;
        std::vector<double> x, y, w, w2;
        std::vector<std::size_t> rejected;
    };

    std::size_t components_;
    std::vector<Batch> batches_;
};

/// Runs `fn(rng, rep, sink)` for rep = 0..reps-1 with rng seeded by
/// derive_seed(seed, stream, rep), batches of `batch_size`, spread over
/// worker threads.
RatioAccumulator replicate(const RunOptions& options, std::size_t components,
                           const std::function<void(Rng&, std::size_t, RepSink&)>& fn);

/// Runs `job(i)` for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace palmlab
