#include "palmlab/replicate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace palmlab {

void RatioAccumulator::open_batch(std::uint64_t id)
{
    Batch b;
    b.id = id;
    b.x.assign(components_, 0.0);
    b.y.assign(components_, 0.0);
    b.w.assign(components_, 0.0);
    b.w2.assign(components_, 0.0);
    b.rejected.assign(components_, 0);
    batches_.push_back(std::move(b));
}

void RatioAccumulator::commit(RepSink& sink)
{
    Batch& b = batches_.back();
    ++b.reps;
    const double w = sink.weight_;
    for (std::size_t j = 0; j < components_; ++j) {
        if (sink.seen_[j] == 2) {
            ++b.rejected[j];
            continue;
        }
        b.x[j] += w * sink.x_[j];
        b.y[j] += w * sink.y_[j];
        b.w[j] += w;
        b.w2[j] += w * w;
    }
    sink.clear();
}

void RatioAccumulator::merge(const RatioAccumulator& other)
{
    if (components_ == 0)
        components_ = other.components_;
    batches_.insert(batches_.end(), other.batches_.begin(), other.batches_.end());
}

std::vector<Estimate> RatioAccumulator::finalize(bool exact) const
{
    std::vector<const Batch*> order;
    order.reserve(batches_.size());
    for (const auto& b : batches_)
        order.push_back(&b);
    std::sort(order.begin(), order.end(), [](const Batch* l, const Batch* r) { return l->id < r->id; });

    std::vector<Estimate> out(components_);
    const double nb = static_cast<double>(order.size());
    for (std::size_t j = 0; j < components_; ++j) {
        double X = 0.0, Y = 0.0, W = 0.0, W2 = 0.0;
        std::size_t reps = 0, rejected = 0;
        for (const Batch* b : order) {
            X += b->x[j];
            Y += b->y[j];
            W += b->w[j];
            W2 += b->w2[j];
            reps += b->reps;
            rejected += b->rejected[j];
        }
        Estimate& e = out[j];
        e.reps = reps;
        e.rejected = rejected;
        e.ess = W2 > 0.0 ? W * W / W2 : 0.0;
        e.denominator = Y;
        if (!(Y != 0.0)) {
            e.value = std::numeric_limits<double>::quiet_NaN();
            e.std_error = std::numeric_limits<double>::infinity();
            continue;
        }
        e.value = X / Y;
        if (exact) {
            e.std_error = 0.0;
            continue;
        }
        if (order.size() < 2) {
            e.std_error = std::numeric_limits<double>::infinity();
            continue;
        }
        double ss = 0.0;
        for (const Batch* b : order) {
            const double r = b->x[j] - e.value * b->y[j];
            ss += r * r;
        }
        const double ybar = Y / nb;
        e.std_error = std::sqrt(ss / (nb * (nb - 1.0))) / std::abs(ybar);
    }
    return out;
}

unsigned resolve_threads(unsigned requested) noexcept
{
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(count);
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

RatioAccumulator replicate(const RunOptions& options, std::size_t components,
                           const std::function<void(Rng&, std::size_t, RepSink&)>& fn)
{
    const std::size_t nbatches = (options.reps + batch_size - 1) / batch_size;
    std::vector<RatioAccumulator> partial(nbatches, RatioAccumulator(components));
    parallel_for(nbatches, options.threads, [&](std::size_t b) {
        RatioAccumulator& acc = partial[b];
        acc.open_batch(b);
        RepSink sink(components);
        const std::size_t first = b * batch_size;
        const std::size_t last = std::min(options.reps, first + batch_size);
        for (std::size_t rep = first; rep < last; ++rep) {
            Rng rng(derive_seed(options.seed, options.stream, rep));
            fn(rng, rep, sink);
            acc.commit(sink);
        }
    });
    RatioAccumulator total(components);
    for (const auto& p : partial)
        total.merge(p);
    return total;
}

}  // namespace palmlab
