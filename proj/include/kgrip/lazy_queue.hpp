#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "kgrip/common.hpp"

namespace kgrip {

/// Gain rounded to a 40-bit mantissa so that gains equal up to rounding
/// noise tie and fall back to edge order.
inline double quantize_gain(double g) {
    if (g == 0.0 || !std::isfinite(g))
        return g;
    int exp = 0;
    const double mant = std::frexp(g, &exp);
    return std::ldexp(std::nearbyint(std::ldexp(mant, 40)), exp - 40);
}

/// True when (g1, e1) ranks ahead of (g2, e2): larger gain, then smaller edge.
inline bool ranks_before(double g1, Edge e1, double g2, Edge e2) {
    const double q1 = quantize_gain(g1);
    const double q2 = quantize_gain(g2);
    if (q1 != q2)
        return q1 > q2;
    return e1 < e2;
}

struct LazyQueueEntry {
    Edge edge;
    double gain = 0.0;
    int round_stamp = 0;
};

/// Max-queue of cached gains with lazy revalidation.
class LazyQueue {
public:
    void push(LazyQueueEntry entry) { heap_.push(entry); }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    /// Pops until the top carries the current round stamp; stale tops are
    /// re-evaluated with revalidate(edge) and pushed back. The returned
    /// entry is removed from the queue. Throws InvariantError when empty.
    template <class Revalidate>
    LazyQueueEntry next(Revalidate&& revalidate, int current_round) {
        while (!heap_.empty()) {
            LazyQueueEntry top = heap_.top();
            heap_.pop();
            if (top.round_stamp == current_round)
                return top;
            ++revalidations_;
            heap_.push({top.edge, revalidate(top.edge), current_round});
        }
        throw InvariantError("lazy queue exhausted");
    }

    long long revalidations() const { return revalidations_; }

private:
    struct Lower {
        bool operator()(const LazyQueueEntry& x, const LazyQueueEntry& y) const {
            return ranks_before(y.gain, y.edge, x.gain, x.edge);
        }
    };
    std::priority_queue<LazyQueueEntry, std::vector<LazyQueueEntry>, Lower> heap_;
    long long revalidations_ = 0;
};

} // namespace kgrip
