#pragma once

#include <cstddef>
#include <vector>

namespace maxcorr {

// Discrete distribution of portfolio loss. Levels are distinct and ascending,
// probabilities non-negative and summing to 1 within 1e-12.
class LossDistribution {
public:
    struct Point {
        double loss;
        double probability;
    };

    explicit LossDistribution(std::vector<Point> points);

    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    double mean() const;

    // Builds from unordered (loss, probability) pairs: merges equal levels,
    // drops zero-probability points, sorts ascending.
    static LossDistribution aggregate(const std::vector<Point>& raw);

private:
    std::vector<Point> points_;
};

} // namespace maxcorr
