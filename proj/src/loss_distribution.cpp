#include "maxcorr/loss_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "maxcorr/errors.hpp"

namespace maxcorr {

LossDistribution::LossDistribution(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("loss distribution must have at least one point");
    double sum = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& pt = points_[i];
        if (!(pt.probability >= 0.0)) {
            throw ValidationError("loss distribution probability must be >= 0");
        }
        if (i > 0 && !(points_[i - 1].loss < pt.loss)) {
            throw ValidationError("loss levels must be distinct and ascending");
        }
        sum += pt.probability;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "loss distribution probabilities sum to " << sum << ", expected 1";
        throw ValidationError(msg.str());
    }
}

double LossDistribution::mean() const {
    double m = 0.0;
    for (const auto& pt : points_) m += pt.loss * pt.probability;
    return m;
}

LossDistribution LossDistribution::aggregate(const std::vector<Point>& raw) {
    std::map<double, double> merged;
    for (const auto& pt : raw) merged[pt.loss] += pt.probability;
    std::vector<Point> pts;
    pts.reserve(merged.size());
    for (const auto& [loss, prob] : merged) {
        if (prob != 0.0) pts.push_back({loss, prob});
    }
    return LossDistribution(std::move(pts));
}

} // namespace maxcorr
