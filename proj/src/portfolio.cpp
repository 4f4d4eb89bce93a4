#include "maxcorr/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxcorr/errors.hpp"

namespace maxcorr {

namespace {

void check_fraction(const std::string& label, const char* field, double v,
                    double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        std::ostringstream msg;
        msg << "obligor '" << label << "': " << field << " = " << v
            << " outside [" << lo << ", " << hi << "]";
        throw ValidationError(msg.str());
    }
}

} // namespace

Obligor::Obligor(std::string label_, double default_prob_, double recovery_,
                 double notional_)
    : label(std::move(label_)),
      default_prob(default_prob_),
      recovery(recovery_),
      lgd(1.0 - recovery_),
      notional(notional_) {
    check_fraction(label, "default_prob", default_prob, 0.0, 1.0);
    check_fraction(label, "recovery", recovery, 0.0, 1.0);
    if (!(notional >= 0.0)) {
        throw ValidationError("obligor '" + label + "': notional must be >= 0");
    }
}

Portfolio::Portfolio(std::vector<Obligor> names) : names_(std::move(names)) {
    if (names_.empty()) throw ValidationError("portfolio must contain at least one name");
    for (const auto& o : names_) {
        check_fraction(o.label, "default_prob", o.default_prob, 0.0, 1.0);
        check_fraction(o.label, "recovery", o.recovery, 0.0, 1.0);
        if (o.lgd != 1.0 - o.recovery) {
            throw ValidationError("obligor '" + o.label + "': lgd must equal 1 - recovery");
        }
        if (!(o.notional >= 0.0)) {
            throw ValidationError("obligor '" + o.label + "': notional must be >= 0");
        }
    }
    std::stable_sort(names_.begin(), names_.end(),
                     [](const Obligor& a, const Obligor& b) {
                         return a.default_prob < b.default_prob;
                     });
}

Eigen::VectorXd Portfolio::default_probs() const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(names_.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = names_[i].default_prob;
    return p;
}

Eigen::VectorXd Portfolio::loss_capacities() const {
    Eigen::VectorXd c(static_cast<Eigen::Index>(names_.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = names_[i].loss_capacity();
    return c;
}

double Portfolio::total_loss_capacity() const {
    double total = 0.0;
    for (const auto& o : names_) total += o.loss_capacity();
    return total;
}

double Portfolio::total_notional() const {
    double total = 0.0;
    for (const auto& o : names_) total += o.notional;
    return total;
}

double Portfolio::expected_loss() const {
    double total = 0.0;
    for (const auto& o : names_) total += o.loss_capacity() * o.default_prob;
    return total;
}

} // namespace maxcorr
