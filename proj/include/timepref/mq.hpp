#pragma once

// Membership-query learning of a one-parameter discount model by binary
// search for an indifference point.

#include <cstdint>
#include <functional>
#include <string>

#include "timepref/interval_set.hpp"
#include "timepref/models.hpp"

namespace timepref {

/// Hidden model answering "is x weakly preferred to y?".
class Oracle {
public:
    explicit Oracle(DiscountModel model) : model_(std::move(model)) {}
    int query(const ChoicePair& pair);
    std::uint64_t query_count() const { return count_; }

private:
    DiscountModel model_;
    std::uint64_t count_ = 0;
};

/// Queries compare rho at period t1 with b at period t2 (two-period plans).
/// The indifference point is b = rho * ratio(param); M bounds the ratio and
/// C is the inverse-Lipschitz constant of ratio on param_domain.
struct MqAdapter {
    std::string family;
    int t1 = 1;
    int t2 = 2;
    double M = 1.0;
    double C = 1.0;
    double ratio_lo = 0.0;   ///< infimum of the ratio over the domain
    std::function<double(double)> ratio;
    std::function<double(double)> ratio_inverse;
    Interval param_domain = Interval::open(0.0, 1.0);
};

/// t1 = 2, t2 = 1: ratio = delta, M = C = 1, domain (0, 1).
MqAdapter ed_adapter();
/// t1 = 1, t2 = 2: ratio = (1 + 2a) / (1 + a), M = (1 + 2A) / (1 + A),
/// C = (1 + A)^2, domain (0, A].
MqAdapter hd_adapter(double A = 4.0);

void validate_adapter(const MqAdapter& a);

/// Bisects b on [0, M rho] until the bracket is at most eta wide and returns
/// its midpoint. Label 1 (x weakly preferred) means b <= b_rho.
double indifference_search(Oracle& oracle, const MqAdapter& adapter, double rho, double eta);

struct MqResult {
    double param = 0.0;
    double b_h = 0.0;
    std::uint64_t queries = 0;
};

/// ceil(log2(M C / eps)) + 1.
std::uint64_t mq_query_budget(const MqAdapter& adapter, double eps);

/// eta = rho eps / C, then maps b_h / rho back through ratio_inverse. The
/// estimate is clamped into param_domain; an open endpoint is replaced by a
/// point eps / 2 inside it.
MqResult mq_learn(Oracle& oracle, const MqAdapter& adapter, double eps, double rho = 1.0);

}  // namespace timepref
