#include "timepref/mq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace timepref {

int Oracle::query(const ChoicePair& pair) {
    ++count_;
    return prefers(model_, pair);
}

MqAdapter ed_adapter() {
    MqAdapter a;
    a.family = "ed";
    a.t1 = 2;
    a.t2 = 1;
    a.M = 1.0;
    a.C = 1.0;
    a.ratio_lo = 0.0;
    a.ratio = [](double d) { return d; };
    a.ratio_inverse = [](double r) { return r; };
    a.param_domain = Interval::open(0.0, 1.0);
    return a;
}

MqAdapter hd_adapter(double A) {
    if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("hd_adapter: A must be positive");
    MqAdapter a;
    a.family = "hd";
    a.t1 = 1;
    a.t2 = 2;
    a.M = (1.0 + 2.0 * A) / (1.0 + A);
    a.C = (1.0 + A) * (1.0 + A);
    a.ratio_lo = 1.0;
    a.ratio = [](double al) { return (1.0 + 2.0 * al) / (1.0 + al); };
    a.ratio_inverse = [](double r) { return (r - 1.0) / (2.0 - r); };
    a.param_domain = Interval{0.0, A, false, true};
    return a;
}

void validate_adapter(const MqAdapter& a) {
    if (!(a.M > 0.0) || !std::isfinite(a.M)) throw std::invalid_argument("adapter M must be finite and positive");
    if (!(a.C > 0.0) || !std::isfinite(a.C)) throw std::invalid_argument("adapter C must be finite and positive");
    if (a.t1 < 1 || a.t1 > 2 || a.t2 < 1 || a.t2 > 2 || a.t1 == a.t2)
        throw std::invalid_argument("adapter periods must be {1, 2} in some order");
    if (!a.ratio_inverse) throw std::invalid_argument("adapter has no ratio inverse");
}

double indifference_search(Oracle& oracle, const MqAdapter& adapter, double rho, double eta) {
    validate_adapter(adapter);
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    double lo = 0.0, hi = adapter.M * rho;
    ChoicePair q;
    q.x.assign(2, 0.0);
    q.y.assign(2, 0.0);
    q.x[static_cast<std::size_t>(adapter.t1 - 1)] = rho;
    while (hi - lo > eta) {
        const double mid = 0.5 * (lo + hi);
        q.y[static_cast<std::size_t>(adapter.t2 - 1)] = mid;
        if (oracle.query(q) == 1) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::uint64_t mq_query_budget(const MqAdapter& adapter, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double bits = std::ceil(std::log2(adapter.M * adapter.C / eps));
    return static_cast<std::uint64_t>(std::max(0.0, bits)) + 1;
}

MqResult mq_learn(Oracle& oracle, const MqAdapter& adapter, double eps, double rho) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const std::uint64_t before = oracle.query_count();
    MqResult res;
    res.b_h = indifference_search(oracle, adapter, rho, rho * eps / adapter.C);
    res.queries = oracle.query_count() - before;
    const double r = std::clamp(res.b_h / rho, adapter.ratio_lo, adapter.M);
    double p = adapter.ratio_inverse(r);
    const auto& d = adapter.param_domain;
    const double nudge = 0.5 * std::min(eps, d.length());
    if (p < d.lo || (p == d.lo && !d.lo_closed)) p = d.lo_closed ? d.lo : d.lo + nudge;
    if (p > d.hi || (p == d.hi && !d.hi_closed)) p = d.hi_closed ? d.hi : d.hi - nudge;
    res.param = p;
    return res;
}

}  // namespace timepref
