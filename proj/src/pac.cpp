#include "timepref/pac.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "timepref/parallel.hpp"

namespace timepref {

std::string family_name(Family f) {
    switch (f) {
        case Family::ED: return "ed";
        case Family::HD: return "hd";
        case Family::PW: return "pw";
        case Family::QHD: return "qhd";
        case Family::BPW: return "bpw";
        case Family::Table: return "table";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    std::string k = s;
    std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (k == "ed") return Family::ED;
    if (k == "hd") return Family::HD;
    if (k == "pw") return Family::PW;
    if (k == "qhd") return Family::QHD;
    if (k == "bpw") return Family::BPW;
    if (k == "table") return Family::Table;
    throw std::invalid_argument("unknown family '" + s + "' (expected ed|hd|pw|qhd|bpw|table)");
}

bool model_in_family(const DiscountModel& m, Family f) {
    switch (f) {
        case Family::ED: return std::holds_alternative<Exponential>(m);
        case Family::HD: return std::holds_alternative<Hyperbolic>(m);
        case Family::PW: return std::holds_alternative<PolyWeights>(m);
        case Family::QHD: return std::holds_alternative<QuasiHyperbolic>(m);
        case Family::BPW: return std::holds_alternative<BetaPolyWeights>(m);
        case Family::Table: return std::holds_alternative<TableDiscount>(m);
    }
    return false;
}

Interval family_domain(Family f, const FitOptions& opt) {
    switch (f) {
        case Family::ED:
        case Family::QHD: return Interval::open(0.0, 1.0);
        case Family::HD:
            if (!(opt.alpha_max > 0.0)) throw std::invalid_argument("alpha_max must be positive");
            return Interval{0.0, opt.alpha_max, false, true};
        case Family::PW:
        case Family::BPW: return opt.pw_domain;
        case Family::Table: break;
    }
    throw std::invalid_argument("table family has no scalar parameter domain");
}

std::vector<Polynomial> family_basis(Family f, int T, const FitOptions& opt) {
    switch (f) {
        case Family::ED:
        case Family::QHD: return monomial_basis<double>(T);
        case Family::HD: return hd_cleared_polynomials<double>(T);
        case Family::PW:
        case Family::BPW:
            if (opt.basis.size() != static_cast<std::size_t>(T))
                throw ArityError("polynomial-weight basis size differs from T");
            return opt.basis;
        case Family::Table: break;
    }
    throw std::invalid_argument("table family has no polynomial basis");
}

double training_error(const DiscountModel& m, const LabeledDataset& ds) {
    if (ds.empty()) return 0.0;
    const auto w = weights<double>(m, ds.T);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (prefers_weights(w, ds.pairs[i]) != ds.labels[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(ds.size());
}

namespace {

DiscountModel single_param_model(Family f, double p, const FitOptions& opt) {
    switch (f) {
        case Family::ED: return Exponential{p};
        case Family::HD: return Hyperbolic{p};
        case Family::PW: return PolyWeights{opt.basis, p};
        default: break;
    }
    throw std::invalid_argument("fit_single_param supports ed, hd and pw only");
}

double pick_point(const IntervalSet& region) {
    const auto w = region.widest();
    return w->mid();
}

}  // namespace

DiscountModel default_hypothesis(Family f, int T, const FitOptions& opt) {
    switch (f) {
        case Family::ED:
        case Family::HD:
        case Family::PW: return single_param_model(f, family_domain(f, opt).mid(), opt);
        case Family::QHD: return QuasiHyperbolic{0.5, 0.5};
        case Family::BPW: return BetaPolyWeights{opt.basis, 0.5, opt.pw_domain.mid()};
        case Family::Table: {
            TableDiscount d;
            for (int t = 1; t <= T; ++t) d.D.push_back(std::pow(0.5, t));
            return d;
        }
    }
    throw std::invalid_argument("unknown family");
}

FitReport fit_single_param(Family f, const LabeledDataset& ds, const FitOptions& opt) {
    if (f != Family::ED && f != Family::HD && f != Family::PW)
        throw std::invalid_argument("fit_single_param supports ed, hd and pw only");
    const Interval domain = family_domain(f, opt);
    FitReport rep;
    if (ds.empty()) {
        rep.consistent_region = IntervalSet::of(domain);
        rep.hypothesis = single_param_model(f, domain.mid(), opt);
        rep.cells_examined = 1;
        return rep;
    }
    const auto Q = family_basis(f, ds.T, opt);
    auto res = consistent_param_report(Q, ds, domain, opt.tol);
    if (res.region.empty()) throw NoConsistentHypothesis("no " + family_name(f) + " parameter is consistent with the data");
    rep.consistent_region = std::move(res.region);
    rep.cells_examined = res.cells;
    rep.hypothesis = single_param_model(f, pick_point(rep.consistent_region), opt);
    rep.training_error = training_error(rep.hypothesis, ds);
    return rep;
}

namespace {

double derivative_bound(const Polynomial& p, double m) {
    double s = 0.0, pw = 1.0;
    const auto& c = p.coeffs();
    for (std::size_t k = 1; k < c.size(); ++k) {
        s += static_cast<double>(k) * std::abs(c[k]) * pw;
        pw *= m;
    }
    return s;
}

}  // namespace

IntervalSet sign_set_within(const Polynomial& P, bool strict, const IntervalSet& F, double tol) {
    auto ok = [strict](double v) { return strict ? v > 0.0 : v >= 0.0; };
    std::vector<Interval> parts;
    for (const auto& iv : F.intervals()) {
        if (iv.is_point()) {
            if (ok(P(iv.lo))) parts.push_back(iv);
            continue;
        }
        const double mid = iv.mid();
        const double pm = P(mid);
        const double reach = 0.5 * iv.length() * derivative_bound(P, std::max(std::abs(iv.lo), std::abs(iv.hi)));
        if (P.degree() <= 0 || std::abs(pm) > reach * (1.0 + 1e-9)) {
            // Constant sign on the closed interval.
            if (ok(pm)) parts.push_back(iv);
            continue;
        }
        const auto roots = isolate_roots_in(P, iv.lo, iv.hi, tol / 1000.0);
        std::vector<double> cuts{iv.lo};
        cuts.insert(cuts.end(), roots.begin(), roots.end());
        cuts.push_back(iv.hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (ok(P(0.5 * (cuts[i] + cuts[i + 1])))) parts.push_back(Interval::open(cuts[i], cuts[i + 1]));
        if (!strict)
            for (double r : roots) parts.push_back(Interval::point(r));
        if (iv.lo_closed && ok(P(iv.lo))) parts.push_back(Interval::point(iv.lo));
        if (iv.hi_closed && ok(P(iv.hi))) parts.push_back(Interval::point(iv.hi));
    }
    return IntervalSet(std::move(parts));
}

namespace {

struct ShiftConstraint {
    Polynomial A;
    double B;
    int label;
};

enum class BoundKind { Lower, Upper };

struct ShiftBound {
    BoundKind kind;
    bool closed;
};

ShiftBound classify(const ShiftConstraint& c) {
    if (c.B > 0.0) return c.label == 1 ? ShiftBound{BoundKind::Lower, true} : ShiftBound{BoundKind::Upper, false};
    return c.label == 1 ? ShiftBound{BoundKind::Upper, true} : ShiftBound{BoundKind::Lower, false};
}

struct URange {
    double lo = 0.0;
    bool lo_closed = false;
    double hi = 0.0;
    bool hi_closed = true;
    bool bounded = false;
    bool feasible() const { return lo < hi || (lo == hi && lo_closed && hi_closed); }
};

URange u_range_at(const std::vector<ShiftConstraint>& cs, double delta, double u_max) {
    URange r;
    r.hi = u_max;
    for (const auto& c : cs) {
        if (c.B == 0.0) continue;
        r.bounded = true;
        const double v = -c.A(delta) / c.B;
        const auto b = classify(c);
        if (b.kind == BoundKind::Lower) {
            if (v > r.lo || (v == r.lo && !b.closed)) {
                r.lo = v;
                r.lo_closed = b.closed;
            }
        } else if (v < r.hi || (v == r.hi && !b.closed)) {
            r.hi = v;
            r.hi_closed = b.closed;
        }
    }
    return r;
}

}  // namespace

FitReport fit_beta_delta(const std::vector<Polynomial>& Q, const LabeledDataset& ds, const FitOptions& opt) {
    ds.validate();
    if (!(opt.u_max > 0.0)) throw std::invalid_argument("u_max must be positive");
    const Interval domain = opt.pw_domain;
    FitReport rep;
    if (ds.empty()) {
        rep.consistent_region = IntervalSet::of(domain);
        rep.hypothesis = BetaPolyWeights{Q, 0.5, domain.mid()};
        rep.cells_examined = 1;
        return rep;
    }
    if (Q.size() != static_cast<std::size_t>(ds.T)) throw ArityError("fit_beta_delta: basis size differs from T");

    std::vector<ShiftConstraint> cs;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto A = diff_polynomial(Q, ds.pairs[i]);
        if (A.is_zero()) {
            if (ds.labels[i] == 0) throw NoConsistentHypothesis("a pair with identical payoffs is labeled 0");
            continue;
        }
        const double B = A.coeff(0);
        cs.push_back({std::move(A), B, ds.labels[i]});
    }

    const double u_max = opt.u_max;
    IntervalSet F = IntervalSet::of(domain);
    std::size_t examined = 0;
    auto apply = [&](const Polynomial& P, bool strict) {
        ++examined;
        if (F.empty()) return;
        if (P.is_zero()) {
            if (strict) F = IntervalSet();
            return;
        }
        F = sign_set_within(P, strict, F, opt.tol);
    };

    std::vector<std::size_t> lower, upper;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& c = cs[i];
        const Polynomial shifted = c.A + Polynomial::constant(u_max * c.B);
        if (c.B == 0.0) {
            if (c.label == 1) apply(c.A, false);
            else apply(c.A * -1.0, true);
            continue;
        }
        const auto b = classify(c);
        if (b.kind == BoundKind::Lower) {
            lower.push_back(i);
            // The lower bound has to stay inside (0, u_max].
            if (b.closed) apply(shifted, false);
            else apply(shifted * -1.0, true);
        } else {
            upper.push_back(i);
            // The upper bound has to stay above 0.
            if (c.B > 0.0) apply(c.A * -1.0, true);
            else apply(c.A, true);
        }
    }
    for (auto i : lower) {
        for (auto j : upper) {
            if (F.empty()) break;
            const auto& a = cs[i];
            const auto& b = cs[j];
            // lower_i <= upper_j  <=>  sign(B_i B_j) (A_i B_j - A_j B_i) >= 0
            const double s = (a.B > 0.0) == (b.B > 0.0) ? 1.0 : -1.0;
            Polynomial C = (a.A * (s * b.B)) - (b.A * (s * a.B));
            const double scale = a.A.max_abs_coeff() * std::abs(b.B) + b.A.max_abs_coeff() * std::abs(a.B);
            if (C.max_abs_coeff() <= 1e-12 * scale) C = Polynomial();
            const bool strict = !(classify(a).closed && classify(b).closed);
            apply(C, strict);
        }
    }
    rep.cells_examined = examined;
    if (F.empty()) throw NoConsistentHypothesis("no (beta, delta) is consistent with the data");

    const double delta = pick_point(F);
    const URange r = u_range_at(cs, delta, u_max);
    double u = 1.0;
    if (r.bounded) u = r.lo == r.hi ? r.lo : 0.5 * (r.lo + r.hi);
    else if (u > u_max) u = 0.5 * u_max;
    rep.consistent_region = std::move(F);
    rep.hypothesis = BetaPolyWeights{Q, 1.0 / (1.0 + u), delta};
    rep.training_error = training_error(rep.hypothesis, ds);
    return rep;
}

FitReport fit_family(Family f, const LabeledDataset& ds, const FitOptions& opt) {
    switch (f) {
        case Family::ED:
        case Family::HD:
        case Family::PW: return fit_single_param(f, ds, opt);
        case Family::QHD: {
            FitOptions o = opt;
            o.pw_domain = Interval::open(0.0, 1.0);
            if (ds.empty()) {
                FitReport rep;
                rep.consistent_region = IntervalSet::of(o.pw_domain);
                rep.hypothesis = QuasiHyperbolic{0.5, 0.5};
                rep.cells_examined = 1;
                return rep;
            }
            auto rep = fit_beta_delta(monomial_basis<double>(ds.T), ds, o);
            const auto& h = std::get<BetaPolyWeights>(rep.hypothesis);
            rep.hypothesis = QuasiHyperbolic{h.beta, h.delta};
            rep.training_error = training_error(rep.hypothesis, ds);
            return rep;
        }
        case Family::BPW: return fit_beta_delta(opt.basis, ds, opt);
        case Family::Table: break;
    }
    throw std::invalid_argument("the table family has no fitter; see table_witness");
}

namespace {

void check_bound_args(double eps, double conf, double d) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (!(conf > 0.0 && conf < 1.0)) throw std::invalid_argument("confidence parameter must lie in (0, 1)");
    if (!(d >= 1.0)) throw std::invalid_argument("VC dimension must be at least 1");
}

}  // namespace

double blumer_bound(double eps, double conf, double d) {
    check_bound_args(eps, conf, d);
    return (d * std::log2(1.0 / eps) + std::log2(1.0 / conf)) / eps;
}

double hanneke_bound(double eps, double conf, double d) {
    check_bound_args(eps, conf, d);
    return (d + std::log2(1.0 / conf)) / eps;
}

double disagreement_rate(const DiscountModel& a, const DiscountModel& b, const std::vector<ChoicePair>& pairs) {
    if (pairs.empty()) return 0.0;
    const int T = static_cast<int>(pairs.front().x.size());
    const auto wa = weights<double>(a, T);
    const auto wb = weights<double>(b, T);
    std::size_t diff = 0;
    for (const auto& p : pairs)
        if (prefers_weights(wa, p) != prefers_weights(wb, p)) ++diff;
    return static_cast<double>(diff) / static_cast<double>(pairs.size());
}

std::vector<CurveRecord> learning_curve(const LearningCurveSpec& spec) {
    if (!model_in_family(spec.truth, spec.family))
        throw std::invalid_argument("true model is not in family " + family_name(spec.family));
    if (spec.trials < 1) throw std::invalid_argument("trials must be positive");
    if (!(spec.eps_test > 0.0 && spec.eps_test < 1.0)) throw std::invalid_argument("eps_test must lie in (0, 1)");
    validate_model(spec.truth);
    validate_dist(spec.dist);
    if (dist_periods(spec.dist) != spec.T) throw ArityError("distribution T differs from experiment T");
    const std::size_t n_test = 10 * static_cast<std::size_t>(std::ceil(1.0 / spec.eps_test));
    const std::size_t tasks = spec.sizes.size() * static_cast<std::size_t>(spec.trials);
    std::vector<CurveRecord> out(tasks);
    const Rng root(spec.seed, 0);
    parallel_for(tasks, spec.jobs, [&](std::size_t task) {
        Rng rng = root.substream(task);
        const std::size_t size = spec.sizes[task / static_cast<std::size_t>(spec.trials)];
        auto ds = label_dataset(spec.truth, sample_pairs(spec.dist, size, rng));
        DiscountModel h = default_hypothesis(spec.family, spec.T, spec.fit);
        if (size > 0) h = fit_family(spec.family, ds, spec.fit).hypothesis;
        const auto test = sample_pairs(spec.dist, n_test, rng);
        out[task] = {size, static_cast<int>(task % static_cast<std::size_t>(spec.trials)),
                     disagreement_rate(h, spec.truth, test)};
    });
    return out;
}

}  // namespace timepref
