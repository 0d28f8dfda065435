#pragma once

// Consistent-hypothesis learners for the one-parameter families (exponential,
// hyperbolic, polynomial weights) and the two-parameter beta-delta family,
// sample-complexity reference curves and learning-curve experiments.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "timepref/datagen.hpp"
#include "timepref/interval_set.hpp"
#include "timepref/models.hpp"
#include "timepref/polynomial.hpp"
#include "timepref/rng.hpp"

namespace timepref {

class NoConsistentHypothesis : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Family { ED, HD, PW, QHD, BPW, Table };

std::string family_name(Family f);
/// Accepts "ed", "hd", "pw", "qhd", "bpw", "table" (any case).
Family parse_family(const std::string& s);
bool model_in_family(const DiscountModel& m, Family f);

struct FitOptions {
    double alpha_max = 16.0;   ///< hyperbolic search domain is (0, alpha_max]
    double u_max = 1e3;        ///< u = 1/beta - 1 searched on (0, u_max]
    double tol = kRootTol;     ///< breakpoint merge tolerance
    std::vector<Polynomial> basis;  ///< weight polynomials for PW / BPW
    Interval pw_domain = Interval::open(0.0, 1.0);
};

struct FitReport {
    DiscountModel hypothesis = Exponential{0.5};
    IntervalSet consistent_region;
    double training_error = 0.0;
    std::size_t cells_examined = 0;
};

/// Parameter domain of a family (delta for ED/PW/QHD/BPW, alpha for HD).
Interval family_domain(Family f, const FitOptions& opt = {});
std::vector<Polynomial> family_basis(Family f, int T, const FitOptions& opt = {});

/// Region of a sign partition whose sign vector equals `labels`. A breakpoint
/// counts iff the labels hold there with vanishing polynomials read as 1;
/// closed domain endpoints are tested directly.
template <typename Real>
IntervalSet region_from_partition(const BasicSignPartition<Real>& part, const std::vector<BasicPolynomial<Real>>& polys,
                                  const std::vector<int>& labels, const Interval& domain) {
    auto matches = [&](const std::vector<std::uint8_t>& s) {
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (s[j] != labels[j]) return false;
        return true;
    };
    auto signs_at = [&](const Real& x) {
        std::vector<std::uint8_t> s(polys.size());
        for (std::size_t j = 0; j < polys.size(); ++j) s[j] = static_cast<std::uint8_t>(label_sign(polys[j](x)));
        return s;
    };
    std::vector<Interval> parts;
    for (std::size_t i = 0; i < part.cells(); ++i)
        if (matches(part.cell_signs[i]))
            parts.push_back(Interval::open(to_double(part.cell_lo(i)), to_double(part.cell_hi(i))));
    for (std::size_t k = 0; k < part.breakpoints.size(); ++k) {
        auto s = signs_at(part.breakpoints[k]);
        for (auto j : part.vanishing[k]) s[j] = 1;
        if (matches(s)) parts.push_back(Interval::point(to_double(part.breakpoints[k])));
    }
    if (domain.lo_closed && matches(signs_at(Real(domain.lo)))) parts.push_back(Interval::point(domain.lo));
    if (domain.hi_closed && matches(signs_at(Real(domain.hi)))) parts.push_back(Interval::point(domain.hi));
    return IntervalSet(std::move(parts));
}

struct ConsistencyResult {
    IntervalSet region;
    std::size_t cells = 0;
};

/// Parameters in `domain` at which sign(sum_t Q_t x_t - sum_t Q_t y_t)
/// reproduces every label. Inconsistent data gives an empty set.
template <typename Real>
ConsistencyResult consistent_param_report(const std::vector<BasicPolynomial<Real>>& Q,
                                          const BasicLabeledDataset<Real>& ds, const Interval& domain,
                                          double tol = kRootTol) {
    ds.validate();
    if (!ds.empty() && Q.size() != static_cast<std::size_t>(ds.T))
        throw ArityError("consistent_param_set: basis size differs from dataset T");
    std::vector<BasicPolynomial<Real>> polys;
    std::vector<int> labels;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto p = diff_polynomial(Q, ds.pairs[i]);
        if (p.is_zero()) {
            if (ds.labels[i] == 0) return {};
            continue;
        }
        polys.push_back(std::move(p));
        labels.push_back(ds.labels[i]);
    }
    if (polys.empty()) return {IntervalSet::of(domain), 1};
    const auto part = sign_partition(polys, Real(domain.lo), Real(domain.hi), tol, CollisionPolicy::Merge);
    return {region_from_partition(part, polys, labels, domain), part.cells()};
}

template <typename Real>
IntervalSet consistent_param_set(const std::vector<BasicPolynomial<Real>>& Q, const BasicLabeledDataset<Real>& ds,
                                 const Interval& domain, double tol = kRootTol) {
    return consistent_param_report(Q, ds, domain, tol).region;
}

/// {x in F : P(x) >= 0}, or P(x) > 0 when strict.
IntervalSet sign_set_within(const Polynomial& P, bool strict, const IntervalSet& F, double tol = kRootTol);

/// Fraction of pairs on which the model's label differs from the given one.
double training_error(const DiscountModel& m, const LabeledDataset& ds);

/// Widest-interval midpoint learner for ED, HD and PW.
FitReport fit_single_param(Family f, const LabeledDataset& ds, const FitOptions& opt = {});

/// Exact consistency search over (delta, u), u = 1/beta - 1 in (0, u_max].
/// At fixed delta each pair is a linear condition A_i(delta) + u B_i >= 0
/// (label 1) or < 0 (label 0) with B_i = A_i(0). A feasible u exists iff every
/// lower bound sits below every upper bound, so the feasible delta set is an
/// intersection of polynomial sign conditions. consistent_region is that
/// delta projection.
FitReport fit_beta_delta(const std::vector<Polynomial>& Q, const LabeledDataset& ds, const FitOptions& opt = {});

/// Dispatches on family; QHD uses the monomial basis and reports a
/// QuasiHyperbolic hypothesis.
FitReport fit_family(Family f, const LabeledDataset& ds, const FitOptions& opt = {});

/// Hypothesis used when there is no data: the domain midpoint (beta = 1/2).
DiscountModel default_hypothesis(Family f, int T, const FitOptions& opt = {});

/// (1/eps)(d log2(1/eps) + log2(1/conf)), O-constant 1.
double blumer_bound(double eps, double conf, double vc_d);
/// (1/eps)(d + log2(1/conf)), O-constant 1.
double hanneke_bound(double eps, double conf, double vc_d);

struct LearningCurveSpec {
    Family family = Family::ED;
    int T = 5;
    DiscountModel truth = Exponential{0.3};
    DistributionSpec dist = MuRootUniform{5};
    std::vector<std::size_t> sizes;
    int trials = 1;
    double eps_test = 0.01;
    std::uint64_t seed = 0;
    int jobs = 1;
    FitOptions fit;
};

struct CurveRecord {
    std::size_t size = 0;
    int trial = 0;
    double err = 0.0;
};

/// Disagreement frequency between two models on the given pairs.
double disagreement_rate(const DiscountModel& a, const DiscountModel& b, const std::vector<ChoicePair>& pairs);

/// One record per (size, trial), ordered by size then trial. Each cell draws
/// from substream (size index * trials + trial) of the seed, so results do not
/// depend on the job count. The test set has 10 * ceil(1 / eps_test) pairs.
std::vector<CurveRecord> learning_curve(const LearningCurveSpec& spec);

}  // namespace timepref
