#pragma once

// Disagreement-based active learning for exponential discounting under the
// root-uniform distribution: parity and ball analytics, Monte Carlo
// disagreement mass and coefficient estimates, and a CAL learner.

#include <cstdint>
#include <functional>
#include <vector>

#include "timepref/interval_set.hpp"
#include "timepref/polynomial.hpp"
#include "timepref/rng.hpp"

namespace timepref {

/// P(odd number of the T-1 uniform roots land in a gap of length dist)
/// = (1 - (1 - 2 dist)^(T-1)) / 2.
double parity_prob(double dist, int T);

struct BallRadii {
    double R1;
    double R2;
};

/// Distances d with parity_prob(d, T) <= R are d <= R1, plus d >= R2 when
/// T-1 is even.
BallRadii ball_radius_bounds(double R, int T);

/// 2R for odd T-1; max(0, 1 - 2^(T-1) (1 - 2R)) for even T-1.
double disagreement_mass_analytic(double R, int T);

/// Exact mass of Dis(B(delta, R)) with the ball windows clipped to (0, 1).
/// A pair disagrees with delta somewhere in the ball iff it has a root in the
/// inner window, a root in an outer window, or an odd number of roots in the
/// gap in front of a nonempty outer window.
double disagreement_mass_windows(double delta, double R, int T);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
};

/// Fixed-size chunks, one RNG substream per chunk, so the estimate does not
/// depend on the job count.
inline constexpr std::uint64_t kMcChunk = 1U << 16;

/// Frequency of pairs in Dis(B(delta, R)) under the root-uniform distribution.
McEstimate estimate_disagreement_mass_mc(double delta, double R, int T, std::uint64_t N, std::uint64_t seed,
                                         int jobs = 1);

/// Frequency of an odd number of uniform roots between delta and gamma.
McEstimate estimate_parity_mc(double delta, double gamma, int T, std::uint64_t N, std::uint64_t seed, int jobs = 1);

struct ThetaReport {
    int T = 0;
    double delta = 0.5;
    std::vector<double> R_grid;
    std::vector<double> mass_estimates;
    std::vector<double> standard_errors;
    std::vector<double> ratios;
    std::uint64_t mc_samples = 0;
    double ratio_sup = 0.0;   ///< max over the grid of mass / R
    double argmax_R = 0.0;
    double tail_sup = 2.0;    ///< R > 1/2: mass is 1, so the ratio peaks at 2 as R -> 1/2
    double theta = 0.0;       ///< max(ratio_sup, tail_sup)
};

std::vector<double> default_R_grid();

/// Grid entries share one seed; entry i uses stream i.
ThetaReport estimate_theta(double delta, int T, const std::vector<double>& R_grid, std::uint64_t N,
                           std::uint64_t seed, int jobs = 1);

/// theta log2(1/eps) (d max(1, log2 theta) + log2(log2(1/eps) / conf)).
double cal_bound(double eps, double conf, double vc_d, double theta);

enum class CalStop {
    Length,          ///< hull length of the version space <= eps
    ConvertedMass,   ///< parity_prob(hull / 2, T) <= eps
    RegionMass,      ///< mu(Dis(hull)) = 1 - (1 - hull)^(T-1) <= eps
};

/// Probability that at least one of the T-1 roots lands in an interval of the
/// given length, i.e. the mu-mass of the disagreement region of that interval.
double hull_region_mass(double hull, int T);

struct CalState {
    IntervalSet version_space = IntervalSet::of(Interval::open(0.0, 1.0));
    std::uint64_t labels_used = 0;
    std::uint64_t points_seen = 0;
};

/// Version-space learner for exponential discounting on (0, 1).
class CalLearner {
public:
    explicit CalLearner(int T, double tol = kRootTol);

    /// True iff the label sign of P is not constant on the version space.
    bool in_disagreement(const Polynomial& P) const;
    /// Counts the point; queries label_of() only inside the disagreement
    /// region and then keeps the matching part of the version space.
    /// Returns whether a label was used. Throws std::runtime_error if the
    /// version space empties.
    bool observe(const Polynomial& P, const std::function<int()>& label_of);

    const CalState& state() const { return state_; }
    double hull_length() const;
    double hypothesis() const;   ///< hull midpoint
    int periods() const { return T_; }

private:
    int T_;
    double tol_;
    CalState state_;
};

struct CalOptions {
    double eps = 1e-2;
    std::uint64_t max_points = 1'000'000;
    CalStop stop = CalStop::RegionMass;
    /// Called after every labeled point.
    std::function<void(const CalState&)> on_query;
};

struct CalResult {
    CalState state;
    double hypothesis = 0.5;
    double hull_length = 1.0;
    double converted_mass = 0.5;
    bool converged = false;
};

/// Streams root-uniform pairs labeled by Exponential{true_delta}.
CalResult cal_run(double true_delta, int T, const CalOptions& opt, Rng& rng);

}  // namespace timepref
