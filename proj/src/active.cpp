#include "timepref/active.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "timepref/datagen.hpp"
#include "timepref/models.hpp"
#include "timepref/pac.hpp"
#include "timepref/parallel.hpp"

namespace timepref {

namespace {

void check_T(int T) {
    if (T < 2) throw std::invalid_argument("T must be at least 2");
}

void check_radius(double R) {
    if (!(R > 0.0 && R <= 0.5)) throw std::invalid_argument("R must lie in (0, 1/2]");
}

}  // namespace

double parity_prob(double dist, int T) {
    check_T(T);
    if (!(dist >= 0.0 && dist <= 1.0)) throw std::invalid_argument("parity_prob: dist must lie in [0, 1]");
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * dist, T - 1));
}

BallRadii ball_radius_bounds(double R, int T) {
    check_T(T);
    check_radius(R);
    const double root = std::pow(1.0 - 2.0 * R, 1.0 / (T - 1));
    return {0.5 * (1.0 - root), 0.5 * (1.0 + root)};
}

double disagreement_mass_analytic(double R, int T) {
    check_T(T);
    check_radius(R);
    if ((T - 1) % 2 == 1) return 2.0 * R;
    return std::clamp(1.0 - std::pow(2.0, T - 1) * (1.0 - 2.0 * R), 0.0, 1.0);
}

namespace {

struct Windows {
    double R1, R2;
    bool left_outer, right_outer;
};

Windows windows_for(double delta, double R, int T) {
    const auto b = ball_radius_bounds(R, T);
    const bool even = (T - 1) % 2 == 0;
    return {b.R1, b.R2, even && delta - b.R2 > 0.0, even && delta + b.R2 < 1.0};
}

bool in_dis(const std::vector<double>& roots, double delta, const Windows& w) {
    int left_gap = 0, right_gap = 0;
    for (double r : roots) {
        if (r >= delta - w.R1 && r <= delta + w.R1) return true;
        if (w.left_outer) {
            if (r <= delta - w.R2) return true;
            if (r < delta) ++left_gap;
        }
        if (w.right_outer) {
            if (r >= delta + w.R2) return true;
            if (r > delta) ++right_gap;
        }
    }
    return (left_gap % 2 == 1) || (right_gap % 2 == 1);
}

template <typename Hit>
McEstimate run_mc(int T, std::uint64_t N, std::uint64_t seed, int jobs, Hit hit) {
    if (N == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
    const std::uint64_t chunks = (N + kMcChunk - 1) / kMcChunk;
    std::vector<std::uint64_t> counts(chunks, 0);
    const Rng root(seed, 0);
    parallel_for(chunks, jobs, [&](std::size_t c) {
        Rng rng = root.substream(c);
        const std::uint64_t begin = c * kMcChunk;
        const std::uint64_t end = std::min(N, begin + kMcChunk);
        std::uint64_t k = 0;
        for (std::uint64_t i = begin; i < end; ++i)
            if (hit(sample_mu_roots(T, rng).roots)) ++k;
        counts[c] = k;
    });
    McEstimate e;
    e.samples = N;
    for (auto k : counts) e.hits += k;
    e.estimate = static_cast<double>(e.hits) / static_cast<double>(N);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(N));
    return e;
}

}  // namespace

double disagreement_mass_windows(double delta, double R, int T) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const auto w = windows_for(delta, R, T);
    const double gap = w.R2 - w.R1;
    double free = 0.0;
    if (!w.left_outer) free += std::max(0.0, delta - w.R1);
    if (!w.right_outer) free += std::max(0.0, 1.0 - (delta + w.R1));
    // Roots must avoid the windows and fall an even number of times into each
    // constrained gap; average (free + a gL + b gR)^(T-1) over signs a, b.
    const std::vector<double> ls = w.left_outer ? std::vector<double>{1.0, -1.0} : std::vector<double>{0.0};
    const std::vector<double> rs = w.right_outer ? std::vector<double>{1.0, -1.0} : std::vector<double>{0.0};
    double stay = 0.0;
    for (double a : ls)
        for (double b : rs) stay += std::pow(free + a * gap + b * gap, T - 1);
    stay /= static_cast<double>(ls.size() * rs.size());
    return std::clamp(1.0 - stay, 0.0, 1.0);
}

McEstimate estimate_disagreement_mass_mc(double delta, double R, int T, std::uint64_t N, std::uint64_t seed,
                                         int jobs) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const auto w = windows_for(delta, R, T);
    return run_mc(T, N, seed, jobs, [&](const std::vector<double>& roots) { return in_dis(roots, delta, w); });
}

McEstimate estimate_parity_mc(double delta, double gamma, int T, std::uint64_t N, std::uint64_t seed, int jobs) {
    check_T(T);
    const double lo = std::min(delta, gamma), hi = std::max(delta, gamma);
    if (!(lo >= 0.0 && hi <= 1.0)) throw std::invalid_argument("delta and gamma must lie in [0, 1]");
    return run_mc(T, N, seed, jobs, [&](const std::vector<double>& roots) {
        int k = 0;
        for (double r : roots) k += (r > lo && r < hi);
        return k % 2 == 1;
    });
}

std::vector<double> default_R_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 10; ++i) g.push_back(0.05 * i);
    return g;
}

ThetaReport estimate_theta(double delta, int T, const std::vector<double>& R_grid, std::uint64_t N,
                           std::uint64_t seed, int jobs) {
    if (R_grid.empty()) throw std::invalid_argument("estimate_theta: empty R grid");
    ThetaReport rep;
    rep.T = T;
    rep.delta = delta;
    rep.R_grid = R_grid;
    rep.mc_samples = N;
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        const double R = R_grid[i];
        check_radius(R);
        const auto e = estimate_disagreement_mass_mc(delta, R, T, N, derive_seed(seed, i + 1), jobs);
        rep.mass_estimates.push_back(e.estimate);
        rep.standard_errors.push_back(e.stderr_);
        rep.ratios.push_back(e.estimate / R);
        if (i == 0 || rep.ratios.back() > rep.ratio_sup) {
            rep.ratio_sup = rep.ratios.back();
            rep.argmax_R = R;
        }
    }
    rep.theta = std::max(rep.ratio_sup, rep.tail_sup);
    return rep;
}

double cal_bound(double eps, double conf, double vc_d, double theta) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (!(conf > 0.0 && conf < 1.0)) throw std::invalid_argument("confidence parameter must lie in (0, 1)");
    if (!(vc_d >= 1.0)) throw std::invalid_argument("VC dimension must be at least 1");
    if (!(theta >= 1.0)) throw std::invalid_argument("theta must be at least 1");
    const double l = std::log2(1.0 / eps);
    return theta * l * (vc_d * std::max(1.0, std::log2(theta)) + std::log2(l / conf));
}

CalLearner::CalLearner(int T, double tol) : T_(T), tol_(tol) { check_T(T); }

bool CalLearner::in_disagreement(const Polynomial& P) const {
    if (P.is_zero()) return false;
    const auto& V = state_.version_space;
    return !sign_set_within(P, false, V, tol_).empty() && !sign_set_within(P * -1.0, true, V, tol_).empty();
}

bool CalLearner::observe(const Polynomial& P, const std::function<int()>& label_of) {
    ++state_.points_seen;
    if (P.is_zero()) return false;
    const auto& V = state_.version_space;
    auto pos = sign_set_within(P, false, V, tol_);
    if (pos.empty()) return false;
    auto neg = sign_set_within(P * -1.0, true, V, tol_);
    if (neg.empty()) return false;
    ++state_.labels_used;
    state_.version_space = label_of() == 1 ? std::move(pos) : std::move(neg);
    if (state_.version_space.empty()) throw std::runtime_error("CAL version space emptied: labels are not realizable");
    return true;
}

double CalLearner::hull_length() const {
    const auto& iv = state_.version_space.intervals();
    return iv.back().hi - iv.front().lo;
}

double CalLearner::hypothesis() const {
    const auto& iv = state_.version_space.intervals();
    return 0.5 * (iv.front().lo + iv.back().hi);
}

double hull_region_mass(double hull, int T) {
    if (T < 2) throw std::invalid_argument("T must be at least 2");
    const double L = std::clamp(hull, 0.0, 1.0);
    return -std::expm1(static_cast<double>(T - 1) * std::log1p(-L));
}

CalResult cal_run(double true_delta, int T, const CalOptions& opt, Rng& rng) {
    if (!(true_delta > 0.0 && true_delta < 1.0)) throw std::invalid_argument("true delta must lie in (0, 1)");
    if (!(opt.eps > 0.0)) throw std::invalid_argument("eps must be positive");
    CalLearner learner(T);
    const auto w = weights<double>(Exponential{true_delta}, T);
    CalResult res;
    auto proxy = [&] {
        const double h = learner.hull_length();
        switch (opt.stop) {
            case CalStop::Length: return h;
            case CalStop::ConvertedMass: return parity_prob(std::min(1.0, 0.5 * h), T);
            case CalStop::RegionMass: break;
        }
        return hull_region_mass(h, T);
    };
    while (true) {
        if (proxy() <= opt.eps) {
            res.converged = true;
            break;
        }
        if (learner.state().points_seen >= opt.max_points) break;
        const ChoicePair pair = sample_mu_pair(T, rng);
        const Polynomial P(pair.x);
        const bool asked = learner.observe(P, [&] { return prefers_weights(w, pair); });
        if (asked && opt.on_query) opt.on_query(learner.state());
    }
    res.state = learner.state();
    res.hypothesis = learner.hypothesis();
    res.hull_length = learner.hull_length();
    res.converted_mass = parity_prob(std::min(1.0, 0.5 * res.hull_length), T);
    return res;
}

}  // namespace timepref
