// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "timepref/active.hpp"
#include "timepref/datagen.hpp"
#include "timepref/format.hpp"
#include "timepref/mq.hpp"
#include "timepref/pac.hpp"
#include "timepref/vcdim.hpp"

using namespace timepref;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
    failures += !pass;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    status = pclose(p);
    return out;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string f; std::getline(in, f, sep);) out.push_back(f);
    return out;
}

// Value of key=... inside a comment line, or NaN.
double comment_value(const std::string& line, const std::string& key) {
    const auto at = line.find(key + "=");
    if (at == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
    return std::stod(line.substr(at + key.size() + 1));
}

void criterion1() {
    bool ok = true;
    std::ostringstream d;
    for (int T : {3, 4, 5}) {
        const auto t0 = Clock::now();
        int status = 0;
        const auto out = capture(std::string(TIMEPREF_BIN) + " theta --T " + std::to_string(T) +
                                     " --delta 0.5 --samples 1000000 --seed 7",
                                 status);
        const double secs = seconds_since(t0);
        double sup = std::numeric_limits<double>::quiet_NaN();
        for (const auto& l : lines_of(out))
            if (l.rfind("# T=", 0) == 0) sup = comment_value(l, "ratio_sup");
        const bool pass = status == 0 && sup >= 1.95 && sup <= 2.05 && secs < 60.0;
        ok = ok && pass;
        d << "T=" << T << " ratio_sup=" << format_real(sup) << " (" << std::round(secs * 10) / 10 << "s) ";
    }
    report(1, ok, d.str());
}

void criterion2() {
    Rng rng(2024, 0);
    int within = 0;
    const std::uint64_t N = 100000;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const int T = 2 + static_cast<int>(rng.below(7));
        const double delta = rng.uniform01(), gamma = rng.uniform01();
        const double p = parity_prob(std::abs(delta - gamma), T);
        const auto mc = estimate_parity_mc(delta, gamma, T, N, derive_seed(2024, i + 1));
        const double se = std::sqrt(p * (1 - p) / N);
        const double z = se > 0 ? std::abs(mc.estimate - p) / se : (mc.estimate == p ? 0.0 : INFINITY);
        worst = std::max(worst, z);
        within += z <= 3.0;
    }
    report(2, within == 20, std::to_string(within) + "/20 triples within 3 se, max |z|=" + format_real(worst));
}

void criterion3() {
    const std::uint64_t N = 1000000;
    int within = 0, total = 0;
    std::ostringstream misses;
    for (int T : {3, 4, 5})
        for (double R : {0.1, 0.25, 0.4, 0.5}) {
            const double a = disagreement_mass_analytic(R, T);
            const auto mc = estimate_disagreement_mass_mc(0.5, R, T, N, derive_seed(3, T * 100 + total));
            const double se = std::sqrt(std::max(a * (1 - a), mc.estimate * (1 - mc.estimate)) / N);
            const bool ok = std::abs(mc.estimate - a) <= 3 * se;
            ++total;
            within += ok;
            if (!ok) misses << " T=" << T << ",R=" << R << ":mc=" << format_real(mc.estimate) << ",closed=" << format_real(a);
        }
    report(3, within == total,
           std::to_string(within) + "/" + std::to_string(total) + " within 3 sigma" +
               (misses.str().empty() ? "" : "; misses" + misses.str()));
}

void criterion4() {
    const auto t0 = Clock::now();
    int status = 0;
    const auto out = capture(std::string(TIMEPREF_BIN) + " shatter --construct thm3 --T 3,5,9,17,33,65 --basis both --check", status);
    const double secs = seconds_since(t0);
    int rows = 0, good = 0;
    for (const auto& l : lines_of(out)) {
        const auto f = split(l, ',');
        if (f.size() != 5 || f[0] == "T" || l[0] == '#') continue;
        ++rows;
        const int T = std::stoi(f[0]);
        const int n = std::stoi(f[2]);
        good += f[3] == "true" && (1 << n) <= T - 1 && (1 << (n + 1)) > T - 1;
    }
    report(4, status == 0 && rows == 12 && good == 12 && secs < 300,
           std::to_string(good) + "/" + std::to_string(rows) + " (T, basis) rows shattered with n=1..6, " +
               format_real(std::round(secs * 100) / 100) + "s");
}

void criterion5() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::size_t labelings = 0;
    for (int T = 2; T <= 12; ++T) {
        const auto c = check_table_chain(T, 0.1);
        ok = ok && c.shattered && c.n == static_cast<std::size_t>(T - 1);
        labelings += c.realized;
    }
    const double secs = seconds_since(t0);
    report(5, ok && secs < 120,
           "table family shatters T-1 points for T=2..12 (" + std::to_string(labelings) + " labelings), " +
               format_real(std::round(secs * 1000) / 1000) + "s");
}

void criterion6() {
    Rng rng(6, 0);
    int fixed_bad = 0, shift_bad = 0;
    std::size_t max_fixed = 0, max_shift = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const int d = 1 + static_cast<int>(rng.below(8));
        std::vector<Polynomial> P;
        std::vector<double> b;
        for (int i = 0; i < n; ++i) {
            const int deg = 1 + static_cast<int>(rng.below(d));
            std::vector<double> roots;
            for (int k = 0; k < deg; ++k) roots.push_back(rng.uniform(-0.2, 1.2));
            P.push_back(from_roots(roots, rng.uniform(-2.0, 2.0)));
            b.push_back(rng.below(4) == 0 ? 0.0 : rng.uniform(-1.0, 1.0));
        }
        const auto c = count_sign_vectors(P, b, 0.0, 1.0);
        fixed_bad += c.fixed_shift > static_cast<std::size_t>(n * d + 1);
        shift_bad += c.with_shift > sign_combination_bound(n, d);
        max_fixed = std::max(max_fixed, c.fixed_shift);
        max_shift = std::max(max_shift, c.with_shift);
    }
    report(6, fixed_bad == 0 && shift_bad == 0,
           "1000 collections: " + std::to_string(fixed_bad) + " over nd+1, " + std::to_string(shift_bad) +
               " over (n^2+n)d+n+1 (max counts " + std::to_string(max_fixed) + ", " + std::to_string(max_shift) + ")");
}

void criterion7() {
    Rng rng(7, 0);
    int bad = 0;
    std::string first_bad;
    const auto t0 = Clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const Family f = std::array{Family::ED, Family::HD, Family::QHD}[trial % 3];
        const int T = 2 + static_cast<int>(rng.below(5));
        const std::size_t n = 1 + rng.below(200);
        DiscountModel truth = Exponential{rng.uniform01()};
        double param = std::get<Exponential>(truth).delta;
        if (f == Family::HD) {
            param = rng.uniform(0.05, 10.0);
            truth = Hyperbolic{param};
        } else if (f == Family::QHD) {
            const double beta = rng.uniform(0.05, 1.0);
            param = rng.uniform01();
            truth = QuasiHyperbolic{std::min(beta, 1 - 1e-9), param};
        }
        const DistributionSpec dist =
            rng.below(2) == 0 ? DistributionSpec{MuRootUniform{T}} : DistributionSpec{GaussianPairs{T, 1.0}};
        Rng data = rng.substream(trial);
        const auto ds = label_dataset(truth, sample_pairs(dist, n, data));
        bool ok = false;
        try {
            const auto rep = fit_family(f, ds);
            ok = rep.training_error == 0.0 && rep.consistent_region.contains(param) &&
                 training_error(rep.hypothesis, ds) == 0.0;
        } catch (const std::exception&) {
        }
        if (!ok && first_bad.empty()) first_bad = " first: " + describe(truth) + " n=" + std::to_string(n);
        bad += !ok;
    }
    const double secs = seconds_since(t0);

    LearningCurveSpec spec;
    spec.family = Family::ED;
    spec.T = 5;
    spec.truth = Exponential{0.3};
    spec.dist = MuRootUniform{5};
    spec.sizes = {1000};
    spec.trials = 50;
    spec.eps_test = 0.01;
    spec.seed = 7;
    double mean = 0;
    for (const auto& r : learning_curve(spec)) mean += r.err / 50;
    report(7, bad == 0 && mean < 0.01,
           std::to_string(1000 - bad) + "/1000 fits consistent and covering the truth (" +
               format_real(std::round(secs * 10) / 10) + "s)" + first_bad + "; ED T=5 n=1000 mean held-out err=" +
               format_real(mean));
}

void criterion8() {
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    const int trials = 20;
    std::vector<double> xs, ys;
    double ratio_1e3 = 0;
    for (std::size_t e = 0; e < eps.size(); ++e) {
        double labels = 0, points = 0;
        for (int t = 0; t < trials; ++t) {
            Rng rng = Rng(8, 0).substream(e * trials + t);
            CalOptions opt;
            opt.eps = eps[e];
            const auto res = cal_run(0.3, 5, opt, rng);
            labels += static_cast<double>(res.state.labels_used) / trials;
            points += static_cast<double>(res.state.points_seen) / trials;
        }
        xs.push_back(std::log2(1 / eps[e]));
        ys.push_back(labels);
        if (eps[e] == 1e-3) ratio_1e3 = labels / points;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double r2 = sxy * sxy / (sxx * syy);
    std::ostringstream d;
    d << "labels/points at eps=1e-3: " << format_real(ratio_1e3) << "; mean labels";
    for (double y : ys) d << ' ' << format_real(y);
    d << "; slope=" << format_real(slope) << " per bit, R^2=" << format_real(r2);
    report(8, ratio_1e3 <= 0.1 && slope > 0 && r2 >= 0.9, d.str());
}

void criterion9() {
    const auto t0 = Clock::now();
    int runs = 0, acc = 0, budget_ok = 0;
    Rng rng(9, 0);
    for (const auto& adapter : {ed_adapter(), hd_adapter(4.0)}) {
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const auto budget = mq_query_budget(adapter, eps);
            for (int i = 0; i < 1000; ++i) {
                const auto& dom = adapter.param_domain;
                const double truth = dom.lo + dom.length() * rng.uniform01();
                Oracle o(adapter.family == "ed" ? DiscountModel{Exponential{truth}} : DiscountModel{Hyperbolic{truth}});
                const auto r = mq_learn(o, adapter, eps);
                ++runs;
                acc += std::abs(r.param - truth) <= eps;
                budget_ok += o.query_count() <= budget && r.queries == o.query_count();
            }
        }
    }
    const double secs = seconds_since(t0);
    report(9, acc == runs && budget_ok == runs && secs < 30,
           std::to_string(acc) + "/" + std::to_string(runs) + " within eps, " + std::to_string(budget_ok) +
               " within query budget, " + format_real(std::round(secs * 1000) / 1000) + "s");
}

// Sign changes over a uniform grid, skipping points whose Horner value is
// within its running rounding-error bound.
int grid_oracle(const Polynomial& p, int points) {
    const auto& c = p.coeffs();
    const double u = std::numeric_limits<double>::epsilon();
    int last = 0, changes = 0;
    for (int i = 1; i < points; ++i) {
        const double x = static_cast<double>(i) / points;
        double v = 0, mag = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            v = v * x + *it;
            mag = mag * x + std::abs(*it);
        }
        if (std::abs(v) <= 4.0 * (c.size() + 1) * u * mag) continue;
        const int s = v > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

void criterion10() {
    Rng rng(10, 0);
    int disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int deg = 1 + static_cast<int>(rng.below(8));
        const int pairs = static_cast<int>(rng.below(deg / 2 + 1));
        std::vector<double> roots;
        while (static_cast<int>(roots.size()) < deg - 2 * pairs) {
            const double r = rng.uniform(-0.5, 1.5);
            bool ok = std::abs(r) > 0.02 && std::abs(r - 1) > 0.02;
            for (double s : roots) ok = ok && std::abs(r - s) > 0.02;
            if (ok) roots.push_back(r);
        }
        auto p = from_roots(roots, rng.uniform(0.5, 2.0) * (rng.random_sign()));
        for (int k = 0; k < pairs; ++k) {
            const double a = rng.uniform(-0.5, 1.5), b = rng.uniform(0.05, 1.0);
            p = p * Polynomial({a * a + b * b, -2 * a, 1});
        }
        disagreements += count_roots_in(p, 0.0, 1.0) != grid_oracle(p, 100000);
    }
    report(10, disagreements == 0, std::to_string(disagreements) + " disagreements over 1000 polynomials");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures;
}
