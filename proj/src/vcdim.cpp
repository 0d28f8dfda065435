#include "timepref/vcdim.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include "timepref/wide.hpp"

namespace timepref {

TableDiscount table_witness(const std::vector<ChoicePair>& points, const std::vector<int>& labels) {
    if (points.size() != labels.size()) throw std::invalid_argument("table_witness: labels and points differ in length");
    if (points.empty()) throw std::invalid_argument("table_witness: no points");
    const std::size_t T = points.front().x.size();
    // at[k] = (scale c, label) of the point comparing periods k and k+1.
    std::vector<std::optional<std::pair<double, int>>> at(T);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (p.x.size() != T || p.y.size() != T) throw ArityError("table_witness: points differ in length");
        std::size_t k = T;
        for (std::size_t t = 0; t < T; ++t) {
            if (p.x[t] == 0.0) continue;
            if (k != T) k = T + 1;
            else k = t;
        }
        const bool chain = k + 1 < T && p.x[k] > 0.0 && p.x[k] < 1.0 && !at[k] && [&] {
            for (std::size_t t = 0; t < T; ++t)
                if (p.y[t] != (t == k + 1 ? 1.0 : 0.0)) return false;
            return true;
        }();
        if (!chain)
            throw std::invalid_argument("table_witness: points must have the form x = c e_k, y = e_{k+1} with distinct k");
        at[k] = std::make_pair(p.x[k], labels[i]);
    }
    TableDiscount d;
    d.D.assign(T, 0.0);
    d.D[0] = 0.9;
    for (std::size_t k = 0; k + 1 < T; ++k) {
        if (!at[k]) {
            d.D[k + 1] = 0.95 * d.D[k];
            continue;
        }
        const auto [c, label] = *at[k];
        d.D[k + 1] = label == 1 ? c * d.D[k] : 0.5 * (1.0 + c) * d.D[k];
    }
    return d;
}

std::vector<int> gray_code_flips(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("gray_code_flips: n must lie in [1, 20]");
    std::vector<int> out;
    const std::uint32_t steps = (1U << n) - 1;
    out.reserve(steps);
    for (std::uint32_t i = 1; i <= steps; ++i) out.push_back(1 + __builtin_ctz(i));
    return out;
}

int cube_walk_size(int T) {
    if (T < 3) throw std::invalid_argument("the construction needs T >= 3");
    int n = 0;
    while ((2LL << n) <= T - 1) ++n;
    return n;
}

std::vector<ChoicePair> table_chain_points(int T, double eps) {
    if (T < 2) throw std::invalid_argument("table_chain_points: T must be at least 2");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("table_chain_points: eps must lie in (0, 1)");
    std::vector<ChoicePair> pts;
    for (int i = 0; i + 1 < T; ++i) {
        ChoicePair p;
        p.x.assign(static_cast<std::size_t>(T), 0.0);
        p.y.assign(static_cast<std::size_t>(T), 0.0);
        p.x[static_cast<std::size_t>(i)] = 1.0 - eps;
        p.y[static_cast<std::size_t>(i) + 1] = 1.0;
        pts.push_back(std::move(p));
    }
    return pts;
}

std::uint64_t sign_combination_bound(std::uint64_t n, std::uint64_t d) {
    if (n < 1 || d < 1) throw std::invalid_argument("sign_combination_bound: n and d must be positive");
    return (n * n + n) * d + n + 1;
}

int max_shatterable_n(std::uint64_t d) {
    if (d < 1) throw std::invalid_argument("max_shatterable_n: d must be positive");
    int best = 0;
    for (std::uint64_t n = 1; n < 63; ++n) {
        if (sign_combination_bound(n, d) < (std::uint64_t{1} << n)) break;
        best = static_cast<int>(n);
    }
    return best;
}

SignVectorCount count_sign_vectors(const std::vector<Polynomial>& P, const std::vector<double>& b, double lo,
                                   double hi, double tol) {
    if (P.size() != b.size()) throw std::invalid_argument("count_sign_vectors: shift vector size differs");
    if (!(lo < hi)) throw std::invalid_argument("count_sign_vectors: needs lo < hi");
    const std::size_t n = P.size();

    // Every place where some sign on a vertical u-line can change order.
    std::vector<Polynomial> events;
    for (const auto& p : P)
        if (!p.is_zero()) events.push_back(p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Polynomial c = P[i] * b[j] - P[j] * b[i];
            const double scale = P[i].max_abs_coeff() * std::abs(b[j]) + P[j].max_abs_coeff() * std::abs(b[i]);
            if (!c.is_zero() && c.max_abs_coeff() > 1e-12 * scale) events.push_back(std::move(c));
        }
    std::vector<double> cuts{lo};
    for (const auto& e : events) {
        if (e.degree() < 1) continue;
        auto r = isolate_roots_in(e, lo, hi, tol / 1000.0);
        cuts.insert(cuts.end(), r.begin(), r.end());
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    std::set<std::vector<std::uint8_t>> fixed, shifted;
    std::vector<std::uint8_t> s(n);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        if (cuts[c + 1] - cuts[c] <= tol) continue;
        const double delta = 0.5 * (cuts[c] + cuts[c + 1]);
        std::vector<double> vals(n), taus;
        for (std::size_t i = 0; i < n; ++i) {
            vals[i] = P[i](delta);
            s[i] = static_cast<std::uint8_t>(label_sign(vals[i]));
            if (b[i] != 0.0) {
                const double tau = -vals[i] / b[i];
                if (tau > 0.0) taus.push_back(tau);
            }
        }
        fixed.insert(s);
        std::sort(taus.begin(), taus.end());
        std::vector<double> us;
        double prev = 0.0;
        for (double t : taus) {
            if (t > prev) us.push_back(0.5 * (prev + t));
            prev = t;
        }
        us.push_back(prev + 1.0);
        for (double u : us) {
            for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<std::uint8_t>(label_sign(vals[i] + u * b[i]));
            shifted.insert(s);
        }
    }
    return {fixed.size(), shifted.size()};
}

namespace {

template <typename Real>
ConstructionCheck run_cube_walk(int T, WalkBasis basis) {
    const auto t0 = std::chrono::steady_clock::now();
    FamilySpec fam;
    std::vector<BasicPolynomial<Real>> Q;
    if (basis == WalkBasis::Monomial) {
        fam.kind = Family::ED;
        Q = monomial_basis<Real>(T);
    } else {
        fam.kind = Family::HD;
        Q = hd_cleared_polynomials<Real>(T);
    }
    const auto pts = cube_walk_points<Real>(T, Q);
    const auto res = is_shattered<Real>(pts, fam);
    ConstructionCheck c;
    c.T = T;
    c.family = family_name(fam.kind);
    c.n = pts.size();
    c.shattered = res.shattered;
    c.realized = res.realized();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

}  // namespace

ConstructionCheck check_cube_walk(int T, WalkBasis basis, Precision precision) {
    if (precision == Precision::Wide) return run_cube_walk<WideReal>(T, basis);
    return run_cube_walk<double>(T, basis);
}

ConstructionCheck check_table_chain(int T, double eps) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pts = table_chain_points(T, eps);
    FamilySpec fam;
    fam.kind = Family::Table;
    const auto res = is_shattered<double>(pts, fam);
    ConstructionCheck c;
    c.T = T;
    c.family = "table";
    c.n = pts.size();
    c.shattered = res.shattered;
    c.realized = res.realized();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

}  // namespace timepref
