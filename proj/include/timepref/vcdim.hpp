#pragma once

// Shattering checks, the log2(T-1) and T-1 point constructions and the
// sign-combination counting bound.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "timepref/models.hpp"
#include "timepref/pac.hpp"
#include "timepref/polynomial.hpp"

namespace timepref {

inline constexpr std::size_t kMaxShatterPoints = 20;

struct FamilySpec {
    Family kind = Family::ED;
    FitOptions fit;
};

/// Witness per labeling; bit i of the labeling index is the label of point i.
template <typename Real>
struct BasicShatterInstance {
    std::vector<BasicChoicePair<Real>> points;
    FamilySpec family;
    std::vector<std::optional<DiscountModel>> witnesses;
    bool shattered = false;
    std::optional<std::uint32_t> first_unrealized;

    std::size_t realized() const {
        std::size_t k = 0;
        for (const auto& w : witnesses) k += w.has_value();
        return k;
    }
};
using ShatterInstance = BasicShatterInstance<double>;

/// Inductive witness for points x = c e_k, y = e_{k+1} with c in (0, 1) and
/// distinct k: D(1) = 0.9, then D(k+1) = c D(k) for label 1 and
/// (1 + c) D(k) / 2 for label 0. Throws std::invalid_argument for any other
/// point layout.
TableDiscount table_witness(const std::vector<ChoicePair>& points, const std::vector<int>& labels);

/// Reflected binary code: step i flips coordinate 1 + ctz(i).
std::vector<int> gray_code_flips(int n);

/// floor(log2(T - 1)).
int cube_walk_size(int T);

std::vector<ChoicePair> table_chain_points(int T, double eps);

/// (n^2 + n) d + n + 1.
std::uint64_t sign_combination_bound(std::uint64_t n, std::uint64_t d);
/// Largest n with sign_combination_bound(n, d) >= 2^n.
int max_shatterable_n(std::uint64_t d);

struct SignVectorCount {
    std::size_t fixed_shift = 0;   ///< over delta alone (u = 0)
    std::size_t with_shift = 0;    ///< over (delta, u), u > 0
};

/// Distinct sign vectors of P_i(delta) + u b_i on open faces of the
/// arrangement over (lo, hi) x (0, inf), and of P_i(delta) alone.
SignVectorCount count_sign_vectors(const std::vector<Polynomial>& P, const std::vector<double>& b, double lo,
                                   double hi, double tol = kRootTol);

enum class WalkBasis { Monomial, HdCleared };
enum class Precision { Double, Wide };

struct ConstructionCheck {
    int T = 0;
    std::string family;
    std::size_t n = 0;
    bool shattered = false;
    std::size_t realized = 0;
    double seconds = 0.0;
};

/// Builds cube_walk_points for the basis and checks shattering under the
/// matching family (exponential for monomials, hyperbolic for the cleared
/// basis) at the requested precision.
ConstructionCheck check_cube_walk(int T, WalkBasis basis, Precision precision);
/// table_chain_points(T, eps) under the table family.
ConstructionCheck check_table_chain(int T, double eps);

namespace detail {

inline DiscountModel scalar_model(Family f, double p, const FitOptions& opt) {
    switch (f) {
        case Family::ED: return Exponential{p};
        case Family::HD: return Hyperbolic{p};
        case Family::PW: return PolyWeights{opt.basis, p};
        default: break;
    }
    throw std::invalid_argument("not a one-parameter family");
}

template <typename Real>
std::vector<BasicPolynomial<Real>> scalar_basis(Family f, int T, const FitOptions& opt) {
    switch (f) {
        case Family::ED: return monomial_basis<Real>(T);
        case Family::HD: return hd_cleared_polynomials<Real>(T);
        case Family::PW: {
            if (opt.basis.size() != static_cast<std::size_t>(T)) throw ArityError("basis size differs from T");
            std::vector<BasicPolynomial<Real>> Q;
            for (const auto& q : opt.basis) Q.push_back(q.template cast<Real>());
            return Q;
        }
        default: break;
    }
    throw std::invalid_argument("not a one-parameter family");
}

template <typename Real>
bool reproduces(const DiscountModel& m, const std::vector<BasicChoicePair<Real>>& pts, std::uint32_t mask) {
    const auto w = weights<Real>(m, static_cast<int>(pts.front().x.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (prefers_weights(w, pts[i]) != static_cast<int>((mask >> i) & 1U)) return false;
    return true;
}

}  // namespace detail

/// Enumerates all 2^n labelings and searches each for a consistent model.
/// One-parameter families share a single sign partition; the beta-delta
/// families call fit_beta_delta (double only); the table family uses
/// table_witness. Every recorded witness is re-checked with prefers.
template <typename Real>
BasicShatterInstance<Real> is_shattered(const std::vector<BasicChoicePair<Real>>& points, const FamilySpec& family) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("is_shattered: empty point set");
    if (n > kMaxShatterPoints) throw std::invalid_argument("is_shattered: more than 20 points");
    const int T = static_cast<int>(points.front().x.size());
    for (const auto& p : points)
        if (p.x.size() != static_cast<std::size_t>(T) || p.y.size() != static_cast<std::size_t>(T))
            throw ArityError("is_shattered: points differ in length");

    BasicShatterInstance<Real> out;
    out.points = points;
    out.family = family;
    const std::uint32_t total = 1U << n;
    out.witnesses.resize(total);
    const Family f = family.kind;

    if (f == Family::ED || f == Family::HD || f == Family::PW) {
        const Interval domain = family_domain(f, family.fit);
        const auto Q = detail::scalar_basis<Real>(f, T, family.fit);
        std::vector<BasicPolynomial<Real>> polys;
        std::vector<std::size_t> owner;
        std::uint32_t zero_mask = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto p = diff_polynomial(Q, points[i]);
            if (p.is_zero()) {
                zero_mask |= 1U << i;
                continue;
            }
            polys.push_back(std::move(p));
            owner.push_back(i);
        }
        BasicSignPartition<Real> part;
        if (!polys.empty())
            part = sign_partition(polys, Real(domain.lo), Real(domain.hi), family.fit.tol, CollisionPolicy::Merge);
        for (std::uint32_t mask = 0; mask < total; ++mask) {
            // Identical plans tie, and ties read as label 1.
            if ((mask & zero_mask) != zero_mask) continue;
            IntervalSet region = IntervalSet::of(domain);
            if (!polys.empty()) {
                std::vector<int> labels(polys.size());
                for (std::size_t j = 0; j < polys.size(); ++j) labels[j] = static_cast<int>((mask >> owner[j]) & 1U);
                region = region_from_partition(part, polys, labels, domain);
            }
            auto parts = region.intervals();
            std::stable_sort(parts.begin(), parts.end(),
                             [](const Interval& a, const Interval& b) { return a.length() > b.length(); });
            for (const auto& iv : parts) {
                auto m = detail::scalar_model(f, iv.mid(), family.fit);
                if (detail::reproduces(m, points, mask)) {
                    out.witnesses[mask] = std::move(m);
                    break;
                }
            }
        }
    } else if (f == Family::QHD || f == Family::BPW) {
        if constexpr (std::is_same_v<Real, double>) {
            FitOptions opt = family.fit;
            std::vector<Polynomial> Q = opt.basis;
            if (f == Family::QHD) {
                Q = monomial_basis<double>(T);
                opt.pw_domain = Interval::open(0.0, 1.0);
            }
            for (std::uint32_t mask = 0; mask < total; ++mask) {
                LabeledDataset ds;
                ds.T = T;
                for (std::size_t i = 0; i < n; ++i) ds.push(points[i], static_cast<int>((mask >> i) & 1U));
                try {
                    auto rep = fit_beta_delta(Q, ds, opt);
                    DiscountModel m = rep.hypothesis;
                    if (f == Family::QHD) {
                        const auto& h = std::get<BetaPolyWeights>(m);
                        m = QuasiHyperbolic{h.beta, h.delta};
                    }
                    if (detail::reproduces(m, points, mask)) out.witnesses[mask] = std::move(m);
                } catch (const NoConsistentHypothesis&) {
                }
            }
        } else {
            throw std::invalid_argument("beta-delta shattering checks run in double precision only");
        }
    } else {
        if constexpr (std::is_same_v<Real, double>) {
            for (std::uint32_t mask = 0; mask < total; ++mask) {
                std::vector<int> labels(n);
                for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>((mask >> i) & 1U);
                DiscountModel m = table_witness(points, labels);
                if (detail::reproduces(m, points, mask)) out.witnesses[mask] = std::move(m);
            }
        } else {
            throw std::invalid_argument("table shattering checks run in double precision only");
        }
    }

    out.shattered = true;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        if (!out.witnesses[mask]) {
            out.shattered = false;
            out.first_unrealized = mask;
            break;
        }
    }
    return out;
}

/// Points (x = f^k, y = 0) whose difference polynomials are
/// P_k = prod_{flip(i) = k} (d - r_i), k = 1..n, expressed in basis Q.
/// Default roots are i / 2^n, i = 1..2^n - 1.
template <typename Real>
std::vector<BasicChoicePair<Real>> cube_walk_points(int T, const std::vector<BasicPolynomial<Real>>& Q,
                                                   std::optional<std::vector<Real>> roots = std::nullopt) {
    const int n = cube_walk_size(T);
    if (Q.size() != static_cast<std::size_t>(T)) throw ArityError("cube_walk_points: basis size differs from T");
    const auto flips = gray_code_flips(n);
    std::vector<Real> r;
    if (roots) {
        r = *roots;
        if (r.size() != flips.size()) throw std::invalid_argument("cube_walk_points: need 2^n - 1 roots");
        for (std::size_t i = 0; i < r.size(); ++i)
            if (!(r[i] > Real(0) && r[i] < Real(1)) || (i > 0 && !(r[i] > r[i - 1])))
                throw std::invalid_argument("cube_walk_points: roots must be ascending in (0, 1)");
    } else {
        const Real step = Real(1) / Real(1 << n);
        for (std::size_t i = 1; i <= flips.size(); ++i) r.push_back(step * Real(static_cast<int>(i)));
    }
    std::vector<BasicChoicePair<Real>> pts;
    for (int k = 1; k <= n; ++k) {
        std::vector<Real> mine;
        for (std::size_t i = 0; i < flips.size(); ++i)
            if (flips[i] == k) mine.push_back(r[i]);
        const auto P = from_roots(mine, Real(1));
        BasicChoicePair<Real> pair;
        pair.x = span_solve(Q, P);
        pair.y.assign(pair.x.size(), Real(0));
        pts.push_back(std::move(pair));
    }
    return pts;
}

}  // namespace timepref
