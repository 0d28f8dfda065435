#pragma once

// Dense univariate polynomials over a real scalar type, Sturm root counting,
// root isolation, sign partitions of an interval and the linear solve that
// expresses a polynomial in a given basis.
//
// Everything here is templated on the scalar so the same code runs in double
// and in the extended-precision WideReal (see wide.hpp).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace timepref {

/// Leading coefficients at or below this fraction of the largest one are dropped.
inline constexpr double kTrimTol = 1e-12;
/// Default root dedup / collision tolerance for sign partitions.
inline constexpr double kRootTol = 1e-9;
/// Documented ceiling for Sturm-based routines.
inline constexpr int kMaxSturmDegree = 64;

class SingularBasisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BreakpointCollision : public std::runtime_error {
public:
    BreakpointCollision(double where, std::size_t first, std::size_t second)
        : std::runtime_error(message(where, first, second)), position(where),
          poly_a(first), poly_b(second) {}

    double position;
    std::size_t poly_a;
    std::size_t poly_b;

private:
    static std::string message(double where, std::size_t a, std::size_t b) {
        std::ostringstream s;
        s << "breakpoint collision near " << where << " between polynomials " << a
          << " and " << b << " (tighten tol)";
        return s.str();
    }
};

template <typename Real>
inline Real real_epsilon() {
    return std::numeric_limits<Real>::epsilon();
}

template <typename Real>
inline Real real_abs(const Real& x) {
    using std::abs;
    return abs(x);
}

template <typename Real>
inline double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <typename Real>
class BasicPolynomial {
public:
    using value_type = Real;

    BasicPolynomial() = default;

    explicit BasicPolynomial(std::vector<Real> coeffs, double trim_tol = kTrimTol)
        : coeffs_(std::move(coeffs)) {
        trim(trim_tol);
    }

    BasicPolynomial(std::initializer_list<Real> coeffs)
        : BasicPolynomial(std::vector<Real>(coeffs)) {}

    static BasicPolynomial constant(const Real& c) { return BasicPolynomial({c}); }

    static BasicPolynomial monomial(int k) {
        std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
        c.back() = Real(1);
        return BasicPolynomial(std::move(c));
    }

    const std::vector<Real>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Real leading() const { return coeffs_.empty() ? Real(0) : coeffs_.back(); }

    Real coeff(int k) const {
        if (k < 0 || k > degree()) return Real(0);
        return coeffs_[static_cast<std::size_t>(k)];
    }

    Real max_abs_coeff() const {
        Real m(0);
        for (const auto& c : coeffs_) m = std::max(m, real_abs(c));
        return m;
    }

    /// Horner evaluation.
    Real operator()(const Real& x) const {
        Real acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    BasicPolynomial derivative() const {
        if (degree() < 1) return {};
        std::vector<Real> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * Real(static_cast<int>(k));
        return BasicPolynomial(std::move(d), 0.0);
    }

    template <typename Other>
    BasicPolynomial<Other> cast() const {
        std::vector<Other> c;
        c.reserve(coeffs_.size());
        for (const auto& v : coeffs_) c.push_back(static_cast<Other>(v));
        return BasicPolynomial<Other>(std::move(c), 0.0);
    }

    friend BasicPolynomial operator+(const BasicPolynomial& a, const BasicPolynomial& b) {
        std::vector<Real> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Real(0));
        for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
        return BasicPolynomial(std::move(c));
    }

    friend BasicPolynomial operator-(const BasicPolynomial& a, const BasicPolynomial& b) {
        return a + b * Real(-1);
    }

    friend BasicPolynomial operator*(const BasicPolynomial& p, const Real& s) {
        std::vector<Real> c(p.coeffs_);
        for (auto& v : c) v *= s;
        return BasicPolynomial(std::move(c));
    }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Real> c(a.coeffs_.size() + b.coeffs_.size() - 1, Real(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return BasicPolynomial(std::move(c));
    }

    friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    // Relative to the largest coefficient so tiny-but-exact polynomials such
    // as a product of many roots in (0, 1) survive.
    void trim(double tol) {
        const Real bound = Real(tol) * max_abs_coeff();
        while (!coeffs_.empty() && (coeffs_.back() == Real(0) || real_abs(coeffs_.back()) <= bound))
            coeffs_.pop_back();
    }

    std::vector<Real> coeffs_;
};

using Polynomial = BasicPolynomial<double>;

/// 1 for x >= 0, 0 otherwise (ties read as 1).
template <typename Real>
inline int label_sign(const Real& x) {
    return x >= Real(0) ? 1 : 0;
}

template <typename Real>
Real eval(const BasicPolynomial<Real>& p, const Real& x) {
    return p(x);
}

/// scale * prod (x - r_i); coefficients are the signed elementary symmetric
/// sums of the roots.
template <typename Real>
BasicPolynomial<Real> from_roots(const std::vector<Real>& roots, const Real& scale) {
    if (scale == Real(0)) throw std::invalid_argument("from_roots: scale must be nonzero");
    std::vector<Real> c{scale};
    c.reserve(roots.size() + 1);
    for (const auto& r : roots) {
        c.push_back(Real(0));
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return BasicPolynomial<Real>(std::move(c), 0.0);
}

namespace detail {

template <typename Real>
void normalize_positive(std::vector<Real>& c) {
    Real m(0);
    for (const auto& v : c) m = std::max(m, real_abs(v));
    if (m > Real(0))
        for (auto& v : c) v /= m;
}

/// Remainder of a / b. Coefficients below the rounding noise of the
/// division are treated as exact zeros.
template <typename Real>
std::vector<Real> remainder(std::vector<Real> a, const std::vector<Real>& b) {
    const std::size_t db = b.size() - 1;
    Real magnitude(0);
    for (const auto& v : a) magnitude = std::max(magnitude, real_abs(v));
    const Real lead = b.back();
    while (a.size() > db && a.size() >= b.size()) {
        const Real q = a.back() / lead;
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            const Real term = q * b[i];
            magnitude = std::max(magnitude, real_abs(term));
            a[shift + i] -= term;
        }
        a.pop_back();
    }
    const Real noise = Real(64 * static_cast<int>(b.size())) * real_epsilon<Real>() * magnitude;
    while (!a.empty() && real_abs(a.back()) <= noise) a.pop_back();
    return a;
}

template <typename Real>
int sign_changes(const std::vector<std::vector<Real>>& seq, const Real& x) {
    int changes = 0;
    int last = 0;
    for (const auto& c : seq) {
        Real v(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
        const int s = v > Real(0) ? 1 : (v < Real(0) ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

template <typename Real>
void check_interval(const BasicPolynomial<Real>& p, const Real& a, const Real& b) {
    if (p.is_zero()) throw std::invalid_argument("root counting on the zero polynomial");
    if (!(a < b)) throw std::invalid_argument("root counting needs a < b");
    if (p.degree() > kMaxSturmDegree)
        throw std::invalid_argument("polynomial degree exceeds the Sturm degree cap");
}

}  // namespace detail

/// Sturm chain with every member rescaled to unit max-coefficient. Positive
/// rescaling keeps sign-change counts intact and stops coefficient blow-up.
template <typename Real>
class SturmSequence {
public:
    explicit SturmSequence(const BasicPolynomial<Real>& p) {
        if (p.is_zero()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
        std::vector<Real> p0 = p.coeffs();
        detail::normalize_positive(p0);
        seq_.push_back(p0);
        if (p.degree() < 1) return;
        std::vector<Real> p1 = p.derivative().coeffs();
        detail::normalize_positive(p1);
        seq_.push_back(p1);
        while (seq_.back().size() > 1) {
            auto r = detail::remainder(seq_[seq_.size() - 2], seq_.back());
            if (r.empty()) break;
            for (auto& v : r) v = -v;
            detail::normalize_positive(r);
            seq_.push_back(std::move(r));
        }
    }

    int variations(const Real& x) const { return detail::sign_changes(seq_, x); }

    /// Distinct roots in (a, b].
    int count(const Real& a, const Real& b) const { return variations(a) - variations(b); }

    std::size_t length() const { return seq_.size(); }

private:
    std::vector<std::vector<Real>> seq_;
};

/// Number of distinct real roots in (a, b].
template <typename Real>
int count_roots_in(const BasicPolynomial<Real>& p, const Real& a, const Real& b) {
    detail::check_interval(p, a, b);
    if (p.degree() == 0) return 0;
    SturmSequence<Real> s(p);
    return s.count(a, b);
}

namespace detail {

template <typename Real>
Real refine_by_sign(const BasicPolynomial<Real>& p, Real lo, Real hi, const Real& tol) {
    Real plo = p(lo);
    while (hi - lo > tol) {
        const Real mid = (lo + hi) / Real(2);
        if (mid <= lo || mid >= hi) break;
        const Real pm = p(mid);
        if (pm == Real(0)) return mid;
        if ((pm > Real(0)) == (plo > Real(0))) {
            lo = mid;
            plo = pm;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / Real(2);
}

template <typename Real>
void isolate_rec(const BasicPolynomial<Real>& p, const SturmSequence<Real>& s, Real lo, Real hi,
                 int vlo, int vhi, const Real& tol, std::vector<Real>& out) {
    const int count = vlo - vhi;
    if (count <= 0) return;
    const Real plo = p(lo);
    const Real phi = p(hi);
    if (count == 1 && plo != Real(0) && phi != Real(0) && ((plo > Real(0)) != (phi > Real(0)))) {
        out.push_back(refine_by_sign(p, lo, hi, tol));
        return;
    }
    const Real mid = (lo + hi) / Real(2);
    if (hi - lo <= tol || mid <= lo || mid >= hi) {
        // Roots closer than tol collapse to one representative.
        out.push_back(mid);
        return;
    }
    const int vmid = s.variations(mid);
    isolate_rec(p, s, lo, mid, vlo, vmid, tol, out);
    isolate_rec(p, s, mid, hi, vmid, vhi, tol, out);
}

}  // namespace detail

/// One approximation (within tol) per distinct root in the open interval
/// (a, b), ascending.
template <typename Real>
std::vector<Real> isolate_roots_in(const BasicPolynomial<Real>& p, const Real& a, const Real& b,
                                   const Real& tol) {
    detail::check_interval(p, a, b);
    if (!(tol > Real(0))) throw std::invalid_argument("isolate_roots_in: tol must be positive");
    std::vector<Real> out;
    if (p.degree() == 0) return out;
    SturmSequence<Real> s(p);
    detail::isolate_rec(p, s, a, b, s.variations(a), s.variations(b), tol, out);
    // (a, b] counting may report a root sitting exactly on b.
    if (p(b) == Real(0) && !out.empty() && out.back() >= b - tol) out.pop_back();
    std::vector<Real> strict;
    for (const auto& r : out)
        if (strict.empty() || r > strict.back()) strict.push_back(r);
    return strict;
}

enum class CollisionPolicy {
    Throw,  ///< roots of different polynomials within tol raise BreakpointCollision
    Merge,  ///< such roots are treated as one shared breakpoint
};

template <typename Real>
struct BasicSignPartition {
    Real lo{};
    Real hi{};
    std::vector<Real> breakpoints;
    /// Indices of the polynomials vanishing at each breakpoint.
    std::vector<std::vector<std::size_t>> vanishing;
    /// cell_signs[i][j]: label sign of polynomial j on cell i.
    std::vector<std::vector<std::uint8_t>> cell_signs;

    std::size_t cells() const { return cell_signs.size(); }
    Real cell_lo(std::size_t i) const { return i == 0 ? lo : breakpoints[i - 1]; }
    Real cell_hi(std::size_t i) const { return i == breakpoints.size() ? hi : breakpoints[i]; }
    Real cell_mid(std::size_t i) const { return (cell_lo(i) + cell_hi(i)) / Real(2); }
};

using SignPartition = BasicSignPartition<double>;

/// Partitions (a, b) at the merged roots of all inputs and records every
/// polynomial's label sign on each cell. Breakpoints where no sign changes
/// are dropped.
template <typename Real>
BasicSignPartition<Real> sign_partition(const std::vector<BasicPolynomial<Real>>& polys, const Real& a,
                                        const Real& b, double tol = kRootTol,
                                        CollisionPolicy policy = CollisionPolicy::Throw) {
    if (!(a < b)) throw std::invalid_argument("sign_partition needs a < b");
    struct Root {
        Real x;
        std::size_t owner;
    };
    std::vector<Root> roots;
    const Real iso_tol = Real(tol) / Real(1000);
    for (std::size_t j = 0; j < polys.size(); ++j) {
        if (polys[j].is_zero()) throw std::invalid_argument("sign_partition: identically zero polynomial");
        for (auto& r : isolate_roots_in(polys[j], a, b, iso_tol)) roots.push_back({r, j});
    }
    std::sort(roots.begin(), roots.end(), [](const Root& l, const Root& r) { return l.x < r.x; });

    BasicSignPartition<Real> part;
    part.lo = a;
    part.hi = b;
    std::vector<Real> bps;
    std::vector<std::vector<std::size_t>> owners;
    for (std::size_t i = 0; i < roots.size();) {
        std::size_t k = i + 1;
        Real sum = roots[i].x;
        std::vector<std::size_t> who{roots[i].owner};
        while (k < roots.size() && roots[k].x - roots[k - 1].x <= Real(tol)) {
            if (std::find(who.begin(), who.end(), roots[k].owner) == who.end()) {
                if (policy == CollisionPolicy::Throw)
                    throw BreakpointCollision(to_double(roots[k].x), who.front(), roots[k].owner);
                who.push_back(roots[k].owner);
            }
            sum += roots[k].x;
            ++k;
        }
        bps.push_back(sum / Real(static_cast<int>(k - i)));
        std::sort(who.begin(), who.end());
        owners.push_back(std::move(who));
        i = k;
    }

    auto signs_at = [&](const Real& x) {
        std::vector<std::uint8_t> s(polys.size());
        for (std::size_t j = 0; j < polys.size(); ++j) s[j] = static_cast<std::uint8_t>(label_sign(polys[j](x)));
        return s;
    };

    std::vector<std::vector<std::uint8_t>> cells;
    for (std::size_t i = 0; i <= bps.size(); ++i) {
        const Real lo = i == 0 ? a : bps[i - 1];
        const Real hi = i == bps.size() ? b : bps[i];
        cells.push_back(signs_at((lo + hi) / Real(2)));
    }

    part.cell_signs.push_back(cells.front());
    for (std::size_t i = 0; i < bps.size(); ++i) {
        if (cells[i + 1] == part.cell_signs.back()) continue;
        part.breakpoints.push_back(bps[i]);
        part.vanishing.push_back(owners[i]);
        part.cell_signs.push_back(cells[i + 1]);
    }
    return part;
}

template <typename Real>
struct SpanSolveResult {
    std::vector<Real> weights;
    double condition = 0.0;   ///< 1-norm condition number of the equilibrated system
    double residual = 0.0;    ///< max coefficient residual relative to max |P|
};

/// Finds f with sum_t f_t Q_t == P coefficient-wise. Throws SingularBasisError
/// when the Q_t do not span (pivot breakdown or condition estimate above
/// cond_limit). cond_limit <= 0 selects 1e-3 / epsilon.
template <typename Real>
SpanSolveResult<Real> span_solve_report(const std::vector<BasicPolynomial<Real>>& basis,
                                        const BasicPolynomial<Real>& target, double cond_limit = 0.0) {
    const std::size_t n = basis.size();
    if (n == 0) throw std::invalid_argument("span_solve: empty basis");
    const int max_deg = static_cast<int>(n) - 1;
    if (target.degree() > max_deg) throw std::invalid_argument("span_solve: target degree exceeds T-1");
    for (const auto& q : basis)
        if (q.degree() > max_deg) throw std::invalid_argument("span_solve: basis degree exceeds T-1");

    // a[k][t] = coefficient k of Q_t, equilibrated by rows then columns.
    std::vector<std::vector<Real>> a(n, std::vector<Real>(n, Real(0)));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t k = 0; k < n; ++k) a[k][t] = basis[t].coeff(static_cast<int>(k));
    std::vector<Real> row_scale(n, Real(1)), col_scale(n, Real(1));
    for (std::size_t k = 0; k < n; ++k) {
        Real m(0);
        for (std::size_t t = 0; t < n; ++t) m = std::max(m, real_abs(a[k][t]));
        if (m == Real(0)) throw SingularBasisError("span_solve: basis misses a power of the variable");
        row_scale[k] = Real(1) / m;
        for (std::size_t t = 0; t < n; ++t) a[k][t] *= row_scale[k];
    }
    for (std::size_t t = 0; t < n; ++t) {
        Real m(0);
        for (std::size_t k = 0; k < n; ++k) m = std::max(m, real_abs(a[k][t]));
        if (m == Real(0)) throw SingularBasisError("span_solve: zero basis polynomial");
        col_scale[t] = Real(1) / m;
        for (std::size_t k = 0; k < n; ++k) a[k][t] *= col_scale[t];
    }
    Real norm_a(0);
    for (std::size_t t = 0; t < n; ++t) {
        Real s(0);
        for (std::size_t k = 0; k < n; ++k) s += real_abs(a[k][t]);
        norm_a = std::max(norm_a, s);
    }

    // LU with partial pivoting, keeping the factors for the inverse.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    auto lu = a;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (real_abs(lu[r][c]) > real_abs(lu[piv][c])) piv = r;
        if (lu[piv][c] == Real(0)) throw SingularBasisError("span_solve: basis polynomials are linearly dependent");
        std::swap(lu[piv], lu[c]);
        std::swap(perm[piv], perm[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            lu[r][c] /= lu[c][c];
            const Real f = lu[r][c];
            if (f == Real(0)) continue;
            for (std::size_t k = c + 1; k < n; ++k) lu[r][k] -= f * lu[c][k];
        }
    }
    auto lu_solve = [&](const std::vector<Real>& rhs) {
        std::vector<Real> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Real s = rhs[perm[i]];
            for (std::size_t k = 0; k < i; ++k) s -= lu[i][k] * y[k];
            y[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            Real s = y[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= lu[i][k] * y[k];
            y[i] = s / lu[i][i];
        }
        return y;
    };

    Real norm_inv(0);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Real> e(n, Real(0));
        e[c] = Real(1);
        const auto col = lu_solve(e);
        Real s(0);
        for (const auto& v : col) s += real_abs(v);
        norm_inv = std::max(norm_inv, s);
    }
    const Real cond = norm_a * norm_inv;
    const double limit = cond_limit > 0.0 ? cond_limit : 1e-3 / to_double(real_epsilon<Real>());
    if (!(cond <= Real(limit))) {
        std::ostringstream s;
        s << "span_solve: basis is ill-conditioned (condition " << to_double(cond) << ")";
        throw SingularBasisError(s.str());
    }

    std::vector<Real> rhs(n);
    for (std::size_t k = 0; k < n; ++k) rhs[k] = target.coeff(static_cast<int>(k)) * row_scale[k];
    auto y = lu_solve(rhs);
    SpanSolveResult<Real> out;
    out.weights.resize(n);
    for (std::size_t t = 0; t < n; ++t) out.weights[t] = y[t] * col_scale[t];

    Real worst(0);
    for (std::size_t k = 0; k < n; ++k) {
        Real s(0);
        for (std::size_t t = 0; t < n; ++t) s += out.weights[t] * basis[t].coeff(static_cast<int>(k));
        worst = std::max(worst, real_abs(s - target.coeff(static_cast<int>(k))));
    }
    const Real scale = std::max(Real(1), target.max_abs_coeff());
    out.condition = to_double(cond);
    out.residual = to_double(worst / scale);
    return out;
}

template <typename Real>
std::vector<Real> span_solve(const std::vector<BasicPolynomial<Real>>& basis, const BasicPolynomial<Real>& target,
                             double cond_limit = 0.0) {
    return span_solve_report(basis, target, cond_limit).weights;
}

}  // namespace timepref
