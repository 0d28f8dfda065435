#pragma once

// Discount-model families, the choice rule and difference polynomials.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "timepref/polynomial.hpp"

namespace timepref {

class ArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <typename Real>
struct BasicChoicePair {
    std::vector<Real> x;
    std::vector<Real> y;

    std::size_t periods() const { return x.size(); }

    template <typename Other>
    BasicChoicePair<Other> cast() const {
        BasicChoicePair<Other> out;
        for (const auto& v : x) out.x.push_back(static_cast<Other>(v));
        for (const auto& v : y) out.y.push_back(static_cast<Other>(v));
        return out;
    }
};
using ChoicePair = BasicChoicePair<double>;

template <typename Real>
struct BasicLabeledDataset {
    int T = 0;
    std::vector<BasicChoicePair<Real>> pairs;
    std::vector<int> labels;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }

    void push(BasicChoicePair<Real> pair, int label) {
        if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
        if (pair.x.size() != static_cast<std::size_t>(T) || pair.y.size() != static_cast<std::size_t>(T))
            throw ArityError("choice pair length differs from dataset T");
        pairs.push_back(std::move(pair));
        labels.push_back(label);
    }

    void validate() const {
        if (pairs.size() != labels.size()) throw std::invalid_argument("pairs and labels differ in length");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("label must be 0 or 1");
            if (pairs[i].x.size() != static_cast<std::size_t>(T) || pairs[i].y.size() != static_cast<std::size_t>(T))
                throw ArityError("choice pair length differs from dataset T");
        }
    }
};
using LabeledDataset = BasicLabeledDataset<double>;

struct Exponential {
    double delta;
};
struct Hyperbolic {
    double alpha;
};
struct QuasiHyperbolic {
    double beta;
    double delta;
};
/// D(1..T), strictly decreasing inside (0, 1).
struct TableDiscount {
    std::vector<double> D;
};
struct PolyWeights {
    std::vector<Polynomial> Q;
    double delta;
};
/// Payoff sum_t Q_t(delta) x_t + (1/beta - 1) sum_t Q_t(0) x_t.
struct BetaPolyWeights {
    std::vector<Polynomial> Q;
    double beta;
    double delta;
};

using DiscountModel =
    std::variant<Exponential, Hyperbolic, QuasiHyperbolic, TableDiscount, PolyWeights, BetaPolyWeights>;

/// Throws std::invalid_argument when parameters leave their ranges or a
/// weight polynomial exceeds max_degree.
void validate_model(const DiscountModel& m, int max_degree = kMaxSturmDegree);

/// Fixed horizon for table and polynomial-weight models, nullopt otherwise.
std::optional<int> model_arity(const DiscountModel& m);

/// Short human-readable form, e.g. "ed(delta=0.3)".
std::string describe(const DiscountModel& m);

namespace detail {
void check_arity(const DiscountModel& m, int T);
}

/// Per-period weights w with payoff(x) = w . x.
template <typename Real = double>
std::vector<Real> weights(const DiscountModel& m, int T) {
    detail::check_arity(m, T);
    std::vector<Real> w(static_cast<std::size_t>(T));
    struct Visitor {
        std::vector<Real>& w;
        void operator()(const Exponential& e) const {
            Real p(1);
            for (auto& v : w) {
                v = p;
                p *= Real(e.delta);
            }
        }
        void operator()(const Hyperbolic& h) const {
            for (std::size_t t = 0; t < w.size(); ++t)
                w[t] = Real(1) / (Real(1) + Real(static_cast<int>(t + 1)) * Real(h.alpha));
        }
        void operator()(const QuasiHyperbolic& q) const {
            Real p(q.delta);
            w[0] = Real(1) / Real(q.beta);
            for (std::size_t t = 1; t < w.size(); ++t) {
                w[t] = p;
                p *= Real(q.delta);
            }
        }
        void operator()(const TableDiscount& d) const {
            for (std::size_t t = 0; t < w.size(); ++t) w[t] = Real(d.D[t]);
        }
        void operator()(const PolyWeights& p) const {
            for (std::size_t t = 0; t < w.size(); ++t) w[t] = p.Q[t].template cast<Real>()(Real(p.delta));
        }
        void operator()(const BetaPolyWeights& p) const {
            const Real shift = Real(1) / Real(p.beta) - Real(1);
            for (std::size_t t = 0; t < w.size(); ++t) {
                const auto q = p.Q[t].template cast<Real>();
                w[t] = q(Real(p.delta)) + shift * q.coeff(0);
            }
        }
    };
    std::visit(Visitor{w}, m);
    return w;
}

/// 1 iff w . x >= w . y.
template <typename Real>
int prefers_weights(const std::vector<Real>& w, const BasicChoicePair<Real>& pair) {
    if (pair.x.size() != w.size() || pair.y.size() != w.size())
        throw ArityError("choice pair length differs from the model horizon");
    Real sx(0), sy(0);
    for (std::size_t t = 0; t < w.size(); ++t) {
        sx += w[t] * pair.x[t];
        sy += w[t] * pair.y[t];
    }
    return sx >= sy ? 1 : 0;
}

template <typename Real>
int prefers(const DiscountModel& m, const BasicChoicePair<Real>& pair) {
    if (pair.x.size() != pair.y.size()) throw ArityError("choice pair plans differ in length");
    return prefers_weights(weights<Real>(m, static_cast<int>(pair.x.size())), pair);
}

/// sum_t Q_t (x_t - y_t).
template <typename Real>
BasicPolynomial<Real> diff_polynomial(const std::vector<BasicPolynomial<Real>>& Q, const BasicChoicePair<Real>& pair) {
    if (pair.x.size() != Q.size() || pair.y.size() != Q.size())
        throw ArityError("diff_polynomial: choice pair length differs from basis size");
    std::size_t len = 0;
    for (const auto& q : Q) len = std::max(len, q.coeffs().size());
    std::vector<Real> c(len, Real(0));
    for (std::size_t t = 0; t < Q.size(); ++t) {
        const Real f = pair.x[t] - pair.y[t];
        if (f == Real(0)) continue;
        const auto& qc = Q[t].coeffs();
        for (std::size_t k = 0; k < qc.size(); ++k) c[k] += qc[k] * f;
    }
    return BasicPolynomial<Real>(std::move(c));
}

/// Q_t(delta) = delta^(t-1).
template <typename Real = double>
std::vector<BasicPolynomial<Real>> monomial_basis(int T) {
    if (T < 1) throw std::invalid_argument("monomial_basis: T must be positive");
    std::vector<BasicPolynomial<Real>> Q;
    for (int t = 0; t < T; ++t) Q.push_back(BasicPolynomial<Real>::monomial(t));
    return Q;
}

/// Q_t(alpha) = prod_{l != t} (1 + l alpha): hyperbolic weights with the
/// common denominator cleared.
template <typename Real = double>
std::vector<BasicPolynomial<Real>> hd_cleared_polynomials(int T) {
    if (T < 2) throw std::invalid_argument("hd_cleared_polynomials: T must be at least 2");
    std::vector<BasicPolynomial<Real>> Q;
    for (int t = 1; t <= T; ++t) {
        BasicPolynomial<Real> q = BasicPolynomial<Real>::constant(Real(1));
        for (int l = 1; l <= T; ++l)
            if (l != t) q = q * BasicPolynomial<Real>({Real(1), Real(l)});
        Q.push_back(q);
    }
    return Q;
}

}  // namespace timepref
