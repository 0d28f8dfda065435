#include "timepref/models.hpp"

#include <cmath>
#include <sstream>

#include "timepref/format.hpp"

namespace timepref {

namespace {

void check_open_unit(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
}

void check_basis(const std::vector<Polynomial>& Q, int max_degree) {
    if (Q.size() < 2) throw std::invalid_argument("weight basis needs at least 2 periods");
    for (const auto& q : Q)
        if (q.degree() > max_degree) throw std::invalid_argument("weight polynomial exceeds the degree cap");
}

}  // namespace

void validate_model(const DiscountModel& m, int max_degree) {
    struct V {
        int max_degree;
        void operator()(const Exponential& e) const { check_open_unit(e.delta, "delta"); }
        void operator()(const Hyperbolic& h) const {
            if (!(h.alpha > 0.0) || !std::isfinite(h.alpha)) throw std::invalid_argument("alpha must be positive");
        }
        void operator()(const QuasiHyperbolic& q) const {
            check_open_unit(q.beta, "beta");
            check_open_unit(q.delta, "delta");
        }
        void operator()(const TableDiscount& d) const {
            if (d.D.size() < 2) throw std::invalid_argument("table discount needs T >= 2");
            for (std::size_t t = 0; t < d.D.size(); ++t) {
                check_open_unit(d.D[t], "D(t)");
                if (t > 0 && !(d.D[t] < d.D[t - 1]))
                    throw std::invalid_argument("table discount must be strictly decreasing");
            }
        }
        void operator()(const PolyWeights& p) const {
            check_basis(p.Q, max_degree);
            if (!std::isfinite(p.delta)) throw std::invalid_argument("delta must be finite");
        }
        void operator()(const BetaPolyWeights& p) const {
            check_basis(p.Q, max_degree);
            check_open_unit(p.beta, "beta");
            if (!std::isfinite(p.delta)) throw std::invalid_argument("delta must be finite");
        }
    };
    std::visit(V{max_degree}, m);
}

std::optional<int> model_arity(const DiscountModel& m) {
    if (auto* d = std::get_if<TableDiscount>(&m)) return static_cast<int>(d->D.size());
    if (auto* p = std::get_if<PolyWeights>(&m)) return static_cast<int>(p->Q.size());
    if (auto* p = std::get_if<BetaPolyWeights>(&m)) return static_cast<int>(p->Q.size());
    return std::nullopt;
}

std::string describe(const DiscountModel& m) {
    std::ostringstream s;
    struct V {
        std::ostringstream& s;
        void operator()(const Exponential& e) const { s << "ed(delta=" << format_real(e.delta) << ")"; }
        void operator()(const Hyperbolic& h) const { s << "hd(alpha=" << format_real(h.alpha) << ")"; }
        void operator()(const QuasiHyperbolic& q) const {
            s << "qhd(beta=" << format_real(q.beta) << ",delta=" << format_real(q.delta) << ")";
        }
        void operator()(const TableDiscount& d) const { s << "table(D=" << format_real_list(d.D) << ")"; }
        void operator()(const PolyWeights& p) const {
            s << "pw(T=" << p.Q.size() << ",delta=" << format_real(p.delta) << ")";
        }
        void operator()(const BetaPolyWeights& p) const {
            s << "bpw(T=" << p.Q.size() << ",beta=" << format_real(p.beta) << ",delta=" << format_real(p.delta)
              << ")";
        }
    };
    std::visit(V{s}, m);
    return s.str();
}

namespace detail {

void check_arity(const DiscountModel& m, int T) {
    if (T < 1) throw ArityError("horizon must be positive");
    if (auto a = model_arity(m); a && *a != T) {
        std::ostringstream s;
        s << "model horizon " << *a << " does not match T = " << T;
        throw ArityError(s.str());
    }
}

}  // namespace detail

}  // namespace timepref
