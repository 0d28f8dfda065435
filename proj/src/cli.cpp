#include "timepref/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "timepref/active.hpp"
#include "timepref/datagen.hpp"
#include "timepref/format.hpp"
#include "timepref/mq.hpp"
#include "timepref/pac.hpp"
#include "timepref/parallel.hpp"
#include "timepref/vcdim.hpp"
#include "timepref/wide.hpp"

namespace timepref {

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["command"] = c.command;
    if (c.family) j["family"] = *c.family;
    if (!c.T.empty()) j["T"] = c.T;
    if (c.delta) j["delta"] = *c.delta;
    if (c.alpha) j["alpha"] = *c.alpha;
    if (c.beta) j["beta"] = *c.beta;
    if (c.dist) j["dist"] = *c.dist;
    if (!c.grid.empty()) j["grid"] = c.grid;
    if (!c.sizes.empty()) j["sizes"] = c.sizes;
    if (c.trials) j["trials"] = *c.trials;
    if (!c.eps.empty()) j["eps"] = c.eps;
    j["seed"] = c.seed;
    j["out"] = c.out;
    if (!c.options.empty()) j["options"] = c.options;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig c;
    try {
        if (!j.contains("command") || !j.at("command").is_string())
            throw std::invalid_argument("config needs a string \"command\"");
        c.command = j.at("command").get<std::string>();
        if (j.contains("family")) c.family = j.at("family").get<std::string>();
        if (j.contains("T")) c.T = j.at("T").get<std::vector<int>>();
        if (j.contains("delta")) c.delta = j.at("delta").get<double>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("beta")) c.beta = j.at("beta").get<double>();
        if (j.contains("dist")) c.dist = j.at("dist").get<std::string>();
        if (j.contains("grid")) c.grid = j.at("grid").get<std::vector<double>>();
        if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::uint64_t>>();
        if (j.contains("trials")) c.trials = j.at("trials").get<int>();
        if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("options")) {
            if (!j.at("options").is_object()) throw std::invalid_argument("config \"options\" must be an object");
            c.options = j.at("options");
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed config: ") + e.what());
    }
    return c;
}

std::string config_header(const ExperimentConfig& c) { return "# " + config_to_json(c).dump(); }

ExperimentConfig config_from_header(const std::string& line) {
    if (line.rfind("# ", 0) != 0) throw std::invalid_argument("header line must start with \"# \"");
    try {
        return config_from_json(nlohmann::json::parse(line.substr(2)));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("header is not JSON: ") + e.what());
    }
}

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Opts {
    std::uint64_t seed = 0;
    std::string out = "-";
    int jobs = 1;

    std::string family;
    std::vector<int> T;
    double delta = kUnset;
    double alpha = kUnset;
    double beta = kUnset;
    std::string dist = "mu";
    double sigma = 1.0;
    std::uint64_t n = 0;

    std::string in;
    double alpha_max = 16.0;
    double u_max = 1e3;

    std::vector<std::uint64_t> sizes;
    int trials = 0;
    double eps_test = 0.01;

    std::vector<double> eps;
    double conf = 0.1;
    double d = 1.0;
    double theta = 2.0;

    std::string construct;
    std::string basis = "both";
    bool check = false;
    std::string precision = "wide";

    double gamma = kUnset;
    int triples = 20;
    std::uint64_t samples = 0;
    std::vector<double> grid;

    std::uint64_t max_points = 1000000;
    std::string stop = "region";

    double truth = kUnset;
    double rho = 1.0;
    double A = 4.0;
};

bool set(double v) { return !std::isnan(v); }

std::string csv_bool(bool b) { return b ? "true" : "false"; }

int single_T(const Opts& o, int fallback = 0) {
    if (o.T.empty()) {
        if (fallback > 0) return fallback;
        throw UsageError("--T is required");
    }
    if (o.T.size() != 1) throw UsageError("this command takes a single --T");
    if (o.T.front() < 2) throw UsageError("--T must be at least 2");
    return o.T.front();
}

DiscountModel truth_model(Family f, const Opts& o, ExperimentConfig& cfg) {
    DiscountModel m = Exponential{0.5};
    switch (f) {
        case Family::ED:
            if (!set(o.delta)) throw UsageError("family ed needs --delta");
            m = Exponential{o.delta};
            cfg.delta = o.delta;
            break;
        case Family::HD:
            if (!set(o.alpha)) throw UsageError("family hd needs --alpha");
            m = Hyperbolic{o.alpha};
            cfg.alpha = o.alpha;
            break;
        case Family::QHD:
            if (!set(o.beta) || !set(o.delta)) throw UsageError("family qhd needs --beta and --delta");
            m = QuasiHyperbolic{o.beta, o.delta};
            cfg.beta = o.beta;
            cfg.delta = o.delta;
            break;
        default: throw UsageError("family must be ed, hd or qhd here");
    }
    try {
        validate_model(m);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return m;
}

Family family_arg(const std::string& s) {
    try {
        return parse_family(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

DistributionSpec dist_arg(const Opts& o, int T, ExperimentConfig& cfg) {
    cfg.dist = o.dist;
    if (o.dist == "mu") return MuRootUniform{T};
    if (o.dist == "gauss") {
        if (!(o.sigma > 0.0)) throw UsageError("--sigma must be positive");
        cfg.options["sigma"] = o.sigma;
        return GaussianPairs{T, o.sigma};
    }
    throw UsageError("--dist must be mu or gauss");
}

std::vector<double> eps_list(const Opts& o, std::vector<double> fallback) {
    auto e = o.eps.empty() ? std::move(fallback) : o.eps;
    for (double v : e)
        if (!(v > 0.0 && v < 1.0)) throw UsageError("--eps values must lie in (0, 1)");
    return e;
}

ExperimentConfig base_config(const std::string& command, const Opts& o) {
    ExperimentConfig c;
    c.command = command;
    c.seed = o.seed;
    c.out = o.out;
    return c;
}

void cmd_gen_data(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    const Family f = family_arg(o.family.empty() ? "ed" : o.family);
    cfg.family = family_name(f);
    const int T = single_T(o);
    cfg.T = {T};
    const auto truth = truth_model(f, o, cfg);
    const auto dist = dist_arg(o, T, cfg);
    cfg.options["n"] = o.n;
    Rng rng(o.seed, 0);
    const auto ds = label_dataset(truth, sample_pairs(dist, o.n, rng));
    LabeledDataset out = ds;
    out.T = T;
    write_dataset(body, DatasetHeader{T, o.seed, dist_name(dist)}, out);
}

nlohmann::json model_params(const DiscountModel& m) {
    nlohmann::json j;
    if (auto* e = std::get_if<Exponential>(&m)) j["delta"] = e->delta;
    if (auto* h = std::get_if<Hyperbolic>(&m)) j["alpha"] = h->alpha;
    if (auto* q = std::get_if<QuasiHyperbolic>(&m)) {
        j["beta"] = q->beta;
        j["delta"] = q->delta;
    }
    if (auto* p = std::get_if<PolyWeights>(&m)) j["delta"] = p->delta;
    if (auto* p = std::get_if<BetaPolyWeights>(&m)) {
        j["beta"] = p->beta;
        j["delta"] = p->delta;
    }
    return j;
}

void cmd_pac_fit(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    if (o.in.empty()) throw UsageError("pac-fit needs --in <dataset.jsonl>");
    if (o.family.empty()) throw UsageError("pac-fit needs --family");
    const Family f = family_arg(o.family);
    if (f != Family::ED && f != Family::HD && f != Family::QHD) throw UsageError("pac-fit supports ed, hd and qhd");
    cfg.family = family_name(f);
    cfg.options["in"] = o.in;
    cfg.options["alpha_max"] = o.alpha_max;
    cfg.options["u_max"] = o.u_max;
    std::ifstream file(o.in);
    if (!file) throw std::runtime_error("cannot open " + o.in);
    const auto data = read_dataset(file);
    cfg.T = {data.header.T};
    FitOptions fo;
    fo.alpha_max = o.alpha_max;
    fo.u_max = o.u_max;
    const auto rep = fit_family(f, data.data, fo);
    nlohmann::json j;
    j["family"] = family_name(f);
    j["T"] = data.header.T;
    j["n"] = data.data.size();
    j["hypothesis"] = describe(rep.hypothesis);
    j["params"] = model_params(rep.hypothesis);
    j["region"] = rep.consistent_region.to_string();
    j["region_length"] = rep.consistent_region.total_length();
    j["training_error"] = rep.training_error;
    j["cells_examined"] = rep.cells_examined;
    body << j.dump() << '\n';
}

void cmd_learning_curve(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    const Family f = family_arg(o.family.empty() ? "ed" : o.family);
    cfg.family = family_name(f);
    const int T = single_T(o);
    cfg.T = {T};
    LearningCurveSpec spec;
    spec.family = f;
    spec.T = T;
    spec.truth = truth_model(f, o, cfg);
    spec.dist = dist_arg(o, T, cfg);
    spec.sizes = o.sizes.empty() ? std::vector<std::size_t>{0, 10, 100, 1000}
                                 : std::vector<std::size_t>(o.sizes.begin(), o.sizes.end());
    spec.trials = o.trials > 0 ? o.trials : 10;
    if (!(o.eps_test > 0.0 && o.eps_test < 1.0)) throw UsageError("--eps-test must lie in (0, 1)");
    spec.eps_test = o.eps_test;
    spec.seed = o.seed;
    spec.jobs = o.jobs;
    spec.fit.alpha_max = o.alpha_max;
    spec.fit.u_max = o.u_max;
    cfg.sizes.assign(spec.sizes.begin(), spec.sizes.end());
    cfg.trials = spec.trials;
    cfg.options["eps_test"] = spec.eps_test;
    const auto recs = learning_curve(spec);
    body << "family,T,dist,size,trial,err,seed\n";
    for (const auto& r : recs)
        body << family_name(f) << ',' << T << ',' << *cfg.dist << ',' << r.size << ',' << r.trial << ','
             << format_real(r.err) << ',' << o.seed << '\n';
}

void cmd_bounds(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    cfg.eps = eps_list(o, {0.1, 0.05, 0.01});
    cfg.options["conf"] = o.conf;
    cfg.options["d"] = o.d;
    cfg.options["convention"] = "O-constant 1, base-2 logs; reference curves, not certified sample sizes";
    body << "eps,conf,d,blumer,hanneke\n";
    for (double e : cfg.eps)
        body << format_real(e) << ',' << format_real(o.conf) << ',' << format_real(o.d) << ','
             << format_real(blumer_bound(e, o.conf, o.d)) << ',' << format_real(hanneke_bound(e, o.conf, o.d)) << '\n';
}

void cmd_shatter(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    cfg.options["check"] = o.check;
    if (o.construct.empty()) {
        if (!o.check || o.in.empty()) throw UsageError("shatter needs --construct prop1|thm3, or --check with --in");
        if (o.family.empty()) throw UsageError("shatter --check --in needs --family");
        const Family f = family_arg(o.family);
        cfg.family = family_name(f);
        cfg.options["in"] = o.in;
        std::ifstream file(o.in);
        if (!file) throw std::runtime_error("cannot open " + o.in);
        const auto data = read_dataset(file);
        cfg.T = {data.header.T};
        const auto t0 = std::chrono::steady_clock::now();
        FamilySpec fam;
        fam.kind = f;
        fam.fit.alpha_max = o.alpha_max;
        fam.fit.u_max = o.u_max;
        const auto res = is_shattered<double>(data.data.pairs, fam);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        body << "T,family,n,shattered,seconds\n";
        body << data.header.T << ',' << family_name(f) << ',' << data.data.size() << ',' << csv_bool(res.shattered)
             << ',' << format_real(secs) << '\n';
        body << "# shattered=" << csv_bool(res.shattered) << ", n=" << data.data.size() << '\n';
        return;
    }
    cfg.options["construct"] = o.construct;
    if (o.construct == "prop1") {
        const auto eps = eps_list(o, {0.1});
        if (eps.size() != 1) throw UsageError("prop1 takes a single --eps");
        cfg.eps = eps;
        cfg.family = "table";
        cfg.T = o.T.empty() ? std::vector<int>{12} : o.T;
        if (!o.check) {
            for (int T : cfg.T) {
                const auto pts = table_chain_points(T, eps[0]);
                for (std::size_t k = 0; k < pts.size(); ++k)
                    body << "{\"T\":" << T << ",\"k\":" << k + 1 << ",\"x\":" << format_real_list(pts[k].x)
                         << ",\"y\":" << format_real_list(pts[k].y) << "}\n";
            }
            return;
        }
        body << "T,family,n,shattered,seconds\n";
        bool all = true;
        std::string ns;
        for (int T : cfg.T) {
            if (T < 2 || T > 21) throw UsageError("prop1 --T must lie in [2, 21]");
            const auto c = check_table_chain(T, eps[0]);
            all = all && c.shattered;
            ns += (ns.empty() ? "" : ",") + std::to_string(c.n);
            body << c.T << ',' << c.family << ',' << c.n << ',' << csv_bool(c.shattered) << ','
                 << format_real(c.seconds) << '\n';
        }
        body << "# shattered=" << csv_bool(all) << ", n=" << ns << '\n';
        return;
    }
    if (o.construct != "thm3") throw UsageError("--construct must be prop1 or thm3");
    cfg.T = o.T.empty() ? std::vector<int>{3, 5, 9, 17, 33, 65} : o.T;
    for (int T : cfg.T)
        if (T < 3 || T > 65) throw UsageError("thm3 --T must lie in [3, 65]");
    std::vector<WalkBasis> bases;
    if (o.basis == "monomial" || o.basis == "both") bases.push_back(WalkBasis::Monomial);
    if (o.basis == "hd" || o.basis == "both") bases.push_back(WalkBasis::HdCleared);
    if (bases.empty()) throw UsageError("--basis must be monomial, hd or both");
    if (o.precision != "wide" && o.precision != "double") throw UsageError("--precision must be wide or double");
    cfg.options["basis"] = o.basis;
    cfg.options["precision"] = o.precision;
    if (!o.check) {
        for (int T : cfg.T)
            for (auto b : bases) {
                const auto Q = b == WalkBasis::Monomial ? monomial_basis<WideReal>(T) : hd_cleared_polynomials<WideReal>(T);
                const auto pts = cube_walk_points<WideReal>(T, Q);
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    std::vector<double> x;
                    for (const auto& v : pts[k].x) x.push_back(to_double(v));
                    body << "{\"T\":" << T << ",\"basis\":\"" << (b == WalkBasis::Monomial ? "monomial" : "hd")
                         << "\",\"k\":" << k + 1 << ",\"x\":" << format_real_list(x)
                         << ",\"y\":" << format_real_list(std::vector<double>(x.size(), 0.0)) << "}\n";
                }
            }
        return;
    }
    const Precision prec = o.precision == "wide" ? Precision::Wide : Precision::Double;
    body << "T,family,n,shattered,seconds\n";
    bool all = true;
    std::string ns;
    for (int T : cfg.T)
        for (auto b : bases) {
            const auto c = check_cube_walk(T, b, prec);
            all = all && c.shattered;
            ns += (ns.empty() ? "" : ",") + std::to_string(c.n);
            body << c.T << ',' << c.family << ',' << c.n << ',' << csv_bool(c.shattered) << ','
                 << format_real(c.seconds) << '\n';
        }
    body << "# shattered=" << csv_bool(all) << ", n=" << ns << '\n';
}

void cmd_parity_check(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    const std::uint64_t N = o.samples > 0 ? o.samples : 100000;
    cfg.options["samples"] = N;
    struct Triple {
        int T;
        double delta, gamma;
    };
    std::vector<Triple> triples;
    if (set(o.gamma)) {
        if (!set(o.delta)) throw UsageError("--gamma needs --delta");
        const int T = single_T(o);
        cfg.T = {T};
        cfg.delta = o.delta;
        cfg.options["gamma"] = o.gamma;
        triples.push_back({T, o.delta, o.gamma});
    } else {
        if (o.triples < 1) throw UsageError("--triples must be positive");
        cfg.options["triples"] = o.triples;
        Rng rng(o.seed, 0);
        for (int i = 0; i < o.triples; ++i) {
            Triple t;
            t.T = 2 + static_cast<int>(rng.below(7));
            t.delta = rng.uniform01();
            t.gamma = rng.uniform01();
            triples.push_back(t);
        }
    }
    body << "T,delta,gamma,dist,analytic,mc,stderr,z\n";
    int within = 0;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        const double dist = std::abs(t.delta - t.gamma);
        const double p = parity_prob(dist, t.T);
        const auto e = estimate_parity_mc(t.delta, t.gamma, t.T, N, derive_seed(o.seed, i + 1), o.jobs);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(N));
        const double z = se > 0.0 ? (e.estimate - p) / se : (e.estimate == p ? 0.0 : INFINITY);
        within += std::abs(z) <= 3.0;
        body << t.T << ',' << format_real(t.delta) << ',' << format_real(t.gamma) << ',' << format_real(dist) << ','
             << format_real(p) << ',' << format_real(e.estimate) << ',' << format_real(se) << ','
             << (std::isfinite(z) ? format_real(z) : "inf") << '\n';
    }
    body << "# within_3se=" << within << '/' << triples.size() << '\n';
}

void cmd_theta(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    cfg.T = o.T.empty() ? std::vector<int>{4} : o.T;
    const double delta = set(o.delta) ? o.delta : 0.5;
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
    cfg.delta = delta;
    cfg.grid = o.grid.empty() ? default_R_grid() : o.grid;
    for (double R : cfg.grid)
        if (!(R > 0.0 && R <= 0.5)) throw UsageError("--grid values must lie in (0, 0.5]");
    const std::uint64_t N = o.samples > 0 ? o.samples : 1000000;
    cfg.options["samples"] = N;
    body << "T,delta,R,mass,stderr,ratio\n";
    std::ostringstream tail;
    for (int T : cfg.T) {
        if (T < 2) throw UsageError("--T must be at least 2");
        const auto rep = estimate_theta(delta, T, cfg.grid, N, o.seed, o.jobs);
        for (std::size_t i = 0; i < rep.R_grid.size(); ++i)
            body << T << ',' << format_real(delta) << ',' << format_real(rep.R_grid[i]) << ','
                 << format_real(rep.mass_estimates[i]) << ',' << format_real(rep.standard_errors[i]) << ','
                 << format_real(rep.ratios[i]) << '\n';
        tail << "# T=" << T << " ratio_sup=" << format_real(rep.ratio_sup) << " argmax_R=" << format_real(rep.argmax_R)
             << " tail_sup=" << format_real(rep.tail_sup) << " theta=" << format_real(rep.theta) << '\n';
    }
    body << tail.str();
}

void cmd_cal(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    const int T = single_T(o, 5);
    cfg.T = {T};
    const double delta = set(o.delta) ? o.delta : 0.3;
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
    cfg.delta = delta;
    cfg.eps = eps_list(o, {0.1, 0.01, 0.001});
    cfg.trials = o.trials > 0 ? o.trials : 1;
    if (o.stop != "region" && o.stop != "mass" && o.stop != "length")
        throw UsageError("--stop must be region, mass or length");
    cfg.options["stop"] = o.stop;
    cfg.options["max_points"] = o.max_points;
    CalOptions base;
    base.max_points = o.max_points;
    base.stop = o.stop == "region" ? CalStop::RegionMass
                : o.stop == "mass"   ? CalStop::ConvertedMass
                                     : CalStop::Length;
    const std::size_t trials = static_cast<std::size_t>(*cfg.trials);
    const std::size_t tasks = cfg.eps.size() * trials;
    struct Row {
        CalResult res;
        double err = 0.0;
    };
    std::vector<Row> rows(tasks);
    const Rng root(o.seed, 0);
    parallel_for(tasks, o.jobs, [&](std::size_t task) {
        Rng rng = root.substream(task);
        CalOptions opt = base;
        opt.eps = cfg.eps[task / trials];
        rows[task].res = cal_run(delta, T, opt, rng);
        const auto test = sample_pairs(MuRootUniform{T}, 10 * static_cast<std::size_t>(std::ceil(1.0 / opt.eps)), rng);
        rows[task].err = disagreement_rate(Exponential{rows[task].res.hypothesis}, Exponential{delta}, test);
    });
    body << "T,true_delta,eps,points_seen,labels_used,err,seed\n";
    for (std::size_t task = 0; task < tasks; ++task) {
        const auto& r = rows[task];
        body << T << ',' << format_real(delta) << ',' << format_real(cfg.eps[task / trials]) << ','
             << r.res.state.points_seen << ',' << r.res.state.labels_used << ',' << format_real(r.err) << ',' << o.seed
             << '\n';
    }
}

void cmd_cal_bound(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    cfg.eps = eps_list(o, {0.1, 0.01, 0.001, 0.0001});
    cfg.options["conf"] = o.conf;
    cfg.options["d"] = o.d;
    cfg.options["theta"] = o.theta;
    cfg.options["convention"] = "O-constant 1, base-2 logs, log2(theta) floored at 1";
    body << "eps,conf,d,theta,cal_bound\n";
    for (double e : cfg.eps)
        body << format_real(e) << ',' << format_real(o.conf) << ',' << format_real(o.d) << ',' << format_real(o.theta)
             << ',' << format_real(cal_bound(e, o.conf, o.d, o.theta)) << '\n';
}

void cmd_mq(const Opts& o, ExperimentConfig& cfg, std::ostream& body) {
    const Family f = family_arg(o.family.empty() ? "ed" : o.family);
    if (f != Family::ED && f != Family::HD) throw UsageError("mq supports families ed and hd");
    cfg.family = family_name(f);
    const MqAdapter adapter = f == Family::ED ? ed_adapter() : hd_adapter(o.A);
    if (f == Family::HD) cfg.options["A"] = o.A;
    if (!(o.rho > 0.0)) throw UsageError("--rho must be positive");
    cfg.options["rho"] = o.rho;
    cfg.eps = o.eps.empty() ? std::vector<double>{1e-3} : o.eps;
    for (double e : cfg.eps)
        if (!(e > 0.0)) throw UsageError("--eps values must be positive");
    if (set(o.truth)) {
        if (!adapter.param_domain.contains(o.truth)) throw UsageError("--truth lies outside the family domain");
        cfg.options["truth"] = o.truth;
    }
    cfg.trials = o.trials > 0 ? o.trials : (set(o.truth) ? 1 : 1000);
    const std::size_t trials = static_cast<std::size_t>(*cfg.trials);
    body << "family,truth,eps,param_h,abs_err,queries,seed\n";
    const Rng root(o.seed, 0);
    double worst = 0.0;
    std::uint64_t most = 0, budget = 0;
    for (std::size_t ei = 0; ei < cfg.eps.size(); ++ei) {
        const double eps = cfg.eps[ei];
        budget = std::max(budget, mq_query_budget(adapter, eps));
        for (std::size_t t = 0; t < trials; ++t) {
            double truth = o.truth;
            if (!set(truth)) {
                Rng rng = root.substream(ei * trials + t);
                truth = adapter.param_domain.lo + adapter.param_domain.length() * rng.uniform01();
            }
            Oracle oracle(f == Family::ED ? DiscountModel{Exponential{truth}} : DiscountModel{Hyperbolic{truth}});
            const auto r = mq_learn(oracle, adapter, eps, o.rho);
            const double err = std::abs(r.param - truth);
            worst = std::max(worst, err);
            most = std::max(most, r.queries);
            body << family_name(f) << ',' << format_real(truth) << ',' << format_real(eps) << ','
                 << format_real(r.param) << ',' << format_real(err) << ',' << r.queries << ',' << o.seed << '\n';
        }
    }
    body << "# max_abs_err=" << format_real(worst) << " max_queries=" << most << " budget=" << budget << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Opts o;
    o.jobs = default_jobs();
    CLI::App app{"timepref: learnability experiments for discounted-utility choice models", "timepref"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    auto common = [&](CLI::App* s) {
        s->add_option("--seed", o.seed, "RNG seed (default 0)");
        s->add_option("--out", o.out, "Output path, '-' for stdout");
        s->add_option("--jobs", o.jobs, "Worker threads (default TIMEPREF_JOBS or 1)")->check(CLI::PositiveNumber);
    };
    auto params = [&](CLI::App* s) {
        s->add_option("--family", o.family, "Model family");
        s->add_option("--T", o.T, "Number of periods")->delimiter(',');
        s->add_option("--delta", o.delta, "Discount factor delta");
        s->add_option("--alpha", o.alpha, "Hyperbolic alpha");
        s->add_option("--beta", o.beta, "Present-bias beta");
    };

    auto* gen = app.add_subcommand("gen-data", "Sample and label a dataset (JSONL)");
    common(gen);
    params(gen);
    gen->add_option("--dist", o.dist, "mu | gauss");
    gen->add_option("--sigma", o.sigma, "Gaussian scale");
    gen->add_option("--n", o.n, "Number of pairs")->required();

    auto* fit = app.add_subcommand("pac-fit", "Fit a consistent hypothesis to a dataset");
    common(fit);
    fit->add_option("--in", o.in, "Dataset JSONL")->required();
    fit->add_option("--family", o.family, "ed | hd | qhd")->required();
    fit->add_option("--alpha-max", o.alpha_max, "Hyperbolic search cap");
    fit->add_option("--u-max", o.u_max, "Cap on 1/beta - 1");

    auto* lc = app.add_subcommand("learning-curve", "Held-out error of the consistent learner vs sample size");
    common(lc);
    params(lc);
    lc->add_option("--dist", o.dist, "mu | gauss");
    lc->add_option("--sigma", o.sigma, "Gaussian scale");
    lc->add_option("--sizes", o.sizes, "Training sizes")->delimiter(',');
    lc->add_option("--trials", o.trials, "Trials per size");
    lc->add_option("--eps-test", o.eps_test, "Test set has 10 * ceil(1 / eps_test) pairs");
    lc->add_option("--alpha-max", o.alpha_max, "Hyperbolic search cap");
    lc->add_option("--u-max", o.u_max, "Cap on 1/beta - 1");

    auto* bounds = app.add_subcommand("bounds", "Passive sample-complexity reference curves");
    common(bounds);
    bounds->add_option("--eps", o.eps, "Accuracy values")->delimiter(',');
    bounds->add_option("--conf", o.conf, "Failure probability");
    bounds->add_option("--d", o.d, "VC dimension");

    auto* sh = app.add_subcommand("shatter", "Shattering constructions and checks");
    common(sh);
    sh->add_option("--construct", o.construct, "prop1 | thm3");
    sh->add_option("--T", o.T, "Number of periods")->delimiter(',');
    sh->add_option("--basis", o.basis, "thm3 basis: monomial | hd | both");
    sh->add_option("--precision", o.precision, "thm3 arithmetic: wide | double");
    sh->add_option("--eps", o.eps, "prop1 scale (x = (1 - eps) e_i)")->delimiter(',');
    sh->add_flag("--check", o.check, "Enumerate all labelings");
    sh->add_option("--in", o.in, "Check the points of a dataset instead");
    sh->add_option("--family", o.family, "Family for --in checks");
    sh->add_option("--alpha-max", o.alpha_max, "Hyperbolic search cap");
    sh->add_option("--u-max", o.u_max, "Cap on 1/beta - 1");

    auto* par = app.add_subcommand("parity-check", "Odd-root parity probability vs Monte Carlo");
    common(par);
    par->add_option("--T", o.T, "Number of periods")->delimiter(',');
    par->add_option("--delta", o.delta, "First parameter");
    par->add_option("--gamma", o.gamma, "Second parameter");
    par->add_option("--triples", o.triples, "Random (delta, gamma, T) triples when --gamma is absent");
    par->add_option("--samples", o.samples, "Monte Carlo samples (default 1e5)");

    auto* th = app.add_subcommand("theta", "Disagreement coefficient estimate");
    common(th);
    th->add_option("--T", o.T, "Number of periods")->delimiter(',');
    th->add_option("--delta", o.delta, "Ball center (default 0.5)");
    th->add_option("--samples", o.samples, "Monte Carlo samples per radius (default 1e6)");
    th->add_option("--grid", o.grid, "Radii in (0, 0.5]")->delimiter(',');

    auto* cal = app.add_subcommand("cal", "CAL active learner under the root-uniform distribution");
    common(cal);
    cal->add_option("--T", o.T, "Number of periods (default 5)")->delimiter(',');
    cal->add_option("--delta", o.delta, "True delta (default 0.3)");
    cal->add_option("--eps", o.eps, "Target accuracies")->delimiter(',');
    cal->add_option("--trials", o.trials, "Runs per eps");
    cal->add_option("--max-points", o.max_points, "Stream length cap");
    cal->add_option("--stop", o.stop, "region | mass | length");

    auto* cb = app.add_subcommand("cal-bound", "CAL label-complexity reference curve");
    common(cb);
    cb->add_option("--eps", o.eps, "Accuracy values")->delimiter(',');
    cb->add_option("--conf", o.conf, "Failure probability");
    cb->add_option("--d", o.d, "VC dimension");
    cb->add_option("--theta", o.theta, "Disagreement coefficient");

    auto* mq = app.add_subcommand("mq", "Membership-query learner");
    common(mq);
    mq->add_option("--family", o.family, "ed | hd");
    mq->add_option("--truth", o.truth, "Hidden parameter (random per trial when absent)");
    mq->add_option("--eps", o.eps, "Target accuracies")->delimiter(',');
    mq->add_option("--trials", o.trials, "Runs per eps");
    mq->add_option("--rho", o.rho, "Query scale");
    mq->add_option("--A", o.A, "Hyperbolic domain cap");

    CLI::App* chosen = nullptr;
    try {
        app.parse(argc, argv);
        for (auto* s : app.get_subcommands()) chosen = s;
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.back()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        const auto subs = app.get_subcommands();
        err << "timepref: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.back()->help());
        return 2;
    }

    const std::string name = chosen->get_name();
    try {
        ExperimentConfig cfg = base_config(name, o);
        std::ostringstream body;
        if (name == "gen-data") cmd_gen_data(o, cfg, body);
        else if (name == "pac-fit") cmd_pac_fit(o, cfg, body);
        else if (name == "learning-curve") cmd_learning_curve(o, cfg, body);
        else if (name == "bounds") cmd_bounds(o, cfg, body);
        else if (name == "shatter") cmd_shatter(o, cfg, body);
        else if (name == "parity-check") cmd_parity_check(o, cfg, body);
        else if (name == "theta") cmd_theta(o, cfg, body);
        else if (name == "cal") cmd_cal(o, cfg, body);
        else if (name == "cal-bound") cmd_cal_bound(o, cfg, body);
        else if (name == "mq") cmd_mq(o, cfg, body);
        const std::string text = config_header(cfg) + "\n" + body.str();
        if (o.out == "-") {
            out << text;
        } else {
            std::ofstream file(o.out, std::ios::binary);
            if (!file) throw std::runtime_error("cannot write " + o.out);
            file << text;
            if (!file) throw std::runtime_error("write failed for " + o.out);
        }
    } catch (const UsageError& e) {
        err << "timepref " << name << ": " << e.what() << "\n\n" << chosen->help();
        return 2;
    } catch (const std::exception& e) {
        err << "timepref " << name << ": error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace timepref
