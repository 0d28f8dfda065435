#include "timepref/datagen.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "timepref/format.hpp"

namespace timepref {

int dist_periods(const DistributionSpec& d) {
    return std::visit([](const auto& v) { return v.T; }, d);
}

std::string dist_name(const DistributionSpec& d) {
    if (std::holds_alternative<MuRootUniform>(d)) return "mu";
    if (std::holds_alternative<GaussianPairs>(d)) return "gauss";
    return std::get<CustomDistribution>(d).name;
}

void validate_dist(const DistributionSpec& d) {
    if (dist_periods(d) < 2) throw std::invalid_argument("distribution needs T >= 2");
    if (auto* g = std::get_if<GaussianPairs>(&d); g && !(g->sigma > 0.0))
        throw std::invalid_argument("gaussian sigma must be positive");
    if (auto* c = std::get_if<CustomDistribution>(&d); c && !c->draw)
        throw std::invalid_argument("custom distribution has no generator");
}

MuSample sample_mu_roots(int T, Rng& rng) {
    if (T < 2) throw std::invalid_argument("sample_mu_roots: T must be at least 2");
    MuSample s;
    s.roots.resize(static_cast<std::size_t>(T - 1));
    for (auto& r : s.roots) r = rng.uniform01();
    s.sign = rng.random_sign();
    return s;
}

ChoicePair mu_pair_from(const MuSample& s) {
    const auto p = from_roots(s.roots, static_cast<double>(s.sign));
    ChoicePair pair;
    pair.x = p.coeffs();
    pair.x.resize(s.roots.size() + 1, 0.0);
    pair.y.assign(pair.x.size(), 0.0);
    return pair;
}

ChoicePair sample_mu_pair(int T, Rng& rng) { return mu_pair_from(sample_mu_roots(T, rng)); }

ChoicePair sample_pair(const DistributionSpec& d, Rng& rng) {
    struct V {
        Rng& rng;
        ChoicePair operator()(const MuRootUniform& m) const { return sample_mu_pair(m.T, rng); }
        ChoicePair operator()(const GaussianPairs& g) const {
            ChoicePair p;
            p.x.resize(static_cast<std::size_t>(g.T));
            p.y.resize(static_cast<std::size_t>(g.T));
            for (auto& v : p.x) v = g.sigma * rng.normal();
            for (auto& v : p.y) v = g.sigma * rng.normal();
            return p;
        }
        ChoicePair operator()(const CustomDistribution& c) const {
            ChoicePair p = c.draw(rng);
            if (p.x.size() != static_cast<std::size_t>(c.T) || p.y.size() != static_cast<std::size_t>(c.T))
                throw ArityError("custom generator returned a pair of the wrong length");
            return p;
        }
    };
    return std::visit(V{rng}, d);
}

std::vector<ChoicePair> sample_pairs(const DistributionSpec& d, std::size_t n, Rng& rng) {
    validate_dist(d);
    std::vector<ChoicePair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_pair(d, rng));
    return out;
}

LabeledDataset label_dataset(const DiscountModel& m, std::vector<ChoicePair> pairs) {
    LabeledDataset ds;
    ds.T = pairs.empty() ? model_arity(m).value_or(0) : static_cast<int>(pairs.front().x.size());
    if (pairs.empty()) return ds;
    const auto w = weights<double>(m, ds.T);
    for (auto& p : pairs) {
        const int label = prefers_weights(w, p);
        ds.push(std::move(p), label);
    }
    return ds;
}

namespace {

std::string with_line(std::size_t line, const std::string& what) {
    std::ostringstream s;
    s << "line " << line << ": " << what;
    return s.str();
}

std::vector<double> read_plan(const nlohmann::json& rec, const char* key, std::size_t line) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_array()) throw DatasetParseError(line, std::string("missing array \"") + key + "\"");
    std::vector<double> v;
    v.reserve(it->size());
    for (const auto& e : *it) {
        if (!e.is_number()) throw DatasetParseError(line, std::string("non-numeric entry in \"") + key + "\"");
        v.push_back(e.get<double>());
    }
    return v;
}

}  // namespace

DatasetParseError::DatasetParseError(std::size_t l, const std::string& what)
    : std::runtime_error(with_line(l, what)), line(l) {}

DatasetSchemaError::DatasetSchemaError(std::size_t l, const std::string& what)
    : std::runtime_error(with_line(l, what)), line(l) {}

void write_dataset(std::ostream& out, const DatasetHeader& header, const LabeledDataset& ds) {
    ds.validate();
    if (!ds.empty() && header.T != ds.T) throw std::invalid_argument("write_dataset: header T differs from dataset T");
    nlohmann::json h;
    h["T"] = header.T;
    h["seed"] = header.seed;
    h["dist"] = header.dist;
    out << h.dump() << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << "{\"x\":" << format_real_list(ds.pairs[i].x) << ",\"y\":" << format_real_list(ds.pairs[i].y)
            << ",\"label\":" << ds.labels[i] << "}\n";
    }
}

DatasetFile read_dataset(std::istream& in) {
    DatasetFile file;
    bool have_header = false;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty() || text.front() == '#') continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DatasetParseError(line, std::string("malformed JSON: ") + e.what());
        }
        if (!rec.is_object()) throw DatasetParseError(line, "record is not a JSON object");
        if (!have_header) {
            auto t = rec.find("T");
            if (t == rec.end() || !t->is_number_integer() || t->get<long long>() < 1)
                throw DatasetParseError(line, "header needs a positive integer \"T\"");
            file.header.T = t->get<int>();
            if (auto s = rec.find("seed"); s != rec.end()) {
                if (!s->is_number_unsigned() && !s->is_number_integer())
                    throw DatasetParseError(line, "header \"seed\" must be an integer");
                file.header.seed = s->get<std::uint64_t>();
            }
            if (auto d = rec.find("dist"); d != rec.end()) {
                if (!d->is_string()) throw DatasetParseError(line, "header \"dist\" must be a string");
                file.header.dist = d->get<std::string>();
            }
            file.data.T = file.header.T;
            have_header = true;
            continue;
        }
        ChoicePair pair;
        pair.x = read_plan(rec, "x", line);
        pair.y = read_plan(rec, "y", line);
        auto l = rec.find("label");
        if (l == rec.end() || !l->is_number_integer()) throw DatasetParseError(line, "missing integer \"label\"");
        const auto label = l->get<long long>();
        if (label != 0 && label != 1) throw DatasetParseError(line, "label must be 0 or 1");
        const auto T = static_cast<std::size_t>(file.header.T);
        if (pair.x.size() != T || pair.y.size() != T) {
            std::ostringstream s;
            s << "plan length " << pair.x.size() << "/" << pair.y.size() << " differs from T = " << T;
            throw DatasetSchemaError(line, s.str());
        }
        file.data.pairs.push_back(std::move(pair));
        file.data.labels.push_back(static_cast<int>(label));
    }
    if (!have_header) throw DatasetParseError(line, "missing header line");
    return file;
}

}  // namespace timepref
