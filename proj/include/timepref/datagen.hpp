#pragma once

// Synthetic choice data: the root-uniform distribution, Gaussian pairs,
// labeling by a target model and the JSONL dataset format.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "timepref/models.hpp"
#include "timepref/rng.hpp"

namespace timepref {

/// Pairs whose monomial-basis difference polynomial is s * prod (d - r_i) with
/// r_i iid uniform on (0, 1) and s a fair random sign.
struct MuRootUniform {
    int T = 2;
};
/// x and y with iid N(0, sigma^2) entries.
struct GaussianPairs {
    int T = 2;
    double sigma = 1.0;
};
struct CustomDistribution {
    int T = 2;
    std::string name;
    std::function<ChoicePair(Rng&)> draw;
};
using DistributionSpec = std::variant<MuRootUniform, GaussianPairs, CustomDistribution>;

int dist_periods(const DistributionSpec& d);
/// "mu", "gauss" or the custom name.
std::string dist_name(const DistributionSpec& d);
void validate_dist(const DistributionSpec& d);

struct MuSample {
    std::vector<double> roots;
    int sign = 1;
};

/// Draws T-1 roots (in draw order) and then the sign.
MuSample sample_mu_roots(int T, Rng& rng);
/// x = coefficients of sign * prod (d - r_i), y = 0.
ChoicePair mu_pair_from(const MuSample& s);
ChoicePair sample_mu_pair(int T, Rng& rng);

ChoicePair sample_pair(const DistributionSpec& d, Rng& rng);
std::vector<ChoicePair> sample_pairs(const DistributionSpec& d, std::size_t n, Rng& rng);

/// labels[i] = prefers(m, pairs[i]). T is taken from the pairs, or from the
/// model's arity when the list is empty.
LabeledDataset label_dataset(const DiscountModel& m, std::vector<ChoicePair> pairs);

struct DatasetHeader {
    int T = 0;
    std::uint64_t seed = 0;
    std::string dist;
};

struct DatasetFile {
    DatasetHeader header;
    LabeledDataset data;
};

class DatasetParseError : public std::runtime_error {
public:
    DatasetParseError(std::size_t line, const std::string& what);
    std::size_t line;
};

class DatasetSchemaError : public std::runtime_error {
public:
    DatasetSchemaError(std::size_t line, const std::string& what);
    std::size_t line;
};

/// Header line {"T":..,"seed":..,"dist":..} then one compact record per pair.
void write_dataset(std::ostream& out, const DatasetHeader& header, const LabeledDataset& ds);
/// Lines starting with '#' and blank lines are skipped. Line numbers in errors
/// are 1-based physical lines.
DatasetFile read_dataset(std::istream& in);

}  // namespace timepref
