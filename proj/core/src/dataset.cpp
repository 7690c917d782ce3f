#include "footfall/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace footfall {

std::size_t Dataset::count_label(int label) const {
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.label == label) ++n;
    return n;
}

void Dataset::validate(bool require_labels) const {
    if (rows.empty()) throw DegenerateInputError("dataset is empty");
    const std::size_t d = rows[0].features.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.features.size() != d)
            throw ShapeError("row " + std::to_string(i) + " has " +
                             std::to_string(r.features.size()) + " features, expected " +
                             std::to_string(d));
        for (double v : r.features)
            if (!std::isfinite(v))
                throw NumericError("non-finite feature in row " + std::to_string(i));
        if (require_labels && r.label != 1 && r.label != -1)
            throw ConfigError("row " + std::to_string(i) + " has label " +
                              std::to_string(r.label) + ", expected +1 or -1");
    }
    if (scaler) {
        if (scaler->mean.size() != d || scaler->stddev.size() != d)
            throw ShapeError("scaler dimension does not match dataset");
        for (double s : scaler->stddev)
            if (!(s > 0.0)) throw ConfigError("scaler stddev must be positive");
    }
}

namespace {

std::string feature_name(std::size_t i, std::size_t dim) {
    if (dim == kFeatureCount && i < kFeatureNames.size())
        return std::string(kFeatureNames[i]);
    return "feature " + std::to_string(i);
}

} // namespace

Scaler fit_scaler(const Dataset& ds) {
    ds.validate(/*require_labels=*/false);
    if (ds.rows.size() < 2) throw DegenerateInputError("need at least 2 rows to fit a scaler");
    const std::size_t d = ds.dim();
    const double n = static_cast<double>(ds.rows.size());

    Scaler sc;
    sc.mean.assign(d, 0.0);
    sc.stddev.assign(d, 0.0);
    for (const auto& r : ds.rows)
        for (std::size_t j = 0; j < d; ++j) sc.mean[j] += r.features[j];
    for (std::size_t j = 0; j < d; ++j) sc.mean[j] /= n;
    for (const auto& r : ds.rows)
        for (std::size_t j = 0; j < d; ++j) {
            double dlt = r.features[j] - sc.mean[j];
            sc.stddev[j] += dlt * dlt;
        }
    for (std::size_t j = 0; j < d; ++j) {
        sc.stddev[j] = std::sqrt(sc.stddev[j] / n);
        if (sc.stddev[j] == 0.0)
            throw DegenerateInputError("feature '" + feature_name(j, d) +
                                       "' has zero variance; cannot standardize");
    }
    return sc;
}

std::vector<double> apply_scaler(std::span<const double> features, const Scaler& scaler) {
    if (features.size() != scaler.mean.size())
        throw ShapeError("feature dimension " + std::to_string(features.size()) +
                         " does not match scaler dimension " + std::to_string(scaler.mean.size()));
    std::vector<double> out(features.size());
    for (std::size_t j = 0; j < features.size(); ++j)
        out[j] = (features[j] - scaler.mean[j]) / scaler.stddev[j];
    return out;
}

Dataset apply_scaler(const Dataset& ds, const Scaler& scaler) {
    Dataset out = ds;
    for (auto& r : out.rows) r.features = apply_scaler(r.features, scaler);
    out.scaler = scaler;
    return out;
}

Dataset standardize(const Dataset& ds) {
    return apply_scaler(ds, fit_scaler(ds));
}

Dataset undersample(const Dataset& ds, std::size_t target, std::uint64_t seed) {
    ds.validate();
    const std::size_t pos = ds.count_label(+1);
    const std::size_t neg = ds.count_label(-1);
    if (pos == neg) {
        if (target == pos) return ds;
        throw ConfigError("classes are balanced; no majority class to undersample");
    }
    const int majority = pos > neg ? +1 : -1;
    const std::size_t majority_count = std::max(pos, neg);
    if (target > majority_count)
        throw ConfigError("undersample target " + std::to_string(target) +
                          " exceeds majority class size " + std::to_string(majority_count));

    std::vector<std::size_t> majority_rows;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        if (ds.rows[i].label == majority) majority_rows.push_back(i);

    std::mt19937_64 rng(seed);
    std::shuffle(majority_rows.begin(), majority_rows.end(), rng);
    majority_rows.resize(target);
    std::sort(majority_rows.begin(), majority_rows.end());

    Dataset out;
    out.scaler = ds.scaler;
    std::size_t next = 0;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        if (ds.rows[i].label != majority) {
            out.rows.push_back(ds.rows[i]);
        } else if (next < majority_rows.size() && majority_rows[next] == i) {
            out.rows.push_back(ds.rows[i]);
            ++next;
        }
    }
    return out;
}

Dataset load_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");

    // header check
    {
        std::ostringstream expected;
        for (std::size_t i = 0; i < kFeatureNames.size(); ++i) expected << kFeatureNames[i] << ',';
        expected << "label";
        std::string h = line;
        if (!h.empty() && h.back() == '\r') h.pop_back();
        if (h != expected.str())
            throw ParseError(path.string() + ": unexpected header '" + h + "'");
    }

    Dataset ds;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::string field;
        DataRow r;
        for (std::size_t j = 0; j < kFeatureCount + 1; ++j) {
            if (!std::getline(ls, field, ','))
                throw ParseError(path.string() + ": row " + std::to_string(row) +
                                 " has too few columns");
            try {
                if (j < kFeatureCount)
                    r.features.push_back(std::stod(field));
                else
                    r.label = std::stoi(field);
            } catch (const std::exception&) {
                throw ParseError(path.string() + ": row " + std::to_string(row) +
                                 ": non-numeric value '" + field + "'");
            }
        }
        ds.rows.push_back(std::move(r));
    }
    if (ds.rows.empty()) throw ParseError(path.string() + ": no data rows");
    ds.validate(/*require_labels=*/false);
    return ds;
}

void save_feature_csv(const Dataset& ds, const std::filesystem::path& path) {
    if (ds.dim() != kFeatureCount)
        throw ShapeError("feature CSV requires " + std::to_string(kFeatureCount) +
                         "-dimensional rows, got " + std::to_string(ds.dim()));
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < kFeatureNames.size(); ++i) out << kFeatureNames[i] << ',';
    out << "label\n";
    for (const auto& r : ds.rows) {
        for (double v : r.features) out << v << ',';
        out << r.label << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> feature_row(const FeatureVector& fv) {
    auto a = fv.as_array();
    return std::vector<double>(a.begin(), a.end());
}

} // namespace footfall
