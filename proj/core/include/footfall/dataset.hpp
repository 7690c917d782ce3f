#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "footfall/features.hpp"

namespace footfall {

// Per-feature standardization statistics fitted on training data.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct DataRow {
    std::vector<double> features;
    int label = 0; // +1 / -1; 0 marks an unlabeled row
    std::string provenance;
};

struct Dataset {
    std::vector<DataRow> rows;
    std::optional<Scaler> scaler;

    std::size_t dim() const { return rows.empty() ? 0 : rows[0].features.size(); }
    std::size_t count_label(int label) const;

    // Consistent dimensions and finite values; labels restricted to
    // {-1, +1} when require_labels is set.
    void validate(bool require_labels = true) const;
};

// Throws DegenerateInputError naming the feature when a column has zero
// variance.
Scaler fit_scaler(const Dataset& ds);

std::vector<double> apply_scaler(std::span<const double> features, const Scaler& scaler);
Dataset apply_scaler(const Dataset& ds, const Scaler& scaler);

// Fits on ds and returns the transformed dataset with the scaler attached.
Dataset standardize(const Dataset& ds);

// Keeps a uniformly random subset of `target` rows from the majority class;
// all other rows are untouched and row order is preserved.
Dataset undersample(const Dataset& ds, std::size_t target, std::uint64_t seed);

// Interchange CSV: the nine feature columns in canonical order plus a label
// column. Written with full precision so seeded runs are byte-identical.
Dataset load_feature_csv(const std::filesystem::path& path);
void save_feature_csv(const Dataset& ds, const std::filesystem::path& path);

std::vector<double> feature_row(const FeatureVector& fv);

} // namespace footfall
