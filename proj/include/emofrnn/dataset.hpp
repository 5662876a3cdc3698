#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "emofrnn/types.hpp"

namespace emofrnn {

/// One row of a task file: tweet id, raw text, emotion and intensity class.
/// `label` is empty for unlabeled (prediction-only) test files.
struct TextRecord {
    std::string id;
    std::string text;
    Emotion emotion = Emotion::anger;
    std::optional<Label> label;
    /// Raw intensity column, kept verbatim so rewritten files round-trip.
    std::string label_field;
};

struct LabeledInstance {
    std::string id;
    Vector vector;
    Label label = 0;
};

struct VectorDataset {
    std::size_t dimension = 0;
    std::vector<LabeledInstance> instances;

    std::size_t size() const { return instances.size(); }
    bool empty() const { return instances.empty(); }
    std::vector<Label> labels() const;
    /// Subset in the order given by `indices`.
    VectorDataset select(const std::vector<std::size_t>& indices) const;
};

struct ClassStats {
    std::array<std::size_t, kNumClasses> counts{};
    double ir = 1.0;
    std::size_t smallest_class = 0;
    std::size_t total = 0;
};

/// Id-keyed embedding table read from a vector file.
struct VectorTable {
    std::size_t dimension = 0;
    std::unordered_map<std::string, Vector> vectors;
    /// Ids in file order, for deterministic re-serialisation.
    std::vector<std::string> order;
};

/// Parses a tab-separated task file (ID, Tweet, Affect Dimension, Intensity
/// Class). A first row whose intensity column has no leading integer is taken
/// as a header. When `require_labels` is false, rows whose intensity column
/// carries no integer are accepted as unlabeled.
std::vector<TextRecord> read_task_tsv(std::istream& in, bool require_labels = true);
std::vector<TextRecord> load_task_tsv(const std::filesystem::path& path,
                                      bool require_labels = true);
void write_task_tsv(std::ostream& out, const std::vector<TextRecord>& records);

/// Vector file: `dim D` header, then `id<TAB>f1 f2 ... fD` per line.
VectorTable read_vectors(std::istream& in);
VectorTable load_vectors(const std::filesystem::path& path);
/// Floats are written with 9 significant digits.
void write_vectors(std::ostream& out, const VectorTable& table);
void save_vectors(const std::filesystem::path& path, const VectorTable& table);

/// Joins labeled records with their vectors, in record order.
VectorDataset join(const std::vector<TextRecord>& records, const VectorTable& vectors);

/// Vectors for every record, in record order; labels are not required.
std::vector<Vector> lookup_vectors(const std::vector<TextRecord>& records,
                                   const VectorTable& vectors);

/// Concatenation, `a` first. Dimensions must agree and ids must be disjoint.
VectorDataset merge(const VectorDataset& a, const VectorDataset& b);

ClassStats class_stats(const VectorDataset& ds);
ClassStats class_stats(const std::vector<Label>& labels);

}  // namespace emofrnn
