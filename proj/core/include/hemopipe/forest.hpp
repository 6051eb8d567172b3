#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hemopipe/features.hpp"
#include "hemopipe/types.hpp"

namespace hemopipe::forest {

// One tree node in a flat array. Split nodes have feature_index >= 0 and
// child slots; leaves carry per-class training counts aligned with the
// model's class_labels.
struct TreeNode {
    int feature_index = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<int> class_counts;

    bool is_leaf() const { return feature_index < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 12;
    int min_leaf_size = 2;
    // 0 selects floor(sqrt(number of features)) at training time.
    int features_per_split = 0;

    void validate() const;
};

struct ForestModel {
    ForestParams params;
    std::uint64_t seed = 0;
    std::vector<Label> class_labels;       // ascending
    std::vector<std::string> feature_names;
    std::vector<Tree> trees;
    double oob_accuracy = 0.0;  // out-of-bag accuracy measured at training
};

struct Prediction {
    Label label = Label::Rest;
    // Vote shares aligned with model.class_labels; sums to 1.
    std::vector<double> probabilities;
};

enum class CvMode { StratifiedShuffled, Blocked };

struct CvResult {
    CvMode mode = CvMode::StratifiedShuffled;
    std::vector<double> fold_accuracies;
    // Mean over folds of the row-normalized confusion matrix, rows = true
    // class, columns = predicted class, aligned with class_labels.
    std::vector<std::vector<double>> mean_confusion;
    std::vector<Label> class_labels;

    double mean_accuracy() const;
};

// Trains a seeded random forest. Each tree draws a bootstrap resample from
// its own generator (seed xor tree_index), so training parallelizes over
// trees with bit-stable results. Splits minimize Gini impurity over a random
// feature subset, searching midpoints between consecutive distinct sorted
// values; ties prefer the lowest feature index, then the lowest threshold.
// Throws DegenerateTrainingError on a single-class dataset and SchemaError
// on inconsistent feature names.
ForestModel train(const std::vector<features::FeatureVector>& dataset,
                  const ForestParams& params, std::uint64_t seed);

// Majority vote over per-tree leaf-majority predictions. Throws SchemaError
// when the vector's feature names do not match the model's.
Prediction predict(const ForestModel& model,
                   const features::FeatureVector& vector);

// K-fold cross-validation. StratifiedShuffled deals each class's shuffled
// windows round-robin across folds; Blocked splits the dataset into k
// contiguous runs so overlapping windows never straddle train/test. Fold f
// trains with seed + f. Throws ParameterError for k < 2 or k > dataset size
// and FoldError when a training fold lacks one of the dataset's classes.
CvResult cross_validate(const std::vector<features::FeatureVector>& dataset,
                        const ForestParams& params, std::uint64_t seed,
                        int k = 5, CvMode mode = CvMode::StratifiedShuffled);

// Versioned JSON (de)serialization. deserialize_model validates the format
// tag, version, and structural invariants.
std::string serialize_model(const ForestModel& model);
ForestModel deserialize_model(const std::string& json_text);

void save_model(const ForestModel& model, const std::string& path);
ForestModel load_model(const std::string& path);

const char* to_string(CvMode mode);
CvMode cv_mode_from_string(const std::string& name);

}  // namespace hemopipe::forest
