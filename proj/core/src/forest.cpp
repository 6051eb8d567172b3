#include "hemopipe/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hemopipe/errors.hpp"
#include "hemopipe/rng.hpp"

namespace hemopipe::forest {

namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "hemopipe-forest";
constexpr int kModelVersion = 1;

struct DatasetView {
    const std::vector<features::FeatureVector>* rows = nullptr;
    std::vector<int> class_index;  // per row, into class_labels
    std::vector<Label> class_labels;
    std::size_t n_features = 0;
};

DatasetView check_dataset(const std::vector<features::FeatureVector>& dataset) {
    if (dataset.empty()) {
        throw DegenerateTrainingError("cannot train on an empty dataset");
    }
    const auto& names = dataset.front().names;
    if (names.empty()) {
        throw SchemaError("dataset has no feature names");
    }
    std::set<Label> distinct;
    for (const auto& row : dataset) {
        if (row.names != names) {
            throw SchemaError("inconsistent feature names in dataset");
        }
        if (row.values.size() != names.size()) {
            throw SchemaError("feature vector length does not match names");
        }
        distinct.insert(row.label);
    }
    if (distinct.size() < 2) {
        throw DegenerateTrainingError("dataset contains a single class");
    }
    DatasetView view;
    view.rows = &dataset;
    view.class_labels.assign(distinct.begin(), distinct.end());
    view.n_features = names.size();
    view.class_index.reserve(dataset.size());
    for (const auto& row : dataset) {
        const auto it = std::lower_bound(view.class_labels.begin(),
                                         view.class_labels.end(), row.label);
        view.class_index.push_back(
            static_cast<int>(it - view.class_labels.begin()));
    }
    return view;
}

int majority_class(const std::vector<int>& counts) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(counts.size()); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return best;
}

class TreeBuilder {
  public:
    TreeBuilder(const DatasetView& view, const ForestParams& params, int mtry,
                std::uint64_t tree_seed)
        : view_(view),
          params_(params),
          mtry_(mtry),
          rng_(tree_seed),
          feature_pool_(view.n_features) {
        for (std::size_t i = 0; i < view.n_features; ++i) {
            feature_pool_[i] = static_cast<int>(i);
        }
    }

    Tree build(std::vector<bool>& in_bag) {
        const std::size_t n = view_.rows->size();
        std::vector<int> sample_indices(n);
        in_bag.assign(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const auto pick = static_cast<std::size_t>(rng_.below(n));
            sample_indices[i] = static_cast<int>(pick);
            in_bag[pick] = true;
        }
        tree_.nodes.clear();
        build_node(sample_indices, 0);
        return std::move(tree_);
    }

  private:
    std::vector<int> count_classes(const std::vector<int>& indices) const {
        std::vector<int> counts(view_.class_labels.size(), 0);
        for (const int i : indices) {
            ++counts[static_cast<std::size_t>(view_.class_index[static_cast<std::size_t>(i)])];
        }
        return counts;
    }

    int make_leaf(std::vector<int> counts) {
        TreeNode node;
        node.class_counts = std::move(counts);
        tree_.nodes.push_back(std::move(node));
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    // Partial Fisher-Yates draw of mtry distinct features, then sorted so
    // the candidate scan runs in ascending feature order (tie-break rule).
    std::vector<int> draw_features() {
        for (int j = 0; j < mtry_; ++j) {
            const auto span = feature_pool_.size() - static_cast<std::size_t>(j);
            const auto k = static_cast<std::size_t>(j) +
                           static_cast<std::size_t>(rng_.below(span));
            std::swap(feature_pool_[static_cast<std::size_t>(j)],
                      feature_pool_[k]);
        }
        std::vector<int> selected(feature_pool_.begin(),
                                  feature_pool_.begin() + mtry_);
        std::sort(selected.begin(), selected.end());
        return selected;
    }

    int build_node(const std::vector<int>& indices, int depth) {
        std::vector<int> counts = count_classes(indices);
        const int present =
            static_cast<int>(std::count_if(counts.begin(), counts.end(),
                                           [](int c) { return c > 0; }));
        const auto m = indices.size();
        if (depth >= params_.max_depth || present <= 1 ||
            m < 2 * static_cast<std::size_t>(params_.min_leaf_size)) {
            return make_leaf(std::move(counts));
        }

        const std::vector<int> selected = draw_features();

        double best_impurity = std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::pair<double, int>> pairs(m);
        std::vector<int> left_counts(view_.class_labels.size());
        for (const int feature : selected) {
            for (std::size_t i = 0; i < m; ++i) {
                const auto row = static_cast<std::size_t>(indices[i]);
                pairs[i] = {(*view_.rows)[row].values[static_cast<std::size_t>(feature)],
                            view_.class_index[row]};
            }
            std::sort(pairs.begin(), pairs.end());
            std::fill(left_counts.begin(), left_counts.end(), 0);
            for (std::size_t i = 1; i < m; ++i) {
                ++left_counts[static_cast<std::size_t>(pairs[i - 1].second)];
                if (!(pairs[i].first > pairs[i - 1].first)) continue;
                const auto n_left = i;
                const auto n_right = m - i;
                if (n_left < static_cast<std::size_t>(params_.min_leaf_size) ||
                    n_right < static_cast<std::size_t>(params_.min_leaf_size)) {
                    continue;
                }
                double sq_left = 0.0;
                double sq_right = 0.0;
                for (std::size_t c = 0; c < counts.size(); ++c) {
                    const double cl = left_counts[c];
                    const double cr = counts[c] - left_counts[c];
                    sq_left += cl * cl;
                    sq_right += cr * cr;
                }
                const double nl = static_cast<double>(n_left);
                const double nr = static_cast<double>(n_right);
                const double impurity =
                    (nl * (1.0 - sq_left / (nl * nl)) +
                     nr * (1.0 - sq_right / (nr * nr))) /
                    static_cast<double>(m);
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = feature;
                    best_threshold =
                        0.5 * (pairs[i - 1].first + pairs[i].first);
                }
            }
        }

        if (best_feature < 0) {
            return make_leaf(std::move(counts));
        }

        std::vector<int> left_idx;
        std::vector<int> right_idx;
        left_idx.reserve(m);
        right_idx.reserve(m);
        for (const int i : indices) {
            const double v =
                (*view_.rows)[static_cast<std::size_t>(i)]
                    .values[static_cast<std::size_t>(best_feature)];
            (v <= best_threshold ? left_idx : right_idx).push_back(i);
        }

        const auto node_id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[static_cast<std::size_t>(node_id)].feature_index = best_feature;
        tree_.nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
        const int left_id = build_node(left_idx, depth + 1);
        const int right_id = build_node(right_idx, depth + 1);
        tree_.nodes[static_cast<std::size_t>(node_id)].left = left_id;
        tree_.nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }

    const DatasetView& view_;
    const ForestParams& params_;
    const int mtry_;
    Rng rng_;
    std::vector<int> feature_pool_;
    Tree tree_;
};

int tree_vote(const Tree& tree, const std::vector<double>& values) {
    const TreeNode* node = &tree.nodes.front();
    while (!node->is_leaf()) {
        const double v = values[static_cast<std::size_t>(node->feature_index)];
        const int next = v <= node->threshold ? node->left : node->right;
        node = &tree.nodes[static_cast<std::size_t>(next)];
    }
    return majority_class(node->class_counts);
}

json params_to_json(const ForestParams& p) {
    return json{{"n_trees", p.n_trees},
                {"max_depth", p.max_depth},
                {"min_leaf_size", p.min_leaf_size},
                {"features_per_split", p.features_per_split}};
}

}  // namespace

void ForestParams::validate() const {
    if (n_trees < 1) throw ParameterError("n_trees must be >= 1");
    if (max_depth < 1) throw ParameterError("max_depth must be >= 1");
    if (min_leaf_size < 1) throw ParameterError("min_leaf_size must be >= 1");
    if (features_per_split < 0) {
        throw ParameterError("features_per_split must be >= 0");
    }
}

double CvResult::mean_accuracy() const {
    if (fold_accuracies.empty()) return 0.0;
    double sum = 0.0;
    for (const double a : fold_accuracies) sum += a;
    return sum / static_cast<double>(fold_accuracies.size());
}

ForestModel train(const std::vector<features::FeatureVector>& dataset,
                  const ForestParams& params, std::uint64_t seed) {
    params.validate();
    const DatasetView view = check_dataset(dataset);
    const std::size_t n = dataset.size();
    const std::size_t n_classes = view.class_labels.size();

    int mtry = params.features_per_split;
    if (mtry == 0) {
        mtry = static_cast<int>(
            std::floor(std::sqrt(static_cast<double>(view.n_features))));
    }
    mtry = std::clamp(mtry, 1, static_cast<int>(view.n_features));

    ForestModel model;
    model.params = params;
    model.seed = seed;
    model.class_labels = view.class_labels;
    model.feature_names = dataset.front().names;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));

    // votes[row * n_classes + c]: out-of-bag votes, summed across threads.
    std::vector<std::vector<int>> thread_votes;
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t n_threads =
        std::max<std::size_t>(1, std::min<std::size_t>(
                                     hw == 0 ? 1 : hw,
                                     static_cast<std::size_t>(params.n_trees)));
    thread_votes.assign(n_threads, std::vector<int>(n * n_classes, 0));

    auto worker = [&](std::size_t thread_id) {
        auto& votes = thread_votes[thread_id];
        for (std::size_t t = thread_id;
             t < static_cast<std::size_t>(params.n_trees); t += n_threads) {
            TreeBuilder builder(view, params, mtry,
                                seed ^ static_cast<std::uint64_t>(t));
            std::vector<bool> in_bag;
            model.trees[t] = builder.build(in_bag);
            for (std::size_t i = 0; i < n; ++i) {
                if (in_bag[i]) continue;
                const int c = tree_vote(model.trees[t], dataset[i].values);
                ++votes[i * n_classes + static_cast<std::size_t>(c)];
            }
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) {
            threads.emplace_back(worker, i);
        }
        for (auto& th : threads) th.join();
    }

    std::size_t scored = 0;
    std::size_t correct = 0;
    std::vector<int> row_votes(n_classes);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(row_votes.begin(), row_votes.end(), 0);
        int total = 0;
        for (std::size_t c = 0; c < n_classes; ++c) {
            for (std::size_t th = 0; th < n_threads; ++th) {
                row_votes[c] += thread_votes[th][i * n_classes + c];
            }
            total += row_votes[c];
        }
        if (total == 0) continue;
        ++scored;
        if (majority_class(row_votes) == view.class_index[i]) ++correct;
    }
    model.oob_accuracy =
        scored > 0 ? static_cast<double>(correct) / static_cast<double>(scored)
                   : 0.0;
    return model;
}

Prediction predict(const ForestModel& model,
                   const features::FeatureVector& vector) {
    if (vector.names != model.feature_names) {
        throw SchemaError("feature names do not match the model");
    }
    if (vector.values.size() != model.feature_names.size()) {
        throw SchemaError("feature vector length does not match the model");
    }
    std::vector<int> votes(model.class_labels.size(), 0);
    for (const auto& tree : model.trees) {
        ++votes[static_cast<std::size_t>(tree_vote(tree, vector.values))];
    }
    Prediction out;
    out.probabilities.resize(votes.size());
    const double total = static_cast<double>(model.trees.size());
    for (std::size_t c = 0; c < votes.size(); ++c) {
        out.probabilities[c] = static_cast<double>(votes[c]) / total;
    }
    out.label = model.class_labels[static_cast<std::size_t>(majority_class(votes))];
    return out;
}

CvResult cross_validate(const std::vector<features::FeatureVector>& dataset,
                        const ForestParams& params, std::uint64_t seed, int k,
                        CvMode mode) {
    if (k < 2) throw ParameterError("cross-validation needs k >= 2");
    const DatasetView view = check_dataset(dataset);
    const std::size_t n = dataset.size();
    if (static_cast<std::size_t>(k) > n) {
        throw ParameterError("k exceeds dataset size");
    }
    const std::size_t n_classes = view.class_labels.size();

    std::vector<int> fold_of(n, 0);
    if (mode == CvMode::StratifiedShuffled) {
        Rng rng(seed);
        for (std::size_t c = 0; c < n_classes; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i) {
                if (view.class_index[i] == static_cast<int>(c)) {
                    members.push_back(i);
                }
            }
            for (std::size_t i = members.size(); i > 1; --i) {
                const auto j = static_cast<std::size_t>(rng.below(i));
                std::swap(members[i - 1], members[j]);
            }
            for (std::size_t j = 0; j < members.size(); ++j) {
                fold_of[members[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            fold_of[i] = static_cast<int>(i * static_cast<std::size_t>(k) / n);
        }
    }

    CvResult result;
    result.mode = mode;
    result.class_labels = view.class_labels;
    result.mean_confusion.assign(n_classes, std::vector<double>(n_classes, 0.0));

    for (int fold = 0; fold < k; ++fold) {
        std::vector<features::FeatureVector> train_rows;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of[i] == fold) {
                test_rows.push_back(i);
            } else {
                train_rows.push_back(dataset[i]);
            }
        }
        if (test_rows.empty()) {
            throw FoldError("fold " + std::to_string(fold) +
                            " has no test samples");
        }
        std::vector<bool> seen(n_classes, false);
        for (const auto& row : train_rows) {
            const auto it = std::lower_bound(view.class_labels.begin(),
                                             view.class_labels.end(), row.label);
            seen[static_cast<std::size_t>(it - view.class_labels.begin())] = true;
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (!seen[c]) {
                throw FoldError("class " +
                                std::string(to_string(view.class_labels[c])) +
                                " missing from training fold " +
                                std::to_string(fold));
            }
        }

        const ForestModel model =
            train(train_rows, params, seed + static_cast<std::uint64_t>(fold));

        std::vector<std::vector<double>> confusion(
            n_classes, std::vector<double>(n_classes, 0.0));
        std::size_t correct = 0;
        for (const std::size_t i : test_rows) {
            const Prediction p = predict(model, dataset[i]);
            const auto it = std::lower_bound(view.class_labels.begin(),
                                             view.class_labels.end(), p.label);
            const auto pred_c = static_cast<std::size_t>(it - view.class_labels.begin());
            const auto true_c = static_cast<std::size_t>(view.class_index[i]);
            confusion[true_c][pred_c] += 1.0;
            if (pred_c == true_c) ++correct;
        }
        result.fold_accuracies.push_back(static_cast<double>(correct) /
                                         static_cast<double>(test_rows.size()));
        for (std::size_t r = 0; r < n_classes; ++r) {
            double row_total = 0.0;
            for (const double v : confusion[r]) row_total += v;
            if (row_total <= 0.0) continue;
            for (std::size_t c = 0; c < n_classes; ++c) {
                result.mean_confusion[r][c] += confusion[r][c] / row_total;
            }
        }
    }
    for (auto& row : result.mean_confusion) {
        for (double& v : row) v /= static_cast<double>(k);
    }
    return result;
}

std::string serialize_model(const ForestModel& model) {
    json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelVersion;
    doc["params"] = params_to_json(model.params);
    doc["seed"] = model.seed;
    doc["oob_accuracy"] = model.oob_accuracy;
    json labels = json::array();
    for (const Label l : model.class_labels) {
        labels.push_back(static_cast<int>(l));
    }
    doc["class_labels"] = std::move(labels);
    doc["feature_names"] = model.feature_names;
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) {
                nodes.push_back(json{{"counts", node.class_counts}});
            } else {
                nodes.push_back(json{{"f", node.feature_index},
                                     {"t", node.threshold},
                                     {"l", node.left},
                                     {"r", node.right}});
            }
        }
        trees.push_back(json{{"nodes", std::move(nodes)}});
    }
    doc["trees"] = std::move(trees);
    return doc.dump();
}

ForestModel deserialize_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model JSON parse failure: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kModelFormat) {
            throw SchemaError("unsupported model format tag");
        }
        if (doc.at("version").get<int>() != kModelVersion) {
            throw SchemaError("unsupported model version");
        }
        ForestModel model;
        const auto& p = doc.at("params");
        model.params.n_trees = p.at("n_trees").get<int>();
        model.params.max_depth = p.at("max_depth").get<int>();
        model.params.min_leaf_size = p.at("min_leaf_size").get<int>();
        model.params.features_per_split = p.at("features_per_split").get<int>();
        model.params.validate();
        model.seed = doc.at("seed").get<std::uint64_t>();
        model.oob_accuracy = doc.at("oob_accuracy").get<double>();
        for (const auto& l : doc.at("class_labels")) {
            const int v = l.get<int>();
            if (v < 0 || v >= kNumClasses) {
                throw SchemaError("class label out of range in model");
            }
            model.class_labels.push_back(static_cast<Label>(v));
        }
        if (model.class_labels.size() < 2 ||
            !std::is_sorted(model.class_labels.begin(),
                            model.class_labels.end())) {
            throw SchemaError("model class labels must be >= 2 and ascending");
        }
        model.feature_names =
            doc.at("feature_names").get<std::vector<std::string>>();
        if (model.feature_names.empty()) {
            throw SchemaError("model has no feature names");
        }
        for (const auto& jt : doc.at("trees")) {
            Tree tree;
            const auto& jnodes = jt.at("nodes");
            for (const auto& jn : jnodes) {
                TreeNode node;
                if (jn.contains("counts")) {
                    node.class_counts = jn.at("counts").get<std::vector<int>>();
                    if (node.class_counts.size() != model.class_labels.size()) {
                        throw SchemaError("leaf count size mismatch in model");
                    }
                } else {
                    node.feature_index = jn.at("f").get<int>();
                    node.threshold = jn.at("t").get<double>();
                    node.left = jn.at("l").get<int>();
                    node.right = jn.at("r").get<int>();
                    const int limit = static_cast<int>(jnodes.size());
                    if (node.feature_index < 0 ||
                        node.feature_index >=
                            static_cast<int>(model.feature_names.size()) ||
                        node.left < 0 || node.left >= limit || node.right < 0 ||
                        node.right >= limit) {
                        throw SchemaError("split node out of range in model");
                    }
                }
                tree.nodes.push_back(std::move(node));
            }
            if (tree.nodes.empty()) {
                throw SchemaError("empty tree in model");
            }
            model.trees.push_back(std::move(tree));
        }
        if (model.trees.size() !=
            static_cast<std::size_t>(model.params.n_trees)) {
            throw SchemaError("tree count does not match params");
        }
        return model;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model JSON schema failure: ") + e.what());
    }
}

void save_model(const ForestModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open model file for writing: " + path);
    const std::string text = serialize_model(model);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.put('\n');
    if (!out) throw IoError("failed writing model file: " + path);
}

ForestModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

const char* to_string(CvMode mode) {
    return mode == CvMode::StratifiedShuffled ? "stratified" : "blocked";
}

CvMode cv_mode_from_string(const std::string& name) {
    if (name == "stratified" || name == "stratified_shuffled") {
        return CvMode::StratifiedShuffled;
    }
    if (name == "blocked") return CvMode::Blocked;
    throw ParameterError("unknown cross-validation mode: " + name);
}

}  // namespace hemopipe::forest
