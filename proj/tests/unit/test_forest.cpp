#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hemopipe/errors.hpp"
#include "hemopipe/features.hpp"
#include "hemopipe/forest.hpp"
#include "hemopipe/rng.hpp"

#include "helpers.hpp"

using namespace hemopipe;
using namespace hemopipe::forest;
using hemopipe::features::FeatureVector;

namespace {

const std::vector<std::string> kTwoNames = {"f0", "f1"};

FeatureVector make_row(std::vector<double> values, Label label,
                       std::vector<std::string> names = kTwoNames) {
    FeatureVector fv;
    fv.values = std::move(values);
    fv.names = std::move(names);
    fv.label = label;
    return fv;
}

// Three well-separated Gaussian blobs, one per class, interleaved so that
// contiguous blocks also contain all classes.
std::vector<FeatureVector> make_blobs(std::size_t per_class,
                                      std::uint64_t seed) {
    const double cx[3] = {0.0, 10.0, -10.0};
    const double cy[3] = {0.0, 10.0, 10.0};
    const Label labels[3] = {Label::Rest, Label::LowLoad, Label::HighLoad};
    Rng rng(seed);
    std::vector<FeatureVector> rows;
    for (std::size_t i = 0; i < per_class; ++i) {
        for (int c = 0; c < 3; ++c) {
            rows.push_back(make_row({cx[c] + rng.normal(), cy[c] + rng.normal()},
                                    labels[c]));
        }
    }
    return rows;
}

Label nearest_centroid(double x, double y) {
    const double cx[3] = {0.0, 10.0, -10.0};
    const double cy[3] = {0.0, 10.0, 10.0};
    const Label labels[3] = {Label::Rest, Label::LowLoad, Label::HighLoad};
    int best = 0;
    double best_d = 1e300;
    for (int c = 0; c < 3; ++c) {
        const double d = (x - cx[c]) * (x - cx[c]) + (y - cy[c]) * (y - cy[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return labels[best];
}

ForestParams small_params(int n_trees = 30) {
    ForestParams p;
    p.n_trees = n_trees;
    p.max_depth = 12;
    p.min_leaf_size = 2;
    p.features_per_split = 0;
    return p;
}

}  // namespace

TEST_CASE("a single tree on two separated points is the obvious stump") {
    std::vector<FeatureVector> rows;
    for (int i = 0; i < 10; ++i) {
        rows.push_back(make_row({0.0}, Label::Rest, {"f0"}));
        rows.push_back(make_row({1.0}, Label::LowLoad, {"f0"}));
    }
    ForestParams p;
    p.n_trees = 1;
    p.max_depth = 4;
    p.min_leaf_size = 1;
    p.features_per_split = 1;
    const ForestModel model = train(rows, p, 1);

    REQUIRE(model.trees.size() == 1);
    const Tree& tree = model.trees[0];
    REQUIRE(!tree.nodes.empty());
    const TreeNode& root = tree.nodes[0];
    REQUIRE(!root.is_leaf());
    CHECK(root.feature_index == 0);
    CHECK(root.threshold == 0.5);  // midpoint of the two distinct values
    CHECK(tree.nodes[static_cast<std::size_t>(root.left)].is_leaf());
    CHECK(tree.nodes[static_cast<std::size_t>(root.right)].is_leaf());

    const Prediction low = predict(model, make_row({0.25}, Label::Rest, {"f0"}));
    CHECK(low.label == Label::Rest);
    CHECK(low.probabilities == std::vector<double>{1.0, 0.0});
    const Prediction high = predict(model, make_row({0.9}, Label::Rest, {"f0"}));
    CHECK(high.label == Label::LowLoad);
    CHECK(high.probabilities == std::vector<double>{0.0, 1.0});

    CHECK(model.class_labels ==
          std::vector<Label>{Label::Rest, Label::LowLoad});
    CHECK(model.oob_accuracy == doctest::Approx(1.0));
}

TEST_CASE("the forest separates three blobs and agrees with a centroid oracle") {
    const auto rows = make_blobs(60, 5);
    const ForestModel model = train(rows, small_params(), 7);

    CHECK(model.class_labels ==
          std::vector<Label>{Label::Rest, Label::LowLoad, Label::HighLoad});
    CHECK(model.feature_names == kTwoNames);
    CHECK(model.oob_accuracy >= 0.95);
    CHECK(model.oob_accuracy <= 1.0);

    Rng rng(99);
    for (int i = 0; i < 90; ++i) {
        const double cx[3] = {0.0, 10.0, -10.0};
        const double cy[3] = {0.0, 10.0, 10.0};
        const int c = i % 3;
        const double x = cx[c] + rng.normal();
        const double y = cy[c] + rng.normal();
        const Prediction p = predict(model, make_row({x, y}, Label::Rest));
        CHECK(p.label == nearest_centroid(x, y));
        double sum = 0.0;
        for (const double q : p.probabilities) {
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            sum += q;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("training is deterministic for a fixed seed") {
    const auto rows = make_blobs(30, 11);
    const std::string a = serialize_model(train(rows, small_params(10), 42));
    const std::string b = serialize_model(train(rows, small_params(10), 42));
    const std::string c = serialize_model(train(rows, small_params(10), 43));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("cross-validation scores both protocols on separable data") {
    const auto rows = make_blobs(40, 13);

    SUBCASE("stratified") {
        const CvResult cv =
            cross_validate(rows, small_params(), 21, 5,
                           CvMode::StratifiedShuffled);
        CHECK(cv.mode == CvMode::StratifiedShuffled);
        REQUIRE(cv.fold_accuracies.size() == 5);
        CHECK(cv.mean_accuracy() >= 0.95);
        REQUIRE(cv.mean_confusion.size() == 3);
        for (std::size_t r = 0; r < 3; ++r) {
            double row_sum = 0.0;
            for (const double v : cv.mean_confusion[r]) row_sum += v;
            CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(cv.mean_confusion[r][r] >= 0.9);
        }
        CHECK(cv.class_labels ==
              std::vector<Label>{Label::Rest, Label::LowLoad, Label::HighLoad});
    }

    SUBCASE("blocked") {
        // The blob rows are interleaved, so contiguous blocks keep all
        // classes and blocked folds are valid.
        const CvResult cv =
            cross_validate(rows, small_params(), 21, 5, CvMode::Blocked);
        CHECK(cv.mode == CvMode::Blocked);
        REQUIRE(cv.fold_accuracies.size() == 5);
        CHECK(cv.mean_accuracy() >= 0.95);
    }

    SUBCASE("mean accuracy is the mean of the folds") {
        const CvResult cv = cross_validate(rows, small_params(10), 3, 4);
        double sum = 0.0;
        for (const double a : cv.fold_accuracies) sum += a;
        CHECK(cv.mean_accuracy() ==
              doctest::Approx(sum / 4.0).epsilon(1e-15));
    }
}

TEST_CASE("shuffled labels score near chance") {
    Rng feature_rng(17);
    double mean_acc = 0.0;
    const int n_seeds = 5;
    for (int s = 0; s < n_seeds; ++s) {
        std::vector<FeatureVector> rows;
        const Label cycle[3] = {Label::Rest, Label::LowLoad, Label::HighLoad};
        for (int i = 0; i < 120; ++i) {
            rows.push_back(make_row(
                {feature_rng.normal(), feature_rng.normal()}, cycle[i % 3]));
        }
        const CvResult cv = cross_validate(
            rows, small_params(), 100 + static_cast<std::uint64_t>(s), 5,
            CvMode::StratifiedShuffled);
        mean_acc += cv.mean_accuracy();
    }
    mean_acc /= n_seeds;
    CHECK(mean_acc > 0.18);
    CHECK(mean_acc < 0.50);
}

TEST_CASE("monotone feature maps preserve tree structure") {
    const auto rows = make_blobs(30, 19);
    auto cubed = rows;
    for (auto& row : cubed) {
        for (double& v : row.values) v = v * v * v;
    }
    const ForestModel a = train(rows, small_params(15), 33);
    const ForestModel b = train(cubed, small_params(15), 33);

    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        const auto& na = a.trees[t].nodes;
        const auto& nb = b.trees[t].nodes;
        REQUIRE(na.size() == nb.size());
        for (std::size_t i = 0; i < na.size(); ++i) {
            CHECK(na[i].feature_index == nb[i].feature_index);
            CHECK(na[i].left == nb[i].left);
            CHECK(na[i].right == nb[i].right);
            CHECK(na[i].class_counts == nb[i].class_counts);
        }
    }
}

TEST_CASE("positive affine feature maps preserve every prediction") {
    const auto rows = make_blobs(30, 23);
    const double scale = 2.5;
    const double offset = 7.0;
    auto mapped = rows;
    for (auto& row : mapped) {
        for (double& v : row.values) v = scale * v + offset;
    }
    const ForestModel a = train(rows, small_params(15), 33);
    const ForestModel b = train(mapped, small_params(15), 33);

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double x = 12.0 * rng.normal();
        const double y = 12.0 * rng.normal();
        const Prediction pa = predict(a, make_row({x, y}, Label::Rest));
        const Prediction pb = predict(
            b, make_row({scale * x + offset, scale * y + offset}, Label::Rest));
        CHECK(pa.label == pb.label);
        CHECK(pa.probabilities == pb.probabilities);
    }
}

TEST_CASE("oversized features_per_split is clamped, not an error") {
    const auto rows = make_blobs(10, 29);
    ForestParams p = small_params(5);
    p.features_per_split = 10;  // only 2 features exist
    const ForestModel model = train(rows, p, 1);
    CHECK(model.trees.size() == 5);
    CHECK(model.oob_accuracy > 0.8);
}

TEST_CASE("training rejects degenerate datasets") {
    CHECK_THROWS_AS(train({}, small_params(), 1), DegenerateTrainingError);

    std::vector<FeatureVector> single;
    for (int i = 0; i < 10; ++i) {
        single.push_back(make_row({1.0 * i, 2.0}, Label::Rest));
    }
    CHECK_THROWS_AS(train(single, small_params(), 1), DegenerateTrainingError);

    auto mixed = make_blobs(5, 31);
    mixed[3].names = {"f0", "other"};
    CHECK_THROWS_AS(train(mixed, small_params(), 1), SchemaError);

    auto short_row = make_blobs(5, 31);
    short_row[2].values.pop_back();
    CHECK_THROWS_AS(train(short_row, small_params(), 1), SchemaError);
}

TEST_CASE("parameter validation rejects out-of-range settings") {
    ForestParams p = small_params();
    p.n_trees = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = small_params();
    p.max_depth = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = small_params();
    p.min_leaf_size = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = small_params();
    p.features_per_split = -1;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    CHECK_NOTHROW(small_params().validate());
}

TEST_CASE("prediction validates the feature schema") {
    const auto rows = make_blobs(10, 37);
    const ForestModel model = train(rows, small_params(5), 2);
    CHECK_THROWS_AS(
        predict(model, make_row({1.0, 2.0}, Label::Rest, {"f0", "bad"})),
        SchemaError);
    CHECK_THROWS_AS(predict(model, make_row({1.0}, Label::Rest, {"f0"})),
                    SchemaError);
}

TEST_CASE("cross-validation rejects invalid fold counts") {
    const auto rows = make_blobs(4, 41);  // 12 rows
    CHECK_THROWS_AS(cross_validate(rows, small_params(5), 1, 1),
                    ParameterError);
    CHECK_THROWS_AS(cross_validate(rows, small_params(5), 1, 13),
                    ParameterError);
}

TEST_CASE("blocked folds fail loudly when a class is confined to one block") {
    std::vector<FeatureVector> rows;
    Rng rng(43);
    const Label labels[3] = {Label::Rest, Label::LowLoad, Label::HighLoad};
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 10; ++i) {
            rows.push_back(
                make_row({rng.normal() + 10.0 * c, rng.normal()}, labels[c]));
        }
    }
    CHECK_THROWS_AS(cross_validate(rows, small_params(5), 1, 3, CvMode::Blocked),
                    FoldError);
}

TEST_CASE("stratified folds fail loudly when a class is nearly absent") {
    auto rows = make_blobs(6, 47);  // 18 rows, 6 per class
    // Keep a single HighLoad row: whichever fold tests it lacks it in training.
    std::vector<FeatureVector> pruned;
    int high_kept = 0;
    for (const auto& row : rows) {
        if (row.label == Label::HighLoad && high_kept++ > 0) continue;
        pruned.push_back(row);
    }
    CHECK_THROWS_AS(cross_validate(pruned, small_params(5), 1, 5,
                                   CvMode::StratifiedShuffled),
                    FoldError);
}

TEST_CASE("model serialization round-trips byte for byte") {
    const auto rows = make_blobs(20, 53);
    const ForestModel model = train(rows, small_params(8), 9);
    const std::string text = serialize_model(model);
    const ForestModel back = deserialize_model(text);
    CHECK(serialize_model(back) == text);

    CHECK(back.params.n_trees == model.params.n_trees);
    CHECK(back.seed == model.seed);
    CHECK(back.oob_accuracy == model.oob_accuracy);
    CHECK(back.class_labels == model.class_labels);
    CHECK(back.feature_names == model.feature_names);

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const FeatureVector q =
            make_row({10.0 * rng.normal(), 10.0 * rng.normal()}, Label::Rest);
        const Prediction pa = predict(model, q);
        const Prediction pb = predict(back, q);
        CHECK(pa.label == pb.label);
        CHECK(pa.probabilities == pb.probabilities);
    }
}

TEST_CASE("deserialization rejects wrong tags and malformed input") {
    const auto rows = make_blobs(5, 59);
    const ForestModel model = train(rows, small_params(3), 9);
    std::string text = serialize_model(model);

    std::string wrong_format = text;
    const auto fpos = wrong_format.find("hemopipe-forest");
    REQUIRE(fpos != std::string::npos);
    wrong_format.replace(fpos, 15, "something-other");
    CHECK_THROWS_AS(deserialize_model(wrong_format), SchemaError);

    std::string wrong_version = text;
    const auto vpos = wrong_version.find("\"version\":1");
    REQUIRE(vpos != std::string::npos);
    wrong_version.replace(vpos, 11, "\"version\":2");
    CHECK_THROWS_AS(deserialize_model(wrong_version), SchemaError);

    CHECK_THROWS_AS(deserialize_model("not json at all"), SchemaError);
    CHECK_THROWS_AS(deserialize_model(text.substr(0, text.size() / 2)),
                    SchemaError);
    CHECK_THROWS_AS(deserialize_model("{}"), SchemaError);
}

TEST_CASE("model files save and load through the filesystem") {
    test_helpers::TempDir dir;
    const auto rows = make_blobs(5, 61);
    const ForestModel model = train(rows, small_params(3), 4);
    const std::string path = dir.file("model.json");
    save_model(model, path);

    const ForestModel back = load_model(path);
    CHECK(serialize_model(back) == serialize_model(model));

    CHECK_THROWS_AS(load_model(dir.file("missing.json")), IoError);
}

TEST_CASE("cross-validation mode names round-trip") {
    CHECK(std::string(to_string(CvMode::StratifiedShuffled)) == "stratified");
    CHECK(std::string(to_string(CvMode::Blocked)) == "blocked");
    CHECK(cv_mode_from_string("stratified") == CvMode::StratifiedShuffled);
    CHECK(cv_mode_from_string("stratified_shuffled") ==
          CvMode::StratifiedShuffled);
    CHECK(cv_mode_from_string("blocked") == CvMode::Blocked);
    CHECK_THROWS_AS(cv_mode_from_string("nope"), ParameterError);
}
