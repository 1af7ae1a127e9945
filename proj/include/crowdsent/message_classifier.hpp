#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crowdsent/corpus.hpp"
#include "crowdsent/lexicon_sentiment.hpp"

namespace crowdsent {

// lowercase unigrams, split on non-alphanumeric, tokens shorter than 2 dropped
std::vector<std::string> message_tokens(const std::string& text);

struct FeatureSpace {
    std::map<std::string, std::uint32_t> vocabulary;  // token -> index, lexicographic
    std::int64_t min_token_count = 300;
    std::set<std::string> stopwords;
    std::set<std::string> excluded;  // tickers and company names

    std::size_t dim() const { return vocabulary.size(); }
};

// Vocabulary = unigrams occurring >= min_count times across the posts, minus
// stopwords and excluded terms. Throws if nothing survives.
FeatureSpace build_features(const std::vector<Post>& posts, std::int64_t min_count,
                            std::set<std::string> stopwords, std::set<std::string> excluded);

// Presence features: sorted unique vocabulary indices found in the text.
std::vector<std::uint32_t> vectorize(const Post& post, const FeatureSpace& fs);

struct TrainConfig {
    int epochs = 40;
    double learning_rate = 1.0;
    double regularization = 1e-3;
    std::uint64_t seed = 1;
};

struct LinearModel {
    std::vector<double> weights;  // one per vocabulary index
    double bias = 0.0;
    TrainConfig config;
};

// Hinge-loss linear model trained by stochastic subgradient descent with an
// L2 penalty; deterministic for a fixed seed. Labels are +1 / -1.
LinearModel train(const std::vector<std::vector<std::uint32_t>>& vectors,
                  const std::vector<int>& labels, const TrainConfig& config, std::size_t dim);

double decision_value(const LinearModel& model, const std::vector<std::uint32_t>& vector);
// sign of the decision value; exactly 0 maps to +1
int predict(const LinearModel& model, const std::vector<std::uint32_t>& vector);

struct CvReport {
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    // rows: actual {bullish, bearish}; cols: predicted {bullish, bearish}
    std::array<std::array<std::int64_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};
};

// Stratified k-fold cross-validation with a seeded shuffle. Features are
// rebuilt from each training split, so no test tokens leak into the model.
CvReport cross_validate(const std::vector<Post>& posts, int k, std::int64_t min_count,
                        const std::set<std::string>& stopwords,
                        const std::set<std::string>& excluded, const TrainConfig& config);

// Binary sentiment for every message: ground-truth labels win, unlabeled
// messages are predicted, and all symbols of a message share its polarity
// (symbol "*" when the message tags none).
std::vector<StockSentiment> label_corpus(const LinearModel& model, const FeatureSpace& fs,
                                         const std::vector<Post>& posts);

std::set<std::string> load_token_set(const std::filesystem::path& path);  // one token per line

void save_model(const LinearModel& model, const FeatureSpace& fs, const std::filesystem::path& path);
std::pair<LinearModel, FeatureSpace> load_model(const std::filesystem::path& path);

}  // namespace crowdsent
