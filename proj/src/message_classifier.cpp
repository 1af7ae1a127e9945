#include "crowdsent/message_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "crowdsent/rng.hpp"
#include "crowdsent/text.hpp"
#include "crowdsent/util.hpp"

namespace crowdsent {

std::vector<std::string> message_tokens(const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    std::erase_if(tokens, [](const std::string& t) { return t.size() < 2; });
    return tokens;
}

FeatureSpace build_features(const std::vector<Post>& posts, std::int64_t min_count,
                            std::set<std::string> stopwords, std::set<std::string> excluded) {
    if (posts.empty()) throw std::invalid_argument("build_features: no posts");

    std::unordered_map<std::string, std::int64_t> counts;
    for (const Post& p : posts) {
        for (const std::string& t : message_tokens(p.text)) ++counts[t];
    }

    FeatureSpace fs;
    fs.min_token_count = min_count;
    fs.stopwords = std::move(stopwords);
    fs.excluded = std::move(excluded);

    std::set<std::string> excluded_lower;
    for (const std::string& e : fs.excluded) excluded_lower.insert(to_lower(e));

    std::vector<std::string> kept;
    for (const auto& [token, n] : counts) {
        if (n < min_count) continue;
        if (fs.stopwords.count(token) || excluded_lower.count(token)) continue;
        kept.push_back(token);
    }
    if (kept.empty())
        throw std::runtime_error(
            "build_features: empty vocabulary after filtering (min_count=" +
            std::to_string(min_count) + ", " + std::to_string(counts.size()) + " distinct tokens)");
    std::sort(kept.begin(), kept.end());
    for (std::uint32_t i = 0; i < kept.size(); ++i) fs.vocabulary.emplace(kept[i], i);
    return fs;
}

std::vector<std::uint32_t> vectorize(const Post& post, const FeatureSpace& fs) {
    std::vector<std::uint32_t> indices;
    for (const std::string& t : message_tokens(post.text)) {
        if (auto it = fs.vocabulary.find(t); it != fs.vocabulary.end()) indices.push_back(it->second);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

LinearModel train(const std::vector<std::vector<std::uint32_t>>& vectors,
                  const std::vector<int>& labels, const TrainConfig& config, std::size_t dim) {
    if (vectors.size() != labels.size())
        throw std::invalid_argument("train: vectors/labels size mismatch");
    bool has_pos = false, has_neg = false;
    for (int y : labels) (y > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw std::runtime_error("train: need both classes present");

    LinearModel model;
    model.config = config;
    model.weights.assign(dim, 0.0);

    Rng rng(config.seed);
    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), 0);

    const double lambda = config.regularization;
    const double lr = config.learning_rate;
    std::int64_t t = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            ++t;
            const auto& x = vectors[idx];
            const double y = labels[idx] > 0 ? 1.0 : -1.0;
            const double eta = lr / (1.0 + lr * lambda * static_cast<double>(t));
            double margin = model.bias;
            for (std::uint32_t f : x) margin += model.weights[f];
            margin *= y;
            const double shrink = 1.0 - eta * lambda;
            for (double& w : model.weights) w *= shrink;
            if (margin < 1.0) {
                for (std::uint32_t f : x) model.weights[f] += eta * y;
                model.bias += eta * y;
            }
        }
    }
    return model;
}

double decision_value(const LinearModel& model, const std::vector<std::uint32_t>& vector) {
    double v = model.bias;
    for (std::uint32_t f : vector) {
        if (f >= model.weights.size())
            throw std::invalid_argument("decision_value: feature index out of range");
        v += model.weights[f];
    }
    return v;
}

int predict(const LinearModel& model, const std::vector<std::uint32_t>& vector) {
    return decision_value(model, vector) < 0.0 ? -1 : +1;
}

CvReport cross_validate(const std::vector<Post>& posts, int k, std::int64_t min_count,
                        const std::set<std::string>& stopwords,
                        const std::set<std::string>& excluded, const TrainConfig& config) {
    if (k < 2) throw std::invalid_argument("cross_validate: k must be >= 2");
    if (posts.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("cross_validate: fewer posts than folds");

    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (!posts[i].label) throw std::invalid_argument("cross_validate: unlabeled post");
        (*posts[i].label == Label::Bullish ? pos_idx : neg_idx).push_back(i);
    }

    // stratified folds: shuffle within class, deal round-robin
    Rng rng(config.seed);
    rng.shuffle(pos_idx);
    rng.shuffle(neg_idx);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < pos_idx.size(); ++i) folds[i % k].push_back(pos_idx[i]);
    for (std::size_t i = 0; i < neg_idx.size(); ++i) folds[i % k].push_back(neg_idx[i]);

    CvReport report;
    for (int f = 0; f < k; ++f) {
        std::vector<Post> train_posts;
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            for (std::size_t i : folds[g]) train_posts.push_back(posts[i]);
        }
        bool tr_pos = false, tr_neg = false;
        for (const Post& p : train_posts) (*p.label == Label::Bullish ? tr_pos : tr_neg) = true;
        if (!tr_pos || !tr_neg)
            throw std::runtime_error("cross_validate: a class is absent from fold " +
                                     std::to_string(f) + "'s training split");

        FeatureSpace fs = build_features(train_posts, min_count, stopwords, excluded);
        std::vector<std::vector<std::uint32_t>> xs;
        std::vector<int> ys;
        xs.reserve(train_posts.size());
        for (const Post& p : train_posts) {
            xs.push_back(vectorize(p, fs));
            ys.push_back(*p.label == Label::Bullish ? +1 : -1);
        }
        LinearModel model = train(xs, ys, config, fs.dim());

        std::int64_t correct = 0;
        for (std::size_t i : folds[f]) {
            int actual = *posts[i].label == Label::Bullish ? +1 : -1;
            int predicted = predict(model, vectorize(posts[i], fs));
            if (actual == predicted) ++correct;
            report.confusion[actual > 0 ? 0 : 1][predicted > 0 ? 0 : 1] += 1;
        }
        report.fold_accuracies.push_back(folds[f].empty()
                                             ? 0.0
                                             : static_cast<double>(correct) /
                                                   static_cast<double>(folds[f].size()));
    }
    report.mean_accuracy =
        std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) /
        static_cast<double>(report.fold_accuracies.size());
    return report;
}

std::vector<StockSentiment> label_corpus(const LinearModel& model, const FeatureSpace& fs,
                                         const std::vector<Post>& posts) {
    std::vector<StockSentiment> out;
    for (const Post& p : posts) {
        if (p.kind != PostKind::Message) continue;
        int polarity;
        if (p.label) {
            polarity = *p.label == Label::Bullish ? +1 : -1;  // ground truth wins
        } else {
            polarity = predict(model, vectorize(p, fs));
        }
        if (p.symbols.empty()) {
            out.push_back(sentiment_binary(p.post_id, "*", polarity));
        } else {
            for (const std::string& sym : p.symbols)
                out.push_back(sentiment_binary(p.post_id, sym, polarity));
        }
    }
    return out;
}

std::set<std::string> load_token_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open token file: " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = strip(line);
        if (!t.empty() && t[0] != '#') out.insert(to_lower(t));
    }
    return out;
}

void save_model(const LinearModel& model, const FeatureSpace& fs,
                const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "crowdsent-model v1\n";
    out << "epochs " << model.config.epochs << '\n';
    out << "learning_rate " << fmt_double(model.config.learning_rate, 9) << '\n';
    out << "regularization " << fmt_double(model.config.regularization, 9) << '\n';
    out << "seed " << model.config.seed << '\n';
    out << "min_token_count " << fs.min_token_count << '\n';
    out << "bias " << fmt_double_exact(model.bias) << '\n';
    out << "features " << fs.vocabulary.size() << '\n';
    for (const auto& [token, idx] : fs.vocabulary)
        out << token << ' ' << fmt_double_exact(model.weights[idx]) << '\n';
}

std::pair<LinearModel, FeatureSpace> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || strip(line) != "crowdsent-model v1")
        throw std::runtime_error("unrecognized model file: " + path.string());

    LinearModel model;
    FeatureSpace fs;
    std::size_t n_features = 0;
    std::string key;
    while (in >> key) {
        if (key == "epochs") in >> model.config.epochs;
        else if (key == "learning_rate") in >> model.config.learning_rate;
        else if (key == "regularization") in >> model.config.regularization;
        else if (key == "seed") in >> model.config.seed;
        else if (key == "min_token_count") in >> fs.min_token_count;
        else if (key == "bias") in >> model.bias;
        else if (key == "features") {
            in >> n_features;
            break;
        } else {
            throw std::runtime_error("bad model header key: " + key);
        }
    }
    model.weights.resize(n_features);
    for (std::size_t i = 0; i < n_features; ++i) {
        std::string token;
        double w;
        if (!(in >> token >> w)) throw std::runtime_error("truncated model file");
        fs.vocabulary.emplace(token, static_cast<std::uint32_t>(i));
        model.weights[i] = w;
    }
    return {std::move(model), std::move(fs)};
}

}  // namespace crowdsent
