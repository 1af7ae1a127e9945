#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "crowdsent/corpus.hpp"
#include "crowdsent/market_data.hpp"

namespace crowdsent {

// Synthetic corpus + price generator with planted effects. Everything is
// derived from one integer-seeded generator, so a config regenerates the
// same bundle byte for byte.
struct PriceModel {
    double drift = 0.0;             // per-day log drift
    double daily_vol = 0.003;       // per-day log stdev
    double signal_bump = 0.04;      // fractional move tied to each post
    int signal_window_days = 7;     // the bump is spread over this many days
};

struct CommentModel {
    double base_rate = 5.0;         // mean comments per post
    double planted_multiplier = 1.0;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    int n_authors = 10;
    int n_stocks = 8;
    int posts_per_author = 50;
    std::set<std::string> planted_authors;
    double p_good = 0.9;        // planted authors' per-post accuracy
    double p_background = 0.5;  // everyone else
    PriceModel price_model;
    CommentModel comment_model;
    DayNum period_start = 0;
    DayNum period_end = 0;  // exclusive
    PostKind post_kind = PostKind::Article;
};

std::string synth_author_id(int index);
std::string synth_stock_symbol(int index);
// the first `count` author ids, as a convenience for planting
std::set<std::string> first_authors(int count);

inline constexpr const char* kSynthBenchmarkSymbol = "SPX";

struct GroundTruthRow {
    std::string post_id;
    std::string author_id;
    std::string symbol;
    int intended_polarity = 0;  // +1 / -1
    bool accurate = false;      // price bump agrees with the intended polarity
    bool planted = false;
};

struct SynthBundle {
    Corpus corpus;
    PriceStore prices;  // per-stock series plus the SPX benchmark
    std::vector<GroundTruthRow> ground_truth;
};

SynthBundle generate(const SynthConfig& config);

// Follower edges over the synthetic authors: everyone links to planted
// authors with high probability, producing the hub-heavy shape of a
// contributor/reader community.
std::vector<std::pair<std::string, std::string>> make_follow_edges(const SynthConfig& config);

// corpus.jsonl, prices/<SYM>.csv, ground_truth.csv (and edges.tsv)
void write_bundle(const SynthBundle& bundle, const SynthConfig& config,
                  const std::filesystem::path& directory);

}  // namespace crowdsent
