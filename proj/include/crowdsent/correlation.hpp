#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crowdsent/corpus.hpp"
#include "crowdsent/lexicon_sentiment.hpp"
#include "crowdsent/market_data.hpp"

namespace crowdsent {

// One binary observation: sentiment sign vs forward price-move sign.
struct SignedPair {
    int s = 0;  // +1 / -1
    int p = 0;  // +1 / -1
    std::string symbol;
    std::string post_id;
    int year = 0;  // of the post's publication date
};

struct CorrelationResult {
    double rho = 0.0;
    std::size_t n = 0;
    int horizon_days = 0;
    std::optional<int> year;
};

struct DropCounts {
    std::size_t neutral = 0;  // neutral sentiment
    std::size_t zero = 0;     // exactly-zero forward move
    std::size_t missing = 0;  // no usable price data (incl. market-wide "*")
};

using PostTimes = std::map<std::string, Timestamp>;
PostTimes post_times(const Corpus& corpus);

// Binary pairs at one horizon. Neutral sentiments, zero moves and
// missing-price posts are dropped and counted, never sign-assigned.
std::vector<SignedPair> make_pairs(const std::vector<StockSentiment>& sentiments,
                                   const PostTimes& times, const PriceStore& prices,
                                   int horizon_days, DropCounts* drops = nullptr);

// Pearson correlation over the +/-1 samples (the phi coefficient of the 2x2
// table). Throws std::domain_error when n < 2 or either variable is constant.
CorrelationResult pearson_binary(const std::vector<SignedPair>& pairs, int horizon_days = 0,
                                 std::optional<int> year = std::nullopt);

struct CorrelationCell {
    int year = 0;
    int horizon_days = 0;
    std::optional<double> rho;  // absent = undefined (flagged, not fabricated)
    std::size_t n = 0;
    DropCounts drops;
};

// One cell per (year, horizon), sorted by year then horizon.
std::vector<CorrelationCell> correlate_by_year_horizon(
    const std::vector<StockSentiment>& sentiments, const PostTimes& times,
    const PriceStore& prices, const std::vector<int>& horizons);

void save_correlation_table(const std::vector<CorrelationCell>& cells,
                            const std::filesystem::path& path);

// Hypothetical return of one piece of sentiment: the forward move for
// positive sentiment, its negation for negative sentiment.
struct ArticleReturn {
    std::string post_id;
    std::string symbol;
    int horizon_days = 0;
    double r = 0.0;
};

std::optional<ArticleReturn> article_return(const StockSentiment& sentiment,
                                            const PostTimes& times, const PriceStore& prices,
                                            int horizon_days);

}  // namespace crowdsent
