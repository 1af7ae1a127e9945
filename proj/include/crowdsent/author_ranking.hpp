#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crowdsent/corpus.hpp"
#include "crowdsent/correlation.hpp"
#include "crowdsent/lexicon_sentiment.hpp"
#include "crowdsent/market_data.hpp"

namespace crowdsent {

// PerA: mean hypothetical return per (post, symbol) pair.
// PerS: mean over stocks of the per-stock mean return.
// AllCom: total comments received. AvgCom: comments per post.
enum class RankMetric { PerA, PerS, AllCom, AvgCom };

const char* rank_metric_name(RankMetric m);
RankMetric parse_rank_metric(const std::string& name);

struct RankingConfig {
    RankMetric metric = RankMetric::PerA;
    Timestamp period_start = 0;
    Timestamp period_end = 0;
    int horizon_days = 7;   // W for the return metrics
    int min_posts = 5;      // eligibility floor
    int universe_size = 500;
};

struct RankedAuthor {
    std::string author_id;
    double metric_value = 0.0;
    int post_count = 0;
    std::int64_t comment_total = 0;
};

struct AuthorRanking {
    std::vector<RankedAuthor> entries;  // metric desc, ties by author_id asc
    RankingConfig config;
};

AuthorRanking rank_authors(const Corpus& corpus, const std::vector<StockSentiment>& sentiments,
                           const PriceStore& prices, const RankingConfig& config);

void save_ranking(const AuthorRanking& ranking, const std::filesystem::path& path);

struct UniverseEntry {
    std::string symbol;
    std::vector<std::string> sponsors;  // ranked authors that mentioned it, rank order
};

struct Universe {
    std::vector<UniverseEntry> entries;
    bool short_universe = false;  // fewer distinct symbols than requested
};

// Walks authors in rank order collecting distinct symbols from their
// in-period posts (date order) until universe_size symbols are gathered.
// Each author is processed whole, so late mentions of an already-collected
// symbol by the finishing author still register sponsorship.
Universe select_universe(const AuthorRanking& ranking, const Corpus& corpus, Timestamp start,
                         Timestamp end);

struct RerankPeriod {
    int rank_year = 0;   // heuristics computed over this calendar year
    int trade_year = 0;  // = rank_year + 1
};

// One cycle per tradable year; the first tradable year is the year after the
// span's first. Throws when the span covers fewer than two calendar years.
std::vector<RerankPeriod> yearly_rerank_schedule(Timestamp span_min, Timestamp span_max);

}  // namespace crowdsent
