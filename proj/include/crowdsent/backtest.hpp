#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crowdsent/author_ranking.hpp"
#include "crowdsent/corpus.hpp"
#include "crowdsent/lexicon_sentiment.hpp"
#include "crowdsent/market_data.hpp"

namespace crowdsent {

enum class StrategyKind { IndexSentiment, Long, LongShort, BuyAndHold };
enum class SentimentScope { AllSentiment, UniverseOnly };
enum class WindowSentiment { Positive, Negative, NoSignal };

StrategyKind parse_strategy_kind(const std::string& name);

// A dated, directional piece of sentiment, joined from a post and one of its
// per-stock sentiments. Neutral sentiments never become events.
struct SentimentEvent {
    DayNum date = 0;
    std::string symbol;  // "*" = market-wide
    int polarity = 0;    // +1 / -1
    std::string author_id;
};

std::vector<SentimentEvent> make_events(const Corpus& corpus,
                                        const std::vector<StockSentiment>& sentiments);

struct EventFilter {
    std::optional<std::string> symbol;                   // this symbol only
    const std::set<std::string>* universe = nullptr;     // symbol must be in the set
    const std::vector<std::string>* sponsors = nullptr;  // author must be listed (empty: anyone)

    bool matches(const SentimentEvent& e) const;

    static EventFilter all() { return {}; }
    static EventFilter for_symbol(std::string sym) {
        EventFilter f;
        f.symbol = std::move(sym);
        return f;
    }
    static EventFilter for_universe(const std::set<std::string>& u) {
        EventFilter f;
        f.universe = &u;
        return f;
    }
};

// Window rule: a day is net-positive (net-negative) when the mean polarity of
// its in-scope events is > 0 (< 0); the window is Positive when net-positive
// days outnumber net-negative days, Negative when outnumbered, NoSignal on a
// tie or silence. Days are start <= date < end.
WindowSentiment aggregate_window_sentiment(const std::vector<SentimentEvent>& events, DayNum start,
                                           DayNum end, const EventFilter& filter);

struct StrategyConfig {
    StrategyKind kind = StrategyKind::BuyAndHold;
    int window_days = 7;  // K: aggregation window and trading cadence
    Universe universe;    // stocks + sponsoring authors for per-stock strategies
    double initial_capital = 1.0e6;
    SentimentScope scope = SentimentScope::AllSentiment;
};

struct Trade {
    DayNum date = 0;
    std::string symbol;
    std::string action;  // BUY / SELL / SHORT / COVER
    double shares = 0.0;
    double price = 0.0;
};

struct BacktestSummary {
    double total_return_pct = 0.0;
    double max_drawdown_pct = 0.0;
    std::size_t trade_count = 0;
};

struct BacktestResult {
    std::vector<std::pair<DayNum, double>> equity_curve;  // normalized, starts at 1.0
    std::vector<Trade> trades;
    BacktestSummary summary;
    std::vector<std::string> notes;  // stop-outs, delistings, cash-stranded stocks
};

// S&P-style single-instrument strategy: start invested; every K days check
// the previous window's aggregated sentiment and sell / buy back / hold.
BacktestResult run_index_strategy(const std::vector<SentimentEvent>& events,
                                  const PriceSeries& benchmark, const StrategyConfig& config,
                                  DayNum start, DayNum end);

// Equal allocations per universe stock; weekly per-stock decisions from the
// sponsoring authors' sentiment. Buckets never cross-fund.
BacktestResult run_long_strategy(const std::vector<SentimentEvent>& events,
                                 const PriceStore& prices, const StrategyConfig& config,
                                 DayNum start, DayNum end);

// Long strategy plus one-week shorts on negative sentiment, sized to 1/N of
// the current portfolio value; a bucket that loses its entire initial
// allocation is closed and its stock removed.
BacktestResult run_long_short_strategy(const std::vector<SentimentEvent>& events,
                                       const PriceStore& prices, const StrategyConfig& config,
                                       DayNum start, DayNum end);

BacktestResult run_buy_and_hold(const PriceSeries& series, double initial_capital, DayNum start,
                                DayNum end);
BacktestResult run_buy_and_hold_universe(const PriceStore& prices, const StrategyConfig& config,
                                         DayNum start, DayNum end);

// Yearly cycle: rank authors on year Y-1, rebuild the universe, trade year Y
// with the capital carried over; equity is stitched into one curve.
struct RerankRunConfig {
    RankMetric metric = RankMetric::AllCom;
    int rank_horizon_days = 7;
    int min_posts = 5;
    int universe_size = 500;
    StrategyKind kind = StrategyKind::Long;
    int window_days = 7;
    double initial_capital = 1.0e6;
};

BacktestResult run_reranked(const Corpus& corpus, const std::vector<StockSentiment>& sentiments,
                            const PriceStore& prices, const RerankRunConfig& config);

void save_backtest_result(const BacktestResult& result, const std::filesystem::path& directory);

}  // namespace crowdsent
