#include "crowdsent/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "crowdsent/correlation.hpp"
#include "crowdsent/util.hpp"

namespace crowdsent {

StrategyKind parse_strategy_kind(const std::string& name) {
    if (name == "index") return StrategyKind::IndexSentiment;
    if (name == "long") return StrategyKind::Long;
    if (name == "longshort") return StrategyKind::LongShort;
    if (name == "hold") return StrategyKind::BuyAndHold;
    throw std::invalid_argument("unknown strategy: " + name);
}

std::vector<SentimentEvent> make_events(const Corpus& corpus,
                                        const std::vector<StockSentiment>& sentiments) {
    std::map<std::string, const Post*> posts;
    for (const Post& p : corpus.posts) posts.emplace(p.post_id, &p);
    std::vector<SentimentEvent> events;
    events.reserve(sentiments.size());
    for (const StockSentiment& s : sentiments) {
        if (s.polarity == Polarity::Neutral) continue;  // no directional vote
        auto it = posts.find(s.post_id);
        if (it == posts.end()) continue;
        events.push_back({day_of(it->second->published_at), s.symbol,
                          s.polarity == Polarity::Positive ? +1 : -1, it->second->author_id});
    }
    return events;
}

bool EventFilter::matches(const SentimentEvent& e) const {
    if (symbol && e.symbol != *symbol) return false;
    if (universe && !universe->count(e.symbol)) return false;
    if (sponsors && !sponsors->empty() &&
        std::find(sponsors->begin(), sponsors->end(), e.author_id) == sponsors->end())
        return false;
    return true;
}

WindowSentiment aggregate_window_sentiment(const std::vector<SentimentEvent>& events, DayNum start,
                                           DayNum end, const EventFilter& filter) {
    if (start >= end) throw std::invalid_argument("aggregate_window_sentiment: empty window");
    std::map<DayNum, std::pair<std::int64_t, std::int64_t>> days;  // date -> (sum, count)
    for (const SentimentEvent& e : events) {
        if (e.date < start || e.date >= end) continue;
        if (!filter.matches(e)) continue;
        auto& [sum, count] = days[e.date];
        sum += e.polarity;
        count += 1;
    }
    std::int64_t net_positive = 0, net_negative = 0;
    for (const auto& [_, sc] : days) {
        if (sc.first > 0) ++net_positive;        // day mean > 0
        else if (sc.first < 0) ++net_negative;   // day mean < 0; zero-mean days uncounted
    }
    if (net_positive > net_negative) return WindowSentiment::Positive;
    if (net_negative > net_positive) return WindowSentiment::Negative;
    return WindowSentiment::NoSignal;
}

namespace {

std::optional<double> close_at_exact(const PriceSeries& series, DayNum date) {
    auto it = std::lower_bound(series.bars.begin(), series.bars.end(), date,
                               [](const PriceBar& b, DayNum d) { return b.date < d; });
    if (it == series.bars.end() || it->date != date) return std::nullopt;
    return it->close;
}

void finish_summary(BacktestResult& result) {
    result.summary.trade_count = result.trades.size();
    if (result.equity_curve.empty()) return;
    result.summary.total_return_pct = (result.equity_curve.back().second - 1.0) * 100.0;
    double peak = result.equity_curve.front().second;
    double worst = 0.0;
    for (const auto& [_, v] : result.equity_curve) {
        peak = std::max(peak, v);
        if (peak > 0) worst = std::max(worst, (peak - v) / peak);
    }
    result.summary.max_drawdown_pct = worst * 100.0;
}

std::vector<const PriceBar*> bars_in_range(const PriceSeries& series, DayNum start, DayNum end) {
    std::vector<const PriceBar*> out;
    for (const PriceBar& b : series.bars) {
        if (b.date < start) continue;
        if (b.date > end) break;
        out.push_back(&b);
    }
    return out;
}

}  // namespace

BacktestResult run_index_strategy(const std::vector<SentimentEvent>& events,
                                  const PriceSeries& benchmark, const StrategyConfig& config,
                                  DayNum start, DayNum end) {
    if (config.window_days < 1) throw std::invalid_argument("window_days must be >= 1");
    auto bars = bars_in_range(benchmark, start, end);
    if (bars.empty()) throw std::runtime_error("benchmark has no bars in the run period");

    std::set<std::string> universe_symbols;
    for (const UniverseEntry& e : config.universe.entries) universe_symbols.insert(e.symbol);
    EventFilter filter = config.scope == SentimentScope::UniverseOnly
                             ? EventFilter::for_universe(universe_symbols)
                             : EventFilter::all();

    BacktestResult result;
    const double capital = config.initial_capital;
    double shares = capital / bars.front()->close;  // start by holding a position
    double cash = 0.0;
    bool invested = true;
    result.trades.push_back({bars.front()->date, benchmark.symbol, "BUY", shares,
                             bars.front()->close});

    const int K = config.window_days;
    DayNum next_boundary = start + K;
    for (const PriceBar* bar : bars) {
        while (next_boundary <= bar->date && next_boundary <= end) {
            // this bar is the first close on/after the boundary
            WindowSentiment w =
                aggregate_window_sentiment(events, next_boundary - K, next_boundary, filter);
            if (w == WindowSentiment::Negative && invested) {
                cash = shares * bar->close;
                result.trades.push_back({bar->date, benchmark.symbol, "SELL", shares, bar->close});
                shares = 0.0;
                invested = false;
            } else if (w == WindowSentiment::Positive && !invested) {
                shares = cash / bar->close;
                result.trades.push_back({bar->date, benchmark.symbol, "BUY", shares, bar->close});
                cash = 0.0;
                invested = true;
            }
            next_boundary += K;
        }
        double value = invested ? shares * bar->close : cash;
        result.equity_curve.emplace_back(bar->date, value / capital);
    }
    finish_summary(result);
    return result;
}

BacktestResult run_buy_and_hold(const PriceSeries& series, double initial_capital, DayNum start,
                                DayNum end) {
    auto bars = bars_in_range(series, start, end);
    if (bars.empty()) throw std::runtime_error("series has no bars in the run period");
    BacktestResult result;
    double shares = initial_capital / bars.front()->close;
    result.trades.push_back({bars.front()->date, series.symbol, "BUY", shares,
                             bars.front()->close});
    for (const PriceBar* bar : bars) {
        double value = shares * bar->close;
        result.equity_curve.emplace_back(bar->date, value / initial_capital);
    }
    finish_summary(result);
    return result;
}

// ---------------------------------------------------------------------------
// per-stock bucket engine (long and long/short strategies, universe B&H)
// ---------------------------------------------------------------------------

namespace {

struct Bucket {
    std::string symbol;
    const PriceSeries* series = nullptr;
    const std::vector<std::string>* sponsors = nullptr;
    double alloc = 0.0;  // initial allocation, stop-out reference
    double cash = 0.0;
    double shares = 0.0;
    double short_shares = 0.0;
    double short_entry = 0.0;
    bool active = true;

    bool has_short() const { return short_shares > 0.0; }

    double value_at(DayNum date) const {
        double v = cash;
        if (series) {
            auto close = close_at_or_before(*series, date);
            if (close) {
                if (shares > 0.0) v += shares * *close;
                if (has_short()) v += short_shares * (short_entry - *close);
            }
        }
        return v;
    }
};

struct StockEngine {
    const std::vector<SentimentEvent>& events;
    const StrategyConfig& config;
    DayNum start, end;
    bool allow_short;
    bool trade_on_sentiment;  // false: plain buy-and-hold over the universe
    BacktestResult result;
    std::vector<Bucket> buckets;

    StockEngine(const std::vector<SentimentEvent>& ev, const PriceStore& prices,
                const StrategyConfig& cfg, DayNum s, DayNum e, bool shorts, bool trade)
        : events(ev), config(cfg), start(s), end(e), allow_short(shorts),
          trade_on_sentiment(trade) {
        if (cfg.universe.entries.empty())
            throw std::invalid_argument("stock strategy: empty universe");
        const double alloc = cfg.initial_capital / static_cast<double>(cfg.universe.entries.size());
        for (const UniverseEntry& entry : cfg.universe.entries) {
            Bucket b;
            b.symbol = entry.symbol;
            b.series = prices.find(entry.symbol);
            b.sponsors = &entry.sponsors;
            b.alloc = alloc;
            b.cash = alloc;
            if (!b.series)
                result.notes.push_back("no price data for " + entry.symbol + ": bucket stays cash");
            buckets.push_back(b);
        }
    }

    double portfolio_value(DayNum date) const {
        double v = 0.0;
        for (const Bucket& b : buckets) v += b.value_at(date);
        return v;
    }

    void trade(DayNum date, const Bucket& b, const char* action, double shares, double price) {
        result.trades.push_back({date, b.symbol, action, shares, price});
    }

    struct PendingBuy {
        DayNum date = 0;
        std::size_t bucket = 0;
        double price = 0.0;
    };
    std::vector<PendingBuy> pending_buys;

    // initial purchases execute at each stock's first close on/after the run
    // start; they are applied when the date axis reaches that bar so marks
    // before it still see the cash
    void schedule_initial_buys() {
        for (std::size_t i = 0; i < buckets.size(); ++i) {
            Bucket& b = buckets[i];
            if (!b.series) {
                b.active = false;  // flagged above; the cash still counts toward the portfolio
                continue;
            }
            auto exec = close_on_or_after(*b.series, start, kDefaultMaxSlipDays);
            if (!exec || exec->first > end) {
                result.notes.push_back("no price data for " + b.symbol +
                                       " at start: bucket stays cash");
                b.active = false;
                continue;
            }
            pending_buys.push_back({exec->first, i, exec->second});
        }
    }

    void apply_pending_buys(DayNum date) {
        for (const PendingBuy& p : pending_buys) {
            if (p.date > date) continue;
            Bucket& b = buckets[p.bucket];
            if (b.shares > 0.0 || b.cash <= 0.0) continue;
            b.shares = b.cash / p.price;
            trade(p.date, b, "BUY", b.shares, p.price);
            b.cash = 0.0;
        }
        std::erase_if(pending_buys, [date](const PendingBuy& p) { return p.date <= date; });
    }

    // cover an open short at the given price; returns false when the bucket
    // stopped out and was closed
    bool cover_short(Bucket& b, DayNum date, double price) {
        b.cash += b.short_shares * (b.short_entry - price);
        trade(date, b, "COVER", b.short_shares, price);
        b.short_shares = 0.0;
        b.short_entry = 0.0;
        if (b.cash <= 0.0) {
            // lost the entire initial allocation: close and remove the stock
            result.notes.push_back("stop-out: " + b.symbol + " closed at " +
                                   format_iso_date(date));
            b.active = false;
            return false;
        }
        return true;
    }

    void force_liquidate(Bucket& b, DayNum boundary) {
        auto it = std::upper_bound(b.series->bars.begin(), b.series->bars.end(), boundary,
                                   [](DayNum d, const PriceBar& bar) { return d < bar.date; });
        if (it != b.series->bars.begin()) {
            const PriceBar& last = *std::prev(it);
            if (b.has_short()) cover_short(b, last.date, last.close);
            if (b.shares > 0.0) {
                b.cash += b.shares * last.close;
                trade(last.date, b, "SELL", b.shares, last.close);
                b.shares = 0.0;
            }
        }
        result.notes.push_back("delisted: " + b.symbol + " liquidated at last close");
        b.active = false;
    }

    void process_boundary(DayNum boundary) {
        const double total = portfolio_value(boundary);  // marked before boundary trades
        const std::size_t n = buckets.size();
        for (Bucket& b : buckets) {
            if (!b.active || !b.series) continue;
            auto exec = close_on_or_after(*b.series, boundary, kDefaultMaxSlipDays);
            if (!exec) {
                force_liquidate(b, boundary);
                continue;
            }
            const auto [exec_date, price] = *exec;
            // a short opened at the previous boundary is covered now
            if (b.has_short() && !cover_short(b, exec_date, price)) continue;
            if (!trade_on_sentiment) continue;

            EventFilter filter = EventFilter::for_symbol(b.symbol);
            filter.sponsors = b.sponsors;
            WindowSentiment w = aggregate_window_sentiment(events, boundary - config.window_days,
                                                           boundary, filter);
            if (w == WindowSentiment::Negative) {
                if (b.shares > 0.0) {
                    b.cash += b.shares * price;
                    trade(exec_date, b, "SELL", b.shares, price);
                    b.shares = 0.0;
                }
                if (allow_short) {
                    b.short_shares = (total / static_cast<double>(n)) / price;
                    b.short_entry = price;
                    trade(exec_date, b, "SHORT", b.short_shares, price);
                }
            } else {  // Positive, or NoSignal = keep the current stance
                if (w == WindowSentiment::Positive || w == WindowSentiment::NoSignal) {
                    if (b.shares == 0.0 && b.cash > 0.0) {
                        b.shares = b.cash / price;
                        trade(exec_date, b, "BUY", b.shares, price);
                        b.cash = 0.0;
                    }
                }
            }
        }
    }

    // daily stop-out check for open shorts, on the stock's own bar dates
    void check_stops(DayNum date) {
        for (Bucket& b : buckets) {
            if (!b.active || !b.has_short() || !b.series) continue;
            auto close = close_at_exact(*b.series, date);
            if (!close) continue;
            double value = b.cash + b.short_shares * (b.short_entry - *close);
            if (value <= 0.0) cover_short(b, date, *close);
        }
    }

    BacktestResult run() {
        // date axis: union of bar dates across the universe within the period
        std::set<DayNum> axis_set;
        for (const Bucket& b : buckets) {
            if (!b.series) continue;
            for (const PriceBar& bar : b.series->bars) {
                if (bar.date >= start && bar.date <= end) axis_set.insert(bar.date);
            }
        }
        if (axis_set.empty()) throw std::runtime_error("no price bars in the run period");

        schedule_initial_buys();

        const int K = config.window_days;
        DayNum next_boundary = start + K;
        for (DayNum date : axis_set) {
            apply_pending_buys(date);
            while (next_boundary <= date && next_boundary <= end) {
                process_boundary(next_boundary);
                next_boundary += K;
            }
            check_stops(date);
            result.equity_curve.emplace_back(date, portfolio_value(date) / config.initial_capital);
        }
        finish_summary(result);
        return std::move(result);
    }
};

}  // namespace

BacktestResult run_long_strategy(const std::vector<SentimentEvent>& events,
                                 const PriceStore& prices, const StrategyConfig& config,
                                 DayNum start, DayNum end) {
    StockEngine engine(events, prices, config, start, end, /*shorts=*/false, /*trade=*/true);
    return engine.run();
}

BacktestResult run_long_short_strategy(const std::vector<SentimentEvent>& events,
                                       const PriceStore& prices, const StrategyConfig& config,
                                       DayNum start, DayNum end) {
    StockEngine engine(events, prices, config, start, end, /*shorts=*/true, /*trade=*/true);
    return engine.run();
}

BacktestResult run_buy_and_hold_universe(const PriceStore& prices, const StrategyConfig& config,
                                         DayNum start, DayNum end) {
    static const std::vector<SentimentEvent> no_events;
    StockEngine engine(no_events, prices, config, start, end, /*shorts=*/false, /*trade=*/false);
    return engine.run();
}

BacktestResult run_reranked(const Corpus& corpus, const std::vector<StockSentiment>& sentiments,
                            const PriceStore& prices, const RerankRunConfig& config) {
    if (!corpus.span) throw std::runtime_error("run_reranked: empty corpus");
    auto schedule = yearly_rerank_schedule(corpus.span->first, corpus.span->second);

    BacktestResult combined;
    double running = config.initial_capital;
    const std::vector<SentimentEvent> events = make_events(corpus, sentiments);
    for (const RerankPeriod& period : schedule) {
        RankingConfig rc;
        rc.metric = config.metric;
        rc.period_start = year_start(period.rank_year);
        rc.period_end = year_start(period.rank_year + 1);
        rc.horizon_days = config.rank_horizon_days;
        rc.min_posts = config.min_posts;
        rc.universe_size = config.universe_size;
        AuthorRanking ranking = rank_authors(corpus, sentiments, prices, rc);
        Universe universe = select_universe(ranking, corpus, rc.period_start, rc.period_end);

        StrategyConfig sc;
        sc.kind = config.kind;
        sc.window_days = config.window_days;
        sc.universe = std::move(universe);
        sc.initial_capital = running;

        DayNum y0 = year_start_day(period.trade_year);
        DayNum y1 = year_start_day(period.trade_year + 1) - 1;

        BacktestResult yearly;
        switch (config.kind) {
            case StrategyKind::Long:
                yearly = run_long_strategy(events, prices, sc, y0, y1);
                break;
            case StrategyKind::LongShort:
                yearly = run_long_short_strategy(events, prices, sc, y0, y1);
                break;
            case StrategyKind::BuyAndHold:
                yearly = run_buy_and_hold_universe(prices, sc, y0, y1);
                break;
            default:
                throw std::invalid_argument("run_reranked: unsupported strategy kind");
        }
        const double scale = running / config.initial_capital;
        for (const auto& [date, v] : yearly.equity_curve)
            combined.equity_curve.emplace_back(date, v * scale);
        for (const Trade& t : yearly.trades) combined.trades.push_back(t);
        for (const std::string& n : yearly.notes)
            combined.notes.push_back(std::to_string(period.trade_year) + ": " + n);
        running *= 1.0 + yearly.summary.total_return_pct / 100.0;
    }
    finish_summary(combined);
    return combined;
}

void save_backtest_result(const BacktestResult& result, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    {
        std::ofstream out = open_output(directory / "equity.csv");
        out << "date,value\n";
        for (const auto& [date, v] : result.equity_curve)
            out << format_iso_date(date) << ',' << fmt_double(v, 10) << '\n';
    }
    {
        std::ofstream out = open_output(directory / "trades.csv");
        out << "date,symbol,action,shares,price\n";
        for (const Trade& t : result.trades)
            out << format_iso_date(t.date) << ',' << t.symbol << ',' << t.action << ','
                << fmt_double(t.shares, 8) << ',' << fmt_double(t.price, 6) << '\n';
    }
    {
        std::ofstream out = open_output(directory / "summary.csv");
        out << "total_return_pct,max_drawdown_pct,trades\n";
        out << fmt_double(result.summary.total_return_pct, 6) << ','
            << fmt_double(result.summary.max_drawdown_pct, 6) << ',' << result.summary.trade_count
            << '\n';
    }
    if (!result.notes.empty()) {
        std::ofstream out = open_output(directory / "notes.txt");
        for (const std::string& n : result.notes) out << n << '\n';
    }
}

}  // namespace crowdsent
