#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdsent/dates.hpp"

namespace crowdsent {

struct PriceBar {
    DayNum date = 0;
    double open = 0, high = 0, low = 0, close = 0;
    std::int64_t volume = 0;
};

struct PriceSeries {
    std::string symbol;
    std::vector<PriceBar> bars;  // strictly increasing dates
};

struct PriceStore {
    std::map<std::string, PriceSeries> series;
    std::string benchmark_symbol;  // must name a series before an index backtest

    const PriceSeries* find(const std::string& symbol) const {
        auto it = series.find(symbol);
        return it == series.end() ? nullptr : &it->second;
    }
    const PriceSeries& benchmark() const;
};

struct PriceLoadReport {
    // (symbol, line_no, reason) for every rejected row
    std::vector<std::tuple<std::string, std::size_t, std::string>> rejected_rows;
    std::vector<std::string> skipped_files;  // empty or header-only files
};

// Loads every `<TICKER>.csv` in the directory (header Date,Open,High,Low,Close,Volume).
PriceStore load_prices(const std::filesystem::path& directory, PriceLoadReport* report = nullptr);

void save_price_series(const PriceSeries& series, const std::filesystem::path& path);

// First bar with date in [date, date + max_slip]; nullopt when no such bar.
std::optional<std::pair<DayNum, double>> close_on_or_after(const PriceSeries& series, DayNum date,
                                                           int max_slip);

// Last close at or before `date`; used for mark-to-market.
std::optional<double> close_at_or_before(const PriceSeries& series, DayNum date);

inline constexpr int kDefaultMaxSlipDays = 5;

// (P(d+W) - P(d)) / P(d), both endpoints resolved with close_on_or_after
// (max_slip 5); nullopt when either endpoint is missing.
std::optional<double> forward_move(const PriceSeries& series, DayNum d, int horizon_days);

}  // namespace crowdsent
