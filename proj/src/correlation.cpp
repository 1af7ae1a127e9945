#include "crowdsent/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crowdsent/util.hpp"

namespace crowdsent {

PostTimes post_times(const Corpus& corpus) {
    PostTimes out;
    for (const Post& p : corpus.posts) out.emplace(p.post_id, p.published_at);
    return out;
}

std::vector<SignedPair> make_pairs(const std::vector<StockSentiment>& sentiments,
                                   const PostTimes& times, const PriceStore& prices,
                                   int horizon_days, DropCounts* drops) {
    std::vector<SignedPair> pairs;
    DropCounts local;
    for (const StockSentiment& s : sentiments) {
        if (s.polarity == Polarity::Neutral) {
            ++local.neutral;
            continue;
        }
        auto ts = times.find(s.post_id);
        const PriceSeries* series = s.symbol == "*" ? nullptr : prices.find(s.symbol);
        if (ts == times.end() || series == nullptr) {
            ++local.missing;
            continue;
        }
        DayNum d = day_of(ts->second);
        auto move = forward_move(*series, d, horizon_days);
        if (!move) {
            ++local.missing;
            continue;
        }
        if (*move == 0.0) {
            ++local.zero;
            continue;
        }
        SignedPair pair;
        pair.s = s.polarity == Polarity::Positive ? +1 : -1;
        pair.p = *move > 0.0 ? +1 : -1;
        pair.symbol = s.symbol;
        pair.post_id = s.post_id;
        pair.year = year_of(ts->second);
        pairs.push_back(std::move(pair));
    }
    if (drops) *drops = local;
    return pairs;
}

namespace {

// phi over the 2x2 counts via the moment form; exact in int64 up to the
// double conversion at the end
std::optional<double> phi_from_pairs(const std::vector<SignedPair>& pairs) {
    const std::int64_t n = static_cast<std::int64_t>(pairs.size());
    if (n < 2) return std::nullopt;
    std::int64_t sum_s = 0, sum_p = 0, sum_sp = 0;
    for (const SignedPair& q : pairs) {
        sum_s += q.s;
        sum_p += q.p;
        sum_sp += q.s * q.p;
    }
    const std::int64_t var_s = n * n - sum_s * sum_s;  // n*sum(s^2) - (sum s)^2, s^2 = 1
    const std::int64_t var_p = n * n - sum_p * sum_p;
    if (var_s == 0 || var_p == 0) return std::nullopt;
    const double cov = static_cast<double>(n * sum_sp - sum_s * sum_p);
    return cov / std::sqrt(static_cast<double>(var_s) * static_cast<double>(var_p));
}

}  // namespace

CorrelationResult pearson_binary(const std::vector<SignedPair>& pairs, int horizon_days,
                                 std::optional<int> year) {
    if (pairs.size() < 2) throw std::domain_error("pearson_binary: need at least 2 pairs");
    auto rho = phi_from_pairs(pairs);
    if (!rho) throw std::domain_error("pearson_binary: undefined correlation (constant variable)");
    CorrelationResult result;
    result.rho = *rho;
    result.n = pairs.size();
    result.horizon_days = horizon_days;
    result.year = year;
    return result;
}

std::vector<CorrelationCell> correlate_by_year_horizon(
    const std::vector<StockSentiment>& sentiments, const PostTimes& times,
    const PriceStore& prices, const std::vector<int>& horizons) {
    std::vector<CorrelationCell> cells;
    for (int horizon : horizons) {
        // per-year pair buckets and per-year drop counters for this horizon
        std::map<int, std::vector<SignedPair>> by_year;
        std::map<int, DropCounts> drops_by_year;
        for (const StockSentiment& s : sentiments) {
            auto ts = times.find(s.post_id);
            if (ts == times.end()) continue;  // unknown post: not attributable to a year
            int year = year_of(ts->second);
            if (s.polarity == Polarity::Neutral) {
                ++drops_by_year[year].neutral;
                continue;
            }
            const PriceSeries* series = s.symbol == "*" ? nullptr : prices.find(s.symbol);
            if (series == nullptr) {
                ++drops_by_year[year].missing;
                continue;
            }
            auto move = forward_move(*series, day_of(ts->second), horizon);
            if (!move) {
                ++drops_by_year[year].missing;
                continue;
            }
            if (*move == 0.0) {
                ++drops_by_year[year].zero;
                continue;
            }
            SignedPair pair;
            pair.s = s.polarity == Polarity::Positive ? +1 : -1;
            pair.p = *move > 0.0 ? +1 : -1;
            pair.symbol = s.symbol;
            pair.post_id = s.post_id;
            pair.year = year;
            by_year[year].push_back(std::move(pair));
        }
        for (auto& [year, _] : drops_by_year) by_year[year];  // drop-only years still get a cell
        for (auto& [year, pairs] : by_year) {
            CorrelationCell cell;
            cell.year = year;
            cell.horizon_days = horizon;
            cell.n = pairs.size();
            cell.drops = drops_by_year[year];
            cell.rho = pairs.size() >= 2 ? phi_from_pairs(pairs) : std::nullopt;
            cells.push_back(std::move(cell));
        }
    }
    std::sort(cells.begin(), cells.end(), [](const CorrelationCell& a, const CorrelationCell& b) {
        return a.year != b.year ? a.year < b.year : a.horizon_days < b.horizon_days;
    });
    return cells;
}

void save_correlation_table(const std::vector<CorrelationCell>& cells,
                            const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "year,horizon,rho,n,dropped_neutral,dropped_zero,dropped_missing\n";
    for (const CorrelationCell& c : cells) {
        out << c.year << ',' << c.horizon_days << ','
            << (c.rho ? fmt_double(*c.rho, 6) : std::string("nan")) << ',' << c.n << ','
            << c.drops.neutral << ',' << c.drops.zero << ',' << c.drops.missing << '\n';
    }
}

std::optional<ArticleReturn> article_return(const StockSentiment& sentiment,
                                            const PostTimes& times, const PriceStore& prices,
                                            int horizon_days) {
    if (sentiment.polarity == Polarity::Neutral)
        throw std::invalid_argument("article_return: neutral sentiment has no direction");
    auto ts = times.find(sentiment.post_id);
    if (ts == times.end()) return std::nullopt;
    const PriceSeries* series = sentiment.symbol == "*" ? nullptr : prices.find(sentiment.symbol);
    if (!series) return std::nullopt;
    auto move = forward_move(*series, day_of(ts->second), horizon_days);
    if (!move) return std::nullopt;
    ArticleReturn ar;
    ar.post_id = sentiment.post_id;
    ar.symbol = sentiment.symbol;
    ar.horizon_days = horizon_days;
    ar.r = sentiment.polarity == Polarity::Positive ? *move : -*move;
    return ar;
}

}  // namespace crowdsent
