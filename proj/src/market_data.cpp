#include "crowdsent/market_data.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "crowdsent/util.hpp"

namespace crowdsent {

const PriceSeries& PriceStore::benchmark() const {
    auto it = series.find(benchmark_symbol);
    if (benchmark_symbol.empty() || it == series.end())
        throw std::runtime_error("benchmark series not set: '" + benchmark_symbol + "'");
    return it->second;
}

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

std::optional<std::string> parse_bar_row(const std::string& line, PriceBar& bar) {
    auto cols = split(line, ',');
    if (cols.size() != 6) return "expected 6 columns";
    auto date = parse_iso_date(strip(cols[0]));
    if (!date) return "bad date: " + cols[0];
    bar.date = *date;
    double* fields[4] = {&bar.open, &bar.high, &bar.low, &bar.close};
    for (int i = 0; i < 4; ++i) {
        if (!parse_double(strip(cols[i + 1]), *fields[i])) return "bad number: " + cols[i + 1];
        if (*fields[i] <= 0.0) return "non-positive price: " + cols[i + 1];
    }
    double vol;
    if (!parse_double(strip(cols[5]), vol) || vol < 0) return "bad volume: " + cols[5];
    bar.volume = static_cast<std::int64_t>(vol);
    if (bar.low > std::min(bar.open, bar.close)) return "low above open/close";
    if (bar.high < std::max(bar.open, bar.close)) return "high below open/close";
    return std::nullopt;
}

}  // namespace

PriceStore load_prices(const std::filesystem::path& directory, PriceLoadReport* report) {
    if (!std::filesystem::is_directory(directory))
        throw std::runtime_error("price directory not found: " + directory.string());

    PriceStore store;
    PriceLoadReport local;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        std::string symbol = file.stem().string();
        std::ifstream in(file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open price file: " + file.string());

        PriceSeries series;
        series.symbol = symbol;
        std::string line;
        std::size_t line_no = 0;
        bool header_seen = false;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (strip(line).empty()) continue;
            if (!header_seen) {
                header_seen = true;  // first non-empty line is the header
                continue;
            }
            PriceBar bar;
            if (auto reason = parse_bar_row(line, bar)) {
                local.rejected_rows.emplace_back(symbol, line_no, *reason);
                continue;
            }
            if (!series.bars.empty() && bar.date <= series.bars.back().date) {
                local.rejected_rows.emplace_back(symbol, line_no, "duplicate or out-of-order date");
                continue;
            }
            series.bars.push_back(bar);
        }
        if (series.bars.empty()) {
            local.skipped_files.push_back(file.filename().string());
            continue;
        }
        store.series.emplace(symbol, std::move(series));
    }
    if (report) *report = std::move(local);
    return store;
}

void save_price_series(const PriceSeries& series, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "Date,Open,High,Low,Close,Volume\n";
    for (const PriceBar& b : series.bars) {
        out << format_iso_date(b.date) << ',' << fmt_double(b.open, 6) << ',' << fmt_double(b.high, 6)
            << ',' << fmt_double(b.low, 6) << ',' << fmt_double(b.close, 6) << ',' << b.volume << '\n';
    }
}

std::optional<std::pair<DayNum, double>> close_on_or_after(const PriceSeries& series, DayNum date,
                                                           int max_slip) {
    auto it = std::lower_bound(series.bars.begin(), series.bars.end(), date,
                               [](const PriceBar& b, DayNum d) { return b.date < d; });
    if (it == series.bars.end() || it->date > date + max_slip) return std::nullopt;
    return std::make_pair(it->date, it->close);
}

std::optional<double> close_at_or_before(const PriceSeries& series, DayNum date) {
    auto it = std::upper_bound(series.bars.begin(), series.bars.end(), date,
                               [](DayNum d, const PriceBar& b) { return d < b.date; });
    if (it == series.bars.begin()) return std::nullopt;
    return std::prev(it)->close;
}

std::optional<double> forward_move(const PriceSeries& series, DayNum d, int horizon_days) {
    auto p0 = close_on_or_after(series, d, kDefaultMaxSlipDays);
    auto p1 = close_on_or_after(series, d + horizon_days, kDefaultMaxSlipDays);
    if (!p0 || !p1) return std::nullopt;
    return (p1->second - p0->second) / p0->second;
}

}  // namespace crowdsent
