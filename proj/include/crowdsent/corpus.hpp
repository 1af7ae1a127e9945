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

enum class PostKind { Article, Message };
enum class Label { Bullish, Bearish };

// One unit of contributed content: a long-form article or a short message.
struct Post {
    std::string post_id;
    std::string author_id;
    Timestamp published_at = 0;
    PostKind kind = PostKind::Article;
    std::string text;
    std::vector<std::string> symbols;  // uppercase tickers, deduplicated, file order
    std::optional<Label> label;        // messages only
    std::int64_t comment_count = 0;
};

struct Author {
    std::string author_id;
    std::string display_name;
    std::int64_t follower_count = 0;
};

struct Corpus {
    std::vector<Post> posts;
    std::map<std::string, Author> authors;
    // (min, max) post timestamps; absent for an empty corpus
    std::optional<std::pair<Timestamp, Timestamp>> span;
};

struct RejectedLine {
    std::size_t line_no = 0;  // 1-based
    std::string reason;
};

struct LoadReport {
    std::size_t accepted = 0;
    std::vector<RejectedLine> rejects;
    std::filesystem::path rejects_path;  // written iff rejects non-empty
};

bool is_valid_ticker(const std::string& s);

// Parses one JSONL record into `out`; returns a reject reason on failure.
// Symbols are uppercased and deduplicated here.
std::optional<std::string> parse_post_line(const std::string& line, Post& out);

// Rebuilds the author map and span from the post list.
void finalize_corpus(Corpus& corpus);

// Loads a line-delimited corpus file. Malformed lines are recorded in
// `<path>.rejects` (line_no<TAB>reason) and counted in the report; a file
// that cannot be opened throws.
Corpus load_corpus(const std::filesystem::path& path,
                   std::optional<PostKind> kind_filter = std::nullopt,
                   LoadReport* report = nullptr);

std::string serialize_post(const Post& post);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Posts with start <= published_at < end; author map restricted to survivors.
Corpus filter_by_period(const Corpus& corpus, Timestamp start, Timestamp end);

const char* kind_name(PostKind k);
const char* label_name(Label l);

}  // namespace crowdsent
