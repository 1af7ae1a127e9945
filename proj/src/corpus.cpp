#include "crowdsent/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "crowdsent/text.hpp"
#include "crowdsent/util.hpp"

namespace crowdsent {

const char* kind_name(PostKind k) { return k == PostKind::Article ? "article" : "message"; }
const char* label_name(Label l) { return l == Label::Bullish ? "bullish" : "bearish"; }

bool is_valid_ticker(const std::string& s) {
    // [A-Z][A-Z0-9.\-]{0,9}
    if (s.empty() || s.size() > 10) return false;
    if (s[0] < 'A' || s[0] > 'Z') return false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::optional<std::string> parse_post_line(const std::string& line, Post& out) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return "invalid json";

    auto str_field = [&](const char* key, std::string& dst) -> bool {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) return false;
        dst = it->get<std::string>();
        return true;
    };

    Post p;
    if (!str_field("id", p.post_id) || p.post_id.empty()) return "missing or invalid field: id";
    if (!str_field("author", p.author_id) || p.author_id.empty()) return "missing or invalid field: author";

    auto ts = j.find("ts");
    if (ts == j.end() || !ts->is_number_integer()) return "missing or invalid field: ts";
    p.published_at = ts->get<std::int64_t>();

    std::string kind;
    if (!str_field("kind", kind)) return "missing or invalid field: kind";
    if (kind == "article") p.kind = PostKind::Article;
    else if (kind == "message") p.kind = PostKind::Message;
    else return "unknown kind: " + kind;

    if (!str_field("text", p.text)) return "missing or invalid field: text";
    if (p.kind == PostKind::Message && utf8_length(p.text) > 140)
        return "message text exceeds 140 characters";

    auto syms = j.find("symbols");
    if (syms == j.end() || !syms->is_array()) return "missing or invalid field: symbols";
    std::set<std::string> seen;
    for (const auto& s : *syms) {
        if (!s.is_string()) return "symbols entries must be strings";
        std::string ticker = to_upper(s.get<std::string>());
        if (!is_valid_ticker(ticker)) return "invalid ticker: " + s.get<std::string>();
        if (seen.insert(ticker).second) p.symbols.push_back(ticker);
    }

    auto lab = j.find("label");
    if (lab != j.end() && !lab->is_null()) {
        if (!lab->is_string()) return "invalid field: label";
        std::string l = lab->get<std::string>();
        if (l == "bullish") p.label = Label::Bullish;
        else if (l == "bearish") p.label = Label::Bearish;
        else return "unknown label: " + l;
        // labels only carry meaning for short messages
        if (p.kind == PostKind::Article) p.label.reset();
    }

    auto com = j.find("comments");
    if (com != j.end() && !com->is_null()) {
        if (!com->is_number_integer() || com->get<std::int64_t>() < 0)
            return "invalid field: comments";
        p.comment_count = com->get<std::int64_t>();
    }

    out = std::move(p);
    return std::nullopt;
}

void finalize_corpus(Corpus& corpus) {
    corpus.authors.clear();
    corpus.span.reset();
    for (const Post& p : corpus.posts) {
        auto [it, inserted] = corpus.authors.try_emplace(p.author_id);
        if (inserted) {
            it->second.author_id = p.author_id;
            it->second.display_name = p.author_id;
        }
        if (!corpus.span) {
            corpus.span = {p.published_at, p.published_at};
        } else {
            corpus.span->first = std::min(corpus.span->first, p.published_at);
            corpus.span->second = std::max(corpus.span->second, p.published_at);
        }
    }
}

Corpus load_corpus(const std::filesystem::path& path, std::optional<PostKind> kind_filter,
                   LoadReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());

    Corpus corpus;
    LoadReport local;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (strip(line).empty()) continue;
        Post p;
        if (auto reason = parse_post_line(line, p)) {
            local.rejects.push_back({line_no, *reason});
            continue;
        }
        if (!ids.insert(p.post_id).second) {
            local.rejects.push_back({line_no, "duplicate post id: " + p.post_id});
            continue;
        }
        if (kind_filter && p.kind != *kind_filter) continue;
        corpus.posts.push_back(std::move(p));
        ++local.accepted;
    }
    finalize_corpus(corpus);

    if (!local.rejects.empty()) {
        local.rejects_path = path;
        local.rejects_path += ".rejects";
        std::ofstream rej = open_output(local.rejects_path);
        for (const auto& r : local.rejects) rej << r.line_no << '\t' << r.reason << '\n';
    }
    if (report) *report = std::move(local);
    return corpus;
}

std::string serialize_post(const Post& post) {
    nlohmann::ordered_json j;
    j["id"] = post.post_id;
    j["author"] = post.author_id;
    j["ts"] = post.published_at;
    j["kind"] = kind_name(post.kind);
    j["text"] = post.text;
    j["symbols"] = post.symbols;
    if (post.label) j["label"] = label_name(*post.label);
    j["comments"] = post.comment_count;
    return j.dump();
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    for (const Post& p : corpus.posts) out << serialize_post(p) << '\n';
}

Corpus filter_by_period(const Corpus& corpus, Timestamp start, Timestamp end) {
    Corpus out;
    for (const Post& p : corpus.posts) {
        if (p.published_at >= start && p.published_at < end) out.posts.push_back(p);
    }
    finalize_corpus(out);
    // keep richer author records (follower counts) where present
    for (auto& [id, author] : out.authors) {
        auto it = corpus.authors.find(id);
        if (it != corpus.authors.end()) author = it->second;
    }
    return out;
}

}  // namespace crowdsent
