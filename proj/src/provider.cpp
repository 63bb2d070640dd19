#include "unionbench/provider.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "unionbench/errors.hpp"
#include "unionbench/rng.hpp"
#include "unionbench/table.hpp"
#include "stub_vocab.hpp"

namespace unionbench {

namespace {

// Column-name grid shared by every stub table of a topic: term x qualifier,
// e.g. "Country Name", "Country Count", ... Qualifier decides whether the
// column carries numbers or words.
const std::vector<std::string>& qualifiers() {
    static const std::vector<std::string> q = {"Name",     "Count", "Type",   "Rating",
                                               "Category", "Code",  "Region", "Status"};
    return q;
}

std::string grid_column_name(const detail::TopicVocabulary& vocab, int index) {
    const auto& quals = qualifiers();
    int q = static_cast<int>(quals.size());
    int t = static_cast<int>(vocab.terms.size());
    const std::string& term = vocab.terms[static_cast<size_t>((index / q) % t)];
    return term + " " + quals[static_cast<size_t>(index % q)];
}

const std::string& qualifier_of(int index) {
    return qualifiers()[static_cast<size_t>(index % static_cast<int>(qualifiers().size()))];
}

bool grid_column_numeric(int index) {
    const std::string& q = qualifier_of(index);
    return q == "Count" || q == "Rating";
}

// Name columns hold one token per cell regardless of the requested
// textuality, like real identifier columns. That keeps the first shared
// column of a unionable pair value-comparable even when the two tables were
// generated with different words-per-value settings.
bool grid_column_single_token(int index) {
    return qualifier_of(index) == "Name";
}

// Candidate values per column, derived from the column name and the topic
// vocabulary only — no run seed. Every table that uses a column name draws
// cells from the same pool, which is what makes same-named columns overlap
// in values across a whole topic's tables, not just within one generated
// pair (the caller seeds only which pool entries land in which row).
// Entries are hyphenated word pairs rather than single vocabulary words so
// that differently named columns, whose pools are drawn from the same
// dozen words, rarely collide on whole values.
std::vector<std::string> column_pool(const detail::TopicVocabulary& vocab,
                                     const std::string& column_name) {
    Rng rng(mix(fnv1a64("column-pool"), column_name));
    std::vector<std::string> pool;
    std::string q = column_name.substr(column_name.rfind(' ') + 1);
    if (q == "Count") {
        for (int i = 0; i < 12; ++i)
            pool.push_back(std::to_string(rng.uniform_u64(1, 500)));
    } else if (q == "Rating") {
        char buf[16];
        for (int i = 0; i < 12; ++i) {
            uint64_t cents = rng.uniform_u64(100, 500);
            std::snprintf(buf, sizeof buf, "%d.%02d", static_cast<int>(cents / 100),
                          static_cast<int>(cents % 100));
            pool.push_back(buf);
        }
    } else {
        size_t n = vocab.values.size();
        for (int i = 0; i < 6; ++i) {
            std::string a = vocab.values[rng.uniform_u64(0, n - 1)];
            std::string b = vocab.values[rng.uniform_u64(0, n - 1)];
            pool.push_back(a + "-" + b);
        }
    }
    return pool;
}

std::string stub_cell(const detail::TopicVocabulary& vocab, const std::string& column_name,
                      int name_index, int textuality, Rng& rng) {
    std::vector<std::string> pool = column_pool(vocab, column_name);
    int words = textuality;
    if (grid_column_numeric(name_index) || grid_column_single_token(name_index))
        words = 1;
    std::string cell;
    for (int w = 0; w < words; ++w) {
        if (w)
            cell += ' ';
        cell += pool[rng.uniform_u64(0, pool.size() - 1)];
    }
    return cell;
}

Table build_stub_table(const detail::TopicVocabulary& vocab, const std::vector<int>& name_indices,
                       int rows, int textuality, uint64_t pair_seed, const std::string& tag) {
    Table t;
    for (int idx : name_indices)
        t.header.push_back(grid_column_name(vocab, idx));
    Rng rng(mix(pair_seed, tag));
    for (int r = 0; r < rows; ++r) {
        std::vector<std::string> row;
        for (size_t c = 0; c < name_indices.size(); ++c)
            row.push_back(stub_cell(vocab, t.header[c], name_indices[c], textuality, rng));
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Recognizer for the toolchain's own generation prompt; fills spec and
// returns true when the prompt carries the full parameter sentence.
bool parse_generation_prompt(const std::string& prompt, PairSpec* spec) {
    static const std::regex re(
        "Create 2 tables with cells separated by \\|\\. "
        "Table 1 has (\\d+) rows, (\\d+) columns and (\\d+) words, related to (.*?)\\. "
        "Table 2 has (\\d+) rows, (\\d+) columns and (\\d+) words, related to (.*?)\\.");
    std::smatch m;
    if (!std::regex_search(prompt, m, re))
        return false;
    spec->t1_rows = std::stoi(m[1]);
    spec->t1_cols = std::stoi(m[2]);
    spec->t1_textuality = std::stoi(m[3]);
    spec->topic = m[4];
    spec->t2_rows = std::stoi(m[5]);
    spec->t2_cols = std::stoi(m[6]);
    spec->t2_textuality = std::stoi(m[7]);

    static const std::regex union_re("only (\\d+) semantically common columns");
    std::smatch um;
    if (prompt.find("can be unioned") != std::string::npos &&
        std::regex_search(prompt, um, union_re)) {
        spec->unionable = true;
        spec->unionable_cols = std::stoi(um[1]);
    } else {
        spec->unionable = false;
        spec->unionable_cols = 0;
    }
    return true;
}

// Pulls the block of lines following `marker` (the classification prompt
// writes one pipe table per block). Stops at the next marker, a blank line,
// or the question text.
std::string block_after_marker(const std::string& prompt, size_t marker_pos) {
    size_t start = prompt.find('\n', marker_pos);
    if (start == std::string::npos)
        return "";
    ++start;
    std::string block;
    size_t pos = start;
    while (pos < prompt.size()) {
        size_t eol = prompt.find('\n', pos);
        std::string line = prompt.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.rfind("Table 1:", 0) == 0 || trimmed.rfind("Table 2:", 0) == 0 ||
            trimmed.rfind("Unionable:", 0) == 0 || trimmed.rfind("Are the following", 0) == 0)
            break;
        block += line;
        block += '\n';
        if (eol == std::string::npos)
            break;
        pos = eol + 1;
    }
    return block;
}

// Shared-header heuristic standing in for an LLM judgment: a pair is called
// unionable iff the two tables share at least one (case-folded) header name.
std::string stub_classify(const std::string& prompt) {
    size_t t1 = prompt.rfind("Table 1:");
    if (t1 == std::string::npos)
        return "Unionable: no";
    size_t t2 = prompt.find("Table 2:", t1);
    if (t2 == std::string::npos)
        return "Unionable: no";
    std::string b1 = block_after_marker(prompt, t1);
    std::string b2 = block_after_marker(prompt, t2);
    try {
        Table ta = parse_pipe_table(b1).table;
        Table tb = parse_pipe_table(b2).table;
        for (const auto& ha : ta.header)
            for (const auto& hb : tb.header)
                if (to_lower(trim(ha)) == to_lower(trim(hb)))
                    return "Unionable: yes";
    } catch (const DataError&) {
        // fall through: unparseable block reads as not unionable
    }
    return "Unionable: no";
}

}  // namespace

std::string stub_generate_pair(const PairSpec& spec, uint64_t seed, bool* unknown_topic) {
    const detail::TopicVocabulary* found = detail::find_topic_vocabulary(spec.topic);
    detail::TopicVocabulary fallback;
    if (!found) {
        fallback = detail::generic_vocabulary(spec.topic);
        found = &fallback;
    }
    if (unknown_topic)
        *unknown_topic = (found == &fallback);
    const detail::TopicVocabulary& vocab = *found;

    // Column-name index slices over the term x qualifier grid. Unionable:
    // table 2 reuses the first `shared` indices of table 1 and continues
    // past table 1's range for the rest, so the pair shares exactly
    // `shared` names. Non-unionable: a range disjoint from table 1 and,
    // when the grid allows, clear of the low indices every table 1 of the
    // topic starts from — so a non-unionable table 2 shares no column
    // names (hence no value pools) with the topic's query table either.
    int shared = spec.unionable ? spec.unionable_cols : 0;
    int capacity = static_cast<int>(vocab.terms.size() * qualifiers().size());
    int start = spec.t1_cols;
    if (!spec.unionable) {
        start = std::max(spec.t1_cols, 24);
        if (start + spec.t2_cols > capacity)
            start = spec.t1_cols;
    }
    std::vector<int> idx1, idx2;
    for (int i = 0; i < spec.t1_cols; ++i)
        idx1.push_back(i);
    for (int i = 0; i < shared; ++i)
        idx2.push_back(i);
    for (int i = 0; i < spec.t2_cols - shared; ++i)
        idx2.push_back(start + i);

    uint64_t pair_seed = mix(mix(seed, spec.topic), spec.pair_id);
    Table t1 = build_stub_table(vocab, idx1, spec.t1_rows, spec.t1_textuality, pair_seed, "t1");
    Table t2 = build_stub_table(vocab, idx2, spec.t2_rows, spec.t2_textuality, pair_seed, "t2");

    // Related row: the first row of table 2 repeats table 1's first-row
    // values in every shared column.
    if (spec.unionable && !t1.rows.empty() && !t2.rows.empty())
        for (int c = 0; c < shared; ++c)
            t2.rows[0][static_cast<size_t>(c)] = t1.rows[0][static_cast<size_t>(c)];

    std::string out;
    out += "Table 1:\n";
    out += serialize_pipe_table(t1);
    out += "Table 2:\n";
    out += serialize_pipe_table(t2);
    if (spec.unionable)
        out += "Key: " + t1.header[0] + "\n";
    return out;
}

std::string StubProvider::complete(const CompletionRequest& req) {
    if (req.prompt.empty())
        throw std::invalid_argument("complete: empty prompt");
    uint64_t seed = req.seed.value_or(default_seed_);

    PairSpec spec;
    if (parse_generation_prompt(req.prompt, &spec)) {
        bool unknown = false;
        std::string out = stub_generate_pair(spec, seed, &unknown);
        if (unknown)
            unknown_topics_.fetch_add(1);
        return out;
    }
    if (req.prompt.find("Are the following tables unionable?") != std::string::npos)
        return stub_classify(req.prompt);

    // Anything else: deterministic filler keyed on (prompt, seed).
    std::ostringstream os;
    os << "stub completion " << std::hex << mix(seed, req.prompt);
    return os.str();
}

std::vector<float> StubProvider::embed(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("embed: empty text");
    std::vector<float> v(kStubEmbeddingDim, 0.0f);
    std::string token;
    auto feed = [&] {
        if (token.empty())
            return;
        uint64_t h = fnv1a64(token);
        size_t slot = h % kStubEmbeddingDim;
        v[slot] += ((h >> 32) & 1) ? 1.0f : -1.0f;
        token.clear();
    };
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c))
            token.push_back(static_cast<char>(std::tolower(c)));
        else
            feed();
    }
    feed();

    double norm2 = 0.0;
    for (float x : v)
        norm2 += static_cast<double>(x) * x;
    if (norm2 == 0.0) {
        // no alphanumeric tokens; fall back to a unit vector picked by the
        // whole-string hash so the result is still deterministic and normed
        v[fnv1a64(text) % kStubEmbeddingDim] = 1.0f;
        return v;
    }
    float inv = static_cast<float>(1.0 / std::sqrt(norm2));
    for (float& x : v)
        x *= inv;
    return v;
}

// ---------------------------------------------------------------------------
// Remote provider

namespace {

void split_endpoint(const std::string& endpoint, std::string* base, std::string* prefix) {
    size_t scheme = endpoint.find("://");
    size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    size_t slash = endpoint.find('/', host_start);
    if (slash == std::string::npos) {
        *base = endpoint;
        prefix->clear();
    } else {
        *base = endpoint.substr(0, slash);
        *prefix = endpoint.substr(slash);
    }
    while (!prefix->empty() && prefix->back() == '/')
        prefix->pop_back();
}

}  // namespace

// Counting semaphore over the configured in-flight request cap.
struct RemoteProvider::Slots {
    std::mutex mu;
    std::condition_variable cv;
    int free;

    explicit Slots(int n) : free(n > 0 ? n : 1) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return free > 0; });
        --free;
    }
    void release() {
        {
            std::lock_guard<std::mutex> lock(mu);
            ++free;
        }
        cv.notify_one();
    }
};

RemoteProvider::RemoteProvider(const ProviderConfig& cfg)
    : cfg_(cfg), slots_(std::make_unique<Slots>(cfg.max_concurrency)) {
    if (cfg_.endpoint.empty() || cfg_.model.empty())
        throw std::invalid_argument("remote provider requires endpoint and model");
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (!key || !*key)
        throw AuthMissingError("API key environment variable " + cfg_.api_key_env + " is not set");
    api_key_ = key;
}

RemoteProvider::~RemoteProvider() = default;

std::string RemoteProvider::post_json(const std::string& path, const std::string& body) {
    slots_->acquire();
    struct Release {
        Slots* s;
        ~Release() { s->release(); }
    } release{slots_.get()};

    std::string base, prefix;
    split_endpoint(cfg_.endpoint, &base, &prefix);
    std::string full_path = prefix + path;

    auto timeout = std::chrono::milliseconds(static_cast<long>(cfg_.timeout_seconds * 1000));
    std::string last_error;
    int attempts = cfg_.retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            double delay = cfg_.backoff_base_seconds * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client client(base);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        client.set_bearer_token_auth(api_key_);
        auto res = client.Post(full_path, body, "application/json");
        if (res && res->status >= 200 && res->status < 300)
            return res->body;
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;  // retryable
        }
        last_error = "HTTP " + std::to_string(res->status);
        bool retryable = res->status == 429 || res->status >= 500;
        if (!retryable)
            throw ProviderError("request to " + full_path + " failed: " + last_error);
    }
    throw ProviderError("request to " + full_path + " failed after " + std::to_string(attempts) +
                        " attempts; last error: " + last_error);
}

std::string RemoteProvider::complete(const CompletionRequest& req) {
    if (req.prompt.empty())
        throw std::invalid_argument("complete: empty prompt");
    if (req.max_tokens > cfg_.token_limit)
        throw TokenLimitError("max_tokens " + std::to_string(req.max_tokens) +
                              " exceeds provider limit " + std::to_string(cfg_.token_limit));
    nlohmann::json payload = {{"model", cfg_.model},
                              {"prompt", req.prompt},
                              {"max_tokens", req.max_tokens},
                              {"temperature", req.temperature}};
    std::string body = post_json("/completions", payload.dump());
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (!j.is_discarded() && j.contains("choices") && j["choices"].is_array() &&
        !j["choices"].empty()) {
        const auto& choice = j["choices"][0];
        if (choice.contains("text") && choice["text"].is_string())
            return choice["text"].get<std::string>();
        if (choice.contains("message") && choice["message"].contains("content"))
            return choice["message"]["content"].get<std::string>();
    }
    throw ProviderError("completion response missing choices[0].text");
}

std::vector<float> RemoteProvider::embed(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("embed: empty text");
    nlohmann::json payload = {{"model", cfg_.model}, {"input", text}};
    std::string body = post_json("/embeddings", payload.dump());
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (!j.is_discarded() && j.contains("data") && j["data"].is_array() && !j["data"].empty()) {
        const auto& entry = j["data"][0];
        if (entry.contains("embedding") && entry["embedding"].is_array())
            return entry["embedding"].get<std::vector<float>>();
    }
    throw ProviderError("embedding response missing data[0].embedding");
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg) {
    if (cfg.kind == ProviderKind::Remote)
        return std::make_unique<RemoteProvider>(cfg);
    uint64_t seed = 0;
    return std::make_unique<StubProvider>(seed);
}

}  // namespace unionbench
