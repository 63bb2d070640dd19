#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unionbench/pair_spec.hpp"

namespace unionbench {

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 1024;
    double temperature = 0.7;
    std::optional<uint64_t> seed;  // honored only by the stub
};

enum class ProviderKind { Stub, Remote };

struct ProviderConfig {
    ProviderKind kind = ProviderKind::Stub;
    std::string endpoint;  // base URL, e.g. https://api.openai.com/v1
    std::string model;
    std::string api_key_env = "UNIONBENCH_API_KEY";
    double timeout_seconds = 30.0;
    int retries = 3;
    double backoff_base_seconds = 1.0;
    int max_concurrency = 4;  // in-flight request cap
    int token_limit = 4096;
};

// Text completion and embedding boundary. Every network interaction in the
// toolchain goes through this interface; the stub implementation makes the
// whole pipeline runnable offline and bit-reproducible under a fixed seed.
class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string complete(const CompletionRequest& req) = 0;
    virtual std::vector<float> embed(const std::string& text) = 0;
    virtual int max_concurrency() const { return 4; }
};

inline constexpr int kStubEmbeddingDim = 64;

// Deterministic offline provider. Recognizes the toolchain's own prompt
// shapes: table-pair generation prompts produce pipe tables that satisfy
// the requested parameters exactly, classification prompts are answered
// from shared header names, and anything else gets seeded filler text.
class StubProvider : public Provider {
public:
    explicit StubProvider(uint64_t default_seed = 0) : default_seed_(default_seed) {}

    std::string complete(const CompletionRequest& req) override;
    std::vector<float> embed(const std::string& text) override;

    int unknown_topic_count() const { return unknown_topics_.load(); }

private:
    uint64_t default_seed_;
    std::atomic<int> unknown_topics_{0};
};

// Emits the answer-format text ("Table 1: ...", "Table 2: ...", and a
// "Key:" line iff the spec is unionable) for a pair spec, built from
// per-topic vocabularies. Unionable pairs share exactly spec.unionable_cols
// header names with overlapping value pools and one related row;
// non-unionable pairs share no header names but draw from the same topic
// vocabulary. Falls back to a generic vocabulary for unknown topics.
std::string stub_generate_pair(const PairSpec& spec, uint64_t seed,
                               bool* unknown_topic = nullptr);

// OpenAI-compatible JSON-over-HTTP client (POST {endpoint}/completions and
// {endpoint}/embeddings). The API key is read from the configured
// environment variable and never logged. Transport errors and 5xx are
// retried with exponential backoff.
class RemoteProvider : public Provider {
public:
    explicit RemoteProvider(const ProviderConfig& cfg);
    ~RemoteProvider() override;

    std::string complete(const CompletionRequest& req) override;
    std::vector<float> embed(const std::string& text) override;
    int max_concurrency() const override { return cfg_.max_concurrency; }

private:
    std::string post_json(const std::string& path, const std::string& body);

    ProviderConfig cfg_;
    std::string api_key_;
    struct Slots;
    std::unique_ptr<Slots> slots_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg);

}  // namespace unionbench
