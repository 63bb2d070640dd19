#pragma once

#include <string>
#include <vector>

namespace unionbench::detail {

// Word pools backing the stub generator. terms seed column names, values
// seed cell text; tables of the same topic draw from the same pools.
struct TopicVocabulary {
    std::vector<std::string> terms;
    std::vector<std::string> values;
};

// Case-insensitive lookup over the built-in topics; nullptr when unknown.
const TopicVocabulary* find_topic_vocabulary(const std::string& topic);

// Fallback for topics without a curated pool: built from the topic's own
// words plus neutral fillers, still fully deterministic.
TopicVocabulary generic_vocabulary(const std::string& topic);

std::vector<std::string> builtin_topic_names();

}  // namespace unionbench::detail
