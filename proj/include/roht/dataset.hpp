#pragma once
// Question datasets: id'd questions with gold answers, a train/dev split tag,
// a family label, and optional per-question overrides (a fixed atomic
// decomposition, a fixed candidate paragraph set).

#include <optional>
#include <string>
#include <vector>

namespace roht {

struct DatasetQuestion {
    std::string id;
    std::string question;
    std::vector<std::string> golds;
    std::string split;   // "train" or "dev"
    std::string family;
    std::optional<std::vector<std::string>> atoms;    // serialized decomposition override
    std::optional<std::vector<int>> paragraphs;       // candidate paragraph ids override
};

struct Dataset {
    std::vector<DatasetQuestion> questions;

    std::vector<const DatasetQuestion*> in_split(const std::string& split) const;
};

// Throws ValidationError on duplicate/empty ids, empty question text, empty
// gold lists, or an unknown split tag.
Dataset dataset_from_json(const std::string& json_text);
std::string dataset_to_json(const Dataset& dataset);
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace roht
