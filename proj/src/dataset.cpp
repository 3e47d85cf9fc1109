#include "roht/dataset.hpp"

#include "roht/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace roht {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open file: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write file: " + path);
    }
    out << content;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

}  // namespace

std::vector<const DatasetQuestion*> Dataset::in_split(const std::string& split) const {
    std::vector<const DatasetQuestion*> out;
    for (const DatasetQuestion& q : questions) {
        if (q.split == split) out.push_back(&q);
    }
    return out;
}

Dataset dataset_from_json(const std::string& json_text) {
    const nlohmann::json doc = parse_json(json_text, "dataset");
    if (!doc.is_object() || !doc.contains("questions") || !doc["questions"].is_array()) {
        throw ValidationError("dataset must be an object with a \"questions\" array");
    }
    Dataset dataset;
    std::set<std::string> seen_ids;
    for (const nlohmann::json& item : doc["questions"]) {
        if (!item.is_object()) {
            throw ValidationError("dataset entries must be objects");
        }
        DatasetQuestion q;
        q.id = item.value("id", std::string{});
        q.question = item.value("question", std::string{});
        q.split = item.value("split", std::string{});
        q.family = item.value("family", std::string{});
        if (q.id.empty()) throw ValidationError("dataset entry is missing an id");
        if (!seen_ids.insert(q.id).second) {
            throw ValidationError("duplicate question id: " + q.id);
        }
        if (q.question.empty()) {
            throw ValidationError("question " + q.id + " has empty text");
        }
        if (q.split != "train" && q.split != "dev") {
            throw ValidationError("question " + q.id + " has unknown split \"" + q.split +
                                  "\" (expected train or dev)");
        }
        if (!item.contains("answers") || !item["answers"].is_array() ||
            item["answers"].empty()) {
            throw ValidationError("question " + q.id + " needs a non-empty answers array");
        }
        for (const nlohmann::json& gold : item["answers"]) {
            if (!gold.is_string()) {
                throw ValidationError("question " + q.id + " has a non-string answer");
            }
            q.golds.push_back(gold.get<std::string>());
        }
        if (item.contains("atoms")) {
            if (!item["atoms"].is_array() || item["atoms"].empty()) {
                throw ValidationError("question " + q.id + " has an invalid atoms array");
            }
            std::vector<std::string> atoms;
            for (const nlohmann::json& atom : item["atoms"]) {
                if (!atom.is_string()) {
                    throw ValidationError("question " + q.id + " has a non-string atom");
                }
                atoms.push_back(atom.get<std::string>());
            }
            q.atoms = std::move(atoms);
        }
        if (item.contains("paragraphs")) {
            if (!item["paragraphs"].is_array()) {
                throw ValidationError("question " + q.id + " has an invalid paragraphs array");
            }
            std::vector<int> ids;
            for (const nlohmann::json& pid : item["paragraphs"]) {
                if (!pid.is_number_integer()) {
                    throw ValidationError("question " + q.id +
                                          " has a non-integer paragraph id");
                }
                ids.push_back(pid.get<int>());
            }
            q.paragraphs = std::move(ids);
        }
        dataset.questions.push_back(std::move(q));
    }
    return dataset;
}

std::string dataset_to_json(const Dataset& dataset) {
    nlohmann::json questions = nlohmann::json::array();
    for (const DatasetQuestion& q : dataset.questions) {
        nlohmann::json item = {{"answers", q.golds},
                               {"family", q.family},
                               {"id", q.id},
                               {"question", q.question},
                               {"split", q.split}};
        if (q.atoms.has_value()) item["atoms"] = *q.atoms;
        if (q.paragraphs.has_value()) item["paragraphs"] = *q.paragraphs;
        questions.push_back(std::move(item));
    }
    return nlohmann::json{{"questions", std::move(questions)}}.dump(2) + "\n";
}

Dataset load_dataset(const std::string& path) { return dataset_from_json(read_file(path)); }

void save_dataset(const Dataset& dataset, const std::string& path) {
    write_file(path, dataset_to_json(dataset));
}

}  // namespace roht
