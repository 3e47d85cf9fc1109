#include "roht/dataset.hpp"

#include "roht/errors.hpp"

#include "doctest.h"

#include <cstdio>
#include <string>
#include <vector>

using namespace roht;

namespace {

const char* kDataset = R"({"questions": [
  {"id": "q1", "question": "Who is A?", "answers": ["A"], "split": "train",
   "family": "multihop"},
  {"id": "q2", "question": "Who is B?", "answers": ["B", "Bee"], "split": "dev",
   "family": "multihop",
   "atoms": ["Who made B?", "where did #1 live?"],
   "paragraphs": [3, 1]},
  {"id": "q3", "question": "Who is C?", "answers": ["C"], "split": "dev",
   "family": "comparison"}
]})";

}  // namespace

TEST_CASE("datasets load with overrides intact") {
    Dataset d = dataset_from_json(kDataset);
    REQUIRE(d.questions.size() == 3);
    CHECK(d.questions[0].id == "q1");
    CHECK(d.questions[0].family == "multihop");
    CHECK_FALSE(d.questions[0].atoms.has_value());
    CHECK_FALSE(d.questions[0].paragraphs.has_value());

    CHECK(d.questions[1].golds == std::vector<std::string>{"B", "Bee"});
    REQUIRE(d.questions[1].atoms.has_value());
    CHECK(*d.questions[1].atoms ==
          std::vector<std::string>{"Who made B?", "where did #1 live?"});
    REQUIRE(d.questions[1].paragraphs.has_value());
    CHECK(*d.questions[1].paragraphs == std::vector<int>{3, 1});
}

TEST_CASE("split selection") {
    Dataset d = dataset_from_json(kDataset);
    auto dev = d.in_split("dev");
    REQUIRE(dev.size() == 2);
    CHECK(dev[0]->id == "q2");
    CHECK(dev[1]->id == "q3");
    CHECK(d.in_split("train").size() == 1);
    CHECK(d.in_split("test").empty());
}

TEST_CASE("dataset serialization round-trips") {
    Dataset d = dataset_from_json(kDataset);
    std::string json = dataset_to_json(d);
    CHECK(dataset_to_json(dataset_from_json(json)) == json);
}

TEST_CASE("dataset validation") {
    auto rejects = [](const std::string& json) {
        CHECK_THROWS_AS(dataset_from_json(json), ValidationError);
    };
    rejects("not json");
    rejects("[]");
    rejects(R"({"questions": [{"question": "Q?", "answers": ["a"], "split": "dev"}]})");
    rejects(R"({"questions": [
      {"id": "x", "question": "Q?", "answers": ["a"], "split": "dev"},
      {"id": "x", "question": "R?", "answers": ["a"], "split": "dev"}]})");
    rejects(R"({"questions": [{"id": "x", "question": "", "answers": ["a"], "split": "dev"}]})");
    rejects(R"({"questions": [{"id": "x", "question": "Q?", "answers": [], "split": "dev"}]})");
    rejects(R"({"questions": [{"id": "x", "question": "Q?", "answers": ["a"], "split": "test"}]})");
    rejects(R"({"questions": [{"id": "x", "question": "Q?", "answers": [1], "split": "dev"}]})");
    rejects(R"({"questions": [{"id": "x", "question": "Q?", "answers": ["a"], "split": "dev",
                               "atoms": []}]})");
    rejects(R"({"questions": [{"id": "x", "question": "Q?", "answers": ["a"], "split": "dev",
                               "paragraphs": ["one"]}]})");
}

TEST_CASE("dataset files") {
    const std::string path = "test_dataset_tmp.json";
    Dataset d = dataset_from_json(kDataset);
    save_dataset(d, path);
    Dataset back = load_dataset(path);
    CHECK(dataset_to_json(back) == dataset_to_json(d));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_dataset("no/such/file.json"), NotFoundError);
}
