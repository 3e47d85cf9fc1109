#include "roht/harness.hpp"

#include "roht/errors.hpp"

#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace roht;

namespace {

void put_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

// Six dev questions: four answerable from either source, one stated only in
// the corpus (Riva), one stored only in the knowledge base (Cumbra).
struct Fixture {
    std::string dir = "harness_fixture";
    std::string kb = dir + "/kb.json";
    std::string corpus = dir + "/corpus.json";
    std::string questions = dir + "/questions.json";
    std::string overrides = dir + "/override_questions.json";
    std::string train_only = dir + "/train_only.json";

    Fixture() {
        std::filesystem::create_directories(dir);
        put_file(kb, R"({
          "concepts": [
            {"id": "c_mountain", "name": "mountain"},
            {"id": "c_city", "name": "city"},
            {"id": "c_country", "name": "country"},
            {"id": "c_person", "name": "person"},
            {"id": "c_artwork", "name": "artwork"}
          ],
          "entities": [
            {"id": "e1", "name": "Apex", "concepts": ["c_mountain"]},
            {"id": "e2", "name": "Breva", "concepts": ["c_mountain"]},
            {"id": "e3", "name": "Corvo", "concepts": ["c_city"]},
            {"id": "e4", "name": "Dorland", "concepts": ["c_country"]},
            {"id": "e5", "name": "Ada Lovel", "concepts": ["c_person"]},
            {"id": "e6", "name": "Sky Dance", "concepts": ["c_artwork"]},
            {"id": "e7", "name": "Velora", "concepts": ["c_country"]},
            {"id": "e8", "name": "Cumbra", "concepts": ["c_mountain"]}
          ],
          "relations": [
            {"s": "e1", "p": "located_in", "o": "e4"},
            {"s": "e2", "p": "located_in", "o": "e4"},
            {"s": "e3", "p": "located_in", "o": "e4"},
            {"s": "e6", "p": "created_by", "o": "e5"},
            {"s": "e5", "p": "born_in", "o": "e7"}
          ],
          "attributes": [
            {"e": "e1", "a": "height", "value": 2000, "unit": "metre"},
            {"e": "e2", "a": "height", "value": 3000, "unit": "metre"},
            {"e": "e8", "a": "height", "value": 1500, "unit": "metre"}
          ],
          "units": [{"name": "km", "base": "metre", "factor": 1000}]
        })");
        put_file(corpus, R"({"paragraphs": [
          {"id": 1, "title": "Apex", "text": "Apex has a height of 2000 metre."},
          {"id": 2, "title": "Breva", "text": "Breva has a height of 3000 metre."},
          {"id": 3, "title": "Apex", "text": "Apex is a mountain located in Dorland."},
          {"id": 4, "title": "Breva", "text": "Breva is a mountain located in Dorland."},
          {"id": 5, "title": "Corvo", "text": "Corvo is a city located in Dorland."},
          {"id": 6, "title": "Sky Dance", "text": "Sky Dance was created by Ada Lovel."},
          {"id": 7, "title": "Ada Lovel", "text": "Ada Lovel was born in Velora."},
          {"id": 8, "title": "Riva", "text": "Riva has a length of 12 km."}
        ]})");
        put_file(questions, R"({"questions": [
          {"id": "t1", "question": "What is the height of Apex?",
           "answers": ["2000 metre"], "split": "train", "family": "multihop"},
          {"id": "t2", "question": "Which mountains are located in Dorland?",
           "answers": ["Apex", "Breva"], "split": "train", "family": "multihop"},
          {"id": "t3", "question": "Who created Sky Dance?",
           "answers": ["Ada Lovel"], "split": "train", "family": "multihop"},
          {"id": "d1", "question": "What is the height of Apex?",
           "answers": ["2000 metre"], "split": "dev", "family": "multihop"},
          {"id": "d2", "question": "Which is higher, Apex or Breva?",
           "answers": ["Breva"], "split": "dev", "family": "comparison"},
          {"id": "d3", "question": "In which country was the creator of Sky Dance born?",
           "answers": ["Velora"], "split": "dev", "family": "multihop"},
          {"id": "d4", "question": "How many mountains has Dorland?",
           "answers": ["2"], "split": "dev", "family": "count"},
          {"id": "d5", "question": "What is the length of Riva?",
           "answers": ["12 km"], "split": "dev", "family": "multihop"},
          {"id": "d6", "question": "What is the height of Cumbra?",
           "answers": ["1500 metre"], "split": "dev", "family": "multihop"}
        ]})");
        put_file(overrides, R"({"questions": [
          {"id": "o1", "question": "What is the height of Apex?",
           "answers": ["2000 metre"], "split": "dev", "family": "multihop",
           "paragraphs": [2]},
          {"id": "o2", "question": "What is the height of Apex again?",
           "answers": ["2000 metre"], "split": "dev", "family": "multihop",
           "paragraphs": [1],
           "atoms": ["What is the height of Apex?"]},
          {"id": "o3", "question": "Name the birth country of the Sky Dance creator",
           "answers": ["Velora"], "split": "dev", "family": "multihop",
           "atoms": ["Who created Sky Dance?", "In which country was #1 born?"]},
          {"id": "o4", "question": "What is the height of Breva?",
           "answers": ["3000 metre"], "split": "dev", "family": "multihop",
           "paragraphs": [99]}
        ]})");
        put_file(train_only, R"({"questions": [
          {"id": "t1", "question": "What is the height of Apex?",
           "answers": ["2000 metre"], "split": "train", "family": "multihop"}
        ]})");
    }

    RunConfig config(const std::string& mode) const {
        RunConfig c;
        c.kb_path = kb;
        c.corpus_path = corpus;
        c.questions_path = questions;
        c.mode = mode;
        c.threads = 1;
        return c;
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("unknown modes and missing inputs are refused") {
    RunConfig bad_mode = fixture().config("telepathy");
    CHECK_THROWS_AS(run_harness(bad_mode), ValidationError);

    RunConfig bad_kb = fixture().config("mix");
    bad_kb.kb_path = "no/such/kb.json";
    CHECK_THROWS_AS(run_harness(bad_kb), NotFoundError);
}

TEST_CASE("the mixed mode answers every dev question") {
    RunOutcome out = run_harness(fixture().config("mix"));
    CHECK(out.count == 6);
    CHECK(out.em == doctest::Approx(1.0));
    CHECK(out.f1 == doctest::Approx(1.0));

    auto report = nlohmann::json::parse(out.report_json);
    CHECK(report.at("aggregate").at("count") == 6);
    CHECK(report.at("aggregate").at("em") == doctest::Approx(1.0));
    CHECK(report.at("config").at("mode") == "mix");
    CHECK(report.at("config").at("gamma") == doctest::Approx(0.7));
    CHECK(report.at("config").at("seed") == 42);

    const auto& rows = report.at("questions");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].at("id") == "d1");
    CHECK(rows[0].at("prediction") == "2000 metre");
    CHECK(rows[1].at("prediction") == "Breva");
    CHECK(rows[2].at("prediction") == "Velora");
    CHECK(rows[3].at("prediction") == "2");
    CHECK(rows[5].at("id") == "d6");
    REQUIRE_FALSE(rows[0].at("answers").empty());
    CHECK(rows[0].at("answers")[0].at("source") == "kb");
    CHECK(rows[0].at("answers")[0].at("score").get<double>() > 0.0);
}

TEST_CASE("single-source modes miss what only the other source knows") {
    RunOutcome kb_only = run_harness(fixture().config("kb"));
    CHECK(kb_only.em == doctest::Approx(5.0 / 6.0));
    auto kb_report = nlohmann::json::parse(kb_only.report_json);
    CHECK(kb_report.at("questions")[4].at("id") == "d5");
    CHECK(kb_report.at("questions")[4].at("prediction") == "");

    RunOutcome text_only = run_harness(fixture().config("text"));
    CHECK(text_only.em == doctest::Approx(5.0 / 6.0));
    auto text_report = nlohmann::json::parse(text_only.report_json);
    CHECK(text_report.at("questions")[5].at("id") == "d6");
    CHECK(text_report.at("questions")[5].at("prediction") == "");
}

TEST_CASE("the flat and ungated modes run the same fixture cleanly") {
    RunOutcome flat = run_harness(fixture().config("roat-mix"));
    CHECK(flat.em == doctest::Approx(1.0));
    CHECK(nlohmann::json::parse(flat.report_json).at("config").at("mode") == "roat-mix");

    RunOutcome ungated = run_harness(fixture().config("no-scheduler-mix"));
    CHECK(ungated.em == doctest::Approx(1.0));
}

TEST_CASE("reports are deterministic and thread-count independent") {
    RunOutcome a = run_harness(fixture().config("mix"));
    RunOutcome b = run_harness(fixture().config("mix"));
    CHECK(a.report_json == b.report_json);

    RunConfig threaded = fixture().config("mix");
    threaded.threads = 4;
    CHECK(run_harness(threaded).report_json == a.report_json);
}

TEST_CASE("full ablation leaves only the text source standing") {
    RunConfig kb_cfg = fixture().config("kb");
    kb_cfg.ablate_fraction = 1.0;
    CHECK(run_harness(kb_cfg).em == doctest::Approx(0.0));

    RunConfig mix_cfg = fixture().config("mix");
    mix_cfg.ablate_fraction = 1.0;
    CHECK(run_harness(mix_cfg).em == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("per-question overrides reroute evidence and decomposition") {
    RunConfig cfg = fixture().config("mix");
    cfg.questions_path = fixture().overrides;
    RunOutcome out = run_harness(cfg);
    auto report = nlohmann::json::parse(out.report_json);
    const auto& rows = report.at("questions");
    REQUIRE(rows.size() == 4);

    // o1 pins the wrong paragraph: no KB gate passes (empty train split),
    // and the paragraph has no Apex sentence, so nothing answers.
    CHECK(rows[0].at("id") == "o1");
    CHECK(rows[0].at("em") == 0);
    // o2 pins the right paragraph and rewrites itself into a template form,
    // but a one-atom rewrite keeps the original question at the root.
    CHECK(rows[1].at("prediction") == "");
    // o3 splits an unrecognized phrasing into two known atoms.
    CHECK(rows[2].at("prediction") == "Velora");
    CHECK(rows[2].at("em") == 1);
    // o4 names a paragraph the corpus does not have.
    CHECK(rows[3].contains("error"));
    CHECK(rows[3].at("prediction") == "");
}

TEST_CASE("an empty dev split yields an empty report") {
    RunConfig cfg = fixture().config("mix");
    cfg.questions_path = fixture().train_only;
    RunOutcome out = run_harness(cfg);
    CHECK(out.count == 0);
    CHECK(out.em == doctest::Approx(0.0));
    CHECK(nlohmann::json::parse(out.report_json).at("questions").empty());
}

TEST_CASE("report and trace files are written on request") {
    RunConfig cfg = fixture().config("mix");
    cfg.out_path = fixture().dir + "/report.json";
    cfg.traces_dir = fixture().dir + "/traces";
    RunOutcome out = run_harness(cfg);

    std::ifstream report_in(cfg.out_path, std::ios::binary);
    REQUIRE(report_in.good());
    std::string written((std::istreambuf_iterator<char>(report_in)),
                        std::istreambuf_iterator<char>());
    CHECK(written == out.report_json);

    for (const char* id : {"d1", "d2", "d3", "d4", "d5", "d6"}) {
        std::ifstream trace_in(cfg.traces_dir + "/" + std::string(id) + ".json");
        REQUIRE(trace_in.good());
        nlohmann::json trace;
        trace_in >> trace;
        CHECK(trace.at("mode") == "tree");
    }

    RunConfig flat_cfg = fixture().config("roat-mix");
    flat_cfg.traces_dir = fixture().dir + "/flat_traces";
    run_harness(flat_cfg);
    std::ifstream flat_in(flat_cfg.traces_dir + "/d2.json");
    REQUIRE(flat_in.good());
    nlohmann::json flat_trace;
    flat_in >> flat_trace;
    CHECK(flat_trace.at("mode") == "flat");
}

TEST_CASE("the exported precision table reflects the train split") {
    std::string json = precision_table_json_for(fixture().questions, fixture().kb);
    auto doc = nlohmann::json::parse(json);
    const auto& skeletons = doc.at("skeletons");
    CHECK(skeletons.at("Find-QueryAttr") == doctest::Approx(1.0));
    CHECK(skeletons.at("Find-Relate-QueryName") == doctest::Approx(1.0));
    CHECK(skeletons.at("Find-Relate-FilterConcept-QueryName") == doctest::Approx(1.0));
}

TEST_CASE("synthetic worlds are written as five loadable artifacts") {
    GenSpec spec;
    spec.countries = 4;
    spec.cities_per_country = 2;
    spec.mountains = 6;
    spec.shared_mountains = 2;
    spec.rivers = 4;
    spec.films = 4;
    spec.artworks = 4;
    spec.hierarchy_artworks = 4;
    spec.comparisons = 8;
    spec.verifications = 8;
    spec.unions = 4;
    spec.trap_train_match = 1;
    spec.trap_train_mismatch = 1;
    spec.trap_dev_match = 1;
    spec.trap_dev_mismatch = 1;

    const std::string out_dir = "harness_world_out";
    write_world(generate_synthetic_world(spec, 5), out_dir);
    CHECK_NOTHROW(load_kb(out_dir + "/kb.json"));
    CHECK_NOTHROW(load_corpus(out_dir + "/corpus.json"));
    CHECK_NOTHROW(load_dataset(out_dir + "/questions.json"));
    CHECK_NOTHROW(load_dataset(out_dir + "/hierarchy_suite.json"));
    CHECK_NOTHROW(load_dataset(out_dir + "/scheduler_suite.json"));
}
