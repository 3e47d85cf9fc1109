#pragma once
// End-to-end runs: load a KB, corpus and question set, optionally ablate the
// KB, build the per-skeleton precision table from the train split, answer
// every dev question in a worker pool, and emit a deterministic JSON report
// plus optional per-question traces.

#include "roht/dataset.hpp"
#include "roht/kb.hpp"
#include "roht/text.hpp"
#include "roht/worldgen.hpp"

#include <cstdint>
#include <string>

namespace roht {

struct RunConfig {
    std::string kb_path;
    std::string corpus_path;
    std::string questions_path;
    std::string mode = "mix";  // kb | text | mix | roat-mix | no-scheduler-mix
    double gamma = 0.7;
    int topk = 5;
    double ablate_fraction = 0.0;
    std::uint64_t seed = 42;
    std::string out_path;     // report file; empty = don't write
    std::string traces_dir;   // per-question trace files; empty = don't write
    int threads = 0;          // 0 = hardware concurrency
};

struct RunOutcome {
    double em = 0.0;  // mean exact match over the dev split
    double f1 = 0.0;  // mean token F1 over the dev split
    int count = 0;    // dev questions answered
    std::string report_json;
};

// Throws RohtError subtypes on unreadable inputs or an unknown mode.
RunOutcome run_harness(const RunConfig& config);

// The precision table the harness would use: built from the file's train
// split with the built-in template parser over the (unablated) KB.
std::string precision_table_json_for(const std::string& questions_path,
                                     const std::string& kb_path);

// Writes kb.json, corpus.json, questions.json, hierarchy_suite.json and
// scheduler_suite.json under out_dir.
void write_world(const SyntheticWorld& world, const std::string& out_dir);

}  // namespace roht
