#include "roht/harness.hpp"

#include "roht/decompose.hpp"
#include "roht/errors.hpp"
#include "roht/grammar.hpp"
#include "roht/metrics.hpp"
#include "roht/reasoner.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

namespace roht {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write file: " + path);
    }
    out << content;
}

// Per-question decompositions shipped with a dataset win over the template
// rules; everything else falls through to the base decomposer.
class OverrideDecomposer : public Decomposer {
public:
    OverrideDecomposer(const Decomposer& base,
                       std::map<std::string, std::vector<std::string>> overrides)
        : base_(base), overrides_(std::move(overrides)) {}

    DecomposeResult decompose(const std::string& question) const override {
        auto it = overrides_.find(question);
        if (it == overrides_.end()) return base_.decompose(question);
        AtomicRepresentation ar;
        for (const std::string& atom : it->second) ar.atoms.push_back(parse_question(atom));
        return {std::move(ar), 1.0};
    }

private:
    const Decomposer& base_;
    std::map<std::string, std::vector<std::string>> overrides_;
};

struct Row {
    const DatasetQuestion* question = nullptr;
    std::string prediction;
    int em = 0;
    double f1 = 0.0;
    nlohmann::json answers = nlohmann::json::array();
    std::string error;
    std::string trace;
};

std::vector<TrainExample> train_examples(const Dataset& dataset) {
    std::vector<TrainExample> out;
    for (const DatasetQuestion* q : dataset.in_split("train")) {
        out.push_back({q->question, q->golds});
    }
    return out;
}

}  // namespace

RunOutcome run_harness(const RunConfig& config) {
    const bool flat = config.mode == "roat-mix";
    ReasonerConfig rcfg;
    rcfg.gamma = config.gamma;
    rcfg.topk = config.topk;
    if (config.mode == "kb") {
        rcfg.use_text = false;
    } else if (config.mode == "text") {
        rcfg.use_kb = false;
    } else if (config.mode == "no-scheduler-mix") {
        rcfg.force_sources = true;
    } else if (config.mode != "mix" && !flat) {
        throw ValidationError("unknown mode: " + config.mode +
                              " (expected kb, text, mix, roat-mix or no-scheduler-mix)");
    }

    KnowledgeBase kb = load_kb(config.kb_path);
    if (config.ablate_fraction > 0.0) {
        kb = ablate_kb(kb, config.ablate_fraction, config.seed);
    }
    const Corpus corpus = load_corpus(config.corpus_path);
    const Dataset dataset = load_dataset(config.questions_path);

    const KbView view(kb);
    const Bm25Index index(corpus);
    const TemplateSemanticParser parser;
    const TemplateGenerator generator;
    const PatternSpanExtractor extractor;
    const LexicalOverlapSelector selector;
    const TemplateDecomposer template_decomposer;
    std::map<std::string, std::vector<std::string>> overrides;
    for (const DatasetQuestion& q : dataset.questions) {
        if (q.atoms.has_value()) overrides[q.question] = *q.atoms;
    }
    const OverrideDecomposer decomposer(template_decomposer, std::move(overrides));

    const PrecisionTable table = build_precision_table(train_examples(dataset), view, parser);

    const std::vector<const DatasetQuestion*> dev = dataset.in_split("dev");
    std::vector<Row> rows(dev.size());

    SolveStores base_stores;
    base_stores.kb = &view;
    base_stores.precision = &table;
    base_stores.parser = &parser;
    base_stores.index = &index;
    base_stores.selector = &selector;
    base_stores.extractor = &extractor;

    const bool want_traces = !config.traces_dir.empty();
    auto solve_one = [&](std::size_t i) {
        Row& row = rows[i];
        const DatasetQuestion& dq = *dev[i];
        row.question = &dq;
        SolveStores stores = base_stores;
        std::vector<const Paragraph*> fixed;
        AnswerList result;
        try {
            if (dq.paragraphs.has_value()) {
                for (int id : *dq.paragraphs) {
                    const Paragraph* para = corpus.find(id);
                    if (para == nullptr) {
                        throw NotFoundError("question " + dq.id +
                                            " names unknown paragraph id " +
                                            std::to_string(id));
                    }
                    fixed.push_back(para);
                }
                stores.fixed_paragraphs = &fixed;
            }
            Reasoner reasoner(stores, rcfg);
            if (flat) {
                DecomposeResult dr = decomposer.decompose(dq.question);
                result = reasoner.solve_atoms(dr.atoms, dr.likelihood);
            } else {
                const Hqdt tree = build_hqdt(dq.question, decomposer, generator);
                result = reasoner.solve_tree(tree);
            }
            if (want_traces) row.trace = reasoner.trace_json();
        } catch (const RohtError& e) {
            row.error = e.what();
        }
        if (!result.empty()) row.prediction = result.top().value.surface();
        for (const ScoredAnswer& answer : result.answers) {
            row.answers.push_back({{"score", answer.score},
                                   {"source", to_string(answer.source)},
                                   {"surface", answer.value.surface()}});
        }
        row.em = exact_match(row.prediction, dq.golds);
        row.f1 = token_f1(row.prediction, dq.golds);
    };

    unsigned n_threads = config.threads > 0
                             ? static_cast<unsigned>(config.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t thread_cap = std::max<std::size_t>(rows.size(), 1);
    if (n_threads > thread_cap) n_threads = static_cast<unsigned>(thread_cap);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) break;
            solve_one(i);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    RunOutcome outcome;
    outcome.count = static_cast<int>(rows.size());
    nlohmann::json question_rows = nlohmann::json::array();
    for (const Row& row : rows) {
        outcome.em += row.em;
        outcome.f1 += row.f1;
        nlohmann::json item = {{"answers", row.answers},
                               {"em", row.em},
                               {"f1", row.f1},
                               {"family", row.question->family},
                               {"golds", row.question->golds},
                               {"id", row.question->id},
                               {"prediction", row.prediction},
                               {"question", row.question->question}};
        if (!row.error.empty()) item["error"] = row.error;
        question_rows.push_back(std::move(item));
    }
    if (!rows.empty()) {
        outcome.em /= static_cast<double>(rows.size());
        outcome.f1 /= static_cast<double>(rows.size());
    }
    const nlohmann::json report = {
        {"aggregate",
         {{"count", outcome.count}, {"em", outcome.em}, {"f1", outcome.f1}}},
        {"config",
         {{"ablate_fraction", config.ablate_fraction},
          {"corpus", config.corpus_path},
          {"gamma", config.gamma},
          {"kb", config.kb_path},
          {"mode", config.mode},
          {"questions", config.questions_path},
          {"seed", config.seed},
          {"topk", config.topk}}},
        {"questions", std::move(question_rows)}};
    outcome.report_json = report.dump(2) + "\n";

    if (!config.out_path.empty()) {
        write_file(config.out_path, outcome.report_json);
    }
    if (want_traces) {
        std::filesystem::create_directories(config.traces_dir);
        for (const Row& row : rows) {
            write_file(config.traces_dir + "/" + row.question->id + ".json",
                       row.trace + "\n");
        }
    }
    return outcome;
}

std::string precision_table_json_for(const std::string& questions_path,
                                     const std::string& kb_path) {
    const KnowledgeBase kb = load_kb(kb_path);
    const Dataset dataset = load_dataset(questions_path);
    const KbView view(kb);
    const TemplateSemanticParser parser;
    const PrecisionTable table = build_precision_table(train_examples(dataset), view, parser);
    return precision_table_to_json(table);
}

void write_world(const SyntheticWorld& world, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    save_kb(world.kb, out_dir + "/kb.json");
    save_corpus(world.corpus, out_dir + "/corpus.json");
    save_dataset(world.questions, out_dir + "/questions.json");
    save_dataset(world.hierarchy_suite, out_dir + "/hierarchy_suite.json");
    save_dataset(world.scheduler_suite, out_dir + "/scheduler_suite.json");
}

}  // namespace roht
