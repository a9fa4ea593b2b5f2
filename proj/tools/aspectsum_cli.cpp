#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "aspectsum/api_service.hpp"
#include "aspectsum/config.hpp"
#include "aspectsum/corpus_stats.hpp"
#include "aspectsum/dataset_io.hpp"
#include "aspectsum/eval.hpp"
#include "aspectsum/http_backend.hpp"
#include "aspectsum/json_codec.hpp"
#include "aspectsum/mapping_store.hpp"
#include "aspectsum/mock_backend.hpp"

using namespace aspectsum;

namespace {

std::shared_ptr<LlmBackend> make_backend(const AppConfig& cfg) {
    if (cfg.backend == BackendKind::Http) {
        if (cfg.llm_endpoint.empty() || cfg.llm_model.empty())
            throw ConfigError("llm.backend = http needs llm.endpoint and llm.model");
        return std::make_shared<HttpBackend>(HttpBackend::config_from_environment(cfg.llm_endpoint, cfg.llm_model));
    }
    if (!cfg.mock_rules.empty()) {
        std::ifstream in(cfg.mock_rules, std::ios::binary);
        if (!in) throw ConfigError("cannot read mock rules " + cfg.mock_rules.string());
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return std::make_shared<MockBackend>(MockRules::parse(text));
    }
    return std::make_shared<MockBackend>();
}

/// Everything a subcommand needs, wired from the config.
struct Runtime {
    explicit Runtime(const AppConfig& cfg)
        : templates(cfg.templates_dir.empty() ? TemplateSet::builtin() : TemplateSet::load_directory(cfg.templates_dir)),
          gateway(make_backend(cfg), cfg.gateway),
          mappings(cfg.mapping_path),
          vocabulary(gateway, templates, mappings.load()),
          store(cfg.store_path),
          orchestrator(store, gateway, templates, vocabulary, cfg.pipeline) {
        vocabulary.set_listener(mappings.listener());
    }

    TemplateSet templates;
    LlmGateway gateway;
    MappingStore mappings;
    AspectVocabulary vocabulary;
    JournalStore store;
    Orchestrator orchestrator;
};

void print_rejects(const std::vector<RejectedRow>& rejects) {
    for (const auto& r : rejects) std::cerr << "line " << r.line << ": " << r.reason << "\n";
}

ApiService* g_service = nullptr;

void on_signal(int) {
    if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aspect-based review summarization pipeline"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);

    auto* ingest = app.add_subcommand("ingest", "Store reviews from a CSV or NDJSON table");
    std::string ingest_file;
    bool ingest_with_aspects = false;
    bool ingest_run = false;
    ingest->add_option("file", ingest_file)->required()->check(CLI::ExistingFile);
    ingest->add_flag("--with-aspects", ingest_with_aspects, "Store the table's aspects column as extractions");
    ingest->add_flag("--run", ingest_run, "Run the pipeline for products whose trigger fired");

    auto* run = app.add_subcommand("run", "Run the pipeline for one product");
    std::string run_product;
    run->add_option("product_id", run_product)->required();

    auto* batch = app.add_subcommand("batch-run", "Extract, consolidate and summarize every eligible product");
    bool batch_due = false;
    batch->add_flag("--due", batch_due, "Only products whose trigger currently fires");

    auto* stats = app.add_subcommand("stats", "Aspect frequency statistics of a reviews table");
    std::string stats_file;
    std::size_t stats_top = 10;
    stats->add_option("file", stats_file)->required()->check(CLI::ExistingFile);
    stats->add_option("--top", stats_top, "Rows in the aspect table");

    auto* eval = app.add_subcommand("eval", "Error distribution of annotated summaries");
    std::string eval_file;
    bool eval_json = false;
    eval->add_option("file", eval_file)->required()->check(CLI::ExistingFile);
    eval->add_flag("--json", eval_json, "JSON instead of TSV");

    auto* serve = app.add_subcommand("serve", "Serve the JSON API");
    std::string serve_host;
    int serve_port = 0;
    serve->add_option("--host", serve_host);
    serve->add_option("--port", serve_port);

    CLI11_PARSE(app, argc, argv);

    try {
        AppConfig cfg = config_path.empty() ? AppConfig{} : AppConfig::load(config_path);

        if (*stats) {
            auto table = load_reviews_table(stats_file);
            print_rejects(table.rejects);
            std::cout << format_stats_report(compute_corpus_stats(table.records), stats_top);
            return table.rejects.empty() ? 0 : 2;
        }
        if (*eval) {
            auto imported = import_annotations(eval_file);
            print_rejects(imported.rejects);
            std::vector<std::optional<LabelSet>> finals;
            for (const auto& f : resolve_final_labels(imported.records)) finals.push_back(f.labels);
            auto dist = error_distribution(finals);
            if (eval_json)
                std::cout << distribution_to_json(dist).dump(2) << "\n";
            else
                std::cout << format_distribution_tsv(dist);
            return imported.rejects.empty() ? 0 : 2;
        }

        Runtime rt(cfg);
        if (*ingest) {
            auto table = load_reviews_table(ingest_file);
            print_rejects(table.rejects);
            std::set<std::string> due;
            std::size_t stored = 0, duplicates = 0;
            for (const auto& rec : table.records) {
                try {
                    auto result = rt.orchestrator.ingest(rec.review);
                    ++stored;
                    if (ingest_with_aspects)
                        rt.store.put_extraction({rec.review.review_id, rec.mentions, "dataset", now_utc()});
                    if (result.decision.triggered()) due.insert(rec.review.product_id);
                } catch (const DuplicateReviewError& e) {
                    ++duplicates;
                    std::cerr << e.what() << "\n";
                }
            }
            std::cout << "stored " << stored << " reviews, " << duplicates << " duplicates, " << table.rejects.size()
                      << " rejected\n";
            int status = table.rejects.empty() && duplicates == 0 ? 0 : 2;
            for (const auto& product : due) {
                if (!ingest_run) {
                    std::cout << "due\t" << product << "\t" << to_string(rt.orchestrator.current_trigger(product).kind)
                              << "\n";
                    continue;
                }
                try {
                    auto summary = rt.orchestrator.run_pipeline(product);
                    std::cout << "summarized\t" << product << "\t" << summary.summary_text.size() << " chars\n";
                } catch (const PipelineError& e) {
                    std::cerr << product << ": " << e.what() << "\n";
                    status = 1;
                }
            }
            return status;
        }
        if (*run) {
            auto summary = rt.orchestrator.run_pipeline(run_product);
            std::cout << nlohmann::json(summary).dump(2) << "\n";
            return 0;
        }
        if (*batch) {
            auto report = rt.orchestrator.batch_run(batch_due);
            if (report.threshold) std::cout << "threshold\t" << *report.threshold << "\n";
            for (const auto& p : report.succeeded) std::cout << "ok\t" << p << "\n";
            for (const auto& [p, why] : report.failed) std::cerr << "failed\t" << p << "\t" << why << "\n";
            if (report.extraction_failures) std::cerr << "extraction failures\t" << report.extraction_failures << "\n";
            return report.failed.empty() ? 0 : 1;
        }
        if (*serve) {
            ApiService service(rt.orchestrator, {cfg.cors_origin, cfg.auto_run});
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            const auto host = serve_host.empty() ? cfg.listen_host : serve_host;
            const auto port = serve_port ? serve_port : cfg.listen_port;
            std::cerr << "listening on " << host << ":" << port << "\n";
            service.serve(host, port);
            g_service = nullptr;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
