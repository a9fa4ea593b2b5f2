#include <gtest/gtest.h>

#include <thread>

#include "aspectsum/mock_backend.hpp"
#include "aspectsum/orchestrator.hpp"
#include "aspectsum/text.hpp"
#include "support.hpp"

using namespace aspectsum;
using testing_support::make_review;

namespace {

struct Harness {
    explicit Harness(std::shared_ptr<LlmBackend> backend = std::make_shared<MockBackend>(), PipelineConfig cfg = {})
        : gateway(std::move(backend), {}, testing_support::no_sleep()),
          vocabulary(gateway, templates),
          orchestrator(store, gateway, templates, vocabulary, cfg, testing_support::fixed_clock()) {}

    TemplateSet templates = TemplateSet::builtin();
    JournalStore store;
    LlmGateway gateway;
    AspectVocabulary vocabulary;
    Orchestrator orchestrator;
};

void add_reviews(Orchestrator& o, const std::string& product, int from, int to) {
    for (int i = from; i < to; ++i)
        o.ingest(make_review(product + "-" + std::to_string(i), product, "Great color and sturdy frame " + std::to_string(i)));
}

}  // namespace

TEST(RefreshDelta, CeilingOfTenPercentWithMinimumOne) {
    EXPECT_EQ(refresh_delta(10, 0.1), 1u);
    EXPECT_EQ(refresh_delta(11, 0.1), 2u);
    EXPECT_EQ(refresh_delta(100, 0.1), 10u);
    EXPECT_EQ(refresh_delta(110, 0.1), 11u);
    EXPECT_EQ(refresh_delta(0, 0.1), 1u);
}

TEST(EvaluateTrigger, Rules) {
    EXPECT_EQ(evaluate_trigger({"p", 9, std::nullopt}).kind, TriggerKind::None);
    EXPECT_EQ(evaluate_trigger({"p", 10, std::nullopt}).kind, TriggerKind::InitialSummary);
    EXPECT_EQ(evaluate_trigger({"p", 10, 10}).kind, TriggerKind::None);
    EXPECT_EQ(evaluate_trigger({"p", 11, 10}).kind, TriggerKind::Refresh);
    EXPECT_EQ(evaluate_trigger({"p", 109, 100}).kind, TriggerKind::None);
    EXPECT_EQ(evaluate_trigger({"p", 110, 100}).kind, TriggerKind::Refresh);
    EXPECT_EQ(to_string(TriggerKind::InitialSummary), "INITIAL_SUMMARY");
}

TEST(OnReviewIngested, IncrementsAndRejectsForeignProduct) {
    auto [state, decision] = on_review_ingested(make_review("r", "p", "t"), {"p", 9, std::nullopt});
    EXPECT_EQ(state.current_review_count, 10u);
    EXPECT_EQ(decision.kind, TriggerKind::InitialSummary);
    EXPECT_THROW(on_review_ingested(make_review("r", "q", "t"), {"p", 0, std::nullopt}), ValidationError);
}

TEST(Orchestrator, IngestReportsTriggerAndDuplicates) {
    Harness h;
    for (int i = 0; i < 9; ++i)
        EXPECT_EQ(h.orchestrator.ingest(make_review("r" + std::to_string(i), "p", "t")).decision.kind, TriggerKind::None);
    auto tenth = h.orchestrator.ingest(make_review("r9", "p", "t"));
    EXPECT_EQ(tenth.decision.kind, TriggerKind::InitialSummary);
    EXPECT_EQ(tenth.state.current_review_count, 10u);
    EXPECT_THROW(h.orchestrator.ingest(make_review("r9", "p", "t")), DuplicateReviewError);
    EXPECT_THROW(h.orchestrator.ingest(make_review("r10", "p", " ")), ValidationError);
    EXPECT_EQ(h.store.review_count("p"), 10u);
}

TEST(Orchestrator, RunBelowMinimumIsPreconditionError) {
    Harness h;
    add_reviews(h.orchestrator, "p", 0, 9);
    try {
        h.orchestrator.run_pipeline("p");
        FAIL();
    } catch (const PipelineError& e) {
        EXPECT_EQ(e.stage(), PipelineStage::Precondition);
    }
    EXPECT_FALSE(h.store.get_summary("p"));
}

TEST(Orchestrator, RunProducesSummaryAndBaseline) {
    Harness h;
    for (const auto& r : testing_support::golden_reviews()) h.orchestrator.ingest(r);
    auto rec = h.orchestrator.run_pipeline("golden-sofa");
    EXPECT_TRUE(rec.length_ok);
    EXPECT_GE(utf8_length(rec.summary_text), kTargetSummaryMin);
    EXPECT_LE(utf8_length(rec.summary_text), kTargetSummaryMax);
    EXPECT_EQ(rec.review_count_at_generation, 12u);
    EXPECT_EQ(h.store.get_summary("golden-sofa"), rec);
    EXPECT_EQ(h.orchestrator.current_trigger("golden-sofa").kind, TriggerKind::None);
    EXPECT_EQ(h.orchestrator.reviews_extracted(), 12u);

    // A second run re-uses cached extractions.
    h.orchestrator.run_pipeline("golden-sofa");
    EXPECT_EQ(h.orchestrator.reviews_extracted(), 12u);

    // 12 + ceil(1.2) = 14 reviews fire a refresh.
    EXPECT_EQ(h.orchestrator.ingest(make_review("x1", "golden-sofa", "Nice color")).decision.kind, TriggerKind::None);
    EXPECT_EQ(h.orchestrator.ingest(make_review("x2", "golden-sofa", "Nice color")).decision.kind, TriggerKind::Refresh);
}

TEST(Orchestrator, NoAspectsIsSelectionError) {
    Harness h;
    for (int i = 0; i < 10; ++i) h.orchestrator.ingest(make_review("r" + std::to_string(i), "p", "Nothing to say here."));
    try {
        h.orchestrator.run_pipeline("p");
        FAIL();
    } catch (const PipelineError& e) {
        EXPECT_EQ(e.stage(), PipelineStage::Selection);
    }
}

TEST(Orchestrator, SummarizationFailureLeavesNoSummaryButKeepsExtractions) {
    auto scripted = std::make_shared<testing_support::ScriptedBackend>();
    auto mock = std::make_shared<MockBackend>();
    scripted->set_fallback([mock](const BackendRequest& r) -> std::string {
        if (r.template_id == TemplateId::Summarization) throw BackendError(BackendFailure::Transport, "down");
        return mock->complete(r);
    });
    Harness h(scripted);
    add_reviews(h.orchestrator, "p", 0, 10);
    try {
        h.orchestrator.run_pipeline("p");
        FAIL();
    } catch (const PipelineError& e) {
        EXPECT_EQ(e.stage(), PipelineStage::Summarization);
    }
    EXPECT_FALSE(h.store.get_summary("p"));
    EXPECT_TRUE(h.store.get_extraction("p-0"));
}

TEST(Orchestrator, ExtractionFailuresAreSkipped) {
    Harness h;
    add_reviews(h.orchestrator, "p", 0, 10);
    h.orchestrator.ingest(make_review("bad", "p", "broken <<emit-malformed>>"));
    auto rec = h.orchestrator.run_pipeline("p");
    EXPECT_EQ(rec.review_count_at_generation, 11u);
    EXPECT_FALSE(h.store.get_extraction("bad"));
}

TEST(Orchestrator, BatchRunConsolidatesAndRunsDueProducts) {
    PipelineConfig cfg;
    Harness h(std::make_shared<MockBackend>(), cfg);
    for (const auto& r : testing_support::golden_reviews()) h.orchestrator.ingest(r);
    add_reviews(h.orchestrator, "chair", 0, 10);
    add_reviews(h.orchestrator, "tiny", 0, 3);
    auto report = h.orchestrator.batch_run(true);
    EXPECT_EQ(report.succeeded, (std::vector<std::string>{"chair", "golden-sofa"}));
    EXPECT_TRUE(report.failed.empty());
    ASSERT_TRUE(report.threshold);
    EXPECT_TRUE(satisfies_invariants(h.vocabulary.snapshot()));
    EXPECT_EQ(h.vocabulary.snapshot().version, 1u);

    // Nothing is due any more; a forced run re-summarizes without new extraction.
    EXPECT_TRUE(h.orchestrator.batch_run(true).succeeded.empty());
    const auto freq = h.vocabulary.snapshot().frequency;
    auto again = h.orchestrator.batch_run(false);
    EXPECT_EQ(again.succeeded.size(), 2u);
    EXPECT_EQ(h.vocabulary.snapshot().frequency, freq);
}

TEST(Orchestrator, ProfileUsesCachedVocabularyOnly) {
    auto counting = std::make_shared<testing_support::CountingBackend>(std::make_shared<MockBackend>());
    Harness h(counting);
    EXPECT_FALSE(h.orchestrator.profile("golden-sofa"));
    for (const auto& r : testing_support::golden_reviews()) h.orchestrator.ingest(r);
    h.orchestrator.run_pipeline("golden-sofa");
    const auto calls = counting->calls(TemplateId::AspectConsolidation);
    auto profile = h.orchestrator.profile("golden-sofa");
    ASSERT_TRUE(profile);
    EXPECT_EQ(counting->calls(TemplateId::AspectConsolidation), calls);
    EXPECT_FALSE(profile->pair_counts.count({"fabric", Sentiment::Positive}));
    EXPECT_TRUE(profile->pair_counts.count({"material", Sentiment::Positive}));
}

TEST(Orchestrator, ConcurrentIngestFiresInitialTriggerOnce) {
    Harness h;
    std::atomic<int> initial{0};
    {
        std::vector<std::jthread> threads;
        for (int t = 0; t < 4; ++t)
            threads.emplace_back([&, t] {
                for (int i = 0; i < 5; ++i) {
                    auto res = h.orchestrator.ingest(
                        make_review("t" + std::to_string(t) + "-" + std::to_string(i), "p", "Nice color"));
                    if (res.decision.kind == TriggerKind::InitialSummary && res.state.current_review_count == 10)
                        ++initial;
                }
            });
    }
    EXPECT_EQ(initial.load(), 1);
    EXPECT_EQ(h.store.review_count("p"), 20u);
}
