#include <gtest/gtest.h>

#include <sstream>

#include "aspectsum/errors.hpp"
#include "aspectsum/eval.hpp"
#include "support.hpp"

using namespace aspectsum;
using testing_support::fixture;

namespace {

constexpr auto NoErr = ErrorLabel::NoErrors;
constexpr auto MinMis = ErrorLabel::MinorMisrepresentation;
constexpr auto MinOm = ErrorLabel::MinorOmission;
constexpr auto MajMis = ErrorLabel::MajorMisrepresentation;
constexpr auto MajOm = ErrorLabel::MajorOmission;
constexpr auto Exag = ErrorLabel::ExaggerationUnderstatement;

}  // namespace

TEST(MajorityVote, Examples) {
    std::vector<LabelSet> unanimous{{NoErr}, {NoErr}, {NoErr}};
    EXPECT_EQ(majority_vote(unanimous), (LabelSet{NoErr}));
    std::vector<LabelSet> two_of_three{{MinOm}, {MinOm, MajMis}, {MajMis}};
    EXPECT_EQ(majority_vote(two_of_three), (LabelSet{MinOm, MajMis}));
    std::vector<LabelSet> disjoint{{MinOm}, {MajMis}, {NoErr}};
    EXPECT_FALSE(majority_vote(disjoint));
    std::vector<LabelSet> contradictory{{NoErr}, {NoErr, }, {MinOm}, {MinOm}};
    EXPECT_FALSE(majority_vote(contradictory));
    std::vector<LabelSet> one{{NoErr}};
    EXPECT_THROW(majority_vote(one), ValidationError);
}

TEST(AgreementRate, Fraction) {
    std::vector<std::vector<LabelSet>> items{{{NoErr}, {NoErr}, {MinOm}}, {{MinOm}, {MajOm}, {Exag}}};
    EXPECT_DOUBLE_EQ(agreement_rate(items), 0.5);
    EXPECT_THROW(agreement_rate({}), ValidationError);
}

TEST(Classify, SeverityTiers) {
    EXPECT_EQ(classify({NoErr}), SeverityTier::NoError);
    EXPECT_EQ(classify({MinMis}), SeverityTier::Minor);
    EXPECT_EQ(classify({MinMis, MinOm}), SeverityTier::Minor);
    EXPECT_EQ(classify({MinOm, Exag}), SeverityTier::Major);
    EXPECT_EQ(classify({MajOm}), SeverityTier::Major);
    EXPECT_THROW(classify({}), ValidationError);
    EXPECT_THROW(classify({NoErr, MinOm}), ValidationError);
}

TEST(ErrorDistribution, CountsAndPercentages) {
    std::vector<std::optional<LabelSet>> finals{LabelSet{NoErr}, LabelSet{NoErr}, LabelSet{MinOm},
                                                LabelSet{MajMis, MajOm}, std::nullopt};
    auto d = error_distribution(finals);
    EXPECT_EQ(d.total, 5u);
    EXPECT_EQ(d.no_error, 2u);
    EXPECT_EQ(d.minor, 1u);
    EXPECT_EQ(d.major, 1u);
    EXPECT_EQ(d.no_majority, 1u);
    EXPECT_EQ(d.percent(SeverityTier::NoError), 40);
    EXPECT_EQ(d.label_counts.at(MajOm), 1u);
    EXPECT_EQ(d.label_counts.count(MinMis), 0u);
}

TEST(ResolveFinalLabels, SingleAndMultipleAnnotators) {
    std::vector<AnnotationRecord> records{{"b", "a1", {MinOm}, ""},
                                          {"a", "a1", {NoErr}, ""},
                                          {"a", "a2", {NoErr}, ""},
                                          {"a", "a3", {MinOm}, ""}};
    auto finals = resolve_final_labels(records);
    ASSERT_EQ(finals.size(), 2u);
    EXPECT_EQ(finals[0].product_id, "a");
    EXPECT_EQ(finals[0].annotators, 3u);
    EXPECT_EQ(finals[0].labels, (LabelSet{NoErr}));
    EXPECT_EQ(finals[1].labels, (LabelSet{MinOm}));
}

TEST(Annotations, ImportRejectsUnknownLabels) {
    std::istringstream in(
        "product_id,annotator_id,labels,reason\n"
        "p1,a,NO_ERRORS,\n"
        "p2,a,TYPO_LABEL,bad\n"
        "p3,a,NO_ERRORS;MINOR_OMISSION,contradiction\n"
        "p4,a,,empty\n"
        "p5,a,minor_omission; MAJOR_OMISSION,\"spaced, lowercase\"\n");
    auto imp = read_annotations_csv(in);
    ASSERT_EQ(imp.records.size(), 2u);
    EXPECT_EQ(imp.records[1].labels, (LabelSet{MinOm, MajOm}));
    EXPECT_EQ(imp.records[1].reason, "spaced, lowercase");
    EXPECT_EQ(imp.rejects.size(), 3u);
}

TEST(Annotations, LabeledFixtureRoundTrips) {
    auto imp = import_annotations(fixture("labeled_examples.csv"));
    EXPECT_TRUE(imp.rejects.empty());
    ASSERT_EQ(imp.records.size(), 3u);
    EXPECT_EQ(imp.records[0].product_id, "mattress-01");
    EXPECT_EQ(imp.records[2].labels, (LabelSet{Exag}));
    std::ostringstream out;
    write_annotations_csv(out, imp.records);
    std::istringstream in(out.str());
    EXPECT_EQ(read_annotations_csv(in).records, imp.records);

    std::vector<std::optional<LabelSet>> finals;
    for (const auto& f : resolve_final_labels(imp.records)) finals.push_back(f.labels);
    auto d = error_distribution(finals);
    EXPECT_EQ(d.minor, 2u);
    EXPECT_EQ(d.major, 1u);
}

TEST(Annotations, ReportsRender) {
    std::vector<std::optional<LabelSet>> finals{LabelSet{NoErr}, LabelSet{MinOm}, std::nullopt};
    auto d = error_distribution(finals);
    auto tsv = format_distribution_tsv(d);
    EXPECT_NE(tsv.find("no_error\t1\t33\n"), std::string::npos);
    EXPECT_NE(tsv.find("no_majority\t1\t-\n"), std::string::npos);
    EXPECT_NE(tsv.find("MINOR_OMISSION\t1\n"), std::string::npos);
    auto j = distribution_to_json(d);
    EXPECT_EQ(j["tiers"]["minor"]["products"], 1);
    EXPECT_EQ(j["labels"]["MAJOR_OMISSION"], 0);
}
