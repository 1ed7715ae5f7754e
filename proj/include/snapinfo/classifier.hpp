#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "snapinfo/corpus.hpp"
#include "snapinfo/error.hpp"

namespace snapinfo::classifier {

SNAPINFO_DEFINE_ERROR(InsufficientClasses);
SNAPINFO_DEFINE_ERROR(EmptyVocabulary);
SNAPINFO_DEFINE_ERROR(TooFewExamples);
SNAPINFO_DEFINE_ERROR(MalformedModel);

using corpus::Label;

struct Prediction {
    Label label = Label::neutral;
    std::map<Label, double> posterior;
};

class NBModel;
NBModel train(const std::vector<corpus::Document>& labeled, double smoothing);
Prediction predict(const NBModel& model, const corpus::Document& doc);

/// Multinomial Naive Bayes over bag-of-norm-tokens with additive smoothing.
class NBModel {
public:
    const std::vector<Label>& classes() const { return classes_; }
    const std::vector<std::string>& vocab() const { return vocab_; }
    double smoothing() const { return smoothing_; }
    double log_prior(Label c) const;
    /// log P(term | c); throws std::out_of_range for unknown terms.
    double log_likelihood(Label c, const std::string& term) const;

    std::string to_json() const;
    static NBModel from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static NBModel load(const std::filesystem::path& path);

private:
    friend NBModel train(const std::vector<corpus::Document>& labeled, double smoothing);

    std::size_t class_index(Label c) const;
    void build_index();
    std::vector<Label> classes_;
    std::vector<double> log_priors_;
    /// [class][term index]
    std::vector<std::vector<double>> log_likelihoods_;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::size_t> index_;
    double smoothing_ = 1.0;
    friend Prediction predict(const NBModel& model, const corpus::Document& doc);
};

/// Throws InsufficientClasses (documents without a label are ignored) or
/// EmptyVocabulary.
NBModel train(const std::vector<corpus::Document>& labeled, double smoothing = 1.0);

/// Ties between classes resolve to the earliest in `classes()` order.
Prediction predict(const NBModel& model, const corpus::Document& doc);

/// Mean accuracy over stratified folds: the i-th example of each class (input
/// order) goes to fold i mod k. Throws TooFewExamples.
double cross_validate(const std::vector<corpus::Document>& labeled, int k, double smoothing = 1.0);

}  // namespace snapinfo::classifier
