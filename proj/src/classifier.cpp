#include "snapinfo/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace snapinfo::classifier {

using corpus::Document;
using nlohmann::json;

std::size_t NBModel::class_index(Label c) const {
    auto it = std::find(classes_.begin(), classes_.end(), c);
    if (it == classes_.end()) throw std::out_of_range("class not in model: " + std::string(corpus::to_string(c)));
    return static_cast<std::size_t>(it - classes_.begin());
}

void NBModel::build_index() {
    index_.clear();
    for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

double NBModel::log_prior(Label c) const { return log_priors_[class_index(c)]; }

double NBModel::log_likelihood(Label c, const std::string& term) const {
    return log_likelihoods_[class_index(c)][index_.at(term)];
}

NBModel train(const std::vector<Document>& labeled, double smoothing) {
    if (!(smoothing > 0.0)) throw std::invalid_argument("smoothing must be > 0");

    std::map<Label, std::size_t> doc_counts;
    std::map<Label, std::map<std::string, std::size_t>> term_counts;
    std::set<std::string> vocab;
    for (const auto& d : labeled) {
        if (!d.label) continue;
        ++doc_counts[*d.label];
        auto& counts = term_counts[*d.label];
        for (const auto& t : corpus::tokenize(d.text)) {
            ++counts[t.norm];
            vocab.insert(t.norm);
        }
    }
    if (doc_counts.size() < 2) throw InsufficientClasses("need at least 2 labelled classes");
    if (vocab.empty()) throw EmptyVocabulary("training documents contain no tokens");

    NBModel m;
    m.smoothing_ = smoothing;
    m.vocab_.assign(vocab.begin(), vocab.end());
    m.build_index();

    std::size_t total_docs = 0;
    for (const auto& [_, n] : doc_counts) total_docs += n;

    const double v = static_cast<double>(m.vocab_.size());
    for (const auto& [label, n] : doc_counts) {
        m.classes_.push_back(label);
        m.log_priors_.push_back(std::log(static_cast<double>(n) / static_cast<double>(total_docs)));

        const auto& counts = term_counts[label];
        std::size_t class_total = 0;
        for (const auto& [_, c] : counts) class_total += c;
        const double denom = static_cast<double>(class_total) + smoothing * v;

        std::vector<double> row(m.vocab_.size());
        for (std::size_t i = 0; i < m.vocab_.size(); ++i) {
            auto it = counts.find(m.vocab_[i]);
            const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
            row[i] = std::log((c + smoothing) / denom);
        }
        m.log_likelihoods_.push_back(std::move(row));
    }
    return m;
}

Prediction predict(const NBModel& model, const Document& doc) {
    std::vector<double> joint = model.log_priors_;
    for (const auto& t : corpus::tokenize(doc.text)) {
        auto it = model.index_.find(t.norm);
        if (it == model.index_.end()) continue;
        for (std::size_t c = 0; c < joint.size(); ++c) joint[c] += model.log_likelihoods_[c][it->second];
    }

    // log-sum-exp
    const double peak = *std::max_element(joint.begin(), joint.end());
    double z = 0.0;
    for (double j : joint) z += std::exp(j - peak);

    Prediction p;
    std::size_t best = 0;
    for (std::size_t c = 0; c < joint.size(); ++c) {
        p.posterior[model.classes_[c]] = std::exp(joint[c] - peak) / z;
        if (joint[c] > joint[best]) best = c;
    }
    p.label = model.classes_[best];
    return p;
}

double cross_validate(const std::vector<Document>& labeled, int k, double smoothing) {
    if (k < 2) throw TooFewExamples("k must be >= 2");

    std::map<Label, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labeled.size(); ++i)
        if (labeled[i].label) by_class[*labeled[i].label].push_back(i);
    if (by_class.size() < 2) throw InsufficientClasses("need at least 2 labelled classes");

    std::vector<int> fold_of(labeled.size(), -1);
    for (const auto& [label, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k))
            throw TooFewExamples("class '" + std::string(corpus::to_string(label)) + "' has " +
                                 std::to_string(members.size()) + " examples, fewer than k=" + std::to_string(k));
        for (std::size_t i = 0; i < members.size(); ++i) fold_of[members[i]] = static_cast<int>(i % k);
    }

    double accuracy_sum = 0.0;
    for (int fold = 0; fold < k; ++fold) {
        std::vector<Document> train_set, test_set;
        for (std::size_t i = 0; i < labeled.size(); ++i) {
            if (fold_of[i] < 0) continue;
            (fold_of[i] == fold ? test_set : train_set).push_back(labeled[i]);
        }
        const NBModel model = train(train_set, smoothing);
        std::size_t correct = 0;
        for (const auto& d : test_set)
            if (predict(model, d).label == *d.label) ++correct;
        accuracy_sum += static_cast<double>(correct) / static_cast<double>(test_set.size());
    }
    return accuracy_sum / k;
}

std::string NBModel::to_json() const {
    json j;
    j["smoothing"] = smoothing_;
    j["vocab"] = vocab_;
    j["classes"] = json::array();
    j["log_priors"] = json::object();
    j["log_likelihoods"] = json::object();
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const std::string name(corpus::to_string(classes_[c]));
        j["classes"].push_back(name);
        j["log_priors"][name] = log_priors_[c];
        json row = json::object();
        for (std::size_t i = 0; i < vocab_.size(); ++i) row[vocab_[i]] = log_likelihoods_[c][i];
        j["log_likelihoods"][name] = std::move(row);
    }
    return j.dump(2);
}

NBModel NBModel::from_json(const std::string& text) {
    NBModel m;
    try {
        const json j = json::parse(text);
        m.smoothing_ = j.at("smoothing").get<double>();
        m.vocab_ = j.at("vocab").get<std::vector<std::string>>();
        m.build_index();
        for (const auto& name : j.at("classes")) {
            const auto label = corpus::parse_label(name.get<std::string>());
            if (!label) throw MalformedModel("unknown class " + name.dump());
            m.classes_.push_back(*label);
            m.log_priors_.push_back(j.at("log_priors").at(name.get<std::string>()).get<double>());
            const auto& row = j.at("log_likelihoods").at(name.get<std::string>());
            std::vector<double> values(m.vocab_.size());
            for (std::size_t i = 0; i < m.vocab_.size(); ++i) values[i] = row.at(m.vocab_[i]).get<double>();
            m.log_likelihoods_.push_back(std::move(values));
        }
    } catch (const json::exception& e) {
        throw MalformedModel(e.what());
    }
    if (m.classes_.size() < 2) throw MalformedModel("model has fewer than 2 classes");
    return m;
}

void NBModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json() << '\n';
}

NBModel NBModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedModel("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace snapinfo::classifier
