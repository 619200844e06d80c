#include "clickbait/self_training.hpp"

#include <unordered_set>

#include "clickbait/error.hpp"

namespace clickbait {

Dataset pseudo_label(const Dataset& unlabelled, const std::vector<Prediction>& predictions) {
    if (unlabelled.truths && !unlabelled.truths->empty()) throw Error("pseudo_label expects an unlabelled dataset");
    if (predictions.size() != unlabelled.size()) throw Error("prediction count does not match the dataset");
    Dataset out;
    out.name = unlabelled.name + "+pseudo";
    out.posts = unlabelled.posts;
    out.truths.emplace();
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].id != unlabelled.posts[i].id) throw Error("prediction order does not match the posts");
        TruthAnnotation t;
        t.id = predictions[i].id;
        t.truth_mean = predictions[i].clickbait_score;
        t.truth_class = class_for_score(t.truth_mean);
        t.synthetic = true;
        out.truths->emplace(t.id, std::move(t));
    }
    return out;
}

Dataset pseudo_label(const TrainedModel& model, const Dataset& unlabelled, const FeatureEncoder& encoder) {
    if (unlabelled.size() == 0) {
        Dataset out = unlabelled;
        out.truths.emplace();
        return out;
    }
    return pseudo_label(unlabelled, predict(model, unlabelled, encoder));
}

Dataset merge_noisy(const Dataset& labelled, const Dataset& noisy) {
    if (!labelled.truths) throw Error("merge_noisy: labelled dataset has no truths");
    if (noisy.size() > 0 && !noisy.truths) throw Error("merge_noisy: noisy dataset has no truths");
    Dataset out;
    out.name = labelled.name + "+" + noisy.name;
    out.truths.emplace();
    std::unordered_set<std::string> ids;
    auto take = [&](const Dataset& src) {
        for (const Post& p : src.posts) {
            if (!ids.insert(p.id).second) throw Error("merge_noisy: id collision on " + p.id);
            out.posts.push_back(p);
            out.truths->emplace(p.id, src.truth_for(p.id));
        }
    };
    take(labelled);
    take(noisy);
    return out;
}

SelfTrainingReport self_training_report(const Dataset& labelled, const Dataset& noisy, const Dataset& merged) {
    SelfTrainingReport r;
    r.labelled = labelled.size();
    r.noisy = noisy.size();
    r.merged = merged.size();
    if (noisy.size() > 0) r.noisy_ratio = class_ratio(noisy);
    r.merged_ratio = class_ratio(merged);
    if (r.labelled == 19538 && r.noisy == 80012)
        r.note = "published combined size is 99,551; exact count of 19,538 + 80,012 is " + std::to_string(r.merged);
    return r;
}

}  // namespace clickbait
