#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "kwcl/corpus/batch.hpp"
#include "kwcl/corpus/dataset.hpp"
#include "kwcl/corpus/vocabulary.hpp"
#include "kwcl/model/bundle.hpp"
#include "kwcl/model/losses.hpp"
#include "kwcl/nn/adam.hpp"
#include "kwcl/train/config.hpp"
#include "kwcl/train/evaluate.hpp"
#include "kwcl/train/metrics.hpp"
#include "kwcl/train/schedule.hpp"

namespace kwcl::train {

/// One adversarial training run. Each step visits every domain once, in
/// schedule order; a visit is `disc_steps` discriminator updates on detached
/// shared features followed by one main update of classifier, the domain's
/// private extractor, and the shared extractor.
///
/// The phase methods are public so tests can replay a step piecewise; step()
/// and run() are the production path. Dataset and vocabulary must outlive
/// the trainer.
class Trainer {
public:
    Trainer(const corpus::MultiDomainDataset& dataset, const corpus::Vocabulary& vocab,
            CurriculumSchedule schedule, TrainConfig cfg);

    /// Next labeled batch for the main phase of `domain_index`. The reference
    /// stays valid until this domain's main cursor advances again.
    const corpus::TokenizedBatch& next_main_batch(std::size_t domain_index);

    /// Labeled plus (when present) unlabeled batch for one discriminator
    /// update of `domain_index`.
    std::vector<const corpus::TokenizedBatch*> next_disc_batches(std::size_t domain_index);

    /// Phase A: one discriminator step on detached shared features. Only
    /// discriminator parameters change. Returns the loss value.
    double discriminator_update(const std::vector<const corpus::TokenizedBatch*>& batches);

    /// Phase B: classifier + private-extractor + shared-extractor update from
    /// one combined backward pass; discriminator gradients are discarded.
    /// Returns the batch's classification and discrimination loss values.
    DomainStepLoss main_update(const corpus::TokenizedBatch& batch);

    StepMetrics step();

    /// Runs the planned number of steps with periodic evaluation, restores
    /// the best-average-accuracy snapshot, returns the full history.
    RunHistory run();

    EvalResult evaluate_now();

    model::ModelBundle& bundle() { return *bundle_; }
    const corpus::Vocabulary& vocab() const { return vocab_; }
    const CurriculumSchedule& schedule() const { return schedule_; }
    const TrainConfig& config() const { return cfg_; }
    std::size_t steps_per_epoch() const { return steps_per_epoch_; }
    std::size_t planned_steps() const;
    std::size_t steps_done() const { return step_counter_; }

    /// Fired once per domain visit inside step(), in visiting order.
    void set_domain_visit_hook(std::function<void(std::size_t, const std::string&)> hook) {
        visit_hook_ = std::move(hook);
    }

private:
    const corpus::MultiDomainDataset& dataset_;
    const corpus::Vocabulary& vocab_;
    CurriculumSchedule schedule_;
    TrainConfig cfg_;
    nn::Reduction reduction_;
    std::unique_ptr<model::ModelBundle> bundle_;
    nn::Adam adam_;
    std::vector<std::size_t> schedule_indices_; // schedule position -> domain index
    std::vector<std::unique_ptr<corpus::BatchCursor>> main_cursors_;     // by domain index
    std::vector<std::unique_ptr<corpus::BatchCursor>> disc_cursors_;     // labeled
    std::vector<std::unique_ptr<corpus::BatchCursor>> disc_unlabeled_;   // may hold nulls
    std::size_t steps_per_epoch_ = 0;
    std::size_t step_counter_ = 0;
    std::function<void(std::size_t, const std::string&)> visit_hook_;

    void check_finite(double value, const char* what, const std::string& domain) const;
};

} // namespace kwcl::train
