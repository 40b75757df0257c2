#include "kwcl/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kwcl/util/errors.hpp"
#include "kwcl/util/rng.hpp"

namespace kwcl::train {

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (disc_steps < 1) throw ConfigError("train: disc_steps must be >= 1");
    if (vocab_min_freq < 1) throw ConfigError("train: vocab_min_freq must be >= 1");
    if (vocab_max_size < 2) throw ConfigError("train: vocab_max_size must hold PAD and UNK");
    if (optimizer.lr < 0.0) throw ConfigError("train: learning rate must be >= 0");
    arch.validate();
}

Trainer::Trainer(const corpus::MultiDomainDataset& dataset, const corpus::Vocabulary& vocab,
                 CurriculumSchedule schedule, TrainConfig cfg)
    : dataset_(dataset), vocab_(vocab), schedule_(std::move(schedule)), cfg_(std::move(cfg)),
      reduction_(cfg_.exact_sum ? nn::Reduction::Sum : nn::Reduction::Mean),
      adam_(cfg_.optimizer) {
    cfg_.validate();
    if (schedule_.order.size() != dataset_.num_domains()) {
        throw DataError("train: schedule does not cover the dataset's domains");
    }
    bundle_ = std::make_unique<model::ModelBundle>(model::build_model(
        cfg_.arch, dataset_.domains(), vocab_.size(), static_cast<std::size_t>(dataset_.num_labels()),
        cfg_.seed));

    for (const std::string& d : schedule_.order) {
        schedule_indices_.push_back(dataset_.domain_index(d)); // throws on unknown domain
    }

    corpus::BatchConfig bcfg = cfg_.batch_config();
    main_cursors_.resize(dataset_.num_domains());
    disc_cursors_.resize(dataset_.num_domains());
    disc_unlabeled_.resize(dataset_.num_domains());
    for (std::size_t i = 0; i < dataset_.num_domains(); ++i) {
        const corpus::DomainData& dd = dataset_.domain_data(i);
        if (dd.train.empty()) {
            throw DataError("train: domain '" + dataset_.domains()[i] +
                                  "' has no training documents");
        }
        const std::string& name = dataset_.domains()[i];
        main_cursors_[i] = std::make_unique<corpus::BatchCursor>(corpus::BatchStream(
            &dd.train, &vocab_, bcfg, util::subseed(cfg_.seed, "batches", name), static_cast<int>(i)));
        disc_cursors_[i] = std::make_unique<corpus::BatchCursor>(corpus::BatchStream(
            &dd.train, &vocab_, bcfg, util::subseed(cfg_.seed, "disc-batches", name),
            static_cast<int>(i)));
        if (!dd.unlabeled.empty()) {
            disc_unlabeled_[i] = std::make_unique<corpus::BatchCursor>(corpus::BatchStream(
                &dd.unlabeled, &vocab_, bcfg, util::subseed(cfg_.seed, "disc-unlabeled", name),
                static_cast<int>(i)));
        }
        std::size_t batches = (dd.train.size() + cfg_.batch_size - 1) / cfg_.batch_size;
        steps_per_epoch_ = std::max(steps_per_epoch_, batches);
    }
}

std::size_t Trainer::planned_steps() const {
    return cfg_.max_steps > 0 ? cfg_.max_steps : cfg_.epochs * steps_per_epoch_;
}

const corpus::TokenizedBatch& Trainer::next_main_batch(std::size_t domain_index) {
    return main_cursors_[domain_index]->next();
}

std::vector<const corpus::TokenizedBatch*> Trainer::next_disc_batches(std::size_t domain_index) {
    std::vector<const corpus::TokenizedBatch*> out;
    out.push_back(&disc_cursors_[domain_index]->next());
    if (disc_unlabeled_[domain_index]) {
        out.push_back(&disc_unlabeled_[domain_index]->next());
    }
    return out;
}

void Trainer::check_finite(double value, const char* what, const std::string& domain) const {
    if (!std::isfinite(value)) {
        throw NumericError("train: step " + std::to_string(step_counter_) + ", domain '" +
                                 domain + "': " + what + " is not finite (" +
                                 std::to_string(value) + ")");
    }
}

double Trainer::discriminator_update(const std::vector<const corpus::TokenizedBatch*>& batches) {
    nn::Tape tape;
    nn::Tape::NodeId loss = model::loss_dd(tape, *bundle_, batches, reduction_, true);
    double value = tape.value(loss).item();
    check_finite(value, "discriminator loss", batches.empty() ? "?" : std::to_string(batches[0]->domain_index));
    tape.backward(loss);
    adam_.step(bundle_->discriminator_params());
    return value;
}

DomainStepLoss Trainer::main_update(const corpus::TokenizedBatch& batch) {
    if (batch.domain_index < 0 ||
        static_cast<std::size_t>(batch.domain_index) >= dataset_.num_domains()) {
        throw DataError("train: batch without a valid domain index");
    }
    std::size_t i = static_cast<std::size_t>(batch.domain_index);
    const std::string& name = dataset_.domains()[i];

    nn::Tape tape;
    model::SharedLoss losses =
        model::shared_extractor_loss(tape, *bundle_, {&batch}, reduction_, cfg_.arch.lambda);
    DomainStepLoss out;
    out.domain = name;
    out.classification = tape.value(losses.classification).item();
    out.discrimination = tape.value(losses.discrimination).item();
    check_finite(out.classification, "classification loss", name);
    check_finite(out.discrimination, "discrimination loss", name);

    tape.backward(losses.combined);
    std::vector<nn::Parameter*> update_set = bundle_->classifier_params();
    for (nn::Parameter* p : bundle_->private_params(i)) update_set.push_back(p);
    for (nn::Parameter* p : bundle_->shared_params()) update_set.push_back(p);
    adam_.step(update_set);
    // The combined backward pushed -lambda-scaled gradients into the
    // discriminator; its update happens only in its own phase.
    for (nn::Parameter* p : bundle_->discriminator_params()) p->zero_grad();
    return out;
}

StepMetrics Trainer::step() {
    StepMetrics metrics;
    metrics.step = step_counter_;
    const bool adversarial = dataset_.num_domains() > 1;
    for (std::size_t pos = 0; pos < schedule_indices_.size(); ++pos) {
        std::size_t i = schedule_indices_[pos];
        if (visit_hook_) visit_hook_(step_counter_, dataset_.domains()[i]);

        double disc_sum = 0.0;
        if (adversarial) {
            for (std::size_t r = 0; r < cfg_.disc_steps; ++r) {
                disc_sum += discriminator_update(next_disc_batches(i));
            }
        }
        DomainStepLoss visit = main_update(next_main_batch(i));
        visit.disc_phase = adversarial ? disc_sum / static_cast<double>(cfg_.disc_steps) : 0.0;
        metrics.j_tc += visit.classification;
        metrics.j_dd += visit.discrimination;
        metrics.per_domain.push_back(std::move(visit));
    }
    metrics.j_fs = metrics.j_tc - cfg_.arch.lambda * metrics.j_dd;
    ++step_counter_;
    return metrics;
}

EvalResult Trainer::evaluate_now() {
    return evaluate(*bundle_, vocab_, dataset_, cfg_.batch_config());
}

RunHistory Trainer::run() {
    RunHistory history;
    const auto started = std::chrono::steady_clock::now();
    const std::size_t total = planned_steps();
    double best_average = -1.0;
    std::map<std::string, nn::Tensor> best_values;
    std::size_t last_eval = 0;
    bool evaluated = false;

    for (std::size_t s = 0; s < total; ++s) {
        history.steps.push_back(step());
        const std::size_t done = s + 1;
        bool cadence = cfg_.eval_every > 0 ? (done % cfg_.eval_every == 0)
                                           : (steps_per_epoch_ > 0 && done % steps_per_epoch_ == 0);
        if ((cadence || done == total) && done != last_eval) {
            EvalResult eval = evaluate_now();
            EvalRecord record;
            record.step = done;
            record.domains = eval.domains;
            record.accuracy = eval.accuracy;
            record.average = eval.average;
            history.evals.push_back(std::move(record));
            last_eval = done;
            evaluated = true;
            if (eval.average > best_average) {
                best_average = eval.average;
                best_values = bundle_->snapshot_values();
            }
        }
    }
    if (evaluated) bundle_->restore_values(best_values);
    history.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return history;
}

} // namespace kwcl::train
