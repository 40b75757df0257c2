#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

#include "kwcl/corpus/dataset.hpp"
#include "kwcl/corpus/vocabulary.hpp"
#include "kwcl/io/writers.hpp"
#include "kwcl/model/bundle.hpp"
#include "kwcl/model/forward.hpp"
#include "kwcl/model/losses.hpp"
#include "kwcl/train/evaluate.hpp"
#include "kwcl/train/schedule.hpp"
#include "kwcl/train/trainer.hpp"
#include "kwcl/util/errors.hpp"

#include "support/fixtures.hpp"

using namespace kwcl;
using corpus::Document;
using corpus::MultiDomainDataset;
using train::Trainer;

namespace {

model::ModelConfig tiny_arch() {
    model::ModelConfig arch;
    arch.kernel_sizes = {2, 3};
    arch.channels = 2;
    arch.embed_dim = 3;
    arch.hidden = 4;
    arch.max_len = 8;
    arch.lambda = 0.5;
    return arch;
}

Document doc(std::string text, int label, std::string domain) {
    return Document{std::move(text), label, std::move(domain)};
}

Document unlabeled_doc(std::string text, std::string domain) {
    return Document{std::move(text), std::nullopt, std::move(domain)};
}

/// Two domains: "da" with 10 training docs, test docs, and unlabeled docs;
/// "db" with 4 training docs and test docs but nothing unlabeled.
MultiDomainDataset mechanics_dataset() {
    corpus::DomainData da;
    const char* da_texts[] = {
        "the motor hums along nicely",  "this motor stalls under load",
        "a quiet fan and a warm case",  "loud fan rattles in the case",
        "sturdy frame with clean welds", "the frame bends far too easily",
        "crisp display and good battery", "dim display drains the battery",
        "solid hinges feel premium",     "wobbly hinges feel cheap",
    };
    for (int i = 0; i < 10; ++i) da.train.push_back(doc(da_texts[i], (i % 2 == 0) ? 1 : 0, "da"));
    da.test.push_back(doc("the motor and fan run cool", 1, "da"));
    da.test.push_back(doc("case rattles and hinges wobble", 0, "da"));
    da.unlabeled.push_back(unlabeled_doc("frame display battery case", "da"));
    da.unlabeled.push_back(unlabeled_doc("motor fan hinges welds", "da"));

    corpus::DomainData db;
    db.train.push_back(doc("a tense plot with sharp prose", 1, "db"));
    db.train.push_back(doc("flat prose and a dull plot", 0, "db"));
    db.train.push_back(doc("characters grow and the story lands", 1, "db"));
    db.train.push_back(doc("the story meanders and drags", 0, "db"));
    db.test.push_back(doc("sharp prose and a story that lands", 1, "db"));
    db.test.push_back(doc("dull characters drag the plot", 0, "db"));

    return MultiDomainDataset({"da", "db"}, {std::move(da), std::move(db)}, 2);
}

train::CurriculumSchedule plain_schedule(std::vector<std::string> order,
                                         std::vector<double> weights) {
    train::CurriculumSchedule s;
    s.order = std::move(order);
    s.weights = std::move(weights);
    s.extractor = "yake";
    s.top_n = 3;
    return s;
}

train::TrainConfig mechanics_config() {
    train::TrainConfig cfg;
    cfg.seed = 11;
    cfg.epochs = 1;
    cfg.batch_size = 4;
    cfg.arch = tiny_arch();
    return cfg;
}

bool tensors_bitwise_equal(const nn::Tensor& a, const nn::Tensor& b) {
    return a.shape() == b.shape() &&
           std::memcmp(a.data(), b.data(), a.numel() * sizeof(double)) == 0;
}

/// True when any parameter whose name starts with `prefix` moved.
bool group_changed(model::ModelBundle& bundle, const std::map<std::string, nn::Tensor>& before,
                   const std::string& prefix) {
    for (const auto& [name, p] : bundle.params()) {
        if (name.rfind(prefix, 0) != 0) continue;
        if (!tensors_bitwise_equal(p.value, before.at(name))) return true;
    }
    return false;
}

bool group_frozen(model::ModelBundle& bundle, const std::map<std::string, nn::Tensor>& before,
                  const std::string& prefix) {
    for (const auto& [name, p] : bundle.params()) {
        if (name.rfind(prefix, 0) != 0) continue;
        if (!tensors_bitwise_equal(p.value, before.at(name))) return false;
    }
    return true;
}

} // namespace

TEST_SUITE("trainer") {

TEST_CASE("step budget follows the largest domain") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    train::TrainConfig cfg = mechanics_config();

    cfg.epochs = 2;
    Trainer two_epochs(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    CHECK(two_epochs.steps_per_epoch() == 3); // 10 docs at batch 4
    CHECK(two_epochs.planned_steps() == 6);
    CHECK(two_epochs.steps_done() == 0);

    cfg.epochs = 5;
    cfg.max_steps = 2; // overrides the epoch budget
    Trainer capped(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    CHECK(capped.planned_steps() == 2);

    cfg.epochs = 0;
    cfg.max_steps = 0;
    Trainer idle(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    CHECK(idle.planned_steps() == 0);
    train::RunHistory history = idle.run();
    CHECK(history.steps.empty());
    CHECK(history.evals.empty());
}

TEST_CASE("every step visits the domains in schedule order") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);

    std::vector<std::pair<std::size_t, std::string>> visits;
    Trainer forward(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), mechanics_config());
    forward.set_domain_visit_hook([&](std::size_t step, const std::string& name) {
        visits.emplace_back(step, name);
    });
    forward.step();
    forward.step();
    REQUIRE(visits.size() == 4);
    CHECK(visits[0] == std::pair<std::size_t, std::string>{0, "da"});
    CHECK(visits[1] == std::pair<std::size_t, std::string>{0, "db"});
    CHECK(visits[2] == std::pair<std::size_t, std::string>{1, "da"});
    CHECK(visits[3] == std::pair<std::size_t, std::string>{1, "db"});

    visits.clear();
    Trainer reversed(ds, vocab, plain_schedule({"db", "da"}, {2.0, 1.0}), mechanics_config());
    reversed.set_domain_visit_hook([&](std::size_t step, const std::string& name) {
        visits.emplace_back(step, name);
    });
    train::StepMetrics metrics = reversed.step();
    REQUIRE(visits.size() == 2);
    CHECK(visits[0].second == "db");
    CHECK(visits[1].second == "da");
    REQUIRE(metrics.per_domain.size() == 2);
    CHECK(metrics.per_domain[0].domain == "db");
    CHECK(metrics.per_domain[1].domain == "da");
}

TEST_CASE("discriminator phase touches nothing but the discriminator") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    Trainer trainer(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), mechanics_config());

    // "da" carries unlabeled documents, "db" does not.
    CHECK(trainer.next_disc_batches(0).size() == 2);
    CHECK(trainer.next_disc_batches(1).size() == 1);

    std::map<std::string, nn::Tensor> before = trainer.bundle().snapshot_values();
    double loss = trainer.discriminator_update(trainer.next_disc_batches(0));
    CHECK(std::isfinite(loss));
    CHECK(loss > 0.0);

    CHECK(group_changed(trainer.bundle(), before, "discriminator."));
    CHECK(group_frozen(trainer.bundle(), before, "classifier."));
    CHECK(group_frozen(trainer.bundle(), before, "private."));
    CHECK(group_frozen(trainer.bundle(), before, "shared."));
    CHECK(group_frozen(trainer.bundle(), before, "embedding."));
}

TEST_CASE("main phase touches its own banks and leaves the rest alone") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    Trainer trainer(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), mechanics_config());

    std::map<std::string, nn::Tensor> before = trainer.bundle().snapshot_values();
    train::DomainStepLoss loss = trainer.main_update(trainer.next_main_batch(0));
    CHECK(loss.domain == "da");
    CHECK(std::isfinite(loss.classification));
    CHECK(loss.classification > 0.0);

    CHECK(group_changed(trainer.bundle(), before, "classifier."));
    CHECK(group_changed(trainer.bundle(), before, "private.da."));
    CHECK(group_changed(trainer.bundle(), before, "shared."));
    CHECK(group_changed(trainer.bundle(), before, "embedding."));
    CHECK(group_frozen(trainer.bundle(), before, "private.db."));
    CHECK(group_frozen(trainer.bundle(), before, "discriminator."));
}

TEST_CASE("zero learning rate repeats the same losses bit for bit") {
    corpus::DomainData da;
    da.train.push_back(doc("steady motor hums softly", 1, "da"));
    da.test.push_back(doc("motor hums", 1, "da"));
    corpus::DomainData db;
    db.train.push_back(doc("sharp prose carries the story", 1, "db"));
    db.test.push_back(doc("sharp story", 1, "db"));
    MultiDomainDataset ds({"da", "db"}, {std::move(da), std::move(db)}, 2);
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);

    train::TrainConfig cfg = mechanics_config();
    cfg.optimizer.lr = 0.0;
    cfg.epochs = 3;
    Trainer trainer(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);

    train::StepMetrics first = trainer.step();
    for (int i = 0; i < 2; ++i) {
        train::StepMetrics again = trainer.step();
        CHECK(again.j_tc == first.j_tc);
        CHECK(again.j_dd == first.j_dd);
        CHECK(again.j_fs == first.j_fs);
        REQUIRE(again.per_domain.size() == first.per_domain.size());
        for (std::size_t d = 0; d < first.per_domain.size(); ++d) {
            CHECK(again.per_domain[d].classification == first.per_domain[d].classification);
            CHECK(again.per_domain[d].discrimination == first.per_domain[d].discrimination);
            CHECK(again.per_domain[d].disc_phase == first.per_domain[d].disc_phase);
        }
    }
}

TEST_CASE("first main update equals a hand-stepped optimizer") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    train::TrainConfig cfg = mechanics_config();
    train::CurriculumSchedule schedule = plain_schedule({"da", "db"}, {2.0, 1.0});

    Trainer live(ds, vocab, schedule, cfg);
    Trainer replay(ds, vocab, schedule, cfg);

    // Identical phase A on both, so the main-phase optimizer state is fresh
    // for every parameter outside the discriminator.
    live.discriminator_update(live.next_disc_batches(0));
    replay.discriminator_update(replay.next_disc_batches(0));

    const corpus::TokenizedBatch& live_batch = live.next_main_batch(0);
    const corpus::TokenizedBatch& replay_batch = replay.next_main_batch(0);
    REQUIRE(live_batch.ids == replay_batch.ids);

    std::map<std::string, nn::Tensor> before = replay.bundle().snapshot_values();
    replay.bundle().zero_all_grads();
    nn::Tape tape;
    model::SharedLoss expected = model::shared_extractor_loss(
        tape, replay.bundle(), {&replay_batch}, nn::Reduction::Mean, cfg.arch.lambda);
    tape.backward(expected.combined);

    train::DomainStepLoss got = live.main_update(live_batch);
    CHECK(got.classification ==
          doctest::Approx(tape.value(expected.classification).item()).epsilon(1e-12));
    CHECK(got.discrimination ==
          doctest::Approx(tape.value(expected.discrimination).item()).epsilon(1e-12));

    const double lr = cfg.optimizer.lr;
    const double eps = cfg.optimizer.eps;
    for (const auto& [name, p] : replay.bundle().params()) {
        const nn::Tensor& actual = live.bundle().param(name).value;
        if (name.rfind("discriminator.", 0) == 0 || name.rfind("private.db.", 0) == 0) {
            CHECK(tensors_bitwise_equal(actual, before.at(name)));
            continue;
        }
        // First Adam step: bias correction cancels, delta = -lr*g / (|g| + eps).
        for (std::size_t i = 0; i < p.grad.numel(); ++i) {
            double g = p.grad[i];
            double want = before.at(name)[i] - lr * g / (std::abs(g) + eps);
            CAPTURE(name);
            CHECK(std::abs(actual[i] - want) <= 1e-9);
        }
    }
}

TEST_CASE("identical configurations rerun byte for byte") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    train::TrainConfig cfg = mechanics_config();
    cfg.epochs = 2;

    Trainer first(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    Trainer second(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    train::RunHistory h1 = first.run();
    train::RunHistory h2 = second.run();

    CHECK(h1.steps.size() == 6);
    CHECK(!h1.evals.empty());
    CHECK(io::history_jsonl(h1) == io::history_jsonl(h2));

    std::map<std::string, nn::Tensor> v1 = first.bundle().snapshot_values();
    std::map<std::string, nn::Tensor> v2 = second.bundle().snapshot_values();
    for (const auto& [name, value] : v1) CHECK(tensors_bitwise_equal(value, v2.at(name)));
}

TEST_CASE("evaluation cadence lands on epoch ends and the final step") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    train::TrainConfig cfg = mechanics_config();
    cfg.epochs = 2; // 6 steps, epoch boundaries at 3 and 6
    Trainer by_epoch(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    train::RunHistory h = by_epoch.run();
    REQUIRE(h.evals.size() == 2);
    CHECK(h.evals[0].step == 3);
    CHECK(h.evals[1].step == 6);

    cfg.eval_every = 4; // cadence at 4 plus the forced final eval
    Trainer by_steps(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), cfg);
    train::RunHistory h2 = by_steps.run();
    REQUIRE(h2.evals.size() == 2);
    CHECK(h2.evals[0].step == 4);
    CHECK(h2.evals[1].step == 6);
}

TEST_CASE("non-finite losses abort the run") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    Trainer trainer(ds, vocab, plain_schedule({"da", "db"}, {2.0, 1.0}), mechanics_config());
    trainer.bundle().param("classifier.fc1.weight").value[0] =
        std::numeric_limits<double>::quiet_NaN();
    try {
        trainer.step();
        FAIL("expected a NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("the schedule must cover the dataset") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    CHECK_THROWS_AS(Trainer(ds, vocab, plain_schedule({"da"}, {1.0}), mechanics_config()),
                    DataError);
    CHECK_THROWS_AS(
        Trainer(ds, vocab, plain_schedule({"da", "zz"}, {2.0, 1.0}), mechanics_config()),
        DataError);
}

TEST_CASE("config validation rejects out-of-range knobs") {
    train::TrainConfig cfg = mechanics_config();
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = mechanics_config();
    cfg.disc_steps = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = mechanics_config();
    cfg.optimizer.lr = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = mechanics_config();
    cfg.arch.lambda = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(mechanics_config().validate());
}

} // TEST_SUITE trainer

TEST_SUITE("evaluate") {

TEST_CASE("indifferent logits break ties toward the lowest label") {
    corpus::DomainData solo;
    solo.train.push_back(doc("alpha beta", 0, "solo"));
    solo.train.push_back(doc("gamma delta", 1, "solo"));
    solo.test.push_back(doc("alpha gamma", 0, "solo"));
    solo.test.push_back(doc("beta delta", 0, "solo"));
    solo.test.push_back(doc("alpha delta", 0, "solo"));
    MultiDomainDataset ds({"solo"}, {std::move(solo)}, 2);
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);

    model::ModelBundle bundle = model::build_model(tiny_arch(), {"solo"}, vocab.size(), 2, 5);
    for (nn::Parameter* p : bundle.classifier_params()) p->value.fill(0.0);

    train::EvalResult r = train::evaluate(bundle, vocab, ds, corpus::BatchConfig{});
    REQUIRE(r.accuracy.size() == 1);
    CHECK(r.accuracy[0] == 1.0); // all-zero logits argmax to class 0
    CHECK(r.average == 1.0);

    for (corpus::Document& d : ds.domain_data(0).test) d.label = 1;
    train::EvalResult flipped = train::evaluate(bundle, vocab, ds, corpus::BatchConfig{});
    CHECK(flipped.accuracy[0] == 0.0);
}

TEST_CASE("the average is the unweighted mean over domains") {
    MultiDomainDataset ds = mechanics_dataset();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    model::ModelBundle bundle = model::build_model(tiny_arch(), ds.domains(), vocab.size(), 2, 9);
    train::EvalResult r = train::evaluate(bundle, vocab, ds, corpus::BatchConfig{});
    CHECK(r.domains == ds.domains());
    REQUIRE(r.accuracy.size() == 2);
    CHECK(r.average ==
          doctest::Approx((r.accuracy[0] + r.accuracy[1]) / 2.0).epsilon(1e-15));
    for (double a : r.accuracy) {
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
    }
}

TEST_CASE("a domain without test documents is an error") {
    MultiDomainDataset ds = mechanics_dataset();
    ds.domain_data(1).test.clear();
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 1000);
    model::ModelBundle bundle = model::build_model(tiny_arch(), ds.domains(), vocab.size(), 2, 9);
    CHECK_THROWS_AS(train::evaluate(bundle, vocab, ds, corpus::BatchConfig{}), DataError);
    CHECK_THROWS_AS(
        train::domain_invariance_probe(bundle, vocab, ds, train::ProbeConfig{}, 1), DataError);
}

TEST_CASE("untrained classifiers sit near chance on balanced labels") {
    MultiDomainDataset ds = testsupport::make_planted_dataset(testsupport::small_planted());
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 5000);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        model::ModelBundle bundle =
            model::build_model(tiny_arch(), ds.domains(), vocab.size(), 2, seed);
        train::EvalResult r = train::evaluate(bundle, vocab, ds, corpus::BatchConfig{});
        CHECK(r.average >= 0.3);
        CHECK(r.average <= 0.7);
    }
}

TEST_CASE("the probe reads domain identity out of untrained features") {
    MultiDomainDataset ds = testsupport::make_planted_dataset(testsupport::small_planted());
    corpus::Vocabulary vocab = corpus::Vocabulary::build(ds, {}, 1, 5000);

    model::ModelConfig arch;
    arch.kernel_sizes = {2, 3};
    arch.channels = 16;
    arch.embed_dim = 16;
    arch.hidden = 16;
    arch.max_len = 32;
    arch.lambda = 0.5;
    model::ModelBundle bundle = model::build_model(arch, ds.domains(), vocab.size(), 2, 21);

    train::ProbeConfig pcfg;
    pcfg.steps = 200;
    pcfg.lr = 1e-2;
    pcfg.hidden = 16;
    pcfg.batches.max_len = 32;
    double acc = train::domain_invariance_probe(bundle, vocab, ds, pcfg, 3);
    CHECK(acc > 0.75);

    // Constant features carry nothing; the probe drops to exactly chance on
    // balanced test sets.
    bundle.param("embedding.table").value.fill(0.0);
    double blind = train::domain_invariance_probe(bundle, vocab, ds, pcfg, 3);
    CHECK(blind == doctest::Approx(0.5).epsilon(1e-12));
}

} // TEST_SUITE evaluate
