#include "kwcl/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kwcl/corpus/dataset.hpp"
#include "kwcl/corpus/vocabulary.hpp"
#include "kwcl/io/writers.hpp"
#include "kwcl/keywords/embedding_sim.hpp"
#include "kwcl/keywords/ranking.hpp"
#include "kwcl/keywords/textrank.hpp"
#include "kwcl/keywords/yake.hpp"
#include "kwcl/model/forward.hpp"
#include "kwcl/nn/checkpoint.hpp"
#include "kwcl/nn/gradcheck.hpp"
#include "kwcl/train/evaluate.hpp"
#include "kwcl/train/trainer.hpp"
#include "kwcl/util/errors.hpp"

namespace kwcl::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> fit_text_strings(const corpus::MultiDomainDataset& dataset,
                                          std::size_t i) {
    std::vector<std::string> out;
    for (std::string_view sv : dataset.fit_texts(i)) out.emplace_back(sv);
    return out;
}

struct KeywordOptions {
    std::string dataset;
    std::string extractor = "textrank";
    std::size_t n_keywords = 50;
    std::string embedding_file;
    std::string centroid = "freq";
    std::uint64_t seed = 7;
    std::string out;
    std::vector<std::size_t> sweep_n;
};

void require_extractor_inputs(const KeywordOptions& opt, bool allow_random) {
    if (opt.extractor == "embedding" && opt.embedding_file.empty()) {
        throw ConfigError("extractor 'embedding' requires --embedding-file");
    }
    if (opt.extractor == "random" && !allow_random) {
        throw ConfigError("this command needs a keyword extractor: textrank, yake, or embedding");
    }
    if (opt.extractor != "textrank" && opt.extractor != "yake" && opt.extractor != "embedding" &&
        opt.extractor != "random") {
        throw ConfigError("unknown extractor '" + opt.extractor + "'");
    }
    if (opt.n_keywords < 1) throw ConfigError("--n-keywords must be >= 1");
}

/// Full (untruncated) keyword lists for every domain.
std::vector<keywords::KeywordList> extract_all(const corpus::MultiDomainDataset& dataset,
                                               const KeywordOptions& opt) {
    std::vector<keywords::KeywordList> lists;
    std::unique_ptr<keywords::EmbeddingTable> table;
    if (opt.extractor == "embedding") {
        table = std::make_unique<keywords::EmbeddingTable>(
            keywords::load_embedding_table(opt.embedding_file));
    }
    for (std::size_t i = 0; i < dataset.num_domains(); ++i) {
        const std::string& domain = dataset.domains()[i];
        std::vector<std::string> texts = fit_text_strings(dataset, i);
        if (opt.extractor == "textrank") {
            lists.push_back(keywords::extract_textrank(domain, texts));
        } else if (opt.extractor == "yake") {
            lists.push_back(keywords::extract_yake(domain, texts));
        } else {
            keywords::EmbeddingSimConfig cfg;
            cfg.freq_weighted_centroid = (opt.centroid != "mean");
            lists.push_back(keywords::extract_embedding_sim(domain, texts, *table, cfg));
        }
    }
    return lists;
}

void warn_short_lists(const std::vector<keywords::KeywordList>& lists, std::size_t n) {
    for (const keywords::KeywordList& list : lists) {
        if (list.entries.size() < n) {
            std::cerr << "warning: domain '" << list.domain << "' has only " << list.entries.size()
                      << " keywords, fewer than the requested " << n << "; using all available\n";
        }
    }
}

void print_ranking_table(const keywords::DomainRanking& ranking) {
    std::cout << "extractor=" << ranking.extractor << " N=" << ranking.top_n << "\n";
    std::cout << std::left << std::setw(20) << "domain" << "W\n";
    for (const keywords::RankedDomain& e : ranking.entries) {
        std::cout << std::left << std::setw(20) << e.domain << std::setprecision(12) << e.weight_sum
                  << "\n";
    }
}

int cmd_extract_keywords(const KeywordOptions& opt) {
    require_extractor_inputs(opt, false);
    corpus::MultiDomainDataset dataset = corpus::load_dataset(opt.dataset);
    std::vector<keywords::KeywordList> lists = extract_all(dataset, opt);
    warn_short_lists(lists, opt.n_keywords);
    keywords::DomainRanking ranking =
        keywords::rank_from_lists(lists, dataset.domains(), opt.extractor, opt.n_keywords);
    io::write_file(opt.out, io::keyword_ranking_json(ranking, lists, false));
    print_ranking_table(ranking);
    std::cout << "wrote " << opt.out << "\n";
    return 0;
}

int cmd_rank_domains(const KeywordOptions& opt) {
    require_extractor_inputs(opt, true);
    corpus::MultiDomainDataset dataset = corpus::load_dataset(opt.dataset);

    std::vector<keywords::KeywordList> lists;
    if (opt.extractor == "random") {
        for (const std::string& d : dataset.domains()) lists.push_back({d, {}});
    } else {
        lists = extract_all(dataset, opt);
    }

    std::vector<std::size_t> ns = opt.sweep_n.empty() ? std::vector<std::size_t>{opt.n_keywords}
                                                      : opt.sweep_n;
    for (std::size_t n : ns) {
        keywords::DomainRanking ranking;
        if (opt.extractor == "random") {
            ranking = keywords::random_ranking(dataset.domains(), opt.seed);
        } else {
            warn_short_lists(lists, n);
            ranking = keywords::rank_from_lists(lists, dataset.domains(), opt.extractor, n);
        }
        std::string path = opt.out;
        if (ns.size() > 1) {
            fs::path dir(opt.out);
            path = (dir / ("ranking_n" + std::to_string(n) + ".json")).string();
        }
        io::write_file(path, io::keyword_ranking_json(ranking, lists, true));
        print_ranking_table(ranking);
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

struct TrainOptions {
    KeywordOptions keywords;
    train::TrainConfig config;
    double train_fraction = 0.8;
    std::string out;
    bool dry_run = false;
};

ordered_json resolved_config_json(const TrainOptions& opt, const train::CurriculumSchedule& sched) {
    const train::TrainConfig& c = opt.config;
    ordered_json doc;
    doc["dataset"] = opt.keywords.dataset;
    doc["extractor"] = opt.keywords.extractor;
    doc["n_keywords"] = opt.keywords.n_keywords;
    doc["embedding_file"] = opt.keywords.embedding_file;
    doc["centroid"] = opt.keywords.centroid;
    doc["train_fraction"] = opt.train_fraction;
    doc["seed"] = c.seed;
    doc["epochs"] = c.epochs;
    doc["max_steps"] = c.max_steps;
    doc["batch_size"] = c.batch_size;
    doc["disc_steps"] = c.disc_steps;
    doc["eval_every"] = c.eval_every;
    doc["exact_sum"] = c.exact_sum;
    doc["lr"] = c.optimizer.lr;
    doc["beta1"] = c.optimizer.beta1;
    doc["beta2"] = c.optimizer.beta2;
    doc["eps"] = c.optimizer.eps;
    doc["kernel_sizes"] = c.arch.kernel_sizes;
    doc["channels"] = c.arch.channels;
    doc["embed_dim"] = c.arch.embed_dim;
    doc["hidden"] = c.arch.hidden;
    doc["max_len"] = c.arch.max_len;
    doc["lambda"] = c.arch.lambda;
    doc["vocab_min_freq"] = c.vocab_min_freq;
    doc["vocab_max_size"] = c.vocab_max_size;
    doc["schedule"] = sched.order;
    return doc;
}

keywords::DomainRanking ranking_for(const corpus::MultiDomainDataset& dataset,
                                    const KeywordOptions& opt) {
    if (opt.extractor == "random") {
        return keywords::random_ranking(dataset.domains(), opt.seed);
    }
    std::vector<keywords::KeywordList> lists = extract_all(dataset, opt);
    warn_short_lists(lists, opt.n_keywords);
    return keywords::rank_from_lists(lists, dataset.domains(), opt.extractor, opt.n_keywords);
}

void print_eval(const train::EvalResult& eval) {
    std::cout << std::left << std::setw(20) << "domain" << "accuracy\n";
    for (std::size_t i = 0; i < eval.domains.size(); ++i) {
        std::cout << std::left << std::setw(20) << eval.domains[i] << std::setprecision(6)
                  << eval.accuracy[i] << "\n";
    }
    std::cout << std::left << std::setw(20) << "average" << std::setprecision(6) << eval.average
              << "\n";
}

int cmd_train(const TrainOptions& opt_in) {
    TrainOptions opt = opt_in;
    opt.keywords.seed = opt.config.seed; // one master seed for the whole run
    require_extractor_inputs(opt.keywords, true);
    opt.config.validate();
    if (!opt.dry_run && opt.out.empty()) {
        throw ConfigError("train needs --out (or --dry-run)");
    }

    corpus::MultiDomainDataset loaded = corpus::load_dataset(opt.keywords.dataset);
    corpus::MultiDomainDataset dataset =
        corpus::split_dataset(loaded, opt.train_fraction, opt.config.seed);

    keywords::DomainRanking ranking = ranking_for(dataset, opt.keywords);
    train::CurriculumSchedule schedule = train::build_schedule(ranking, dataset.domains());

    ordered_json resolved = resolved_config_json(opt, schedule);
    if (opt.dry_run) {
        std::cout << resolved.dump(2) << "\n";
        return 0;
    }

    corpus::TokenizerConfig tok;
    corpus::Vocabulary vocab =
        corpus::Vocabulary::build(dataset, tok, opt.config.vocab_min_freq, opt.config.vocab_max_size);

    train::Trainer trainer(dataset, vocab, schedule, opt.config);
    train::RunHistory history = trainer.run();
    train::EvalResult eval = trainer.evaluate_now();

    fs::path out_dir(opt.out);
    fs::create_directories(out_dir);
    std::vector<const nn::Parameter*> params;
    for (nn::Parameter* p : trainer.bundle().all_params()) params.push_back(p);
    nn::write_parameter_file(out_dir / "checkpoint.bin", params);
    io::write_file(out_dir / "checkpoint.json",
                   io::checkpoint_sidecar_json(opt.config.arch, dataset.domains(),
                                               static_cast<std::size_t>(dataset.num_labels()), vocab));
    io::write_file(out_dir / "history.jsonl", io::history_jsonl(history));
    std::uint64_t config_hash = io::hash_bytes(resolved.dump());
    io::write_file(out_dir / "report.json",
                   io::report_json(schedule, config_hash, eval, opt.config.arch.lambda));

    std::cout << "schedule:";
    for (const std::string& d : schedule.order) std::cout << " " << d;
    std::cout << "\nsteps: " << trainer.steps_done() << "\n";
    print_eval(eval);
    std::cout << "wrote " << (out_dir / "report.json").string() << "\n";
    return 0;
}

struct EvaluateOptions {
    std::string checkpoint;
    std::string sidecar;
    std::string dataset;
    double train_fraction = 0.8;
    std::uint64_t seed = 7;
    std::string out;
};

int cmd_evaluate(const EvaluateOptions& opt) {
    fs::path ckpt(opt.checkpoint);
    fs::path sidecar_path = opt.sidecar.empty() ? fs::path(ckpt).replace_extension(".json")
                                                : fs::path(opt.sidecar);
    std::ifstream side_in(sidecar_path);
    if (!side_in) throw DataError("evaluate: cannot open sidecar " + sidecar_path.string());
    ordered_json side = ordered_json::parse(side_in);

    model::ModelConfig arch;
    arch.kernel_sizes = side["architecture"]["kernel_sizes"].get<std::vector<std::size_t>>();
    arch.channels = side["architecture"]["channels"].get<std::size_t>();
    arch.embed_dim = side["architecture"]["embed_dim"].get<std::size_t>();
    arch.hidden = side["architecture"]["hidden"].get<std::size_t>();
    arch.max_len = side["architecture"]["max_len"].get<std::size_t>();
    arch.lambda = side["lambda"].get<double>();
    std::vector<std::string> domains = side["domains"].get<std::vector<std::string>>();
    std::size_t num_labels = side["num_labels"].get<std::size_t>();

    // The sidecar stores content tokens only; PAD and UNK always occupy slots 0 and 1.
    std::vector<std::string> tokens = side["vocab_tokens"].get<std::vector<std::string>>();
    tokens.insert(tokens.begin(), {"<pad>", "<unk>"});
    corpus::Vocabulary vocab = corpus::Vocabulary::from_tokens(tokens);
    if (io::hex64(vocab.content_hash()) != side["vocab_hash"].get<std::string>()) {
        throw DataError("evaluate: sidecar vocab_hash does not match its token list");
    }

    model::ModelBundle bundle(arch, domains, vocab.size(), num_labels);
    std::map<std::string, nn::Tensor> values = nn::read_parameter_file(ckpt);
    bundle.restore_values(values);

    corpus::MultiDomainDataset loaded = corpus::load_dataset(opt.dataset);
    corpus::MultiDomainDataset dataset = corpus::split_dataset(loaded, opt.train_fraction, opt.seed);
    if (dataset.domains() != domains) {
        throw DataError("evaluate: dataset domains do not match the checkpoint's");
    }

    corpus::BatchConfig bcfg;
    bcfg.max_len = arch.max_len;
    train::EvalResult eval = train::evaluate(bundle, vocab, dataset, bcfg);
    print_eval(eval);
    if (!opt.out.empty()) {
        ordered_json doc;
        doc["accuracy"] = ordered_json::object();
        for (std::size_t i = 0; i < eval.domains.size(); ++i) {
            doc["accuracy"][eval.domains[i]] = eval.accuracy[i];
        }
        doc["average"] = eval.average;
        io::write_file(opt.out, doc.dump(2) + "\n");
        std::cout << "wrote " << opt.out << "\n";
    }
    return 0;
}

struct GradcheckOptions {
    std::size_t trials = 20;
    std::uint64_t seed = 7;
};

int cmd_gradcheck(const GradcheckOptions& opt) {
    std::vector<nn::GradCheckCase> cases = nn::run_gradcheck_suite(opt.trials, opt.seed);
    bool all_pass = true;
    std::cout << std::left << std::setw(24) << "op" << std::setw(8) << "trials" << std::setw(14)
              << "max_rel_err" << std::setw(12) << "tolerance" << "result\n";
    for (const nn::GradCheckCase& c : cases) {
        std::cout << std::left << std::setw(24) << c.name << std::setw(8) << c.trials
                  << std::setw(14) << std::scientific << std::setprecision(3) << c.max_rel_err
                  << std::setw(12) << c.tolerance << (c.pass ? "PASS" : "FAIL") << "\n";
        std::cout.unsetf(std::ios::scientific);
        all_pass = all_pass && c.pass;
    }
    if (!all_pass) {
        std::cerr << "gradient check failed\n";
        return 1;
    }
    return 0;
}

struct ReportOptions {
    std::vector<std::string> runs;
    std::string out;
};

int cmd_report(const ReportOptions& opt) {
    struct Run {
        std::string name;
        std::map<std::string, double> accuracy;
        double average = 0.0;
    };
    std::vector<Run> runs;
    std::vector<std::string> domains;
    for (const std::string& dir : opt.runs) {
        fs::path path = fs::is_directory(dir) ? fs::path(dir) / "report.json" : fs::path(dir);
        std::ifstream in(path);
        if (!in) throw DataError("report: cannot open " + path.string());
        ordered_json doc = ordered_json::parse(in);
        Run run;
        run.name = fs::path(dir).filename().string();
        if (run.name.empty()) run.name = dir;
        std::vector<std::string> these;
        for (auto& [domain, acc] : doc["accuracy"].items()) {
            run.accuracy[domain] = acc.get<double>();
            these.push_back(domain);
        }
        run.average = doc["average"].get<double>();
        std::sort(these.begin(), these.end());
        if (domains.empty()) {
            domains = these;
        } else if (domains != these) {
            throw DataError("report: run '" + run.name + "' covers a different domain set");
        }
        runs.push_back(std::move(run));
    }

    auto best_in_row = [&](const std::string& domain) {
        double best = -1.0;
        for (const Run& r : runs) best = std::max(best, r.accuracy.at(domain));
        return best;
    };

    std::cout << std::left << std::setw(20) << "domain";
    for (const Run& r : runs) std::cout << std::setw(18) << r.name;
    std::cout << "\n";
    for (const std::string& d : domains) {
        std::cout << std::left << std::setw(20) << d;
        double best = best_in_row(d);
        for (const Run& r : runs) {
            std::ostringstream cell;
            cell << std::setprecision(6) << r.accuracy.at(d) << (r.accuracy.at(d) == best ? " *" : "");
            std::cout << std::setw(18) << cell.str();
        }
        std::cout << "\n";
    }
    std::cout << std::left << std::setw(20) << "Avg";
    double best_avg = -1.0;
    for (const Run& r : runs) best_avg = std::max(best_avg, r.average);
    for (const Run& r : runs) {
        std::ostringstream cell;
        cell << std::setprecision(6) << r.average << (r.average == best_avg ? " *" : "");
        std::cout << std::setw(18) << cell.str();
    }
    std::cout << "\n";

    if (!opt.out.empty()) {
        ordered_json doc;
        doc["domains"] = domains;
        doc["runs"] = ordered_json::array();
        for (const Run& r : runs) {
            ordered_json run;
            run["name"] = r.name;
            run["accuracy"] = ordered_json::object();
            for (const std::string& d : domains) run["accuracy"][d] = r.accuracy.at(d);
            run["average"] = r.average;
            doc["runs"].push_back(std::move(run));
        }
        io::write_file(opt.out, doc.dump(2) + "\n");
        std::cout << "wrote " << opt.out << "\n";
    }
    return 0;
}

void add_keyword_flags(CLI::App* cmd, KeywordOptions& opt, bool with_seed) {
    cmd->add_option("--dataset", opt.dataset, "dataset root directory")->required();
    cmd->add_option("--extractor", opt.extractor, "textrank | yake | embedding | random");
    cmd->add_option("--n-keywords", opt.n_keywords, "keywords per domain entering the weight sum");
    cmd->add_option("--embedding-file", opt.embedding_file, "embedding table for --extractor embedding");
    cmd->add_option("--centroid", opt.centroid, "embedding centroid: freq | mean");
    if (with_seed) cmd->add_option("--seed", opt.seed, "seed for --extractor random");
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"keyword-weight curriculum learning for multi-domain text classification"};
    app.require_subcommand(1);
    int rc = 0;

    auto extract_opt = std::make_shared<KeywordOptions>();
    CLI::App* extract = app.add_subcommand("extract-keywords",
                                           "extract per-domain keyword lists and weight sums");
    extract->set_config("--config");
    add_keyword_flags(extract, *extract_opt, false);
    extract->add_option("--out", extract_opt->out, "output JSON file")->required();
    extract->callback([extract_opt, &rc] { rc = cmd_extract_keywords(*extract_opt); });

    auto rank_opt = std::make_shared<KeywordOptions>();
    CLI::App* rank = app.add_subcommand("rank-domains", "rank domains by top-N keyword weight sum");
    rank->set_config("--config");
    add_keyword_flags(rank, *rank_opt, true);
    rank->add_option("--sweep-n", rank_opt->sweep_n, "comma-separated N values; --out becomes a directory")
        ->delimiter(',');
    rank->add_option("--out", rank_opt->out, "output JSON file (or directory with --sweep-n)")
        ->required();
    rank->callback([rank_opt, &rc] { rc = cmd_rank_domains(*rank_opt); });

    auto train_opt = std::make_shared<TrainOptions>();
    CLI::App* tr = app.add_subcommand("train", "run curriculum-ordered adversarial training");
    tr->set_config("--config");
    add_keyword_flags(tr, train_opt->keywords, false);
    tr->add_option("--train-fraction", train_opt->train_fraction,
                   "train share for domains without a premade test split");
    tr->add_option("--seed", train_opt->config.seed, "master seed");
    tr->add_option("--epochs", train_opt->config.epochs, "training epochs");
    tr->add_option("--max-steps", train_opt->config.max_steps, "hard step cap (0 = by epochs)");
    tr->add_option("--batch-size", train_opt->config.batch_size, "mini-batch size");
    tr->add_option("--disc-steps", train_opt->config.disc_steps,
                   "discriminator updates per domain visit");
    tr->add_option("--eval-every", train_opt->config.eval_every,
                   "evaluation cadence in steps (0 = each epoch end)");
    tr->add_flag("--exact-sum", train_opt->config.exact_sum,
                 "per-sample loss sums instead of batch means");
    tr->add_option("--lr", train_opt->config.optimizer.lr, "Adam learning rate");
    tr->add_option("--lambda", train_opt->config.arch.lambda, "adversarial weight (> 0)");
    tr->add_option("--kernel-sizes", train_opt->config.arch.kernel_sizes, "conv kernel sizes")
        ->delimiter(',');
    tr->add_option("--channels", train_opt->config.arch.channels, "conv channels per kernel size");
    tr->add_option("--embed-dim", train_opt->config.arch.embed_dim, "embedding dimension");
    tr->add_option("--hidden", train_opt->config.arch.hidden, "MLP hidden width");
    tr->add_option("--max-len", train_opt->config.arch.max_len, "document truncation length");
    tr->add_option("--min-freq", train_opt->config.vocab_min_freq, "vocabulary frequency floor");
    tr->add_option("--vocab-size", train_opt->config.vocab_max_size, "vocabulary size cap");
    tr->add_option("--out", train_opt->out, "output directory");
    tr->add_flag("--dry-run", train_opt->dry_run, "print resolved config and schedule, write nothing");
    tr->callback([train_opt, &rc] { rc = cmd_train(*train_opt); });

    auto eval_opt = std::make_shared<EvaluateOptions>();
    CLI::App* ev = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
    ev->set_config("--config");
    ev->add_option("--checkpoint", eval_opt->checkpoint, "checkpoint .bin file")->required();
    ev->add_option("--sidecar", eval_opt->sidecar, "sidecar JSON (default: checkpoint with .json)");
    ev->add_option("--dataset", eval_opt->dataset, "dataset root directory")->required();
    ev->add_option("--train-fraction", eval_opt->train_fraction,
                   "split fraction for domains without premade test sets");
    ev->add_option("--seed", eval_opt->seed, "split seed (must match the training run)");
    ev->add_option("--out", eval_opt->out, "optional JSON output file");
    ev->callback([eval_opt, &rc] { rc = cmd_evaluate(*eval_opt); });

    auto grad_opt = std::make_shared<GradcheckOptions>();
    CLI::App* gc = app.add_subcommand("gradcheck", "finite-difference check of every operation");
    gc->add_option("--trials", grad_opt->trials, "seeded trials per op");
    gc->add_option("--seed", grad_opt->seed, "master seed");
    gc->callback([grad_opt, &rc] { rc = cmd_gradcheck(*grad_opt); });

    auto report_opt = std::make_shared<ReportOptions>();
    CLI::App* rep = app.add_subcommand("report", "side-by-side accuracy table for finished runs");
    rep->add_option("runs", report_opt->runs, "run directories (or report.json files)")->required();
    rep->add_option("--out", report_opt->out, "optional JSON output file");
    rep->callback([report_opt, &rc] { rc = cmd_report(*report_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

} // namespace kwcl::cli
