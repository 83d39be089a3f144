#include "cli.hpp"

#include "safeindex/error.hpp"
#include "safeindex/eval.hpp"
#include "safeindex/features.hpp"
#include "safeindex/forest.hpp"
#include "safeindex/io.hpp"
#include "safeindex/lexicon.hpp"
#include "safeindex/model.hpp"
#include "safeindex/page.hpp"
#include "safeindex/pipeline.hpp"
#include "safeindex/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace safeindex::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string lexicons = "data/lexicons/manifest.txt";
    std::string suffix_file;
    std::string corpus;
    std::string model;
    std::string blacklist;
    std::string blacklist_out;
    std::string index_out;
    std::string report_out;
    std::string features_out;
    std::string json_out;
    std::string out_dir;
    TrainConfig train;
    double vote_threshold = 0.5;
    std::size_t min_votes = 0;
    std::size_t trigger = 3;
    bool full_pipeline = false;
    int tree = -1;
    synth::CorpusSpec corpus_spec;
    std::uint64_t lexicon_seed = 2016;
};

SuffixTable load_suffixes(const RunConfig& cfg) {
    SuffixTable table;
    if (!cfg.suffix_file.empty()) table.extend_from(read_file(cfg.suffix_file));
    return table;
}

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string(what) + " path not given");
    if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

void apply_vote_overrides(const RunConfig& cfg, Forest& forest, const CLI::App& sub) {
    if (sub.count("--vote-threshold") > 0) {
        if (!(cfg.vote_threshold > 0.0 && cfg.vote_threshold <= 1.0)) throw ConfigError("vote threshold must be in (0, 1]");
        forest.vote_threshold = cfg.vote_threshold;
        forest.min_adult_votes.reset();
    }
    if (sub.count("--min-votes") > 0) {
        if (cfg.min_votes < 1) throw ConfigError("--min-votes must be >= 1");
        forest.min_adult_votes = cfg.min_votes;
    }
}

struct LoadedCorpus {
    std::vector<Page> pages;
    std::vector<LoadFailure> failures;
};

LoadedCorpus load_labeled(const RunConfig& cfg, const SuffixTable& suffixes) {
    require_file(cfg.corpus, "corpus manifest");
    LoadedCorpus lc;
    for (auto& rec : load_corpus(read_corpus_manifest(cfg.corpus), suffixes)) {
        if (auto* p = std::get_if<Page>(&rec)) lc.pages.push_back(std::move(*p));
        else lc.failures.push_back(std::get<LoadFailure>(rec));
    }
    return lc;
}

std::string percent(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << v * 100.0 << '%';
    return out.str();
}

int cmd_train(const RunConfig& cfg, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    require_file(cfg.lexicons, "lexicon manifest");
    if (cfg.model.empty()) throw ConfigError("--model output path not given");
    const auto lexicons = load_lexicon_manifest(cfg.lexicons);
    const FeatureExtractor extract(lexicons);
    const auto corpus = load_labeled(cfg, load_suffixes(cfg));
    for (const auto& f : corpus.failures) err << "skipped " << f.url << ": " << f.reason << '\n';

    std::vector<FeatureVector> features;
    std::vector<Label> labels;
    std::string dump = feature_csv_header() + "\n";
    for (const auto& page : corpus.pages) {
        if (!page.label) continue;
        features.push_back(extract(page));
        labels.push_back(*page.label);
        dump += feature_csv_row(page, features.back()) + "\n";
    }
    if (!cfg.features_out.empty()) write_file(cfg.features_out, dump);

    auto [forest, report] = train_forest(features, labels, cfg.train);
    apply_vote_overrides(cfg, forest, sub);
    const auto text = serialize_forest(forest);
    write_file(cfg.model, text);

    const auto n_adult = std::count(labels.begin(), labels.end(), Label::adult);
    out << "trained on " << labels.size() << " pages (" << n_adult << " adult)\n\n";
    out << "tree id  size   error\n";
    for (std::size_t t = 0; t < report.trees.size(); ++t) {
        out << std::setw(7) << t << std::setw(6) << report.trees[t].size << std::setw(8)
            << percent(report.trees[t].training_error) << '\n';
    }
    out << "global error: " << percent(report.global_training_error) << "\n";
    out << "model: " << cfg.model << " (fnv1a " << fnv1a_hex(text) << ")\n";
    return kExitOk;
}

int cmd_filter(const RunConfig& cfg, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    require_file(cfg.lexicons, "lexicon manifest");
    require_file(cfg.model, "model");
    const auto lexicons = load_lexicon_manifest(cfg.lexicons);
    auto forest = load_forest(cfg.model);
    apply_vote_overrides(cfg, forest, sub);
    const auto suffixes = load_suffixes(cfg);

    require_file(cfg.corpus, "corpus manifest");
    const auto records = load_corpus(read_corpus_manifest(cfg.corpus), suffixes);

    FilterState state(cfg.trigger);
    if (!cfg.blacklist.empty() && fs::exists(cfg.blacklist)) state = load_blacklist(cfg.blacklist, cfg.trigger);
    const auto seeded = state.blacklist().size();

    const Filter filter(forest, lexicons);
    const auto result = build_safe_index(records, filter, state);
    for (const auto& rec : records) {
        if (const auto* f = std::get_if<LoadFailure>(&rec)) err << "skipped " << f->url << ": " << f->reason << '\n';
    }

    std::string index;
    for (const auto& u : result.index) index += u + "\n";
    if (!cfg.index_out.empty()) write_file(cfg.index_out, index);
    const auto blacklist_out = cfg.blacklist_out.empty() ? cfg.blacklist : cfg.blacklist_out;
    if (!blacklist_out.empty()) save_blacklist(state, blacklist_out);
    const auto report = result.report.to_json();
    if (!cfg.report_out.empty()) write_file(cfg.report_out, report);

    out << report;
    out << "safe pages: " << result.index.size() << ", blacklist: " << seeded << " -> " << state.blacklist().size()
        << " domains\n";
    return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    require_file(cfg.lexicons, "lexicon manifest");
    require_file(cfg.model, "model");
    const auto lexicons = load_lexicon_manifest(cfg.lexicons);
    auto forest = load_forest(cfg.model);
    apply_vote_overrides(cfg, forest, sub);
    const auto corpus = load_labeled(cfg, load_suffixes(cfg));
    for (const auto& f : corpus.failures) err << "skipped " << f.url << ": " << f.reason << '\n';

    std::vector<const Page*> labeled;
    for (const auto& p : corpus.pages) {
        if (p.label) labeled.push_back(&p);
    }
    if (labeled.empty()) throw DataError("no labeled pages");

    const FeatureExtractor extract(lexicons);
    std::vector<FeatureVector> vectors;
    std::vector<ScoredPair> run;
    if (cfg.full_pipeline) {
        FilterState state(cfg.trigger);
        if (!cfg.blacklist.empty() && fs::exists(cfg.blacklist)) state = load_blacklist(cfg.blacklist, cfg.trigger);
        const Filter filter(forest, lexicons);
        StageReport report;
        for (const auto* p : labeled) {
            const auto v = filter.filter_page(*p, state);
            report.count(v);
            run.push_back({p->label, v.label});
            vectors.push_back(extract(*p));
        }
        out << "stage report:\n" << report.to_json() << '\n';
    } else {
        for (const auto* p : labeled) {
            vectors.push_back(extract(*p));
            run.push_back({p->label, classify(forest, vectors.back())});
        }
    }

    const auto cm = score_run(run);
    const auto m = metrics(cm);
    out << format_confusion(cm) << '\n';
    auto line = [&](const char* name, const std::optional<double>& v) {
        out << std::left << std::setw(11) << name << std::right;
        if (v) out << std::fixed << std::setprecision(2) << *v * 100.0 << "%\n";
        else out << "n/a\n";
    };
    line("miss rate", m.miss_rate);
    line("accuracy", m.accuracy);
    line("recall", m.recall);
    line("precision", m.precision);
    out << "\nattribute usage:\n" << format_attribute_usage(attribute_usage(forest, vectors));
    if (!cfg.json_out.empty()) write_file(cfg.json_out, metrics_json(cm));
    return kExitOk;
}

int cmd_inspect(const RunConfig& cfg, std::ostream& out) {
    require_file(cfg.model, "model");
    const auto forest = load_forest(cfg.model);
    out << "trees: " << forest.trees.size() << ", rule: ";
    if (forest.min_adult_votes) out << "adult if >= " << *forest.min_adult_votes << " adult votes\n";
    else out << "adult if adult-vote share > " << forest.vote_threshold << '\n';
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        if (cfg.tree >= 0 && static_cast<std::size_t>(cfg.tree) != t) continue;
        const auto& tree = forest.trees[t];
        out << "\ntree " << t << " (size " << tree.size() << ", depth " << tree.depth() << ")\n";
        out << render_tree(tree);
    }
    if (cfg.tree >= 0 && static_cast<std::size_t>(cfg.tree) >= forest.trees.size()) {
        throw ConfigError("no tree " + std::to_string(cfg.tree));
    }
    return kExitOk;
}

int cmd_synth_lexicons(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out_dir.empty()) throw ConfigError("--out directory not given");
    const auto lexicons = synth::generate_lexicons(cfg.lexicon_seed);
    synth::write_lexicons(lexicons, cfg.out_dir);
    for (const auto& lex : lexicons) out << std::setw(16) << lex.name() << ' ' << lex.term_count() << '\n';
    return kExitOk;
}

int cmd_synth_corpus(const RunConfig& cfg, std::ostream& out) {
    require_file(cfg.lexicons, "lexicon manifest");
    if (cfg.out_dir.empty()) throw ConfigError("--out directory not given");
    if (cfg.corpus_spec.adult > cfg.corpus_spec.pages) throw ConfigError("--adult exceeds --pages");
    const auto lexicons = load_lexicon_manifest(cfg.lexicons);
    const auto pages = synth::generate_corpus(lexicons, cfg.corpus_spec);
    synth::write_corpus(pages, cfg.out_dir);
    out << "wrote " << pages.size() << " pages (" << cfg.corpus_spec.adult << " adult) to " << cfg.out_dir << '\n';
    return kExitOk;
}

void add_vote_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--vote-threshold", cfg.vote_threshold, "Adult iff adult-vote share is strictly above this");
    sub->add_option("--min-votes", cfg.min_votes, "Adult iff at least this many trees vote adult");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Text-only adult content filter for building a safe search index", "safeindex"};
    app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
    app.require_subcommand(1);
    app.add_option("--lexicons", cfg.lexicons, "Lexicon manifest")->capture_default_str();
    app.add_option("--suffix-file", cfg.suffix_file, "Extra two-level public suffixes, one per line");

    auto* train = app.add_subcommand("train", "Train a forest on a labeled corpus");
    train->add_option("--corpus", cfg.corpus, "Corpus manifest (path,url,label)")->required();
    train->add_option("--model", cfg.model, "Model output path")->required();
    train->add_option("--trees", cfg.train.n_trees, "Number of boosted trees")->capture_default_str();
    train->add_option("--fn-cost", cfg.train.fn_cost, "Cost of a false negative relative to a false positive")
        ->capture_default_str();
    train->add_option("--min-leaf-weight", cfg.train.min_leaf_weight, "Minimum weight on each side of a split")
        ->capture_default_str();
    train->add_option("--max-depth", cfg.train.max_depth, "Maximum tree depth")->capture_default_str();
    train->add_option("--seed", cfg.train.rng_seed, "Boosting RNG seed")->capture_default_str();
    train->add_option("--features-out", cfg.features_out, "Write the feature dump CSV here");
    add_vote_options(train, cfg);

    auto* filter = app.add_subcommand("filter", "Run the staged filter and write the safe index");
    filter->add_option("--corpus", cfg.corpus, "Corpus manifest")->required();
    filter->add_option("--model", cfg.model, "Model file")->required();
    filter->add_option("--blacklist", cfg.blacklist, "Blacklist file (read if present, updated in place)");
    filter->add_option("--blacklist-out", cfg.blacklist_out, "Write the updated blacklist here instead");
    filter->add_option("--index-out", cfg.index_out, "Safe-index output (one URL per line)");
    filter->add_option("--report-out", cfg.report_out, "Stage report JSON output");
    filter->add_option("--trigger", cfg.trigger, "Adult pages per domain before blacklisting")->capture_default_str();
    add_vote_options(filter, cfg);

    auto* eval = app.add_subcommand("eval", "Score a labeled held-out corpus");
    eval->add_option("--corpus", cfg.corpus, "Corpus manifest")->required();
    eval->add_option("--model", cfg.model, "Model file")->required();
    eval->add_flag("--full-pipeline", cfg.full_pipeline, "Also run blacklist, disclaimer and TLD stages");
    eval->add_option("--blacklist", cfg.blacklist, "Initial blacklist for --full-pipeline");
    eval->add_option("--trigger", cfg.trigger, "Blacklist trigger for --full-pipeline")->capture_default_str();
    eval->add_option("--json-out", cfg.json_out, "Metrics report JSON output");
    add_vote_options(eval, cfg);

    auto* inspect = app.add_subcommand("inspect-model", "Print the trees of a model");
    inspect->add_option("--model", cfg.model, "Model file")->required();
    inspect->add_option("--tree", cfg.tree, "Only this tree");

    auto* synth_lex = app.add_subcommand("synth-lexicons", "Generate stand-in lexicons at reference sizes");
    synth_lex->add_option("--out", cfg.out_dir, "Output directory")->required();
    synth_lex->add_option("--seed", cfg.lexicon_seed, "Generator seed")->capture_default_str();

    auto* synth_corpus = app.add_subcommand("synth-corpus", "Generate a labeled synthetic corpus");
    synth_corpus->add_option("--out", cfg.out_dir, "Output directory")->required();
    synth_corpus->add_option("--pages", cfg.corpus_spec.pages, "Number of pages")->capture_default_str();
    synth_corpus->add_option("--adult", cfg.corpus_spec.adult, "Number of adult pages")->capture_default_str();
    synth_corpus->add_option("--noise", cfg.corpus_spec.noise, "Share of generic adult terms in safe pages")
        ->capture_default_str();
    synth_corpus->add_option("--seed", cfg.corpus_spec.seed, "Generator seed")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitDataError;
    }

    try {
        if (*train) return cmd_train(cfg, *train, out, err);
        if (*filter) return cmd_filter(cfg, *filter, out, err);
        if (*eval) return cmd_eval(cfg, *eval, out, err);
        if (*inspect) return cmd_inspect(cfg, out);
        if (*synth_lex) return cmd_synth_lexicons(cfg, out);
        if (*synth_corpus) return cmd_synth_corpus(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

} // namespace safeindex::cli
