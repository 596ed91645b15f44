#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clir/aligner.hpp"
#include "clir/config.hpp"
#include "clir/error.hpp"
#include "clir/eval.hpp"
#include "clir/langid.hpp"
#include "clir/miner.hpp"
#include "clir/retrieval.hpp"
#include "clir/textprep.hpp"
#include "clir/tm.hpp"
#include "clir/topics.hpp"
#include "clir/utf8.hpp"

namespace fs = std::filesystem;
using namespace clir;

namespace {

/// Config keys set from subcommand flags, applied after the config file.
std::map<std::string, std::string> g_overrides;

void config_option(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [key](const std::string& v) { g_overrides[key] = v; }, help + " [" + key + "]");
}

void config_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& value,
                 const std::string& help) {
    app->add_flag_callback(flag, [key, value] { g_overrides[key] = value; }, help + " [" + key + "=" + value + "]");
}

void require_file(const fs::path& p) {
    if (!fs::is_regular_file(p)) throw IoError("cannot read " + p.string());
}

void require_dir(const fs::path& p) {
    if (!fs::is_directory(p)) throw IoError("cannot read directory " + p.string());
}

std::string required(const RunConfig& cfg, const std::string& key, const std::string& flag) {
    const std::string& v = cfg.get(key);
    if (v.empty()) throw ConfigError(flag + " is required");
    return v;
}

std::string header_for(const std::string& command, const RunConfig& cfg) {
    return "# clir " + command + "\n" + cfg.header();
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

std::ifstream open_in(const fs::path& p) {
    require_file(p);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return in;
}

std::string slurp(const fs::path& p) {
    auto in = open_in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// `#key=value` metadata lines of a file.
std::map<std::string, std::string> file_meta(const fs::path& p) {
    std::map<std::string, std::string> meta;
    auto in = open_in(p);
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() < 2 || line[0] != '#' || line[1] == ' ') continue;
        const auto eq = line.find('=');
        if (eq != std::string::npos) meta[line.substr(1, eq - 1)] = line.substr(eq + 1);
    }
    return meta;
}

std::vector<Sentence> to_sentences(const CorpusDocument& doc, const std::string& lang) {
    std::vector<Sentence> out;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        Sentence s;
        s.text = doc.sentences[i];
        s.tokens = tokenize(s.text, lang);
        s.char_length = utf8::length(s.text);
        s.origin = {doc.id, 0, i};
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<CorpusDocument> load_corpus(const fs::path& p) {
    auto in = open_in(p);
    return read_corpus(in);
}

/// Documents from a textprep corpus file or a `docid<TAB>text` file.
std::vector<std::pair<std::string, std::string>> load_documents(const fs::path& p) {
    const std::string text = slurp(p);
    std::istringstream in(text);
    if (text.rfind("#doc ", 0) == 0 || text.find("\n#doc ") != std::string::npos) {
        std::vector<std::pair<std::string, std::string>> docs;
        for (const auto& d : read_corpus(in)) {
            std::string joined;
            for (const auto& s : d.sentences) {
                if (!joined.empty()) joined.push_back(' ');
                joined += s;
            }
            docs.emplace_back(d.id, std::move(joined));
        }
        return docs;
    }
    return read_tsv_documents(in);
}

std::vector<TopicQuery> topic_queries(const fs::path& topics_path, const LanguageResources& res) {
    require_file(topics_path);
    std::vector<TopicQuery> out;
    for (const auto& t : load_topics(topics_path)) out.push_back({t.id, make_query(res.analyze(t.query_text()))});
    return out;
}

RankedRun load_run(const fs::path& p) {
    auto in = open_in(p);
    return read_trec_run(in);
}

// ---------------------------------------------------------------- commands

struct MineArgs {
    std::string site;
    std::string report;
};

void cmd_mine(const RunConfig& cfg, const MineArgs& a) {
    require_dir(a.site);
    const std::string out_path = required(cfg, "paths.output", "--out");
    MinerConfig mc = cfg.miner_config();
    if (mc.verify_language) {
        const std::vector<std::string> langs{mc.source_language, mc.target_language};
        mc.language_models = load_language_models(langs, cfg.get("data.dir"));
    }
    const MiningResult result = mine(a.site, mc);
    std::vector<PathPair> pairs;
    for (const auto& c : result.accepted) pairs.emplace_back(c.source_profile.path, c.target_profile.path);
    auto out = open_out(out_path);
    out << header_for("mine", cfg);
    write_pairs(out, pairs);
    if (!a.report.empty()) {
        auto rep = open_out(a.report);
        rep << header_for("mine", cfg);
        result.report.write(rep);
    } else {
        result.report.write(std::cout);
    }
}

struct ExtractArgs {
    std::string site;
    std::string pairs;
    std::string out_source;
    std::string out_target;
};

void cmd_extract(const RunConfig& cfg, const ExtractArgs& a) {
    require_dir(a.site);
    auto in = open_in(a.pairs);
    const auto pairs = read_pairs(in);
    const fs::path data_dir = cfg.get("data.dir");
    const auto src_res = load_language_resources(cfg.get("lang.source"), data_dir);
    const auto tgt_res = load_language_resources(cfg.get("lang.target"), data_dir);
    std::vector<CorpusDocument> src_docs;
    std::vector<CorpusDocument> tgt_docs;
    for (const auto& [sp, tp] : pairs) {
        auto side = [&](const std::string& rel, const LanguageResources& res) {
            CorpusDocument d{sp, {}};
            const auto paragraphs = extract_text(slurp(fs::path(a.site) / rel));
            for (const auto& s : segment_document(sp, paragraphs, res.abbreviations)) d.sentences.push_back(s.text);
            return d;
        };
        src_docs.push_back(side(sp, src_res));
        tgt_docs.push_back(side(tp, tgt_res));
    }
    auto so = open_out(a.out_source);
    so << header_for("extract", cfg);
    write_corpus(so, src_docs);
    auto to = open_out(a.out_target);
    to << header_for("extract", cfg);
    write_corpus(to, tgt_docs);
}

struct AlignArgs {
    std::string source_corpus;
    std::string target_corpus;
    std::string dump;
};

void cmd_align(const RunConfig& cfg, const AlignArgs& a) {
    const auto src_docs = load_corpus(a.source_corpus);
    const auto tgt_docs = load_corpus(a.target_corpus);
    const std::string out_path = required(cfg, "paths.output", "--out");
    const AlignParams params = cfg.align_params();
    const std::string src_lang = cfg.get("lang.source");
    const std::string tgt_lang = cfg.get("lang.target");

    std::map<std::string, const CorpusDocument*> by_id;
    for (const auto& d : tgt_docs) by_id[d.id] = &d;
    std::vector<std::pair<std::vector<Sentence>, std::vector<Sentence>>> docs;
    std::vector<std::string> ids;
    std::vector<Sentence> all_a;
    std::vector<Sentence> all_b;
    for (const auto& d : src_docs) {
        const auto it = by_id.find(d.id);
        if (it == by_id.end()) {
            std::cerr << "clir align: no target document for " << d.id << ", skipped\n";
            continue;
        }
        docs.emplace_back(to_sentences(d, src_lang), to_sentences(*it->second, tgt_lang));
        ids.push_back(d.id);
        all_a.insert(all_a.end(), docs.back().first.begin(), docs.back().first.end());
        all_b.insert(all_b.end(), docs.back().second.begin(), docs.back().second.end());
    }
    const double ratio = corpus_length_ratio(all_a, all_b);

    auto out = open_out(out_path);
    out << header_for("align", cfg) << "#source_lang=" << src_lang << "\n#target_lang=" << tgt_lang << '\n';
    std::optional<std::ofstream> dump;
    if (!a.dump.empty()) {
        dump = open_out(a.dump);
        *dump << header_for("align", cfg);
    }
    std::size_t one_one = 0;
    std::size_t couples_total = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& [sa, sb] = docs[i];
        const auto couples = align(sa, sb, params, ratio);
        const auto pairs = extract_training_pairs(couples, sa, sb);
        write_training_pairs(out, pairs);
        if (dump) write_alignment(*dump, ids[i], couples, sa, sb);
        one_one += pairs.size();
        couples_total += couples.size();
    }
    std::cout << "documents=" << docs.size() << "\ncouples=" << couples_total << "\none_to_one=" << one_one
              << "\nlength_ratio=" << ratio << '\n';
}

struct TrainArgs {
    std::string pairs;
    std::string direction;
    std::string counts;
};

void cmd_train(const RunConfig& cfg, const TrainArgs& a) {
    const auto meta = file_meta(a.pairs);
    std::string src = cfg.get("lang.source");
    std::string tgt = cfg.get("lang.target");
    if (!a.direction.empty()) std::tie(src, tgt) = parse_direction(a.direction);
    const std::string out_path = required(cfg, "paths.output", "--out");

    bool swap = false;
    if (meta.contains("source_lang") && meta.contains("target_lang")) {
        if (meta.at("source_lang") == tgt && meta.at("target_lang") == src) swap = true;
        else if (meta.at("source_lang") != src || meta.at("target_lang") != tgt)
            throw ConfigError("pairs file is " + meta.at("source_lang") + "-" + meta.at("target_lang") +
                              ", requested direction is " + src + "-" + tgt);
    }
    auto in = open_in(a.pairs);
    const auto text_pairs = read_text_pairs(in);
    const fs::path data_dir = cfg.get("data.dir");
    const auto src_res = load_language_resources(src, data_dir);
    const auto tgt_res = load_language_resources(tgt, data_dir);
    std::vector<SentencePair> pairs;
    for (const auto& [x, y] : text_pairs) {
        const std::string& s = swap ? y : x;
        const std::string& t = swap ? x : y;
        pairs.push_back({src_res.analyze(s).terms, tgt_res.analyze(t).terms});
    }
    const TrainResult r = train(pairs, src, tgt, cfg.train_config());
    const std::string header = header_for("train", cfg);
    save_model(out_path, r.model, header);
    auto counts = open_out(a.counts.empty() ? out_path + ".counts" : a.counts);
    write_expected_counts(counts, r.expected_counts, header);
    auto trace = open_out(out_path + ".trace");
    trace << header;
    for (std::size_t i = 0; i < r.log_likelihood_trace.size(); ++i) {
        char line[96];
        std::snprintf(line, sizeof line, "iteration=%zu log_likelihood=%.6f\n", i, r.log_likelihood_trace[i]);
        trace << line;
        std::cout << line;
    }
    std::cout << "pairs_used=" << r.pairs_used << "\nentries=" << r.model.entry_count() << '\n';
}

struct PruneArgs {
    std::string model;
    std::string method = "threshold";
    std::string counts;
};

void cmd_prune(const RunConfig& cfg, const PruneArgs& a) {
    require_file(a.model);
    const std::string out_path = required(cfg, "paths.output", "--out");
    const TranslationModel model = load_model(a.model);
    TranslationModel pruned;
    if (a.method == "threshold") {
        pruned = prune_threshold(model, cfg.get_double("prune.theta"));
    } else if (a.method == "topn") {
        auto in = open_in(a.counts.empty() ? a.model + ".counts" : a.counts);
        pruned = prune_topn(model, cfg.get_size("prune.top_n"), read_expected_counts(in));
    } else if (a.method == "noise") {
        pruned = prune_noise(model, cfg.get_double("prune.marginal_floor"), cfg.get_bool("prune.digit_rule"));
    } else {
        throw ConfigError("--method must be threshold, topn or noise");
    }
    save_model(out_path, pruned, header_for("prune", cfg));
    std::cout << "entries_before=" << model.entry_count() << "\nentries_after=" << pruned.entry_count()
              << "\nsources_after=" << pruned.table.size() << '\n';
}

struct IndexArgs {
    std::string lang;
};

void cmd_index(const RunConfig& cfg, const IndexArgs& a) {
    const std::string docs_path = required(cfg, "paths.corpus", "--docs");
    const std::string out_path = required(cfg, "paths.output", "--out");
    const std::string lang = a.lang.empty() ? cfg.get("lang.target") : a.lang;
    const auto res = load_language_resources(lang, cfg.get("data.dir"));
    std::vector<IndexDocument> docs;
    for (const auto& [id, text] : load_documents(docs_path)) docs.push_back({id, res.analyze(text)});
    const Index index = build_index(docs);
    auto out = open_out(out_path);
    write_index(out, index, header_for("index", cfg));
    std::cout << "documents=" << index.size() << "\ntokens=" << index.total_tokens
              << "\nterms=" << index.postings.size() << '\n';
}

struct SearchArgs {
    std::string method = "mono";
    std::string tm_reverse;
    std::string tag;
    std::string query_lang;
    std::vector<std::string> combine;
    double alpha = 0.5;
};

void cmd_search(const RunConfig& cfg, const SearchArgs& a) {
    const std::string out_path = required(cfg, "paths.output", "--out");
    const RetrievalParams params = cfg.retrieval_params();
    const std::string header = header_for("search", cfg);

    if (!a.combine.empty()) {
        if (a.combine.size() != 2) throw ConfigError("--combine takes two run files");
        const RankedRun ra = load_run(a.combine[0]);
        const RankedRun rb = load_run(a.combine[1]);
        const RankedRun run = combine(ra, rb, a.alpha, params.top_k, 1e-6, a.tag);
        auto out = open_out(out_path);
        write_trec_run(out, run, header);
        return;
    }

    const Method method = parse_method(a.method);
    const std::string index_path = required(cfg, "paths.index", "--index");
    const std::string topics_path = required(cfg, "paths.topics", "--topics");
    require_file(index_path);
    require_file(topics_path);

    std::optional<TranslationModel> forward;
    std::optional<TranslationModel> reverse;
    const std::string& tm_path = cfg.get("paths.model");
    if (!tm_path.empty()) {
        require_file(tm_path);
        forward = load_model(tm_path);
    }
    if (!a.tm_reverse.empty()) {
        require_file(a.tm_reverse);
        reverse = load_model(a.tm_reverse);
    }

    auto idx_in = open_in(index_path);
    const Index index = read_index(idx_in);

    std::string qlang = a.query_lang;
    if (qlang.empty()) {
        if (method == Method::mono || method == Method::external) qlang = index.language;
        else if (method == Method::dt && reverse) qlang = reverse->target_language;
        else if (forward) qlang = forward->source_language;
        else qlang = cfg.get("lang.source");
    }
    const auto res = load_language_resources(qlang, cfg.get("data.dir"));
    const auto queries = topic_queries(topics_path, res);
    const RankedRun run = run_method(method, queries, index, forward ? &*forward : nullptr,
                                     reverse ? &*reverse : nullptr, params, a.tag.empty() ? a.method : a.tag);
    auto out = open_out(out_path);
    write_trec_run(out, run, header);

    std::size_t empty = 0;
    std::size_t skipped = 0;
    for (const auto& [t, r] : run.topics) {
        empty += r.empty_query ? 1 : 0;
        skipped += r.skipped_terms;
    }
    std::cout << "topics=" << run.topics.size() << "\nempty_queries=" << empty << "\nskipped_terms=" << skipped
              << '\n';
}

struct EvaluateArgs {
    std::string run;
    std::vector<std::string> runs;
    bool significance = false;
};

void cmd_evaluate(const RunConfig& cfg, const EvaluateArgs& a) {
    const std::string qrels_path = required(cfg, "paths.qrels", "--qrels");
    std::vector<std::string> files;
    if (!a.run.empty()) files.push_back(a.run);
    files.insert(files.end(), a.runs.begin(), a.runs.end());
    if (files.empty()) throw ConfigError("--run is required");
    for (const auto& f : files) require_file(f);
    require_file(qrels_path);
    const Qrels qrels = load_qrels(qrels_path);
    const std::size_t cutoff = cfg.get_size("eval.cutoff");
    const std::string& sel = cfg.get("eval.topics");
    if (sel != "run" && sel != "complete") throw ConfigError("eval.topics must be run or complete");
    const TopicSelection selection = sel == "run" ? TopicSelection::run_topics : TopicSelection::complete;

    std::vector<RunEvaluation> evals;
    std::set<std::string> names;
    for (const auto& f : files) {
        std::string name = fs::path(f).stem().string();
        for (int k = 2; names.contains(name); ++k) name = fs::path(f).stem().string() + "_" + std::to_string(k);
        names.insert(name);
        evals.push_back({name, mean_ap(load_run(f), qrels, cutoff, selection)});
    }
    std::optional<Significance> sig;
    if (a.significance) {
        if (evals.size() < 2) throw ConfigError("--significance needs at least two runs");
        sig = significance(evals, cfg.get_double("eval.alpha"));
    }
    const std::string& out_path = cfg.get("paths.output");
    if (out_path.empty()) {
        write_report(std::cout, evals, sig, header_for("evaluate", cfg));
    } else {
        auto out = open_out(out_path);
        write_report(out, evals, sig, header_for("evaluate", cfg));
    }
}

struct StatsArgs {
    std::string lang;
};

void cmd_stats(const RunConfig& cfg, const StatsArgs& a) {
    const std::string topics_path = required(cfg, "paths.topics", "--topics");
    const std::string tm_path = required(cfg, "paths.model", "--tm");
    require_file(topics_path);
    require_file(tm_path);
    const TranslationModel model = load_model(tm_path);
    const std::string lang = a.lang.empty() ? model.source_language : a.lang;
    const auto res = load_language_resources(lang, cfg.get("data.dir"));
    std::vector<QueryModel> queries;
    for (const auto& q : topic_queries(topics_path, res)) queries.push_back(q.query);
    const TranslationStats stats = translation_stats(queries, model);
    const std::string& out_path = cfg.get("paths.output");
    if (out_path.empty()) {
        write_translation_stats(std::cout, stats, header_for("stats", cfg));
    } else {
        auto out = open_out(out_path);
        write_translation_stats(out, stats, header_for("stats", cfg));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-language retrieval toolkit: mining, alignment, translation models, ranking, evaluation"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "key=value configuration file (default: $CLIR_CONFIG)");
    app.add_option("--set", sets, "override one configuration entry, key=value");

    auto* mine_cmd = app.add_subcommand("mine", "find parallel page pairs in a mirrored site");
    MineArgs mine_args;
    mine_cmd->add_option("--site", mine_args.site, "site root directory")->required();
    mine_cmd->add_option("--report", mine_args.report, "mining report file (default: stdout)");
    config_option(mine_cmd, "--out", "paths.output", "pairs TSV to write");
    config_option(mine_cmd, "--source", "lang.source", "source language");
    config_option(mine_cmd, "--target", "lang.target", "target language");
    config_flag(mine_cmd, "--gate", "miner.candidate_gate", "1", "require a language-switch anchor");
    config_flag(mine_cmd, "--no-language-check", "miner.verify_language", "0", "skip language identification");

    auto* extract_cmd = app.add_subcommand("extract", "extract and segment the text of mined page pairs");
    ExtractArgs extract_args;
    extract_cmd->add_option("--site", extract_args.site, "site root directory")->required();
    extract_cmd->add_option("--pairs", extract_args.pairs, "pairs TSV from mine")->required();
    extract_cmd->add_option("--out-source", extract_args.out_source, "source corpus to write")->required();
    extract_cmd->add_option("--out-target", extract_args.out_target, "target corpus to write")->required();
    config_option(extract_cmd, "--source", "lang.source", "source language");
    config_option(extract_cmd, "--target", "lang.target", "target language");

    auto* align_cmd = app.add_subcommand("align", "sentence-align two extracted corpora");
    AlignArgs align_args;
    align_cmd->add_option("--source-corpus", align_args.source_corpus, "source corpus")->required();
    align_cmd->add_option("--target-corpus", align_args.target_corpus, "target corpus")->required();
    align_cmd->add_option("--dump", align_args.dump, "full alignment dump to write");
    config_option(align_cmd, "--out", "paths.output", "1-1 training pairs to write");
    config_option(align_cmd, "--source", "lang.source", "source language");
    config_option(align_cmd, "--target", "lang.target", "target language");

    auto* train_cmd = app.add_subcommand("train", "train an IBM Model 1 translation table");
    TrainArgs train_args;
    train_cmd->add_option("--pairs", train_args.pairs, "sentence pairs TSV")->required();
    train_cmd->add_option("--direction", train_args.direction, "source-target, e.g. en-fr");
    train_cmd->add_option("--counts", train_args.counts, "expected counts file (default: <out>.counts)");
    config_option(train_cmd, "--out", "paths.output", "model TSV to write");
    config_option(train_cmd, "--iterations", "train.iterations", "EM iterations");
    config_option(train_cmd, "--threads", "train.threads", "E-step threads");
    config_flag(train_cmd, "--null", "train.null_token", "1", "add a NULL source token");

    auto* prune_cmd = app.add_subcommand("prune", "prune a translation table");
    PruneArgs prune_args;
    prune_cmd->add_option("--model", prune_args.model, "model TSV")->required();
    prune_cmd->add_option("--method", prune_args.method, "threshold | topn | noise");
    prune_cmd->add_option("--counts", prune_args.counts, "expected counts (default: <model>.counts)");
    config_option(prune_cmd, "--out", "paths.output", "pruned model to write");
    config_option(prune_cmd, "--theta", "prune.theta", "probability threshold");
    config_option(prune_cmd, "--top-n", "prune.top_n", "entries kept by topn");
    config_option(prune_cmd, "--marginal-floor", "prune.marginal_floor", "minimum source marginal");
    config_flag(prune_cmd, "--no-digit-rule", "prune.digit_rule", "0", "keep terms containing digits");

    auto* index_cmd = app.add_subcommand("index", "index a document collection");
    IndexArgs index_args;
    index_cmd->add_option("--lang", index_args.lang, "document language (default: lang.target)");
    config_option(index_cmd, "--docs", "paths.corpus", "documents: textprep corpus or docid<TAB>text");
    config_option(index_cmd, "--out", "paths.output", "index file to write");

    auto* search_cmd = app.add_subcommand("search", "rank documents for a topic set");
    SearchArgs search_args;
    search_cmd->add_option("--method", search_args.method, "mono|qt|dt|syn|qt-bm|qt-eq|naive|external");
    search_cmd->add_option("--tm-reverse", search_args.tm_reverse, "reverse model P(s|t), for dt");
    search_cmd->add_option("--tag", search_args.tag, "run tag (default: method name)");
    search_cmd->add_option("--query-lang", search_args.query_lang, "language of the topics");
    search_cmd->add_option("--combine", search_args.combine, "interpolate two run files")->expected(2);
    search_cmd->add_option("--alpha", search_args.alpha, "weight of the first run in --combine");
    config_option(search_cmd, "--tm", "paths.model", "forward model P(t|s)");
    config_option(search_cmd, "--topics", "paths.topics", "topic file");
    config_option(search_cmd, "--index", "paths.index", "index file");
    config_option(search_cmd, "--out", "paths.output", "TREC run to write");
    config_option(search_cmd, "--lambda", "retrieval.lambda", "smoothing weight");
    config_option(search_cmd, "--top-k", "retrieval.top_k", "documents per topic");

    auto* eval_cmd = app.add_subcommand("evaluate", "score runs against relevance judgments");
    EvaluateArgs eval_args;
    eval_cmd->add_option("--run", eval_args.run, "run file");
    eval_cmd->add_option("--runs", eval_args.runs, "further run files");
    eval_cmd->add_flag("--significance", eval_args.significance, "Friedman test and LSD classes");
    config_option(eval_cmd, "--qrels", "paths.qrels", "qrels file");
    config_option(eval_cmd, "--alpha", "eval.alpha", "significance level");
    config_option(eval_cmd, "--out", "paths.output", "report file (default: stdout)");

    auto* stats_cmd = app.add_subcommand("stats", "translation coverage of the topic terms");
    StatsArgs stats_args;
    stats_cmd->add_option("--lang", stats_args.lang, "topic language (default: model source)");
    config_option(stats_cmd, "--topics", "paths.topics", "topic file");
    config_option(stats_cmd, "--tm", "paths.model", "translation model");
    config_option(stats_cmd, "--out", "paths.output", "stats file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "clir: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    try {
        RunConfig cfg = RunConfig::defaults();
        if (!config_path.empty()) {
            if (!fs::is_regular_file(config_path)) throw IoError("cannot read config " + config_path);
            cfg.load(config_path);
        } else if (const auto env = config_path_from_env()) {
            cfg.load(*env);
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            cfg.set(s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [k, v] : g_overrides) cfg.set(k, v);

        if (mine_cmd->parsed()) cmd_mine(cfg, mine_args);
        else if (extract_cmd->parsed()) cmd_extract(cfg, extract_args);
        else if (align_cmd->parsed()) cmd_align(cfg, align_args);
        else if (train_cmd->parsed()) cmd_train(cfg, train_args);
        else if (prune_cmd->parsed()) cmd_prune(cfg, prune_args);
        else if (index_cmd->parsed()) cmd_index(cfg, index_args);
        else if (search_cmd->parsed()) cmd_search(cfg, search_args);
        else if (eval_cmd->parsed()) cmd_evaluate(cfg, eval_args);
        else if (stats_cmd->parsed()) cmd_stats(cfg, stats_args);
    } catch (const ConfigError& e) {
        std::cerr << "clir: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "clir: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
