#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "tpgn/captcha.hpp"
#include "tpgn/checkpoint.hpp"
#include "tpgn/clustering.hpp"
#include "tpgn/corpus.hpp"
#include "tpgn/errors.hpp"
#include "tpgn/http_api.hpp"
#include "tpgn/metrics.hpp"
#include "tpgn/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tpgn::cli {
namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- config file -----------------------------------------------------------

std::string config_value_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

// Keys either sit at the top level or under an object named after the
// subcommand; the latter wins. Values only fill options absent from argv.
void apply_config_file(CLI::App& sub, const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& ex) {
        throw UsageError("config file " + path.string() + ": " + ex.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    std::map<std::string, json> values;
    for (const auto& [k, v] : doc.items())
        if (!v.is_object()) values[k] = v;
    if (doc.contains(sub.get_name()) && doc[sub.get_name()].is_object())
        for (const auto& [k, v] : doc[sub.get_name()].items()) values[k] = v;

    for (const auto& [key, value] : values) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        CLI::Option* opt = sub.get_option_no_throw("--" + name);
        if (opt == nullptr) {
            // keys meant for other subcommands are ignored at the top level only
            if (doc.contains(sub.get_name()) && doc[sub.get_name()].contains(key))
                throw UsageError("config key '" + key + "' is not an option of " + sub.get_name());
            continue;
        }
        if (opt->count() > 0 || name == "config") continue;
        if (value.is_array())
            for (const auto& item : value) opt->add_result(config_value_string(item));
        else
            opt->add_result(config_value_string(value));
        opt->run_callback();
    }
}

json config_snapshot(const CLI::App& sub) {
    json out = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config") continue;
        const auto& results = opt->results();
        if (results.empty())
            out[name] = opt->get_default_str();
        else if (results.size() == 1)
            out[name] = results.front();
        else
            out[name] = results;
    }
    return out;
}

// ---- shared helpers ----------------------------------------------------------

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) throw UsageError(what + " not found: " + p.string());
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

fs::path parent_or_dot(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

CorpusSplit load_corpus(const fs::path& p) {
    require_file(p, "corpus file");
    return load_split(p);
}

Checkpoint load_ckpt(const fs::path& p) {
    require_file(p, "checkpoint");
    return load_checkpoint(p);
}

std::vector<std::vector<WordId>> caption_sentences(const CorpusSplit& split, const Vocabulary& vocab) {
    std::vector<std::vector<WordId>> out;
    for (const auto& e : split.entries)
        for (const auto& c : e.captions) out.push_back(vocab.encode(c));
    return out;
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

volatile std::sig_atomic_t g_stop = 0;

// ---- subcommands ---------------------------------------------------------------

struct Common {
    std::string config;
    std::uint64_t seed = 0;
};

struct GenCorpusArgs {
    std::string out_dir;
    std::vector<std::string> splits{"train", "val", "test"};
    std::size_t feature_dim = 96;
};

RunManifest run_gen_corpus(const GenCorpusArgs& a, const Common& c) {
    RunManifest m{"gen-corpus", {}, c.seed, {}, {}};
    for (const auto& name : a.splits) {
        const auto split = generate_split(name, split_range(name), c.seed, a.feature_dim);
        const fs::path out = fs::path(a.out_dir) / (name + ".json");
        ensure_parent(out);
        save_split(split, out);
        std::cout << "wrote " << out.string() << " (" << split.entries.size() << " scenes)\n";
        m.outputs.push_back(out);
    }
    return m;
}

struct TrainArgs {
    std::string corpus_dir;
    std::string out;
    std::string init;
    std::string log;
    std::size_t d = 6;
    std::size_t max_len = 12;
    double embedding_scale = 1.0;
    TrainConfig train;
};

TrainConfig train_config(const TrainArgs& a, const Common& c, TrainConfig::Phase phase) {
    TrainConfig t = a.train;
    t.seed = c.seed;
    t.phase = phase;
    t.validate();
    return t;
}

struct Setup {
    CorpusSplit train;
    std::optional<CorpusSplit> val;
    Vocabulary vocab{Grammar::standard()};
    Checkpoint ckpt;
};

Setup prepare(const TrainArgs& a, const Common& c, RunManifest& m) {
    Setup s;
    const fs::path train_path = fs::path(a.corpus_dir) / "train.json";
    s.train = load_corpus(train_path);
    m.inputs.push_back(train_path);
    const fs::path val_path = fs::path(a.corpus_dir) / "val.json";
    if (fs::is_regular_file(val_path)) {
        s.val = load_split(val_path);
        m.inputs.push_back(val_path);
    }
    if (!a.init.empty()) {
        s.ckpt = load_ckpt(a.init);
        m.inputs.push_back(a.init);
        if (s.ckpt.config.feature_dim != s.train.feature_dim)
            throw UsageError("checkpoint feature_dim does not match the corpus");
        if (s.ckpt.vocabulary != s.vocab.words()) throw UsageError("checkpoint vocabulary does not match the grammar");
        return s;
    }
    s.ckpt.config.d = a.d;
    s.ckpt.config.max_len = a.max_len;
    s.ckpt.config.vocab = s.vocab.size();
    s.ckpt.config.feature_dim = s.train.feature_dim;
    s.ckpt.config.validate();
    s.ckpt.seed = c.seed;
    s.ckpt.params = init_params(s.ckpt.config, c.seed, a.embedding_scale);
    s.ckpt.vocabulary = s.vocab.words();
    s.ckpt.v_bar = CorpusStats::from_features(split_features(s.train)).v_bar;
    return s;
}

std::ofstream open_log(const fs::path& p, const char* header) {
    ensure_parent(p);
    std::ofstream log(p);
    if (!log) throw UsageError("cannot write log " + p.string());
    log << header << '\n';
    return log;
}

fs::path log_path(const TrainArgs& a) { return a.log.empty() ? fs::path(a.out + ".log.tsv") : fs::path(a.log); }

RunManifest run_pretrain(const TrainArgs& a, const Common& c) {
    RunManifest m{"pretrain", {}, c.seed, {}, {}};
    Setup s = prepare(a, c, m);
    const auto tc = train_config(a, c, TrainConfig::Phase::pretrain);
    if (!s.ckpt.encoder) s.ckpt.encoder = init_sentence_encoder(s.ckpt.config, c.seed + 1);
    const auto sentences = caption_sentences(s.train, s.vocab);
    const fs::path lp = log_path(a);
    auto log = open_log(lp, "epoch\tloss\tseconds");
    for (std::size_t e = 0; e < tc.epochs; ++e) {
        const auto r = pretrain_epoch(s.ckpt.params, *s.ckpt.encoder, s.ckpt.config, sentences, tc, e);
        log << format_log_line(r) << '\n' << std::flush;
        std::cout << "pretrain epoch " << r.epoch << " loss " << fixed(r.mean_loss, 4) << '\n';
    }
    ensure_parent(a.out);
    save_checkpoint(s.ckpt, a.out);
    m.outputs = {a.out, lp};
    return m;
}

RunManifest run_train(const TrainArgs& a, const Common& c) {
    RunManifest m{"train", {}, c.seed, {}, {}};
    Setup s = prepare(a, c, m);
    s.ckpt.encoder.reset();  // phase 2 drops the sentence encoder
    s.ckpt.seed = c.seed;
    const auto tc = train_config(a, c, TrainConfig::Phase::main);
    const auto examples = make_examples(s.train, s.vocab);
    std::vector<Example> val_examples;
    if (s.val) val_examples = make_examples(*s.val, s.vocab);
    const fs::path lp = log_path(a);
    auto log = open_log(lp, "epoch\tloss\tval_loss\tseconds");
    for (std::size_t e = 0; e < tc.epochs; ++e) {
        const auto r = train_epoch(s.ckpt.params, s.ckpt.config, examples, s.ckpt.v_bar, tc, e);
        const double val =
            val_examples.empty() ? std::nan("") : evaluate_loss(s.ckpt.params, s.ckpt.config, val_examples, s.ckpt.v_bar);
        log << r.epoch << '\t' << fixed(r.mean_loss) << '\t' << fixed(val) << '\t' << fixed(r.seconds, 3) << '\n'
            << std::flush;
        std::cout << "epoch " << r.epoch << " loss " << fixed(r.mean_loss, 4) << " val " << fixed(val, 4) << '\n';
    }
    ensure_parent(a.out);
    save_checkpoint(s.ckpt, a.out);
    m.outputs = {a.out, lp};
    return m;
}

struct CaptionArgs {
    std::string checkpoint;
    std::vector<std::uint64_t> scene_seeds;
    std::uint64_t world_seed = 0;
    bool show_gold = false;
    std::string run_dir = ".";
};

RunManifest run_caption(const CaptionArgs& a, const Common& c) {
    RunManifest m{"caption", {}, c.seed, {a.checkpoint}, {}};
    const auto ckpt = load_ckpt(a.checkpoint);
    if (a.scene_seeds.empty()) throw UsageError("caption needs at least one --scene-seed");
    for (auto seed : a.scene_seeds) {
        const Scene scene = sample_scene(seed, a.world_seed);
        std::cout << seed << '\t' << caption_scene(ckpt, scene);
        if (a.show_gold) std::cout << '\t' << gold_captions(scene).front();
        std::cout << '\n';
    }
    return m;
}

struct EvalArgs {
    std::string checkpoint;
    std::string corpus;
    std::string out;
    std::string captions_out;
};

RunManifest run_eval(const EvalArgs& a, const Common& c) {
    RunManifest m{"eval", {}, c.seed, {a.checkpoint, a.corpus}, {}};
    const auto ckpt = load_ckpt(a.checkpoint);
    const auto split = load_corpus(a.corpus);
    if (split.feature_dim != ckpt.config.feature_dim) throw UsageError("corpus feature_dim does not match checkpoint");
    if (split.entries.empty()) throw UsageError("corpus has no scenes");
    const Vocabulary vocab(ckpt.vocabulary);
    CorpusBleu bleu(4);
    double spice = 0.0;
    std::ostringstream captions;
    captions << "seed\tcaption\tspice_lite\n";
    for (const auto& e : split.entries) {
        const auto trace = generate_caption(ckpt.params, ckpt.config, e.features, ckpt.v_bar);
        const std::string cap = vocab.decode(trace.caption(ckpt.config.end_id));
        const double f1 = spice_lite(cap, e.tuples).f1;
        spice += f1;
        bleu.add(cap, e.captions);
        captions << e.scene.seed << '\t' << cap << '\t' << fixed(f1) << '\n';
    }
    spice /= static_cast<double>(split.entries.size());
    std::ostringstream table;
    table << "model\tsplit\tscenes\tBLEU-1\tBLEU-2\tBLEU-3\tBLEU-4\tspice_lite\n";
    table << ckpt.id() << '\t' << split.name << '\t' << split.entries.size();
    for (int n = 1; n <= 4; ++n) table << '\t' << fixed(bleu.score(n));
    table << '\t' << fixed(spice) << '\n';
    std::cout << table.str();
    const fs::path out = a.out.empty() ? fs::path("eval.tsv") : fs::path(a.out);
    ensure_parent(out);
    write_file(out, table.str());
    m.outputs.push_back(out);
    if (!a.captions_out.empty()) {
        ensure_parent(a.captions_out);
        write_file(a.captions_out, captions.str());
        m.outputs.push_back(a.captions_out);
    }
    return m;
}

struct ClusterArgs {
    std::string checkpoint;
    std::string corpus;
    std::size_t scenes = 200;
    std::size_t k = kAllPos.size();
    std::string out;
};

RunManifest run_cluster(const ClusterArgs& a, const Common& c) {
    RunManifest m{"cluster-roles", {}, c.seed, {a.checkpoint, a.corpus}, {}};
    const auto ckpt = load_ckpt(a.checkpoint);
    const auto split = load_corpus(a.corpus);
    const Vocabulary vocab(ckpt.vocabulary);
    const Grammar& g = Grammar::standard();
    std::vector<DecodeTrace> traces;
    for (std::size_t i = 0; i < std::min(a.scenes, split.entries.size()); ++i)
        traces.push_back(generate_caption(ckpt.params, ckpt.config, split.entries[i].features, ckpt.v_bar));
    const auto tag_of = [&](WordId id) -> std::optional<std::string> {
        const auto pos = g.pos_of(vocab.word(id));
        if (!pos) return std::nullopt;
        return std::string(pos_name(*pos));
    };
    const auto report = cluster_unbinding_vectors(traces, a.k, tag_of, c.seed);
    const std::string text = format_cluster_report(report);
    std::cout << text;
    const fs::path out = a.out.empty() ? fs::path("clusters.tsv") : fs::path(a.out);
    ensure_parent(out);
    write_file(out, text);
    m.outputs.push_back(out);
    return m;
}

struct PoolArgs {
    std::string checkpoint;
    std::string out;
    std::uint64_t first = kTestSeeds.first;
    std::uint64_t last = kTestSeeds.first + 400;
    std::uint64_t world_seed = 0;
    CaptchaConfig config;
};

RunManifest run_build_pool(const PoolArgs& a, const Common& c) {
    RunManifest m{"build-pool", {}, c.seed, {a.checkpoint}, {}};
    if (a.last <= a.first) throw UsageError("--last must be greater than --first");
    const auto ckpt = load_ckpt(a.checkpoint);
    std::vector<Scene> candidates;
    for (auto s = a.first; s < a.last; ++s) candidates.push_back(sample_scene(s, a.world_seed));
    const auto pool = build_pool(ckpt, candidates, a.config);
    const fs::path out = a.out.empty() ? fs::path("pool.json") : fs::path(a.out);
    ensure_parent(out);
    save_pool(pool, out);
    std::cout << "pool: " << pool.entries.size() << " of " << candidates.size() << " candidates admitted (gamma1 "
              << a.config.gamma1 << ")\n";
    m.outputs.push_back(out);
    return m;
}

struct ServeArgs {
    std::string pool;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    std::string run_dir = ".";
    CaptchaConfig config;
};

RunManifest run_serve(const ServeArgs& a, const Common& c, const CLI::App& sub) {
    RunManifest m{"serve", config_snapshot(sub), c.seed, {a.pool}, {}};
    require_file(a.pool, "pool file");
    auto pool = load_pool(a.pool);
    CaptchaConfig cfg = a.config;
    if (sub.count("--gamma1") == 0) cfg.gamma1 = pool.config.gamma1;
    cfg.validate();
    if (const auto bad = audit_pool(pool, cfg.gamma1); !bad.empty())
        throw UsageError(std::to_string(bad.size()) + " pool entries do not score below gamma1 = " + fixed(cfg.gamma1, 4));
    if (pool.entries.size() < cfg.pool_min_size)
        throw UsageError("pool has " + std::to_string(pool.entries.size()) + " entries, fewer than --min-size");
    m.write(a.run_dir);

    CaptchaService service(std::move(pool), cfg);
    std::optional<fs::path> static_dir;
    if (!a.static_dir.empty()) static_dir = a.static_dir;
    HttpApi api(service, static_dir);
    const int port = api.bind(a.host, a.port);
    if (port < 0) throw UsageError("cannot bind " + a.host + ":" + std::to_string(a.port));
    std::cout << "serving " << service.pool().entries.size() << " challenges on http://" << a.host << ':' << port
              << '\n'
              << std::flush;
    std::signal(SIGINT, [](int) { g_stop = 1; });
    std::signal(SIGTERM, [](int) { g_stop = 1; });
    std::thread watcher([&] {
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        api.stop();
    });
    api.serve();
    g_stop = 1;
    watcher.join();
    return {};
}

void add_train_options(CLI::App* sub, TrainArgs& a) {
    sub->add_option("--corpus-dir", a.corpus_dir, "Directory holding train.json (and optionally val.json)")
        ->required();
    sub->add_option("--out", a.out, "Checkpoint path (.json for text, anything else binary)")->required();
    sub->add_option("--init", a.init, "Start from this checkpoint instead of a fresh initialisation");
    sub->add_option("--log", a.log, "Epoch log path (default <out>.log.tsv)");
    sub->add_option("--d", a.d, "Core dimension");
    sub->add_option("--max-len", a.max_len, "Longest caption in words, counting the end token");
    sub->add_option("--embedding-scale", a.embedding_scale, "Standard deviation of the generated embeddings");
    sub->add_option("--epochs", a.train.epochs);
    sub->add_option("--lr", a.train.learning_rate, "SGD learning rate");
    sub->add_option("--batch-size", a.train.batch_size);
    sub->add_option("--clip", a.train.clip_norm, "Global gradient-norm clip");
    sub->add_flag("--train-embeddings", a.train.train_embeddings, "Also update the embedding matrices");
}

void add_captcha_options(CLI::App* sub, CaptchaConfig& cfg) {
    sub->add_option("--gamma1", cfg.gamma1, "Pool admission threshold (model score must be below it)");
    sub->add_option("--gamma2", cfg.gamma2, "Human verdict threshold (answer score must exceed it)");
    sub->add_option("--min-size", cfg.pool_min_size, "Minimum pool size");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TPGN caption generator and image-captioning CAPTCHA"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "JSON file of option values (flags override it)");
        sub->add_option("--seed", common.seed, "Seed for every random choice of the command");
    };

    GenCorpusArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate the synthetic scene corpus splits");
    gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
    gen_cmd->add_option("--split", gen.splits, "Splits to write")->check(CLI::IsMember({"train", "val", "test"}));
    gen_cmd->add_option("--feature-dim", gen.feature_dim, "Scene feature width");
    add_common(gen_cmd);

    TrainArgs pre;
    pre.train.epochs = 5;
    auto* pre_cmd = app.add_subcommand("pretrain", "Pre-train the generator as a sentence autoencoder");
    add_train_options(pre_cmd, pre);
    add_common(pre_cmd);

    TrainArgs train;
    train.train.epochs = 30;
    auto* train_cmd = app.add_subcommand("train", "Train the generator on scene features");
    add_train_options(train_cmd, train);
    add_common(train_cmd);

    CaptionArgs cap;
    auto* cap_cmd = app.add_subcommand("caption", "Caption scenes by seed");
    cap_cmd->add_option("--checkpoint", cap.checkpoint, "Trained model checkpoint")->required();
    cap_cmd->add_option("--scene-seed", cap.scene_seeds, "Scene seeds to caption")->required();
    cap_cmd->add_option("--world-seed", cap.world_seed, "Corpus world seed the scenes come from");
    cap_cmd->add_flag("--gold", cap.show_gold, "Also print the first gold caption");
    cap_cmd->add_option("--run-dir", cap.run_dir, "Where the run manifest goes");
    add_common(cap_cmd);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "BLEU-1..4 and spice_lite on a corpus split");
    eval_cmd->add_option("--checkpoint", ev.checkpoint, "Trained model checkpoint")->required();
    eval_cmd->add_option("--corpus", ev.corpus, "Corpus split file")->required();
    eval_cmd->add_option("--out", ev.out, "Result table (TSV)");
    eval_cmd->add_option("--captions-out", ev.captions_out, "Per-scene captions (TSV)");
    add_common(eval_cmd);

    ClusterArgs cl;
    auto* cl_cmd = app.add_subcommand("cluster-roles", "Cluster unbinding vectors against part-of-speech tags");
    cl_cmd->add_option("--checkpoint", cl.checkpoint, "Trained model checkpoint")->required();
    cl_cmd->add_option("--corpus", cl.corpus, "Corpus split file")->required();
    cl_cmd->add_option("--scenes", cl.scenes, "Number of scenes to decode");
    cl_cmd->add_option("--k", cl.k, "Number of clusters");
    cl_cmd->add_option("--out", cl.out, "Report path (TSV)");
    add_common(cl_cmd);

    PoolArgs pool;
    auto* pool_cmd = app.add_subcommand("build-pool", "Build the challenge pool from scenes the model captions badly");
    pool_cmd->add_option("--checkpoint", pool.checkpoint, "Trained model checkpoint")->required();
    pool_cmd->add_option("--out", pool.out, "Pool JSON path");
    pool_cmd->add_option("--first", pool.first, "First candidate scene seed");
    pool_cmd->add_option("--last", pool.last, "One past the last candidate scene seed");
    pool_cmd->add_option("--world-seed", pool.world_seed, "Corpus world seed the scenes come from");
    add_captcha_options(pool_cmd, pool.config);
    add_common(pool_cmd);

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the CAPTCHA HTTP API");
    serve_cmd->add_option("--pool", serve.pool, "Pool JSON path")->required();
    serve_cmd->add_option("--host", serve.host);
    serve_cmd->add_option("--port", serve.port, "0 picks a free port");
    serve_cmd->add_option("--ttl", serve.config.session_ttl, "Session lifetime in seconds");
    serve_cmd->add_option("--static-dir", serve.static_dir, "Directory served under / (the web UI)");
    serve_cmd->add_option("--run-dir", serve.run_dir, "Where the run manifest goes");
    add_captcha_options(serve_cmd, serve.config);
    add_common(serve_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;  // help and version exit 0
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!common.config.empty()) {
            require_file(common.config, "config file");
            apply_config_file(*sub, common.config);
        }
        RunManifest m;
        fs::path dir;
        const std::string name = sub->get_name();
        if (name == "gen-corpus") {
            m = run_gen_corpus(gen, common);
            dir = gen.out_dir;
        } else if (name == "pretrain") {
            m = run_pretrain(pre, common);
            dir = parent_or_dot(pre.out);
        } else if (name == "train") {
            m = run_train(train, common);
            dir = parent_or_dot(train.out);
        } else if (name == "caption") {
            m = run_caption(cap, common);
            dir = cap.run_dir;
        } else if (name == "eval") {
            m = run_eval(ev, common);
            dir = parent_or_dot(m.outputs.front());
        } else if (name == "cluster-roles") {
            m = run_cluster(cl, common);
            dir = parent_or_dot(m.outputs.front());
        } else if (name == "build-pool") {
            m = run_build_pool(pool, common);
            dir = parent_or_dot(m.outputs.front());
        } else if (name == "serve") {
            run_serve(serve, common, *sub);
            return 0;
        }
        m.config = config_snapshot(*sub);
        if (!common.config.empty()) m.inputs.push_back(common.config);
        m.write(dir);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace tpgn::cli

int main(int argc, char** argv) { return tpgn::cli::main(argc, argv); }
