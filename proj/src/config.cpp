#include "clir/config.hpp"

#include <cstdlib>
#include <istream>

#include "clir/error.hpp"
#include "clir/utf8.hpp"
#include "io_util.hpp"

namespace clir {

namespace {

const char* const kPriorKeys[] = {"align.prior.1-1", "align.prior.1-0", "align.prior.0-1",
                                  "align.prior.2-1", "align.prior.1-2", "align.prior.2-2"};

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.values_ = {
        {"lang.source", "en"},
        {"lang.target", "fr"},
        {"data.dir", default_data_dir().string()},
        {"miner.typical_ratio", "1.0"},
        {"miner.length_tolerance", "0.4"},
        {"miner.structure_threshold", "0.2"},
        {"miner.min_text", "200"},
        {"miner.max_pairings", "1"},
        {"miner.candidate_gate", "0"},
        {"miner.anchor_pattern", ""},
        {"miner.verify_language", "1"},
        {"align.variance", "6.8"},
        {"align.cognate_weight", "0.3"},
        {"align.cognate_prefix", "4"},
        {"align.prior.1-1", "0.89"},
        {"align.prior.1-0", "0.005"},
        {"align.prior.0-1", "0.005"},
        {"align.prior.2-1", "0.0445"},
        {"align.prior.1-2", "0.0445"},
        {"align.prior.2-2", "0.011"},
        {"train.iterations", "5"},
        {"train.null_token", "0"},
        {"train.min_pair_tokens", "1"},
        {"train.max_pair_tokens", "60"},
        {"train.convergence_delta", ""},
        {"train.threads", "1"},
        {"prune.theta", "0.1"},
        {"prune.top_n", "100000"},
        {"prune.marginal_floor", "1e-6"},
        {"prune.digit_rule", "1"},
        {"retrieval.lambda", "0.7"},
        {"retrieval.top_k", "1000"},
        {"retrieval.oov", "pass-through"},
        {"eval.cutoff", "1000"},
        {"eval.alpha", "0.05"},
        {"eval.topics", "run"},
        {"paths.corpus", ""},
        {"paths.model", ""},
        {"paths.topics", ""},
        {"paths.qrels", ""},
        {"paths.index", ""},
        {"paths.output", ""},
    };
    return c;
}

void RunConfig::read(std::istream& in, std::string_view origin) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key(detail::trim(s.substr(0, eq)));
        if (!known(key))
            throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        values_[key] = std::string(detail::trim(s.substr(eq + 1)));
    }
}

void RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    read(in, path.string());
}

void RunConfig::set(std::string_view key, std::string value) {
    if (!known(key)) throw ConfigError("unknown config key '" + std::string(key) + "'");
    values_.find(key)->second = std::move(value);
}

bool RunConfig::known(std::string_view key) const { return values_.contains(key); }

const std::string& RunConfig::get(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    return it->second;
}

double RunConfig::get_double(std::string_view key) const {
    try {
        return detail::parse_double(get(key), key);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
}

std::size_t RunConfig::get_size(std::string_view key) const {
    try {
        return detail::parse_size(get(key), key);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
}

bool RunConfig::get_bool(std::string_view key) const {
    const std::string v = utf8::to_lower(get(key));
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + v + "'");
}

std::optional<double> RunConfig::get_optional_double(std::string_view key) const {
    if (get(key).empty()) return std::nullopt;
    return get_double(key);
}

std::string RunConfig::header() const {
    std::string h = "# clir configuration\n";
    for (const auto& [k, v] : values_) h += "# " + k + "=" + v + "\n";
    return h;
}

AlignParams RunConfig::align_params() const {
    AlignParams p;
    for (std::size_t i = 0; i < 6; ++i) p.pattern_prior[i] = get_double(kPriorKeys[i]);
    p.length_variance = get_double("align.variance");
    p.cognate_weight = get_double("align.cognate_weight");
    p.cognate_prefix_len = get_size("align.cognate_prefix");
    p.validate();
    return p;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig t;
    t.iterations = static_cast<int>(get_size("train.iterations"));
    t.use_null_token = get_bool("train.null_token");
    t.min_pair_tokens = get_size("train.min_pair_tokens");
    t.max_pair_tokens = get_size("train.max_pair_tokens");
    t.convergence_delta = get_optional_double("train.convergence_delta");
    t.threads = static_cast<unsigned>(get_size("train.threads"));
    t.validate();
    return t;
}

RetrievalParams RunConfig::retrieval_params() const {
    RetrievalParams p;
    p.lambda = get_double("retrieval.lambda");
    p.top_k = get_size("retrieval.top_k");
    const std::string& oov = get("retrieval.oov");
    if (oov == "pass-through") p.oov_policy = OovPolicy::pass_through;
    else if (oov == "drop") p.oov_policy = OovPolicy::drop;
    else throw ConfigError("retrieval.oov must be pass-through or drop");
    p.validate();
    return p;
}

MinerConfig RunConfig::miner_config() const {
    MinerConfig m;
    m.source_language = get("lang.source");
    m.target_language = get("lang.target");
    m.rules = NamingRules::for_languages(m.source_language, m.target_language);
    m.max_pairings = get_size("miner.max_pairings");
    m.typical_ratio = get_double("miner.typical_ratio");
    m.length_tolerance = get_double("miner.length_tolerance");
    m.structure_threshold = get_double("miner.structure_threshold");
    m.min_text = get_size("miner.min_text");
    m.candidate_gate = get_bool("miner.candidate_gate");
    m.anchor_pattern = get("miner.anchor_pattern");
    m.verify_language = get_bool("miner.verify_language");
    return m;
}

std::optional<std::filesystem::path> config_path_from_env() {
    const char* v = std::getenv(kConfigEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::filesystem::path(v);
}

std::pair<std::string, std::string> parse_direction(std::string_view direction) {
    const auto dash = direction.find('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 >= direction.size() ||
        direction.find('-', dash + 1) != std::string_view::npos)
        throw ConfigError("direction must look like en-fr, got '" + std::string(direction) + "'");
    return {std::string(direction.substr(0, dash)), std::string(direction.substr(dash + 1))};
}

}  // namespace clir
