#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "pnodal/cli.hpp"
#include "pnodal/error.hpp"

namespace pnodal {
namespace {

struct Ctx {
    std::string where;
    std::filesystem::path base;

    [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) const
    {
        std::ostringstream msg;
        msg << where;
        const YAML::Mark m = node.Mark();
        if (m.line >= 0) msg << ":" << m.line + 1 << ":" << m.column + 1;
        msg << ": field '" << field << "': " << what;
        throw Error(ErrorKind::config, msg.str());
    }

    template <class T>
    T as(const YAML::Node& node, const std::string& field) const
    {
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, field, "wrong type");
        }
    }

    double number(const YAML::Node& node, const std::string& field) const
    {
        const double v = as<double>(node, field);
        if (!std::isfinite(v)) fail(node, field, "must be finite");
        return v;
    }

    double number_or(const YAML::Node& map, const char* key, double fallback, const std::string& field) const
    {
        const YAML::Node v = map[key];
        return v ? number(v, field + "." + key) : fallback;
    }

    double required(const YAML::Node& map, const char* key, const std::string& field) const
    {
        const YAML::Node v = map[key];
        if (!v) fail(map, field + "." + key, "missing");
        return number(v, field + "." + key);
    }

    void only_keys(const YAML::Node& map, const std::set<std::string>& keys, const std::string& field) const
    {
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            if (!keys.count(key)) fail(kv.first, field + "." + key, "unknown key");
        }
    }

    Potential potential(const YAML::Node& node, const std::string& field) const
    {
        if (!node) return Potential::zero();
        if (node.IsScalar()) {
            const auto s = node.as<std::string>();
            if (s == "zero") return Potential::zero();
            return Potential::constant(number(node, field));
        }
        if (!node.IsMap()) fail(node, field, "expected a potential descriptor");
        const YAML::Node type = node["type"];
        if (!type) fail(node, field + ".type", "missing");
        const auto t = as<std::string>(type, field + ".type");
        try {
            if (t == "zero") {
                only_keys(node, {"type"}, field);
                return Potential::zero();
            }
            if (t == "constant") {
                only_keys(node, {"type", "value"}, field);
                return Potential::constant(required(node, "value", field));
            }
            if (t == "polynomial") {
                only_keys(node, {"type", "coeffs"}, field);
                const YAML::Node c = node["coeffs"];
                if (!c || !c.IsSequence() || c.size() == 0)
                    fail(c ? c : node, field + ".coeffs", "expected a nonempty list");
                std::vector<double> coeffs;
                for (std::size_t i = 0; i < c.size(); ++i)
                    coeffs.push_back(number(c[i], field + ".coeffs[" + std::to_string(i) + "]"));
                return Potential::polynomial(std::move(coeffs));
            }
            if (t == "cosine") {
                only_keys(node, {"type", "amplitude", "k"}, field);
                return Potential::cosine(number_or(node, "amplitude", 1.0, field), number_or(node, "k", 1.0, field));
            }
            if (t == "bump") {
                only_keys(node, {"type", "amplitude", "centre", "width"}, field);
                return Potential::bump(number_or(node, "amplitude", 1.0, field), number_or(node, "centre", 0.5, field),
                                       number_or(node, "width", 0.25, field));
            }
            if (t == "csv") {
                only_keys(node, {"type", "path"}, field);
                const YAML::Node path = node["path"];
                if (!path) fail(node, field + ".path", "missing");
                std::filesystem::path fp = as<std::string>(path, field + ".path");
                if (fp.is_relative()) fp = base / fp;
                return Potential::from_csv(fp.string());
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::config) throw;
            fail(node, field, e.what());
        }
        fail(type, field + ".type", "unknown potential type '" + t + "'");
    }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& where,
                              const std::filesystem::path& base_dir)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream msg;
        msg << where << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
        throw Error(ErrorKind::config, msg.str());
    }
    const Ctx c{where, base_dir};
    if (!root.IsMap()) c.fail(root, "<root>", "expected a mapping");
    c.only_keys(root, {"p", "q", "r", "n_list", "grid_size", "tolerances", "seed_formula_variant",
                       "output_dir", "table_size", "ladder"},
                "<root>");

    ExperimentConfig cfg;
    if (!root["p"]) c.fail(root, "p", "missing");
    cfg.p = c.number(root["p"], "p");
    if (!(cfg.p > 1.0)) c.fail(root["p"], "p", "must be > 1");

    cfg.q = c.potential(root["q"], "q");
    cfg.r = c.potential(root["r"], "r");

    const YAML::Node nl = root["n_list"];
    if (!nl) c.fail(root, "n_list", "missing");
    if (nl.IsMap()) {
        // {from: a, to: b} inclusive
        c.only_keys(nl, {"from", "to", "step"}, "n_list");
        const int from = c.as<int>(nl["from"], "n_list.from");
        const int to = c.as<int>(nl["to"], "n_list.to");
        const int step = nl["step"] ? c.as<int>(nl["step"], "n_list.step") : 1;
        if (step < 1) c.fail(nl["step"], "n_list.step", "must be >= 1");
        for (int n = from; n <= to; n += step) cfg.n_list.push_back(n);
    } else if (nl.IsSequence()) {
        for (std::size_t i = 0; i < nl.size(); ++i)
            cfg.n_list.push_back(c.as<int>(nl[i], "n_list[" + std::to_string(i) + "]"));
    } else {
        c.fail(nl, "n_list", "expected a list or {from, to}");
    }
    if (cfg.n_list.empty()) c.fail(nl, "n_list", "must be nonempty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 1) c.fail(nl, "n_list", "indices must be >= 1");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) c.fail(nl, "n_list", "must be strictly ascending");
    }

    if (root["grid_size"]) {
        cfg.grid_size = c.as<int>(root["grid_size"], "grid_size");
        if (cfg.grid_size < 16) c.fail(root["grid_size"], "grid_size", "must be >= 16");
    }
    if (root["table_size"]) {
        cfg.table_size = c.as<int>(root["table_size"], "table_size");
        if (cfg.table_size < 256) c.fail(root["table_size"], "table_size", "must be >= 256");
    }
    if (const YAML::Node tol = root["tolerances"]) {
        if (!tol.IsMap()) c.fail(tol, "tolerances", "expected {ode_tol, root_tol}");
        c.only_keys(tol, {"ode_tol", "root_tol"}, "tolerances");
        cfg.ode_tol = c.number_or(tol, "ode_tol", cfg.ode_tol, "tolerances");
        cfg.root_tol = c.number_or(tol, "root_tol", cfg.root_tol, "tolerances");
        if (!(cfg.ode_tol > 0.0)) c.fail(tol["ode_tol"], "tolerances.ode_tol", "must be > 0");
        if (!(cfg.root_tol > 0.0)) c.fail(tol["root_tol"], "tolerances.root_tol", "must be > 0");
    }
    if (const YAML::Node v = root["seed_formula_variant"]) {
        try {
            cfg.seed_formula_variant = variant_from_string(c.as<std::string>(v, "seed_formula_variant"));
        } catch (const Error& e) {
            c.fail(v, "seed_formula_variant", "expected printed | proof-consistent");
        }
    }
    if (const YAML::Node o = root["output_dir"]) cfg.output_dir = c.as<std::string>(o, "output_dir");
    if (const YAML::Node l = root["ladder"]) cfg.ladder = c.as<bool>(l, "ladder");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string(), path.parent_path());
}

std::string describe_config(const ExperimentConfig& cfg)
{
    std::ostringstream s;
    s << "p=" << cfg.p << " q=" << cfg.q.describe() << " r=" << cfg.r.describe() << " n=[";
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) s << (i ? "," : "") << cfg.n_list[i];
    s << "] variant=" << to_string(cfg.seed_formula_variant);
    return s.str();
}

}  // namespace pnodal
