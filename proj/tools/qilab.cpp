#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "qilab/sweep.hpp"

namespace {

qilab::GridSpec parse_grid(const std::string& text) {
    // NAME=START:STOP:COUNT[:log]
    auto eq = text.find('=');
    if (eq == std::string::npos) throw qilab::ConfigError("bad --grid syntax: " + text);
    qilab::GridSpec g;
    g.name = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= rest.size()) {
        size_t colon = rest.find(':', pos);
        if (colon == std::string::npos) {
            parts.push_back(rest.substr(pos));
            break;
        }
        parts.push_back(rest.substr(pos, colon - pos));
        pos = colon + 1;
    }
    if (parts.size() < 3 || parts.size() > 4) throw qilab::ConfigError("bad --grid syntax: " + text);
    g.start = std::stod(parts[0]);
    g.stop = std::stod(parts[1]);
    g.count = std::stoi(parts[2]);
    if (parts.size() == 4) {
        if (parts[3] != "log" && parts[3] != "linear")
            throw qilab::ConfigError("grid scale must be linear or log");
        g.log_scale = parts[3] == "log";
    }
    return g;
}

void merge_config_file(qilab::SweepConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qilab::IoError("cannot open config: " + path);
    nlohmann::ordered_json j;
    in >> j;
    if (j.contains("subcommand")) cfg.subcommand = j["subcommand"].get<std::string>();
    if (j.contains("params"))
        for (auto& [k, v] : j["params"].items()) cfg.params[k] = v.get<double>();
    if (j.contains("grids")) {
        for (auto& [name, spec] : j["grids"].items()) {
            qilab::GridSpec g;
            g.name = name;
            g.start = spec.at("start").get<double>();
            g.stop = spec.at("stop").get<double>();
            g.count = spec.at("count").get<int>();
            g.log_scale = spec.value("scale", "linear") == "log";
            cfg.grids.push_back(g);
        }
    }
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("threads")) {
        if (j["threads"].is_string())
            cfg.threads = 0;  // "auto"
        else
            cfg.threads = j["threads"].get<int>();
    }
    if (j.contains("state_a")) cfg.state_a = j["state_a"].get<std::string>();
    if (j.contains("state_b")) cfg.state_b = j["state_b"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qilab: covert-detection, gain-sensing, and illumination bounds"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path, out_path, format = "csv";
    int threads = 0;
    long seed = 0;  // reserved; the pipelines are deterministic
    std::vector<std::string> param_args, grid_args;
    std::string state_a, state_b;

    app.add_option("--config", config_path, "JSON sweep configuration");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads (0 = auto)");
    app.add_option("--param", param_args, "NAME=VALUE scalar parameter")->take_all();
    app.add_option("--grid", grid_args, "NAME=START:STOP:COUNT[:log]")->take_all();
    app.add_option("--state-a", state_a, "JSON Gaussian state (distinguish)");
    app.add_option("--state-b", state_b, "JSON Gaussian state (distinguish)");
    app.add_option("--seed", seed, "reserved")->group("");

    std::map<std::string, CLI::App*> subs;
    for (const auto& name : qilab::subcommand_names()) subs[name] = app.add_subcommand(name, "");

    CLI11_PARSE(app, argc, argv);

    try {
        qilab::SweepConfig cfg;
        if (!config_path.empty()) merge_config_file(cfg, config_path);
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) cfg.subcommand = name;
        if (cfg.subcommand.empty()) throw qilab::ConfigError("no subcommand given");
        for (const auto& pa : param_args) {
            auto eq = pa.find('=');
            if (eq == std::string::npos) throw qilab::ConfigError("bad --param syntax: " + pa);
            cfg.params[pa.substr(0, eq)] = std::stod(pa.substr(eq + 1));
        }
        for (const auto& ga : grid_args) cfg.grids.push_back(parse_grid(ga));
        if (!out_path.empty()) cfg.output = out_path;
        if (format != "csv" || cfg.format.empty()) cfg.format = format;
        if (threads > 0) cfg.threads = threads;
        if (!state_a.empty()) cfg.state_a = state_a;
        if (!state_b.empty()) cfg.state_b = state_b;

        qilab::Dataset ds = qilab::run(cfg);
        std::string text = qilab::emit(ds, cfg.format);
        if (cfg.output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out) throw qilab::IoError("cannot write: " + cfg.output);
            out << text;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
