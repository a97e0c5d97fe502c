#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qafm/commands.hpp"
#include "qafm/config.hpp"

namespace {

struct Subcommand {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::string config_path;
    std::string output_path = "-";
    std::string format;
};

std::string describe(const qafm::config::ParamSpec& p) {
    std::string h = p.help;
    if (!p.unit.empty()) h += " [" + p.unit + "]";
    if (p.fallback) {
        if (const auto* d = std::get_if<double>(&*p.fallback)) h += " (default " + qafm::io::format_double(*d) + ")";
        else if (!std::get<std::string>(*p.fallback).empty()) h += " (default " + std::get<std::string>(*p.fallback) + ")";
    } else if (!p.optional) {
        h += " (required)";
    }
    return h;
}

} // namespace

int main(int argc, char** argv) {
    using namespace qafm;
    CLI::App app{"Quantum-state AFM model: forces, beam modes, squeezing, dynamics and maps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::map<std::string, Subcommand> subs;
    for (const auto& name : config::commands()) {
        auto& sub = subs[name];
        sub.app = app.add_subcommand(name);
        sub.app->add_option("--config", sub.config_path, "JSON config; flags override its values");
        sub.app->add_option("-o,--output", sub.output_path, "output path, - for stdout");
        sub.app->add_option("--format", sub.format, "csv, json or svg");
        for (const auto& p : config::schema(name)) {
            std::vector<std::string> spellings{p.name};
            if (p.kind == config::Kind::distance) spellings.push_back(p.name + "-nm");
            if (p.kind == config::Kind::frequency) spellings.push_back(p.name + "-hz");
            for (const auto& s : spellings) {
                std::string help = s == p.name ? describe(p) : "same as --" + p.name + " in " +
                                                                   (p.kind == config::Kind::distance ? "nm" : "Hz");
                sub.app->add_option_function<std::string>(
                    "--" + s, [&sub, s](const std::string& v) { sub.values[s] = v; }, help);
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : commands::kValidation;
    }

    for (auto& [name, sub] : subs) {
        if (!sub.app->parsed()) continue;
        try {
            config::OutputSpec out;
            out.path = sub.output_path;
            if (!sub.format.empty()) out.format = config::parse_format(sub.format);
            std::optional<std::filesystem::path> file;
            if (!sub.config_path.empty()) file = sub.config_path;
            const auto cfg = config::load_config(name, file, sub.values, out);
            return commands::run(cfg, std::cout, std::cerr);
        } catch (const std::exception& e) {
            return commands::report(e, std::cerr);
        }
    }
    return commands::kValidation;
}
