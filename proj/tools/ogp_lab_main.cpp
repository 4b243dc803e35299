// ogp-lab: command-line runner for the experiment presets.
//
// Exit codes: 0 success; 2 usage error, unknown preset, unreadable config or unwritable
// output; 3 invalid configuration or a failed experiment.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ogp/experiments.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kInvalid = 3;

int run_config(ogp::ExperimentConfig cfg, const std::vector<std::string>& overrides, const std::string& out) {
    for (const auto& o : overrides) ogp::apply_override(cfg, o);
    if (!out.empty()) cfg.out_dir = out;
    const auto result = ogp::run_experiment(cfg, ogp::threads_from_env());
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ogp-lab: shortest-path structures and tree Gibbs measures on sparse random graphs"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "key = value config file")->required();
    run->add_option("--set", overrides, "Override a config key (key=value), repeatable");
    run->add_option("--out", out_dir, "Output directory (overrides the config)");

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("config", config_path, "key = value config file")->required();

    auto* preset = app.add_subcommand("preset", "Run a named preset");
    preset->add_option("name", preset_name, "Preset name")->required();
    preset->add_option("--out", out_dir, "Output directory")->required();
    preset->add_option("--set", overrides, "Override a config key (key=value), repeatable");

    auto* show = app.add_subcommand("show", "Print the config of a preset");
    show->add_option("name", preset_name, "Preset name")->required();

    app.add_subcommand("list", "List presets and experiments");
    app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (app.got_subcommand("version")) {
            std::cout << "ogp-lab " << ogp::version() << '\n';
            return 0;
        }
        if (app.got_subcommand("list")) {
            std::cout << "presets:";
            for (const auto& p : ogp::preset_names()) std::cout << ' ' << p;
            std::cout << "\nexperiments:";
            for (const auto& p : ogp::experiment_names()) std::cout << ' ' << p;
            std::cout << '\n';
            return 0;
        }
        if (app.got_subcommand("show")) {
            std::cout << ogp::serialize_config(ogp::preset_config(preset_name));
            return 0;
        }
        if (app.got_subcommand("validate")) {
            const auto report = ogp::validate_config(ogp::load_config(config_path));
            std::cout << report.text() << '\n';
            return report.ok() ? 0 : kInvalid;
        }
        if (app.got_subcommand("run")) return run_config(ogp::load_config(config_path), overrides, out_dir);
        if (app.got_subcommand("preset")) return run_config(ogp::preset_config(preset_name), overrides, out_dir);
    } catch (const ogp::ConfigError& e) {
        std::cerr << "invalid configuration:\n" << e.what() << '\n';
        return kInvalid;
    } catch (const ogp::UnknownExperimentError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const ogp::OutputError& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "experiment failed: " << e.what() << '\n';
        return kInvalid;
    }
    return kUsage;
}
