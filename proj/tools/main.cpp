// inspath: headless runs, scene rendering and the session server.
//
// Exit codes: 0 ok, 2 config or usage, 3 input, 4 empty profile, 5 internal,
// 6 port busy.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "CLI11.hpp"
#include "inspath/acquisition.hpp"
#include "inspath/config.hpp"
#include "inspath/error.hpp"
#include "inspath/inspect_server.hpp"
#include "inspath/io.hpp"
#include "inspath/pipeline.hpp"
#include "inspath/synth.hpp"

namespace fs = std::filesystem;
using namespace inspath;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitEmptyProfile = 4;
constexpr int kExitInternal = 5;
constexpr int kExitPortBusy = 6;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::kConfig: return kExitConfig;
        case ErrorCode::kEmptyProfile: return kExitEmptyProfile;
        case ErrorCode::kInvalidArgument:
        case ErrorCode::kDegenerateHull:
        case ErrorCode::kDegenerateGeometry:
        case ErrorCode::kInsufficientFrames:
        case ErrorCode::kParse:
        case ErrorCode::kIo: return kExitInput;
        default: return kExitInternal;
    }
}

bool use_color() {
    if (std::getenv("NO_COLOR")) return false;
    if (std::getenv("FORCE_COLOR")) return true;
    return ::isatty(STDOUT_FILENO) != 0;
}

std::string red(const std::string& s) {
    if (std::getenv("NO_COLOR") || !::isatty(STDERR_FILENO)) return s;
    return "\x1b[31m" + s + "\x1b[0m";
}

int report(const Error& e) {
    std::cerr << red("error") << ": " << e.what() << "\n";
    return exit_code_for(e.code());
}

/// "none", "strobe" or key=value pairs: sigma, dropout, strobe (period),
/// multipliers (colon separated). "strobe,sigma=0" starts from the preset.
NoiseSpec parse_noise(const std::string& text) {
    NoiseSpec noise;
    if (text.empty() || text == "none") return noise;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "strobe") {
            noise = NoiseSpec::strobe();
            continue;
        }
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorCode::kConfig, "--noise: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            if (key == "sigma") {
                noise.depth_sigma = std::stod(value, &used);
            } else if (key == "dropout") {
                noise.dropout_prob = std::stod(value, &used);
            } else if (key == "strobe") {
                noise.strobe_period = std::stoul(value, &used);
            } else if (key == "multipliers") {
                noise.strobe_multipliers.clear();
                std::stringstream ms(value);
                std::string m;
                while (std::getline(ms, m, ':')) noise.strobe_multipliers.push_back(std::stod(m));
                used = value.size();
            } else {
                fail(ErrorCode::kConfig, "--noise: unknown key '" + key + "'");
            }
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            fail(ErrorCode::kConfig, "--noise: bad value for " + key + ": '" + value + "'");
        }
    }
    try {
        noise.validate();
    } catch (const Error& e) {
        fail(ErrorCode::kConfig, "--noise: " + e.message());
    }
    return noise;
}

/// A scene file path, or the name of a built-in scene.
SceneFile scene_from_arg(const std::string& arg) {
    if (fs::exists(arg)) return load_scene_file(arg);
    for (const std::string& name : builtin_scene_names()) {
        if (arg == name) return builtin_scene(name);
    }
    fail(ErrorCode::kIo, "no scene file or built-in scene named '" + arg + "'");
}

ClusterSelection parse_select(const std::string& text) {
    if (text == "largest") return {SelectionPolicy::kLargest, {}};
    if (text == "interactive") return {SelectionPolicy::kInteractive, {}};
    ClusterSelection sel{SelectionPolicy::kIds, {}};
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int id = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            sel.ids.push_back(id);
        } catch (const std::logic_error&) {
            fail(ErrorCode::kConfig, "--select: expected ids, largest or interactive, got '" + text + "'");
        }
    }
    return sel;
}

struct RunArgs {
    std::string config, frames, scene, out, select, noise;
    std::uint64_t seed = 0;
    bool headless = false;
};

int cmd_run(const RunArgs& a) {
    try {
        PipelineConfig config = a.config.empty() ? PipelineConfig{} : load_config(a.config);
        if (!a.select.empty()) config.cluster_selection = parse_select(a.select);
        if (a.headless && config.cluster_selection.policy == SelectionPolicy::kInteractive) {
            fail(ErrorCode::kConfig, "cluster_selection: interactive selection cannot run headless; pass --select");
        }

        std::unique_ptr<FrameSource> source;
        std::string description;
        if (!a.frames.empty()) {
            source = std::make_unique<ReplayFrameSource>(a.frames);
            description = "frames " + a.frames;
        } else {
            SceneFile scene = scene_from_arg(a.scene);
            const NoiseSpec noise = a.noise.empty() ? scene.noise : parse_noise(a.noise);
            source = std::make_unique<SyntheticFrameSource>(scene.scene, scene.camera, noise, a.seed);
            description = "scene " + a.scene + " seed " + std::to_string(a.seed);
        }

        const RunRecord record = run(*source, config, a.out, description);
        for (const std::string& w : record.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << format_stage_table(record, use_color());
        if (record.state == RunState::kAwaitingSelection) {
            std::cout << "\nawaiting cluster selection (" << record.clusters.cluster_count()
                      << " clusters); continue with: inspath serve --run " << a.out << "\n";
        } else {
            std::cout << "\nplan: " << (fs::path(a.out) / "plan.json").string() << "\n";
        }
        return 0;
    } catch (const Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << red("error") << ": " << e.what() << "\n";
        return kExitInternal;
    }
}

struct RenderArgs {
    std::string scene, out, noise;
    std::size_t frames = 5;
    std::uint64_t seed = 0;
};

int cmd_render(const RenderArgs& a) {
    try {
        SceneFile scene = scene_from_arg(a.scene);
        const NoiseSpec noise = a.noise.empty() ? scene.noise : parse_noise(a.noise);
        std::vector<Frame> frames;
        for (std::size_t i = 0; i < a.frames; ++i) frames.push_back(render_depth(scene.scene, scene.camera, noise, a.seed, i));
        write_replay_directory(frames, a.out);
        std::cout << "wrote " << a.frames << " frame(s) to " << a.out << "\n";
        return 0;
    } catch (const Error& e) {
        return report(e);
    }
}

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct ServeArgs {
    std::vector<std::string> runs;
    std::string host = "127.0.0.1";
    int port = 8080;
};

int cmd_serve(const ServeArgs& a) {
    InspectServer server;
    try {
        for (const std::string& r : a.runs) {
            if (!fs::is_directory(r)) fail(ErrorCode::kIo, "run directory not found: " + r);
            server.add_run(r);
        }
    } catch (const Error& e) {
        return report(e);
    }
    int port = 0;
    try {
        port = server.bind(a.host, a.port);
    } catch (const Error& e) {
        std::cerr << red("error") << ": " << e.what() << "\n";
        return kExitPortBusy;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&] {
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
        server.stop();
    });
    std::cout << "listening on http://" << a.host << ":" << port << std::endl;
    for (const std::string& id : server.session_ids()) std::cout << "  session " << id << std::endl;
    server.listen();
    g_stop = true;
    watcher.join();
    return 0;
}

int cmd_scenes(const std::string& dump) {
    if (dump.empty()) {
        for (const std::string& name : builtin_scene_names()) std::cout << name << "\n";
        return 0;
    }
    try {
        std::cout << scene_file_to_json(scene_from_arg(dump));
        return 0;
    } catch (const Error& e) {
        return report(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inspection path planning from depth frames"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "inspath 0.1.0");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run the pipeline and write a run directory");
    run_cmd->add_option("--config", run_args.config, "Pipeline config JSON (defaults when omitted)");
    auto* frames_opt = run_cmd->add_option("--frames", run_args.frames, "Replay directory of captured frames");
    auto* scene_opt = run_cmd->add_option("--scene", run_args.scene, "Scene JSON file or built-in scene name");
    frames_opt->excludes(scene_opt);
    run_cmd->add_option("--out", run_args.out, "Run directory to write")->required();
    run_cmd->add_option("--select", run_args.select, "Cluster ids (comma separated), largest or interactive");
    run_cmd->add_flag("--headless", run_args.headless, "Never stop for interactive selection");
    run_cmd->add_option("--seed", run_args.seed, "Noise seed for synthetic scenes");
    run_cmd->add_option("--noise", run_args.noise, "Noise override for synthetic scenes");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "Render a scene to a replay directory");
    render_cmd->add_option("--scene", render_args.scene, "Scene JSON file or built-in scene name")->required();
    render_cmd->add_option("--out", render_args.out, "Replay directory to write")->required();
    render_cmd->add_option("--frames", render_args.frames, "Number of frames")->check(CLI::Range(1, 100000));
    render_cmd->add_option("--noise", render_args.noise,
                           "none, strobe, or sigma=..,dropout=..,strobe=period,multipliers=a:b");
    render_cmd->add_option("--seed", render_args.seed, "Noise seed");

    ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the session API over run directories");
    serve_cmd->add_option("--run", serve_args.runs, "Run directory (repeatable)")->required();
    serve_cmd->add_option("--port", serve_args.port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", serve_args.host, "Address to bind");

    std::string dump;
    auto* scenes_cmd = app.add_subcommand("scenes", "List built-in scenes or print one as JSON");
    scenes_cmd->add_option("--dump", dump, "Scene name to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (*run_cmd) {
        if (run_args.frames.empty() && run_args.scene.empty()) {
            std::cerr << red("error") << ": run needs --frames or --scene\n";
            return kExitConfig;
        }
        return cmd_run(run_args);
    }
    if (*render_cmd) return cmd_render(render_args);
    if (*serve_cmd) return cmd_serve(serve_args);
    return cmd_scenes(dump);
}
