// tilec: compiler and simulator for tile-assembly programs.
//
//   tilec check <prog.tdsl>
//   tilec compile <prog.tdsl> -o <out.tds> [--seed-out <out.seed>]
//   tilec simulate --tiles <x.tds> --seed <x.seed> [--steps N] [--policy first|random]
//                  [--rng K] [--rows R] [--render] [--fail-on-nondet]
//   tilec explore --tiles <x.tds> --seed <x.seed> --box WxH [--max-states N] [--jobs J]
//   tilec render --tiles <x.tds> --seed <x.seed>
//
// Exit codes: 0 success, 1 usage error, 2 compile diagnostics, 3 simulation
// error (unstable seed, exceeded budget), 4 nondeterminism detected under
// --fail-on-nondet.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tilelang/dsl.hpp"
#include "tilelang/expand.hpp"
#include "tilelang/sim.hpp"
#include "tilelang/tds.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDiagnostics = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitNondet = 4;

struct DiagnosticPrinter {
    bool json_lines = false;
    std::string file;

    void print(const tilelang::Diagnostic& d) const {
        if (json_lines) {
            nlohmann::json j{
                {"code", d.code},
                {"message", d.message},
                {"severity", d.severity == tilelang::Severity::Error ? "error" : "warning"},
                {"file", file},
            };
            if (d.pos.known()) {
                j["line"] = d.pos.line;
                j["col"] = d.pos.col;
            }
            std::cerr << j.dump() << "\n";
        } else {
            std::cerr << file << ": " << tilelang::to_string(d) << "\n";
        }
    }

    // Returns the exit code implied by a diagnostic list.
    int print_all(const std::vector<tilelang::Diagnostic>& ds) const {
        for (const auto& d : ds) print(d);
        return tilelang::has_errors(ds) ? kExitDiagnostics : kExitOk;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CLI::ValidationError("cannot write file: " + path);
    out << content;
}

struct LoadedSystem {
    tilelang::TAS tas;
};

LoadedSystem load_system(const std::string& tiles_path, const std::string& seed_path) {
    tilelang::TAS tas;
    tas.tiles = tilelang::read_tds(slurp(tiles_path));
    auto [seed, temperature] = tilelang::read_seed(slurp(seed_path), tas.tiles);
    tas.seed = std::move(seed);
    tas.temperature = temperature;
    return {std::move(tas)};
}

tilelang::Box parse_box(const std::string& spec, const tilelang::Assembly& seed) {
    auto x = spec.find('x');
    if (x == std::string::npos)
        throw CLI::ValidationError("--box expects WxH, e.g. --box 2x4, got '" + spec + "'");
    tilelang::Box box;
    try {
        box.width = std::stoll(spec.substr(0, x));
        box.height = std::stoll(spec.substr(x + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--box expects WxH, e.g. --box 2x4, got '" + spec + "'");
    }
    if (box.width < 1 || box.height < 1) throw CLI::ValidationError("--box dimensions must be positive");
    box.x0 = seed.placements().begin()->first.x;
    box.y0 = seed.placements().begin()->first.y;
    for (const auto& [c, _] : seed.placements()) {
        box.x0 = std::min(box.x0, c.x);
        box.y0 = std::min(box.y0, c.y);
    }
    return box;
}

void print_events(const std::vector<tilelang::NondetEvent>& events) {
    for (const auto& e : events) {
        std::cerr << "nondeterminism at step " << e.step << ", position (" << e.at.x << ", " << e.at.y
                  << "): ";
        for (std::size_t i = 0; i < e.tile_names.size(); ++i)
            std::cerr << (i ? ", " : "") << e.tile_names[i];
        std::cerr << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilec: compile and simulate tile-assembly programs"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "diagnostic format: human or json-lines")
        ->check(CLI::IsMember({"human", "json-lines"}));

    // --- check ---------------------------------------------------------------
    auto* check = app.add_subcommand("check", "parse and validate a program");
    std::string check_input;
    check->add_option("program", check_input, "input .tdsl program")->required();

    // --- compile -------------------------------------------------------------
    auto* compile = app.add_subcommand("compile", "compile a program to a tile set");
    std::string compile_input, compile_output, compile_seed_out;
    compile->add_option("program", compile_input, "input .tdsl program")->required();
    compile->add_option("-o,--output", compile_output, "output .tds tile set")->required();
    compile->add_option("--seed-out", compile_seed_out, "also write the program's seed as a .seed file");

    // --- simulate ------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "grow an assembly from a seed");
    std::string sim_tiles, sim_seed, sim_policy = "first", sim_box;
    std::size_t sim_steps = 100000;
    std::uint64_t sim_rng = 1;
    std::int64_t sim_rows = 0;
    bool sim_render = false, fail_on_nondet = false;
    simulate->add_option("--tiles", sim_tiles, ".tds tile set")->required();
    simulate->add_option("--seed", sim_seed, ".seed assembly")->required();
    simulate->add_option("--steps", sim_steps, "maximum attachments (default 100000)");
    simulate->add_option("--policy", sim_policy, "frontier policy: first or random")
        ->check(CLI::IsMember({"first", "random"}));
    simulate->add_option("--rng", sim_rng, "random policy seed (default 1)");
    simulate->add_option("--rows", sim_rows, "stop once rows 1..R (counted from the seed row, growing north) are complete");
    simulate->add_option("--box", sim_box, "restrict growth to a WxH window anchored at the seed's southwest corner");
    simulate->add_flag("--render", sim_render, "print the final assembly");
    simulate->add_flag("--fail-on-nondet", fail_on_nondet, "exit 4 if any position is ever contested");

    // --- explore -------------------------------------------------------------
    auto* explore = app.add_subcommand("explore", "enumerate every assembly producible inside a box");
    std::string exp_tiles, exp_seed, exp_box;
    std::size_t exp_max_states = 250000;
    unsigned exp_jobs = 1;
    explore->add_option("--tiles", exp_tiles, ".tds tile set")->required();
    explore->add_option("--seed", exp_seed, ".seed assembly")->required();
    explore->add_option("--box", exp_box, "growth window WxH anchored at the seed's southwest corner")
        ->required();
    explore->add_option("--max-states", exp_max_states, "state budget (default 250000)");
    explore->add_option("--jobs", exp_jobs, "worker threads (currently single-threaded)");

    // --- render --------------------------------------------------------------
    auto* render_cmd = app.add_subcommand("render", "print a seed assembly");
    std::string ren_tiles, ren_seed;
    render_cmd->add_option("--tiles", ren_tiles, ".tds tile set")->required();
    render_cmd->add_option("--seed", ren_seed, ".seed assembly")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    DiagnosticPrinter printer{format == "json-lines"};

    auto compile_program = [&](const std::string& path, tilelang::TileSetTemplate& tst,
                               tilelang::ExpansionResult& result) -> int {
        printer.file = path;
        std::string source;
        try {
            source = slurp(path);
        } catch (const CLI::Error& e) {
            std::cerr << e.what() << "\n";
            return kExitUsage;
        }
        try {
            tilelang::Program program = tilelang::parse_program(source);
            tst = tilelang::lower(program);
        } catch (const tilelang::TileError& e) {
            printer.print(e.diag());
            return kExitDiagnostics;
        }
        result = tilelang::expand(tst);
        return printer.print_all(result.diagnostics);
    };

    try {
        if (*check) {
            tilelang::TileSetTemplate tst;
            tilelang::ExpansionResult result;
            int code = compile_program(check_input, tst, result);
            if (code != kExitOk) return code;
            std::cout << check_input << ": ok, " << result.tiles->size() << " tile types\n";
            return kExitOk;
        }

        if (*compile) {
            tilelang::TileSetTemplate tst;
            tilelang::ExpansionResult result;
            int code = compile_program(compile_input, tst, result);
            if (code != kExitOk) return code;
            if (!compile_seed_out.empty()) {
                try {
                    tilelang::Assembly seed = tilelang::build_seed(tst, *result.tiles);
                    spill(compile_seed_out,
                          tilelang::write_seed(seed, *result.tiles, tst.temperature));
                } catch (const tilelang::TileError& e) {
                    printer.print(e.diag());
                    return kExitDiagnostics;
                }
            }
            spill(compile_output, tilelang::write_tds(*result.tiles));
            std::cout << compile_input << ": wrote " << result.tiles->size() << " tile types to "
                      << compile_output << "\n";
            return kExitOk;
        }

        if (*simulate) {
            printer.file = sim_tiles;
            LoadedSystem sys = load_system(sim_tiles, sim_seed);
            tilelang::RunBounds bounds;
            bounds.max_steps = sim_steps;
            if (!sim_box.empty()) bounds.box = parse_box(sim_box, sys.tas.seed);
            if (sim_rows > 0) {
                std::int64_t y0 = sys.tas.seed.placements().begin()->first.y;
                for (const auto& [c, _] : sys.tas.seed.placements()) y0 = std::min(y0, c.y);
                bounds.stop_row_y = y0 + sim_rows - 1;
            }
            auto policy = sim_policy == "random" ? tilelang::Policy::RandomSeeded
                                                 : tilelang::Policy::FirstDeterministic;
            tilelang::RunResult run = tilelang::run_sequence(sys.tas, policy, sim_rng, bounds);
            std::cout << "steps: " << run.steps << "\n"
                      << "terminal: " << (run.reached_terminal ? "yes" : "no") << "\n"
                      << "nondeterministic: " << (run.events.empty() ? "no" : "yes") << "\n";
            print_events(run.events);
            if (sim_render) std::cout << tilelang::render(run.final_assembly, sys.tas.tiles);
            if (fail_on_nondet && !run.events.empty()) return kExitNondet;
            return kExitOk;
        }

        if (*explore) {
            printer.file = exp_tiles;
            LoadedSystem sys = load_system(exp_tiles, exp_seed);
            (void)exp_jobs;
            tilelang::Box box = parse_box(exp_box, sys.tas.seed);
            tilelang::ExploreResult result = tilelang::explore_all(sys.tas, box, exp_max_states);
            std::cout << "states explored: " << result.states_explored << "\n"
                      << "terminal assemblies within box: " << result.terminal_assemblies.size() << "\n"
                      << "directed within box: " << (result.directed_within_box ? "yes" : "no") << "\n";
            if (result.witness) {
                std::cout << "contested cell: (" << result.witness->at.x << ", " << result.witness->at.y
                          << "):";
                for (const auto& n : result.witness->tile_names) std::cout << " " << n;
                std::cout << "\n";
            }
            for (std::size_t i = 0; i < result.terminal_assemblies.size(); ++i) {
                std::cout << "terminal " << (i + 1) << ":\n"
                          << tilelang::render(result.terminal_assemblies[i], sys.tas.tiles);
            }
            return kExitOk;
        }

        if (*render_cmd) {
            printer.file = ren_tiles;
            LoadedSystem sys = load_system(ren_tiles, ren_seed);
            std::cout << tilelang::render(sys.tas.seed, sys.tas.tiles);
            return kExitOk;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const tilelang::TileError& e) {
        printer.print(e.diag());
        return kExitSimulation;
    }
    return kExitUsage;
}
