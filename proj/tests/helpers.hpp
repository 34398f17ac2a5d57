#pragma once

// Shared test helpers: independent oracles (bipartition stability, direct
// frontier, scenario counting) and random generators. The oracles
// deliberately re-derive results from definitions rather than calling the
// library's optimized paths.

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tilelang/dsl.hpp"
#include "tilelang/expand.hpp"
#include "tilelang/sim.hpp"

namespace testutil {

using namespace tilelang;

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string sample_path(const std::string& name) {
    return std::string(TILELANG_SAMPLES_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// Stability oracle: enumerate every proper bipartition of the occupied set
// and check each cut weight directly against the definition.

inline bool brute_stable(const Assembly& a, const TileSet& tiles, int tau) {
    if (a.empty()) return false;
    std::vector<Coord> cells;
    for (const auto& [c, _] : a.placements()) cells.push_back(c);
    std::size_t n = cells.size();
    if (n == 1) return true;
    std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (Direction d : all_directions)
                if (step(cells[i], d) == cells[j])
                    w[i][j] = bind_strength(tiles.at(*a.tile_at(cells[i])).glue(d),
                                            tiles.at(*a.tile_at(cells[j])).glue(opposite(d)));
        }
    // Fix cell 0 on one side; enumerate subsets of the rest.
    for (std::uint64_t mask = 0; mask + 1 < (1ull << (n - 1)); ++mask) {
        // side A = {0} plus the bits of mask; B = complement (nonempty).
        long long cut = 0;
        auto side_of = [&](std::size_t i) {
            if (i == 0) return 0;
            return (mask >> (i - 1)) & 1 ? 0 : 1;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (side_of(i) != side_of(j)) cut += w[i][j];
        if (cut < tau) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Frontier oracle: dilate the occupied set by one, then test attachability
// of every tile from the definition (no caching, no shared helpers).

inline std::vector<std::pair<Coord, std::size_t>> brute_frontier(const Assembly& a,
                                                                 const TileSet& tiles, int tau) {
    std::set<Coord> boundary;
    for (const auto& [c, _] : a.placements())
        for (Direction d : all_directions)
            if (!a.occupied(step(c, d))) boundary.insert(step(c, d));
    std::vector<std::pair<Coord, std::size_t>> out;
    for (Coord pos : boundary) {
        std::vector<std::size_t> here;
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            int total = 0;
            for (Direction d : all_directions) {
                auto nb = a.tile_at(step(pos, d));
                if (nb) total += bind_strength(tiles.at(i).glue(d), tiles.at(*nb).glue(opposite(d)));
            }
            if (total >= tau) here.push_back(i);
        }
        std::sort(here.begin(), here.end(),
                  [&](std::size_t x, std::size_t y) { return tiles.at(x).name < tiles.at(y).name; });
        for (std::size_t i : here) out.emplace_back(pos, i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario-count oracle: read the IR directly and count
//   prod over input sides of (sum over joins of prod over signals |values|)
//   * prod over aux domains.

inline std::size_t brute_scenario_count(const TileSetTemplate& tst, NodeId id) {
    std::size_t total = 1;
    for (Direction d : all_directions) {
        auto joins = tst.joins_into(id, d);
        if (joins.empty()) continue;
        std::size_t side_options = 0;
        for (std::size_t ji : joins) {
            std::size_t combos = 1;
            for (const auto& [_, values] : tst.joins()[ji].signals) combos *= values.size();
            side_options += combos;
        }
        total *= side_options;
    }
    if (tst.is_template(id))
        for (const auto& aux : tst.tmpl(id).aux_inputs) total *= aux.values.size();
    return total;
}

// ---------------------------------------------------------------------------
// Random systems

// Random tile set over a small glue alphabet; binding is frequent enough to
// produce interesting assemblies.
inline TileSet random_tile_set(std::mt19937_64& rng, std::size_t max_tiles = 12) {
    static const std::vector<std::string> labels = {"a", "b", "c", "d"};
    std::uniform_int_distribution<int> label_of(0, static_cast<int>(labels.size()) - 1);
    std::uniform_int_distribution<int> strength_of(0, 2);
    std::uniform_int_distribution<std::size_t> count_of(1, max_tiles);

    TileSet ts;
    std::size_t n = count_of(rng);
    for (std::size_t i = 0; i < n; ++i) {
        TileType t;
        t.name = "t" + std::to_string(i);
        t.display_label = t.name;
        for (Direction d : all_directions) {
            int s = strength_of(rng);
            t.glue(d) = s == 0 ? Glue() : Glue(labels[static_cast<std::size_t>(label_of(rng))], s);
        }
        ts.add(std::move(t));
    }
    return ts;
}

// Grows a producible assembly from a random single-tile seed by repeatedly
// attaching random frontier elements (via the brute-force oracle, so the
// construction is independent of the simulator).
inline Assembly random_producible_assembly(std::mt19937_64& rng, const TileSet& tiles, int tau,
                                           std::size_t max_tiles) {
    std::uniform_int_distribution<std::size_t> tile_of(0, tiles.size() - 1);
    Assembly a;
    a.place({0, 0}, tile_of(rng));
    while (a.size() < max_tiles) {
        auto fr = brute_frontier(a, tiles, tau);
        if (fr.empty()) break;
        auto [pos, idx] = fr[std::uniform_int_distribution<std::size_t>(0, fr.size() - 1)(rng)];
        a.place(pos, idx);
    }
    return a;
}

// Random (possibly awkward) assembly: a random walk of placements with
// random tiles; may be unstable, may even be glue-disconnected.
inline Assembly random_assembly(std::mt19937_64& rng, const TileSet& tiles, std::size_t max_tiles) {
    std::uniform_int_distribution<std::size_t> tile_of(0, tiles.size() - 1);
    std::uniform_int_distribution<int> dir_of(0, 3);
    Assembly a;
    Coord at{0, 0};
    a.place(at, tile_of(rng));
    std::uniform_int_distribution<std::size_t> count_of(1, max_tiles);
    std::size_t want = count_of(rng);
    while (a.size() < want) {
        at = step(at, all_directions[static_cast<std::size_t>(dir_of(rng))]);
        if (!a.occupied(at)) a.place(at, tile_of(rng));
    }
    return a;
}

// ---------------------------------------------------------------------------
// The bundled counter, built programmatically through the IR operations
// (hard tiles, joins, one host-function transition, one table, one
// expression). `direct_lsb_fanout` adds the two carry joins that let the
// carry leave the lsb column directly into msb/grow.

inline TileSetTemplate build_counter_ir(bool direct_lsb_fanout) {
    TileSetTemplate tst;
    tst.name = "counter";

    HardTile lsbseed;
    lsbseed.name = "lsbseed";
    lsbseed.display_label = "1";
    lsbseed.tile_color = "red";
    lsbseed.manual_glues.emplace(Direction::W, Glue("seed", 2));
    tst.add_hard_tile(lsbseed);

    HardTile msbseed;
    msbseed.name = "msbseed";
    msbseed.display_label = "0";
    msbseed.tile_color = "red";
    msbseed.manual_glues.emplace(Direction::E, Glue("seed", 2));
    tst.add_hard_tile(msbseed);

    for (const char* n : {"lsb", "int", "msb", "grow", "new"}) {
        TileTemplate t;
        t.name = n;
        tst.add_template(t);
    }
    auto id = [&](const char* n) { return *tst.find(n); };

    auto join = [&](int strength, Direction dir, const char* from, const char* to,
                    const char* sig, SignalValues values) {
        Join j;
        j.strength = strength;
        j.direction = dir;
        j.from = id(from);
        j.to = id(to);
        j.signals.emplace(sig, std::move(values));
        tst.add_join(std::move(j));
    };

    join(2, Direction::N, "lsbseed", "lsb", "bit", {1});
    join(1, Direction::N, "msbseed", "msb", "bit", {0});
    join(2, Direction::N, "lsb", "lsb", "bit", {0, 1});
    join(1, Direction::W, "lsb", "int", "carry", {0, 1});
    if (direct_lsb_fanout) {
        join(1, Direction::W, "lsb", "msb", "carry", {0, 1});
        join(1, Direction::W, "lsb", "grow", "carry", {1});
    }
    join(1, Direction::N, "int", "int", "bit", {0, 1});
    join(1, Direction::W, "int", "int", "carry", {0, 1});
    join(1, Direction::N, "grow", "int", "bit", {0});
    join(1, Direction::W, "int", "msb", "carry", {0, 1});
    join(1, Direction::W, "int", "grow", "carry", {1});
    join(1, Direction::N, "msb", "msb", "bit", {0, 1});
    join(1, Direction::N, "msb", "grow", "bit", {1});
    join(2, Direction::W, "grow", "new", "carry", {1});
    join(1, Direction::N, "new", "msb", "bit", {1});

    // Host-function body for int, table for lsb, expression for msb.
    Transition next_bit_and_carry;
    next_bit_and_carry.inputs = {"bit", "carry"};
    next_bit_and_carry.outputs = {"bit", "carry"};
    next_bit_and_carry.host = [](const SignalValues& in) {
        std::int64_t sum = in[0].as_int() + in[1].as_int();
        return SignalValues{SignalValue(sum % 2), SignalValue(sum / 2)};
    };
    tst.add_transition("int", next_bit_and_carry);

    Transition lsb_step;
    lsb_step.inputs = {"bit"};
    lsb_step.outputs = {"bit", "carry"};
    lsb_step.table[{SignalValue(0)}] = {SignalValue(1), SignalValue(0)};
    lsb_step.table[{SignalValue(1)}] = {SignalValue(0), SignalValue(1)};
    tst.add_transition("lsb", lsb_step);

    Transition msb_step;
    msb_step.inputs = {"bit", "carry"};
    msb_step.outputs = {"bit"};
    msb_step.expression = parse_expr("(bit + carry) % 2");
    tst.add_transition("msb", msb_step);

    Chooser chooser;
    chooser.member = "grow";
    chooser.inputs = {"bit", "carry"};
    chooser.expression = parse_expr("\"grow\" if bit == 1 and carry == 1 else \"msb\"");
    tst.set_chooser(chooser);

    for (const char* n : {"lsb", "int", "msb", "grow", "new"})
        tst.set_property(n, PropertyKind::Label, parse_expr("str(bit)"));

    tst.add_seed_placement({-1, 0}, "msbseed");
    tst.add_seed_placement({0, 0}, "lsbseed");
    return tst;
}

// Compiles a .tdsl sample into a ready-to-run system.
inline TAS load_sample_system(const std::string& name) {
    Program p = parse_program(slurp(sample_path(name)));
    TileSetTemplate tst = lower(p);
    ExpansionResult result = expand(tst);
    if (!result.ok()) throw std::runtime_error("sample " + name + " failed to expand");
    TAS tas;
    tas.tiles = *result.tiles;
    tas.seed = build_seed(tst, tas.tiles);
    tas.temperature = tst.temperature;
    return tas;
}

inline std::string binary_string(std::uint64_t n) {
    std::string s;
    while (n) {
        s.insert(s.begin(), static_cast<char>('0' + (n & 1)));
        n >>= 1;
    }
    return s.empty() ? "0" : s;
}

inline std::size_t ceil_log2(std::uint64_t n_plus_1) {
    std::size_t w = 0;
    std::uint64_t v = 1;
    while (v < n_plus_1) {
        v <<= 1;
        ++w;
    }
    return w;
}

}  // namespace testutil
