#pragma once

// Temperature-tau assembly dynamics: frontier computation, assembly
// sequences with a nondeterminism monitor, bounded exhaustive exploration
// for directedness checking, and ASCII rendering.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tilelang/core.hpp"

namespace tilelang {

struct TAS {
    TileSet tiles;
    Assembly seed;
    int temperature = 2;
};

// A tile may be stably added at an empty position when the facing glues of
// its occupied neighbors bind with total strength >= tau.
inline bool attachable(const Assembly& assembly, const TileSet& tiles, Coord pos,
                       const TileType& t, int tau) {
    if (assembly.occupied(pos)) return false;
    int total = 0;
    for (Direction d : all_directions) {
        auto n = assembly.tile_at(step(pos, d));
        if (n) total += bind_strength(t.glue(d), tiles.at(*n).glue(opposite(d)));
    }
    return total >= tau;
}

// Rectangular growth window: x in [x0, x0+width), y in [y0, y0+height).
struct Box {
    std::int64_t x0 = 0, y0 = 0;
    std::int64_t width = 0, height = 0;

    bool contains(Coord c) const {
        return c.x >= x0 && c.x < x0 + width && c.y >= y0 && c.y < y0 + height;
    }
};

struct NondetEvent {
    std::size_t step = 0;
    Coord at;
    std::vector<std::string> tile_names;  // >= 2 distinct names, sorted
};

// Direct (cache-free) frontier: all (position, tile) pairs attachable to the
// assembly, sorted by coordinate then tile name.
inline std::vector<std::pair<Coord, std::size_t>> frontier_of(const Assembly& assembly,
                                                              const TileSet& tiles, int tau) {
    std::set<Coord> boundary;
    for (const auto& [c, _] : assembly.placements())
        for (Direction d : all_directions) {
            Coord n = step(c, d);
            if (!assembly.occupied(n)) boundary.insert(n);
        }
    std::vector<std::pair<Coord, std::size_t>> out;
    for (Coord pos : boundary) {
        std::vector<std::size_t> here;
        for (std::size_t i = 0; i < tiles.size(); ++i)
            if (attachable(assembly, tiles, pos, tiles.at(i), tau)) here.push_back(i);
        std::sort(here.begin(), here.end(), [&](std::size_t a, std::size_t b) {
            return tiles.at(a).name < tiles.at(b).name;
        });
        for (std::size_t i : here) out.emplace_back(pos, i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// A growing assembly with an incrementally maintained frontier.

class Simulation {
public:
    Simulation(TAS tas) : tas_(std::move(tas)), assembly_(tas_.seed) {
        if (assembly_.empty() || !is_tau_stable(assembly_, tas_.tiles, tas_.temperature))
            throw TileError("SeedUnstable", "seed assembly is empty or not stable at temperature " +
                                                std::to_string(tas_.temperature));
        for (const auto& [c, _] : assembly_.placements())
            for (Direction d : all_directions) refresh(step(c, d));
    }

    const Assembly& assembly() const { return assembly_; }
    const TAS& tas() const { return tas_; }

    // Attachable pairs, sorted by coordinate then tile name.
    std::vector<std::pair<Coord, std::size_t>> frontier() const {
        std::vector<std::pair<Coord, std::size_t>> out;
        for (const auto& [pos, cands] : frontier_) {
            std::vector<std::size_t> sorted = cands;
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return tas_.tiles.at(a).name < tas_.tiles.at(b).name;
            });
            for (std::size_t i : sorted) out.emplace_back(pos, i);
        }
        return out;
    }

    bool terminal() const { return frontier_.empty(); }

    void attach(Coord pos, std::size_t tile_index) {
        assembly_.place(pos, tile_index);
        frontier_.erase(pos);
        // Glues are only ever added, so attachability can change only at the
        // four neighbors of the new tile.
        for (Direction d : all_directions) refresh(step(pos, d));
    }

private:
    TAS tas_;
    Assembly assembly_;
    std::map<Coord, std::vector<std::size_t>> frontier_;

    void refresh(Coord pos) {
        if (assembly_.occupied(pos)) {
            frontier_.erase(pos);
            return;
        }
        std::vector<std::size_t> cands;
        for (std::size_t i = 0; i < tas_.tiles.size(); ++i)
            if (attachable(assembly_, tas_.tiles, pos, tas_.tiles.at(i), tas_.temperature))
                cands.push_back(i);
        if (cands.empty()) frontier_.erase(pos);
        else frontier_[pos] = std::move(cands);
    }
};

// ---------------------------------------------------------------------------
// Assembly sequences

enum class Policy { FirstDeterministic, RandomSeeded };

struct RunBounds {
    std::size_t max_steps = 1000000;
    std::optional<Box> box;
    // Stop once no attachment is possible at y <= stop_row_y (and never
    // attach above it). Used by `simulate --rows`.
    std::optional<std::int64_t> stop_row_y;
};

struct RunResult {
    std::vector<std::pair<Coord, std::string>> sequence;
    Assembly final_assembly;
    std::vector<NondetEvent> events;
    bool reached_terminal = false;
    std::size_t steps = 0;
};

// Grows the seed one tile at a time under the given policy, recording a
// NondetEvent the first time each position is seen contested (two or more
// distinct attachable tile types). Optionally audits full tau-stability
// every `audit_every` steps.
inline RunResult run_sequence(const TAS& tas, Policy policy, std::uint64_t rng_seed,
                              const RunBounds& bounds, std::size_t audit_every = 0) {
    Simulation sim(tas);
    std::mt19937_64 rng(rng_seed);
    RunResult result;
    std::set<Coord> reported;

    while (result.steps < bounds.max_steps) {
        auto pool = sim.frontier();
        if (bounds.box || bounds.stop_row_y) {
            std::erase_if(pool, [&](const auto& pr) {
                if (bounds.box && !bounds.box->contains(pr.first)) return true;
                if (bounds.stop_row_y && pr.first.y > *bounds.stop_row_y) return true;
                return false;
            });
        }
        if (pool.empty()) {
            result.reached_terminal = sim.terminal();
            break;
        }

        for (std::size_t i = 0; i < pool.size();) {
            std::size_t j = i;
            while (j < pool.size() && pool[j].first == pool[i].first) ++j;
            if (j - i >= 2 && !reported.count(pool[i].first)) {
                std::set<std::string> names;
                for (std::size_t k = i; k < j; ++k)
                    names.insert(tas.tiles.at(pool[k].second).name);
                if (names.size() >= 2) {
                    reported.insert(pool[i].first);
                    result.events.push_back(
                        {result.steps, pool[i].first, {names.begin(), names.end()}});
                }
            }
            i = j;
        }

        std::size_t pick = 0;
        if (policy == Policy::RandomSeeded)
            pick = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
        auto [pos, tile_index] = pool[pick];
        sim.attach(pos, tile_index);
        result.sequence.emplace_back(pos, tas.tiles.at(tile_index).name);
        ++result.steps;

        if (audit_every && result.steps % audit_every == 0 &&
            !is_tau_stable(sim.assembly(), tas.tiles, tas.temperature))
            throw TileError("StabilityAuditFailed",
                            "assembly became unstable after step " + std::to_string(result.steps));
    }
    result.final_assembly = sim.assembly();
    if (sim.terminal()) result.reached_terminal = true;
    return result;
}

// ---------------------------------------------------------------------------
// Exhaustive exploration within a box

struct ExploreResult {
    std::vector<Assembly> terminal_assemblies;  // terminal within the box, canonical order
    bool directed_within_box = false;
    std::optional<NondetEvent> witness;  // first contested position seen
    std::size_t states_explored = 0;
};

// Breadth-first enumeration of every producible assembly whose growth stays
// inside the box. States are canonicalized by their placement map, so
// assembly sequences differing only in order collapse.
inline ExploreResult explore_all(const TAS& tas, const Box& box, std::size_t max_states = 250000) {
    if (tas.seed.empty() || !is_tau_stable(tas.seed, tas.tiles, tas.temperature))
        throw TileError("SeedUnstable", "seed assembly is empty or not stable at temperature " +
                                            std::to_string(tas.temperature));

    auto key_of = [](const Assembly& a) {
        std::string key;
        for (const auto& [c, t] : a.placements()) {
            key += std::to_string(c.x) + "," + std::to_string(c.y) + ":" + std::to_string(t) + ";";
        }
        return key;
    };

    ExploreResult result;
    std::set<std::string> seen;
    std::vector<std::pair<Assembly, std::size_t>> queue;  // (state, depth)
    queue.emplace_back(tas.seed, 0);
    seen.insert(key_of(tas.seed));
    std::map<std::string, Assembly> terminals;

    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [state, depth] = queue[head];
        ++result.states_explored;

        auto pool = frontier_of(state, tas.tiles, tas.temperature);
        std::erase_if(pool, [&](const auto& pr) { return !box.contains(pr.first); });

        if (pool.empty()) {
            terminals.emplace(key_of(state), state);
            continue;
        }

        if (!result.witness) {
            for (std::size_t i = 0; i < pool.size();) {
                std::size_t j = i;
                while (j < pool.size() && pool[j].first == pool[i].first) ++j;
                std::set<std::string> names;
                for (std::size_t k = i; k < j; ++k) names.insert(tas.tiles.at(pool[k].second).name);
                if (names.size() >= 2) {
                    result.witness = NondetEvent{depth, pool[i].first, {names.begin(), names.end()}};
                    break;
                }
                i = j;
            }
        }

        for (const auto& [pos, tile_index] : pool) {
            Assembly next = state;
            next.place(pos, tile_index);
            if (seen.insert(key_of(next)).second) {
                if (seen.size() > max_states)
                    throw TileError("ExplosionBudgetExceeded",
                                    "state space exceeds " + std::to_string(max_states) +
                                        " assemblies; shrink the box or raise the budget");
                queue.emplace_back(std::move(next), depth + 1);
            }
        }
    }

    for (auto& [_, a] : terminals) result.terminal_assemblies.push_back(std::move(a));
    result.directed_within_box = result.terminal_assemblies.size() == 1;
    return result;
}

// ---------------------------------------------------------------------------
// Rendering

// Fixed-width ASCII grid, one bracketed cell per tile, northmost row first.
inline std::string render(const Assembly& assembly, const TileSet& tiles) {
    if (assembly.empty()) return "";
    std::int64_t xmin = assembly.placements().begin()->first.x, xmax = xmin;
    std::int64_t ymin = assembly.placements().begin()->first.y, ymax = ymin;
    std::size_t cell = 1;
    for (const auto& [c, t] : assembly.placements()) {
        xmin = std::min(xmin, c.x);
        xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y);
        ymax = std::max(ymax, c.y);
        cell = std::max(cell, tiles.at(t).display_label.size());
    }
    std::string out;
    for (std::int64_t y = ymax; y >= ymin; --y) {
        std::string line;
        for (std::int64_t x = xmin; x <= xmax; ++x) {
            auto t = assembly.tile_at({x, y});
            if (t) {
                const std::string& label = tiles.at(*t).display_label;
                line += '[';
                line += label;
                line.append(cell - label.size(), ' ');
                line += ']';
            } else {
                line.append(cell + 2, ' ');
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    }
    return out;
}

// Concatenated labels of row y, west to east.
inline std::string row_text(const Assembly& assembly, const TileSet& tiles, std::int64_t y) {
    std::string out;
    for (const auto& [c, t] : assembly.placements())
        if (c.y == y) out += tiles.at(t).display_label;
    return out;
}

// Number of tiles in row y.
inline std::size_t row_width(const Assembly& assembly, std::int64_t y) {
    std::size_t n = 0;
    for (const auto& [c, _] : assembly.placements())
        if (c.y == y) ++n;
    return n;
}

}  // namespace tilelang
