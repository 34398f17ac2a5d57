#pragma once

// Ground-truth model of temperature-tau tile assembly: glues, tile types,
// assemblies over the integer grid, binding graphs and tau-stability.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tilelang/diag.hpp"

namespace tilelang {

// ---------------------------------------------------------------------------
// Directions

enum class Direction : int { N = 0, E = 1, S = 2, W = 3 };

inline constexpr std::array<Direction, 4> all_directions = {Direction::N, Direction::E,
                                                            Direction::S, Direction::W};

inline constexpr char direction_letter(Direction d) {
    constexpr char letters[4] = {'N', 'E', 'S', 'W'};
    return letters[static_cast<int>(d)];
}

inline Direction opposite(Direction d) {
    switch (d) {
        case Direction::N: return Direction::S;
        case Direction::E: return Direction::W;
        case Direction::S: return Direction::N;
        case Direction::W: return Direction::E;
    }
    return Direction::N;  // unreachable
}

struct Coord {
    std::int64_t x = 0;
    std::int64_t y = 0;

    auto operator<=>(const Coord&) const = default;
};

// Unit vector for a direction: N=(0,1), E=(1,0), S=(0,-1), W=(-1,0).
inline Coord unit_vector(Direction d) {
    switch (d) {
        case Direction::N: return {0, 1};
        case Direction::E: return {1, 0};
        case Direction::S: return {0, -1};
        case Direction::W: return {-1, 0};
    }
    return {0, 0};
}

inline Coord step(Coord c, Direction d) {
    Coord u = unit_vector(d);
    return {c.x + u.x, c.y + u.y};
}

// ---------------------------------------------------------------------------
// Glues and tiles

// A (label, strength) pair. The null glue is ("", 0); non-null glues have a
// nonempty label and strength 1 or 2. Mixed forms are rejected.
struct Glue {
    std::string label;
    int strength = 0;

    Glue() = default;

    Glue(std::string label_, int strength_) : label(std::move(label_)), strength(strength_) {
        if (label.empty() != (strength == 0) || strength < 0 || strength > 2)
            throw TileError("BadGlue", "glue must be null (\"\", 0) or have a nonempty label and strength 1 or 2, got (\"" +
                                           label + "\", " + std::to_string(strength) + ")");
    }

    bool is_null() const { return strength == 0; }

    bool operator==(const Glue&) const = default;
};

// Strength with which two facing glues bind: a.strength when the pairs are
// equal and non-null, otherwise 0.
inline int bind_strength(const Glue& a, const Glue& b) {
    if (a.is_null() || b.is_null()) return 0;
    return (a.label == b.label && a.strength == b.strength) ? a.strength : 0;
}

// Positive rational, used only for tile concentrations.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    bool operator==(const Rational&) const = default;
};

inline std::string to_string(const Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

struct TileType {
    std::string name;
    std::string display_label;
    std::string tile_color = "white";
    std::string text_color = "black";
    std::optional<Rational> concentration;
    std::array<Glue, 4> glues;  // indexed by Direction

    const Glue& glue(Direction d) const { return glues[static_cast<int>(d)]; }
    Glue& glue(Direction d) { return glues[static_cast<int>(d)]; }

    bool operator==(const TileType&) const = default;
};

// An ordered collection of uniquely named tile types.
class TileSet {
public:
    int temperature = 2;

    // Adds a tile. Re-adding a byte-identical tile is a no-op; a different
    // tile under an existing name is an error.
    void add(TileType t) {
        auto it = index_.find(t.name);
        if (it != index_.end()) {
            if (tiles_[it->second] == t) return;
            throw TileError("ConflictingTileName",
                            "two distinct tile types named '" + t.name + "'");
        }
        index_.emplace(t.name, tiles_.size());
        tiles_.push_back(std::move(t));
    }

    const std::vector<TileType>& tiles() const { return tiles_; }
    std::size_t size() const { return tiles_.size(); }

    const TileType& at(std::size_t i) const { return tiles_.at(i); }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const TileSet& o) const {
        return temperature == o.temperature && tiles_ == o.tiles_;
    }

private:
    std::vector<TileType> tiles_;
    std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Assemblies

// Partial map from grid coordinates to tile types (stored as indices into a
// TileSet owned by the caller).
class Assembly {
public:
    Assembly() = default;

    void place(Coord c, std::size_t tile_index) { placements_[c] = tile_index; }

    bool occupied(Coord c) const { return placements_.count(c) != 0; }

    std::optional<std::size_t> tile_at(Coord c) const {
        auto it = placements_.find(c);
        if (it == placements_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return placements_.size(); }
    bool empty() const { return placements_.empty(); }

    const std::map<Coord, std::size_t>& placements() const { return placements_; }

    bool operator==(const Assembly&) const = default;

private:
    std::map<Coord, std::size_t> placements_;
};

// Undirected weighted grid graph over the occupied coordinates of an
// assembly; an edge means the facing glues bind with positive strength.
struct BindingGraph {
    std::vector<Coord> vertices;  // sorted
    struct Edge {
        std::size_t a, b;  // indices into vertices, a < b
        int weight;
    };
    std::vector<Edge> edges;
};

inline BindingGraph binding_graph(const Assembly& assembly, const TileSet& tiles) {
    BindingGraph g;
    std::map<Coord, std::size_t> vertex_index;
    for (const auto& [coord, _] : assembly.placements()) {
        vertex_index.emplace(coord, g.vertices.size());
        g.vertices.push_back(coord);
    }
    for (const auto& [coord, tile_idx] : assembly.placements()) {
        // Visit each adjacent pair once, via its N and E neighbors.
        for (Direction d : {Direction::N, Direction::E}) {
            auto other = assembly.tile_at(step(coord, d));
            if (!other) continue;
            int w = bind_strength(tiles.at(tile_idx).glue(d), tiles.at(*other).glue(opposite(d)));
            if (w > 0) {
                std::size_t a = vertex_index.at(coord);
                std::size_t b = vertex_index.at(step(coord, d));
                g.edges.push_back({std::min(a, b), std::max(a, b), w});
            }
        }
    }
    return g;
}

// Whether the occupied set is connected under grid adjacency (ignoring glues).
inline bool grid_connected(const Assembly& assembly) {
    if (assembly.empty()) return false;
    std::vector<Coord> stack = {assembly.placements().begin()->first};
    std::map<Coord, bool> seen = {{stack[0], true}};
    while (!stack.empty()) {
        Coord c = stack.back();
        stack.pop_back();
        for (Direction d : all_directions) {
            Coord n = step(c, d);
            if (assembly.occupied(n) && !seen[n]) {
                seen[n] = true;
                stack.push_back(n);
            }
        }
    }
    std::size_t reached = 0;
    for (const auto& [_, v] : seen) reached += v ? 1 : 0;
    return reached == assembly.size();
}

namespace detail {

// Stoer-Wagner global minimum cut on a small weighted graph given as an
// adjacency matrix. Returns 0 for disconnected graphs. n >= 2.
inline long long stoer_wagner(std::vector<std::vector<long long>> w) {
    std::size_t n = w.size();
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;

    long long best = -1;
    while (active.size() > 1) {
        // Maximum adjacency search from active[0].
        std::vector<long long> weight_to_set(active.size(), 0);
        std::vector<bool> added(active.size(), false);
        std::size_t prev = 0, last = 0;
        for (std::size_t it = 0; it < active.size(); ++it) {
            std::size_t sel = active.size();
            for (std::size_t i = 0; i < active.size(); ++i)
                if (!added[i] && (sel == active.size() || weight_to_set[i] > weight_to_set[sel]))
                    sel = i;
            added[sel] = true;
            prev = last;
            last = sel;
            for (std::size_t i = 0; i < active.size(); ++i)
                if (!added[i]) weight_to_set[i] += w[active[sel]][active[i]];
        }
        long long cut_of_phase = weight_to_set[last];
        if (best < 0 || cut_of_phase < best) best = cut_of_phase;
        // Merge `last` into `prev`.
        std::size_t keep = active[prev], gone = active[last];
        for (std::size_t i = 0; i < n; ++i) {
            w[keep][i] += w[gone][i];
            w[i][keep] += w[i][gone];
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(last));
    }
    return best;
}

}  // namespace detail

// Weight of a global minimum cut of the binding graph. Singleton assemblies
// have no cuts; callers treat them separately.
inline long long min_cut_weight(const BindingGraph& g) {
    std::size_t n = g.vertices.size();
    if (n < 2) return -1;
    std::vector<std::vector<long long>> w(n, std::vector<long long>(n, 0));
    for (const auto& e : g.edges) {
        w[e.a][e.b] += e.weight;
        w[e.b][e.a] += e.weight;
    }
    return detail::stoer_wagner(std::move(w));
}

// tau-stability: every cut of the binding graph has weight >= tau.
// Singletons are stable by convention; an assembly whose occupied set is not
// grid-connected is reported unstable immediately.
inline bool is_tau_stable(const Assembly& assembly, const TileSet& tiles, int tau) {
    if (assembly.empty()) return false;
    if (assembly.size() == 1) return true;
    if (!grid_connected(assembly)) return false;
    return min_cut_weight(binding_graph(assembly, tiles)) >= tau;
}

}  // namespace tilelang
