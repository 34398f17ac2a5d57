#pragma once

// Semantic model of a tile-set program: hard tiles, tile templates, joins,
// transitions, choosers and per-tile property bodies. This is what the
// frontend lowers to and what the expander consumes; it can also be built
// directly as a library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tilelang/core.hpp"
#include "tilelang/expr.hpp"

namespace tilelang {

// ---------------------------------------------------------------------------
// Signal values

// A value carried by a signal: an integer or a string. Ordered with all
// integers before all strings, so every serialization is canonical.
struct SignalValue {
    std::variant<std::int64_t, std::string> v;

    SignalValue() : v(std::int64_t{0}) {}
    SignalValue(std::int64_t i) : v(i) {}
    SignalValue(int i) : v(std::int64_t{i}) {}
    SignalValue(std::string s) : v(std::move(s)) {}
    SignalValue(const char* s) : v(std::string(s)) {}

    bool is_int() const { return v.index() == 0; }
    std::int64_t as_int() const { return std::get<0>(v); }
    const std::string& as_str() const { return std::get<1>(v); }

    bool operator==(const SignalValue&) const = default;
    bool operator<(const SignalValue& o) const {
        if (v.index() != o.v.index()) return v.index() < o.v.index();
        return v < o.v;
    }
};

// Unambiguous rendering: integers bare, strings quoted. Used in glue labels
// and generated tile names, where int 1 and string "1" must stay distinct.
inline std::string to_string(const SignalValue& sv) {
    if (sv.is_int()) return std::to_string(sv.as_int());
    return quote_string(sv.as_str());
}

inline Value to_value(const SignalValue& sv) {
    if (sv.is_int()) return Value(sv.as_int());
    return Value(sv.as_str());
}

inline std::optional<SignalValue> to_signal_value(const Value& v) {
    if (v.is_int()) return SignalValue(v.as_int());
    if (v.is_str()) return SignalValue(v.as_str());
    return std::nullopt;
}

using SignalValues = std::vector<SignalValue>;  // kept sorted and unique

inline SignalValues canonical_values(SignalValues vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

struct SignalDecl {
    std::string name;
    SignalValues values;  // nonempty, canonical
};

// ---------------------------------------------------------------------------
// IR nodes

using NodeId = std::size_t;

struct HardTile {
    std::string name;
    std::string display_label;
    std::string tile_color = "white";
    std::string text_color = "black";
    std::map<Direction, Glue> manual_glues;
    SourcePos pos;
};

using HostTransitionFn = std::function<SignalValues(const SignalValues&)>;
using HostChooserFn = std::function<std::vector<std::string>(const std::map<std::string, SignalValue>&)>;

struct Transition {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;  // nonempty

    // Exactly one of these three is the body.
    std::map<SignalValues, SignalValues> table;
    ExprPtr expression;
    HostTransitionFn host;

    SourcePos pos;

    bool has_table() const { return !table.empty(); }
};

struct Chooser {
    std::string member;  // template the chooser is registered on
    std::vector<std::string> inputs;
    ExprPtr expression;
    HostChooserFn host;
    SourcePos pos;
};

enum class PropertyKind { Label, TileColor, TextColor, Concentration };

inline const char* property_name(PropertyKind k) {
    switch (k) {
        case PropertyKind::Label: return "label";
        case PropertyKind::TileColor: return "color";
        case PropertyKind::TextColor: return "textcolor";
        case PropertyKind::Concentration: return "concentration";
    }
    return "?";
}

struct TileTemplate {
    std::string name;
    std::vector<SignalDecl> aux_inputs;
    std::vector<Transition> transitions;
    std::map<PropertyKind, ExprPtr> properties;
    std::optional<Chooser> chooser;
    SourcePos pos;
};

// A directed signal channel from one node's output side to another node's
// input side. `direction` is the direction of signal travel; signal value
// sets are stored canonically (names sorted, values sorted).
struct Join {
    int strength = 1;  // 1 or 2
    Direction direction = Direction::N;
    NodeId from = 0;
    NodeId to = 0;
    std::map<std::string, SignalValues> signals;
    SourcePos pos;
};

// ---------------------------------------------------------------------------
// Tile set template

class TileSetTemplate {
public:
    std::string name = "tileset";
    int temperature = 2;

    // --- nodes -------------------------------------------------------------

    NodeId add_hard_tile(HardTile t) {
        require_fresh_name(t.name, t.pos);
        nodes_.emplace_back(std::move(t));
        index_.emplace(hard(nodes_.size() - 1).name, nodes_.size() - 1);
        return nodes_.size() - 1;
    }

    NodeId add_template(TileTemplate t) {
        require_fresh_name(t.name, t.pos);
        for (auto& aux : t.aux_inputs) {
            aux.values = canonical_values(std::move(aux.values));
            if (aux.values.empty())
                throw TileError("EmptyValueSet", "aux input '" + aux.name + "' has no values", t.pos);
        }
        nodes_.emplace_back(std::move(t));
        index_.emplace(tmpl(nodes_.size() - 1).name, nodes_.size() - 1);
        return nodes_.size() - 1;
    }

    std::size_t node_count() const { return nodes_.size(); }
    bool is_template(NodeId id) const { return std::holds_alternative<TileTemplate>(nodes_[id]); }
    bool is_hard(NodeId id) const { return !is_template(id); }
    const TileTemplate& tmpl(NodeId id) const { return std::get<TileTemplate>(nodes_[id]); }
    TileTemplate& tmpl(NodeId id) { return std::get<TileTemplate>(nodes_[id]); }
    const HardTile& hard(NodeId id) const { return std::get<HardTile>(nodes_[id]); }

    const std::string& node_name(NodeId id) const {
        return is_template(id) ? tmpl(id).name : hard(id).name;
    }
    SourcePos node_pos(NodeId id) const { return is_template(id) ? tmpl(id).pos : hard(id).pos; }

    std::optional<NodeId> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    NodeId require(const std::string& name, SourcePos pos = {}) const {
        auto id = find(name);
        if (!id) throw TileError("UnknownReference", "unknown tile or template '" + name + "'", pos);
        return *id;
    }

    // --- joins --------------------------------------------------------------

    // Records a join, deriving input/output sides. Rejects joins that would
    // make any side of any node both an input and an output, duplicate
    // endpoints, or non-singleton signal sets touching a hard tile.
    std::size_t add_join(Join j) {
        if (j.strength != 1 && j.strength != 2)
            throw TileError("BadStrength", "join strength must be 1 or 2", j.pos);
        if (j.from >= nodes_.size() || j.to >= nodes_.size())
            throw TileError("UnknownReference", "join endpoint out of range", j.pos);
        for (auto& [name, values] : j.signals) {
            values = canonical_values(std::move(values));
            if (values.empty())
                throw TileError("EmptyValueSet", "signal '" + name + "' has an empty value set", j.pos);
        }
        for (const auto& prior : joins_)
            if (prior.from == j.from && prior.to == j.to && prior.direction == j.direction)
                throw TileError("DuplicateJoin",
                                "join " + node_name(j.from) + " -> " + node_name(j.to) + " in direction " +
                                    direction_letter(j.direction) + " already declared; merge the value sets instead",
                                j.pos);
        if (is_hard(j.from) || is_hard(j.to)) {
            for (const auto& [name, values] : j.signals)
                if (values.size() != 1)
                    throw TileError("NonSingletonOnHardTile",
                                    "join touching hard tile '" +
                                        node_name(is_hard(j.from) ? j.from : j.to) +
                                        "' must give signal '" + name + "' exactly one value",
                                    j.pos);
        }

        Direction out_side = j.direction;
        Direction in_side = opposite(j.direction);
        if (has_input_side(j.from, out_side))
            throw TileError("SideConflict",
                            "side " + std::string(1, direction_letter(out_side)) + " of '" + node_name(j.from) +
                                "' is already an input side and cannot also be an output",
                            j.pos);
        if (has_output_side(j.to, in_side))
            throw TileError("SideConflict",
                            "side " + std::string(1, direction_letter(in_side)) + " of '" + node_name(j.to) +
                                "' is already an output side and cannot also be an input",
                            j.pos);
        if (is_hard(j.from)) {
            if (hard(j.from).manual_glues.count(out_side))
                throw TileError("ManualGlueOnJoinedSide",
                                "hard tile '" + node_name(j.from) + "' already glues side " +
                                    direction_letter(out_side) + " manually",
                                j.pos);
        }
        if (is_hard(j.to)) {
            if (hard(j.to).manual_glues.count(in_side))
                throw TileError("ManualGlueOnJoinedSide",
                                "hard tile '" + node_name(j.to) + "' already glues side " +
                                    direction_letter(in_side) + " manually",
                                j.pos);
        }

        joins_.push_back(std::move(j));
        const Join& stored = joins_.back();
        out_joins_[stored.from][static_cast<int>(out_side)].push_back(joins_.size() - 1);
        in_joins_[stored.to][static_cast<int>(in_side)].push_back(joins_.size() - 1);
        return joins_.size() - 1;
    }

    const std::vector<Join>& joins() const { return joins_; }

    std::vector<std::size_t> joins_into(NodeId id, Direction side) const {
        auto it = in_joins_.find(id);
        if (it == in_joins_.end()) return {};
        return it->second[static_cast<int>(side)];
    }
    std::vector<std::size_t> joins_out_of(NodeId id, Direction side) const {
        auto it = out_joins_.find(id);
        if (it == out_joins_.end()) return {};
        return it->second[static_cast<int>(side)];
    }

    bool has_input_side(NodeId id, Direction side) const { return !joins_into(id, side).empty(); }
    bool has_output_side(NodeId id, Direction side) const { return !joins_out_of(id, side).empty(); }

    std::vector<Direction> input_sides(NodeId id) const {
        std::vector<Direction> out;
        for (Direction d : all_directions)
            if (has_input_side(id, d)) out.push_back(d);
        return out;
    }
    std::vector<Direction> output_sides(NodeId id) const {
        std::vector<Direction> out;
        for (Direction d : all_directions)
            if (has_output_side(id, d)) out.push_back(d);
        return out;
    }

    // Input side carrying a given signal name, if any.
    std::optional<Direction> input_side_of_signal(NodeId id, const std::string& name) const {
        for (Direction d : all_directions)
            for (std::size_t ji : joins_into(id, d))
                if (joins_[ji].signals.count(name)) return d;
        return std::nullopt;
    }

    bool is_aux_name(NodeId id, const std::string& name) const {
        if (!is_template(id)) return false;
        for (const auto& aux : tmpl(id).aux_inputs)
            if (aux.name == name) return true;
        return false;
    }

    // All signal names a template can read: arriving on input sides plus aux.
    std::set<std::string> received_signal_names(NodeId id) const {
        std::set<std::string> out;
        for (Direction d : all_directions)
            for (std::size_t ji : joins_into(id, d))
                for (const auto& [name, _] : joins_[ji].signals) out.insert(name);
        if (is_template(id))
            for (const auto& aux : tmpl(id).aux_inputs) out.insert(aux.name);
        return out;
    }

    // Union of allowed values for an input signal across all joins into the
    // template (aux domains included).
    SignalValues input_domain(NodeId id, const std::string& name) const {
        SignalValues out;
        for (Direction d : all_directions)
            for (std::size_t ji : joins_into(id, d)) {
                auto it = joins_[ji].signals.find(name);
                if (it != joins_[ji].signals.end())
                    out.insert(out.end(), it->second.begin(), it->second.end());
            }
        if (is_template(id))
            for (const auto& aux : tmpl(id).aux_inputs)
                if (aux.name == name) out.insert(out.end(), aux.values.begin(), aux.values.end());
        return canonical_values(std::move(out));
    }

    // Signal names leaving a node on a given side (union across joins).
    std::set<std::string> output_signal_names(NodeId id, Direction side) const {
        std::set<std::string> out;
        for (std::size_t ji : joins_out_of(id, side))
            for (const auto& [name, _] : joins_[ji].signals) out.insert(name);
        return out;
    }

    // Union of allowed values for an output signal across all outgoing joins.
    SignalValues output_domain(NodeId id, const std::string& name) const {
        SignalValues out;
        for (Direction d : all_directions)
            for (std::size_t ji : joins_out_of(id, d)) {
                auto it = joins_[ji].signals.find(name);
                if (it != joins_[ji].signals.end())
                    out.insert(out.end(), it->second.begin(), it->second.end());
            }
        return canonical_values(std::move(out));
    }

    // --- transitions, choosers, properties -----------------------------------

    void add_transition(const std::string& template_name, Transition tr) {
        NodeId id = require_template(template_name, tr.pos);
        TileTemplate& t = tmpl(id);
        if (tr.outputs.empty())
            throw TileError("EmptyOutputs", "transition on '" + template_name + "' computes no outputs", tr.pos);
        for (const auto& in : tr.inputs) {
            if (!input_side_of_signal(id, in) && !is_aux_name(id, in))
                throw TileError("UnknownSignalName",
                                "transition input '" + in + "' is not received by template '" +
                                    template_name + "'",
                                tr.pos);
        }
        for (const auto& out : tr.outputs) {
            if (output_domain(id, out).empty())
                throw TileError("UnknownSignalName",
                                "transition output '" + out + "' does not appear on any join leaving template '" +
                                    template_name + "'",
                                tr.pos);
            for (const auto& prior : t.transitions)
                for (const auto& prev_out : prior.outputs)
                    if (prev_out == out)
                        throw TileError("DuplicateOutputSignal",
                                        "output signal '" + out + "' of template '" + template_name +
                                            "' is already computed by another transition",
                                        tr.pos);
        }
        t.transitions.push_back(std::move(tr));
    }

    void set_chooser(Chooser c) {
        NodeId id = require_template(c.member, c.pos);
        TileTemplate& t = tmpl(id);
        if (t.chooser)
            throw TileError("DuplicateChooser", "template '" + c.member + "' already has a chooser", c.pos);
        auto received = received_signal_names(id);
        for (const auto& in : c.inputs)
            if (!received.count(in))
                throw TileError("UnknownSignalName",
                                "chooser input '" + in + "' is not received by template '" + c.member + "'",
                                c.pos);
        t.chooser = std::move(c);
    }

    void set_property(const std::string& template_name, PropertyKind kind, ExprPtr body,
                      SourcePos pos = {}) {
        NodeId id = require_template(template_name, pos);
        TileTemplate& t = tmpl(id);
        if (t.properties.count(kind))
            throw TileError("DuplicateProperty",
                            std::string("property '") + property_name(kind) + "' of template '" +
                                template_name + "' is already set",
                            pos);
        std::set<std::string> declared = received_signal_names(id);
        for (Direction d : all_directions)
            for (const auto& name : output_signal_names(id, d)) declared.insert(name);
        std::set<std::string> free;
        free_variables(body, free);
        for (const auto& v : free)
            if (!declared.count(v))
                throw TileError("UnknownSignalName",
                                "property body references '" + v + "', which template '" + template_name +
                                    "' neither receives nor computes",
                                pos);
        t.properties[kind] = std::move(body);
    }

    // --- seed ----------------------------------------------------------------

    void add_seed_placement(Coord c, std::string tile_name, SourcePos pos = {}) {
        for (const auto& p : seed_)
            if (p.at == c)
                throw TileError("DuplicateSeedPlacement",
                                "seed already places a tile at (" + std::to_string(c.x) + ", " +
                                    std::to_string(c.y) + ")",
                                pos);
        seed_.push_back({c, std::move(tile_name), pos});
    }

    struct SeedPlacement {
        Coord at;
        std::string tile;
        SourcePos pos;
    };
    const std::vector<SeedPlacement>& seed() const { return seed_; }

    // Declaration order of all nodes.
    std::vector<NodeId> node_order() const {
        std::vector<NodeId> out(nodes_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
        return out;
    }

private:
    std::vector<std::variant<HardTile, TileTemplate>> nodes_;
    std::map<std::string, NodeId> index_;
    std::vector<Join> joins_;
    std::map<NodeId, std::array<std::vector<std::size_t>, 4>> in_joins_;
    std::map<NodeId, std::array<std::vector<std::size_t>, 4>> out_joins_;
    std::vector<SeedPlacement> seed_;

    void require_fresh_name(const std::string& n, SourcePos pos) {
        if (n.empty()) throw TileError("DuplicateName", "node name must be nonempty", pos);
        if (index_.count(n)) throw TileError("DuplicateName", "name '" + n + "' is already declared", pos);
    }

    NodeId require_template(const std::string& n, SourcePos pos) const {
        NodeId id = require(n, pos);
        if (!is_template(id))
            throw TileError("UnknownReference", "'" + n + "' is a hard tile, not a tile template", pos);
        return id;
    }
};

// Canonical one-line rendering of a join's signal block, e.g.
// "bit={0,1}" or "bit=1;carry={0,1}" (names sorted, values sorted).
inline std::string to_string(const std::map<std::string, SignalValues>& signals) {
    std::string out;
    for (const auto& [name, values] : signals) {
        if (!out.empty()) out += ';';
        out += name;
        out += '=';
        if (values.size() == 1) {
            out += to_string(values[0]);
        } else {
            out += '{';
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) out += ',';
                out += to_string(values[i]);
            }
            out += '}';
        }
    }
    return out;
}

}  // namespace tilelang
