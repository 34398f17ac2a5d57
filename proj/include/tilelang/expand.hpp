#pragma once

// Expansion of a TileSetTemplate into a concrete tile set: static checks
// (strength rule, transition coverage, side consistency), enumeration of
// input scenarios, chooser resolution of colliding templates, and the
// generation of tiles with annotated glue labels.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tilelang/core.hpp"
#include "tilelang/expr.hpp"
#include "tilelang/ir.hpp"

namespace tilelang {

using Assignment = std::map<std::string, SignalValue>;

// Annotated glue label: source node, direction of signal travel, and the
// signal assignment, e.g. "lsb;W;carry=1". Distinct sources or directions
// always yield distinct labels, so unrelated channels can never bind.
inline std::string glue_label(const std::string& source, Direction travel, const Assignment& a) {
    std::string out = source;
    out += ';';
    out += direction_letter(travel);
    out += ';';
    bool first = true;
    for (const auto& [name, value] : a) {
        if (!first) out += ',';
        first = false;
        out += name;
        out += '=';
        out += to_string(value);
    }
    return out;
}

// One concrete combination of inputs for a template: per input side the
// incoming join and the values assigned to its signals, plus aux values.
struct Scenario {
    NodeId node = 0;
    std::map<Direction, std::pair<std::size_t, Assignment>> per_side;  // side -> (join, values)
    Assignment aux;
};

// Canonical key of a scenario's input glues. Two templates collide exactly
// when they share a signature.
inline std::string signature_key(const TileSetTemplate& tst, const Scenario& sc) {
    std::string out;
    for (const auto& [side, rest] : sc.per_side) {
        const auto& [join_idx, assignment] = rest;
        const Join& j = tst.joins()[join_idx];
        if (!out.empty()) out += '|';
        out += direction_letter(side);
        out += ':';
        out += std::to_string(j.strength);
        out += ':';
        out += glue_label(tst.node_name(j.from), j.direction, assignment);
    }
    return out;
}

// Human-readable form of a signature for diagnostics, e.g.
// "E: carry=1 from int (strength 1); S: bit=1 from msb (strength 1)".
inline std::string describe_signature(const TileSetTemplate& tst, const Scenario& sc) {
    std::string out;
    for (const auto& [side, rest] : sc.per_side) {
        const auto& [join_idx, assignment] = rest;
        const Join& j = tst.joins()[join_idx];
        if (!out.empty()) out += "; ";
        out += direction_letter(side);
        out += ": ";
        bool first = true;
        for (const auto& [name, value] : assignment) {
            if (!first) out += ", ";
            first = false;
            out += name + "=" + to_string(value);
        }
        out += " from " + tst.node_name(j.from) + " (strength " + std::to_string(j.strength) + ")";
    }
    return out;
}

namespace expand_detail {

// All value assignments a join admits, in canonical order (signal names
// ascending, earlier names varying slowest).
inline std::vector<Assignment> join_assignments(const Join& j) {
    std::vector<Assignment> out = {Assignment{}};
    for (const auto& [name, values] : j.signals) {
        std::vector<Assignment> next;
        next.reserve(out.size() * values.size());
        for (const auto& base : out)
            for (const auto& v : values) {
                Assignment a = base;
                a.emplace(name, v);
                next.push_back(std::move(a));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace expand_detail

// Full cartesian product over input sides of (incoming join x value tuple),
// further multiplied by aux domains. Deterministic: sides in N,E,S,W order,
// joins in declaration order, values in canonical order.
inline std::vector<Scenario> enumerate_scenarios(const TileSetTemplate& tst, NodeId id) {
    struct SideOptions {
        Direction side;
        std::vector<std::pair<std::size_t, Assignment>> options;
    };
    std::vector<SideOptions> sides;
    for (Direction d : all_directions) {
        auto joins = tst.joins_into(id, d);
        if (joins.empty()) continue;
        SideOptions so{d, {}};
        for (std::size_t ji : joins)
            for (auto& a : expand_detail::join_assignments(tst.joins()[ji]))
                so.options.emplace_back(ji, std::move(a));
        sides.push_back(std::move(so));
    }
    const auto& aux_decls = tst.is_template(id) ? tst.tmpl(id).aux_inputs : std::vector<SignalDecl>{};

    std::vector<Scenario> out;
    std::vector<std::size_t> odo(sides.size() + aux_decls.size(), 0);
    while (true) {
        Scenario sc;
        sc.node = id;
        for (std::size_t i = 0; i < sides.size(); ++i)
            sc.per_side.emplace(sides[i].side, sides[i].options[odo[i]]);
        for (std::size_t i = 0; i < aux_decls.size(); ++i)
            sc.aux.emplace(aux_decls[i].name, aux_decls[i].values[odo[sides.size() + i]]);
        out.push_back(std::move(sc));

        // Advance the odometer, last position fastest.
        std::size_t k = odo.size();
        while (k > 0) {
            --k;
            std::size_t limit = k < sides.size() ? sides[k].options.size()
                                                 : aux_decls[k - sides.size()].values.size();
            if (++odo[k] < limit) break;
            odo[k] = 0;
            if (k == 0) return out;
        }
        if (odo.empty()) return out;
    }
}

// ---------------------------------------------------------------------------
// Static validation

inline std::vector<Diagnostic> validate_static(const TileSetTemplate& tst) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string code, std::string msg, SourcePos pos) {
        out.push_back({std::move(code), std::move(msg), pos, Severity::Error});
    };

    for (NodeId id : tst.node_order()) {
        const std::string& name = tst.node_name(id);
        SourcePos npos = tst.node_pos(id);

        // Per-side consistency, inputs and outputs alike: one strength and
        // one signal-name set per side.
        for (Direction d : all_directions) {
            for (bool incoming : {true, false}) {
                auto joins = incoming ? tst.joins_into(id, d) : tst.joins_out_of(id, d);
                if (joins.size() < 2) continue;
                const Join& first = tst.joins()[joins[0]];
                for (std::size_t k = 1; k < joins.size(); ++k) {
                    const Join& j = tst.joins()[joins[k]];
                    if (j.strength != first.strength)
                        error("MixedStrengthOnSide",
                              std::string(incoming ? "input" : "output") + " side " +
                                  direction_letter(d) + " of '" + name +
                                  "' mixes join strengths " + std::to_string(first.strength) +
                                  " and " + std::to_string(j.strength),
                              j.pos);
                    auto names_of = [](const Join& join) {
                        std::set<std::string> s;
                        for (const auto& [n, _] : join.signals) s.insert(n);
                        return s;
                    };
                    if (names_of(j) != names_of(first))
                        error("MixedSignalsOnSide",
                              std::string(incoming ? "input" : "output") + " side " +
                                  direction_letter(d) + " of '" + name +
                                  "' carries different signal sets on different joins",
                              j.pos);
                }
            }
            if (tst.has_input_side(id, d) && tst.has_output_side(id, d))
                error("SideConflict",
                      "side " + std::string(1, direction_letter(d)) + " of '" + name +
                          "' is both an input and an output",
                      npos);
        }

        if (tst.is_hard(id)) {
            // A hard tile has a single fixed glue per side, so all joins that
            // share one of its sides must agree on the rendered label.
            for (Direction d : all_directions) {
                auto outs = tst.joins_out_of(id, d);
                for (std::size_t k = 1; k < outs.size(); ++k) {
                    if (tst.joins()[outs[k]].signals != tst.joins()[outs[0]].signals)
                        error("HardTileOutputMismatch",
                              "hard tile '" + name + "' sends conflicting values from side " +
                                  std::string(1, direction_letter(d)),
                              tst.joins()[outs[k]].pos);
                }
                auto ins = tst.joins_into(id, d);
                for (std::size_t k = 1; k < ins.size(); ++k) {
                    const Join& a = tst.joins()[ins[0]];
                    const Join& b = tst.joins()[ins[k]];
                    if (a.from != b.from || a.signals != b.signals || a.strength != b.strength)
                        error("HardTileInputConflict",
                              "hard tile '" + name + "' receives conflicting glues on side " +
                                  std::string(1, direction_letter(d)),
                              b.pos);
                }
            }
            continue;
        }

        const TileTemplate& t = tst.tmpl(id);

        // Strength rule: exactly one strength-2 input side, or exactly two
        // strength-1 input sides.
        {
            std::vector<int> strengths;
            for (Direction d : all_directions) {
                auto joins = tst.joins_into(id, d);
                if (!joins.empty()) strengths.push_back(tst.joins()[joins[0]].strength);
            }
            bool ok = (strengths.size() == 1 && strengths[0] == 2) ||
                      (strengths.size() == 2 && strengths[0] == 1 && strengths[1] == 1);
            if (!ok)
                error("StrengthRuleViolation",
                      "template '" + name +
                          "' must have either one strength-2 input side or two strength-1 input sides",
                      npos);
        }

        // No signal name may arrive on two different input sides.
        {
            std::map<std::string, Direction> seen;
            for (Direction d : all_directions)
                for (std::size_t ji : tst.joins_into(id, d))
                    for (const auto& [sig, _] : tst.joins()[ji].signals) {
                        auto it = seen.find(sig);
                        if (it == seen.end()) {
                            seen.emplace(sig, d);
                        } else if (it->second != d) {
                            error("SignalOnTwoSides",
                                  "signal '" + sig + "' arrives on sides " +
                                      direction_letter(it->second) + " and " + direction_letter(d) +
                                      " of '" + name + "'",
                                  tst.joins()[ji].pos);
                        }
                    }
            // Aux names must not shadow an arriving signal.
            for (const auto& aux : t.aux_inputs)
                if (seen.count(aux.name))
                    error("SignalOnTwoSides",
                          "aux input '" + aux.name + "' of '" + name +
                              "' shadows a signal arriving on side " +
                              std::string(1, direction_letter(seen.at(aux.name))),
                          npos);
        }

        // Every output signal with more than one possible value needs exactly
        // one transition computing it. (Uniqueness is enforced at add time.)
        std::set<std::string> computed;
        for (const auto& tr : t.transitions)
            for (const auto& o : tr.outputs) computed.insert(o);
        {
            std::set<std::string> missing;
            for (Direction d : all_directions)
                for (const auto& sig : tst.output_signal_names(id, d))
                    if (tst.output_domain(id, sig).size() > 1 && !computed.count(sig))
                        missing.insert(sig);
            if (!missing.empty()) {
                std::string list;
                for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
                error("MissingTransition",
                      "template '" + name + "' has no transition computing output signal(s) " + list,
                      npos);
            }
        }

        // Transition bodies: tables must cover the full input domain with
        // in-domain outputs; expressions may only read their declared inputs.
        for (const auto& tr : t.transitions) {
            if (tr.has_table()) {
                std::vector<SignalValues> domains;
                std::size_t combos = 1;
                for (const auto& in : tr.inputs) {
                    domains.push_back(tst.input_domain(id, in));
                    combos *= domains.back().size();
                }
                std::vector<std::size_t> odo(domains.size(), 0);
                for (std::size_t n = 0; n < combos; ++n) {
                    SignalValues key;
                    for (std::size_t i = 0; i < domains.size(); ++i) key.push_back(domains[i][odo[i]]);
                    if (!tr.table.count(key)) {
                        std::string tuple;
                        for (const auto& v : key) tuple += (tuple.empty() ? "" : ", ") + to_string(v);
                        error("IncompleteTable",
                              "transition table on '" + name + "' has no entry for inputs (" + tuple + ")",
                              tr.pos);
                    }
                    for (std::size_t i = odo.size(); i-- > 0;) {
                        if (++odo[i] < domains[i].size()) break;
                        odo[i] = 0;
                    }
                }
                for (const auto& [key, result] : tr.table) {
                    if (key.size() != tr.inputs.size() || result.size() != tr.outputs.size()) {
                        error("ValueOutOfDomain",
                              "transition table entry on '" + name + "' has the wrong arity", tr.pos);
                        continue;
                    }
                    bool key_ok = true;
                    for (std::size_t i = 0; i < key.size(); ++i) {
                        SignalValues dom = tst.input_domain(id, tr.inputs[i]);
                        if (!std::binary_search(dom.begin(), dom.end(), key[i])) key_ok = false;
                    }
                    if (!key_ok)
                        error("ValueOutOfDomain",
                              "transition table on '" + name + "' lists an input tuple outside the declared domain",
                              tr.pos);
                    for (std::size_t i = 0; i < result.size(); ++i) {
                        SignalValues dom = tst.output_domain(id, tr.outputs[i]);
                        if (!std::binary_search(dom.begin(), dom.end(), result[i]))
                            error("TransitionRangeError",
                                  "transition table on '" + name + "' outputs " + to_string(result[i]) +
                                      " for signal '" + tr.outputs[i] + "', which no outgoing join allows",
                                  tr.pos);
                    }
                }
            } else if (tr.expression) {
                std::set<std::string> declared(tr.inputs.begin(), tr.inputs.end());
                std::set<std::string> free;
                free_variables(tr.expression, free);
                for (const auto& v : free)
                    if (!declared.count(v))
                        error("UnknownSignalName",
                              "transition expression on '" + name + "' references '" + v +
                                  "', which is not among its inputs",
                              tr.pos);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Collision groups and choosers

struct GroupResolution {
    std::vector<NodeId> candidates;       // templates sharing the signature
    std::vector<NodeId> chosen;           // after chooser resolution
    Assignment env;                       // union of the signature's signals
    std::string description;              // human-readable signature
};

struct Resolution {
    // signature key -> resolution, for every signature of every template
    std::map<std::string, GroupResolution> groups;
    std::vector<Diagnostic> diagnostics;
};

inline Resolution resolve_groups(const TileSetTemplate& tst,
                                 const std::map<NodeId, std::vector<Scenario>>& scenarios) {
    Resolution res;

    for (const auto& [id, list] : scenarios)
        for (const auto& sc : list) {
            std::string key = signature_key(tst, sc);
            auto& group = res.groups[key];
            if (group.candidates.empty() || group.candidates.back() != id) {
                if (std::find(group.candidates.begin(), group.candidates.end(), id) ==
                    group.candidates.end())
                    group.candidates.push_back(id);
            }
            if (group.env.empty()) {
                for (const auto& [side, rest] : sc.per_side)
                    for (const auto& [n, v] : rest.second) group.env.emplace(n, v);
                group.description = describe_signature(tst, sc);
            }
        }

    std::set<NodeId> consulted;
    std::set<std::string> reported_groups;
    for (auto& [key, group] : res.groups) {
        std::sort(group.candidates.begin(), group.candidates.end());
        if (group.candidates.size() == 1) {
            group.chosen = group.candidates;
            continue;
        }

        std::string member_list;
        for (NodeId c : group.candidates)
            member_list += (member_list.empty() ? "" : ", ") + tst.node_name(c);
        member_list = "{" + member_list + "}";

        std::vector<NodeId> with_chooser;
        for (NodeId c : group.candidates)
            if (tst.tmpl(c).chooser) with_chooser.push_back(c);

        if (with_chooser.empty()) {
            if (reported_groups.insert(member_list).second)
                res.diagnostics.push_back(
                    {"MissingChooser",
                     "templates " + member_list + " can all receive the inputs [" + group.description +
                         "]; add a chooser to one of them",
                     tst.node_pos(group.candidates.front()), Severity::Error});
            continue;
        }
        if (with_chooser.size() > 1) {
            if (reported_groups.insert(member_list).second)
                res.diagnostics.push_back(
                    {"MultipleChoosers",
                     "collision group " + member_list + " has choosers on more than one member",
                     tst.tmpl(with_chooser[1]).chooser->pos, Severity::Error});
            continue;
        }

        const Chooser& chooser = *tst.tmpl(with_chooser[0]).chooser;
        consulted.insert(with_chooser[0]);

        std::vector<std::string> names;
        try {
            if (chooser.host) {
                std::map<std::string, SignalValue> env;
                for (const auto& in : chooser.inputs) env.emplace(in, group.env.at(in));
                names = chooser.host(env);
            } else {
                Env env;
                for (const auto& in : chooser.inputs) env.emplace(in, to_value(group.env.at(in)));
                Value v = eval_expr(chooser.expression, env);
                if (v.is_str()) {
                    names.push_back(v.as_str());
                } else if (v.is_tuple()) {
                    for (const auto& el : v.as_tuple()) {
                        if (!el.is_str()) throw TileError("TypeMismatch",
                                                          "chooser tuple elements must be template names",
                                                          chooser.pos);
                        names.push_back(el.as_str());
                    }
                } else {
                    throw TileError("TypeMismatch",
                                    "chooser must return a template name or a tuple of names",
                                    chooser.pos);
                }
            }
        } catch (const TileError& e) {
            Diagnostic d = e.diag();
            d.code = "ChooserEvalError";
            d.message = "chooser on '" + chooser.member + "' failed for inputs [" + group.description +
                        "]: " + e.diag().message;
            res.diagnostics.push_back(std::move(d));
            continue;
        }

        std::set<NodeId> chosen_set;
        for (const auto& n : names) {
            auto id = tst.find(n);
            bool candidate = id && std::find(group.candidates.begin(), group.candidates.end(), *id) !=
                                       group.candidates.end();
            if (!candidate) {
                res.diagnostics.push_back(
                    {"ChooserReturnedNonCandidate",
                     "chooser on '" + chooser.member + "' returned '" + n + "', which is not in the group " +
                         member_list + " for inputs [" + group.description + "]",
                     chooser.pos, Severity::Error});
            } else {
                chosen_set.insert(*id);
            }
        }
        group.chosen.assign(chosen_set.begin(), chosen_set.end());
        if (group.chosen.empty() && names.empty())
            res.diagnostics.push_back({"ChooserReturnedNonCandidate",
                                       "chooser on '" + chooser.member + "' returned no names for inputs [" +
                                           group.description + "]",
                                       chooser.pos, Severity::Error});
    }

    for (NodeId id : tst.node_order())
        if (tst.is_template(id) && tst.tmpl(id).chooser && !consulted.count(id))
            res.diagnostics.push_back({"UnusedChooser",
                                       "chooser on '" + tst.node_name(id) +
                                           "' is never consulted: the template has no collisions",
                                       tst.tmpl(id).chooser->pos, Severity::Warning});

    return res;
}

// ---------------------------------------------------------------------------
// Tile generation

struct ExpansionResult {
    std::vector<Diagnostic> diagnostics;           // errors and warnings
    std::optional<TileSet> tiles;                  // present iff no errors
    std::map<std::string, std::size_t> tiles_per_node;
    Resolution resolution;

    bool ok() const { return tiles.has_value(); }
};

namespace expand_detail {

inline std::string tile_name_for(const TileSetTemplate& tst, const Scenario& sc) {
    std::string out = tst.node_name(sc.node);
    for (const auto& [side, rest] : sc.per_side) {
        const auto& [join_idx, assignment] = rest;
        out += '_';
        out += direction_letter(side);
        out += '=';
        out += tst.node_name(tst.joins()[join_idx].from);
        out += ':';
        bool first = true;
        for (const auto& [n, v] : assignment) {
            if (!first) out += ',';
            first = false;
            out += n + "=" + to_string(v);
        }
    }
    for (const auto& [n, v] : sc.aux) out += "_aux:" + n + "=" + to_string(v);
    return out;
}

// Runs the template's transitions on a scenario's inputs.
inline std::map<std::string, SignalValue> run_transitions(const TileSetTemplate& tst,
                                                          const Scenario& sc,
                                                          const Assignment& received) {
    const TileTemplate& t = tst.tmpl(sc.node);
    std::map<std::string, SignalValue> computed;
    for (const auto& tr : t.transitions) {
        SignalValues in_values;
        for (const auto& in : tr.inputs) in_values.push_back(received.at(in));

        SignalValues out_values;
        if (tr.has_table()) {
            auto it = tr.table.find(in_values);
            if (it == tr.table.end())
                throw TileError("IncompleteTable",
                                "transition table on '" + t.name + "' has no entry for the scenario inputs",
                                tr.pos);
            out_values = it->second;
        } else if (tr.host) {
            out_values = tr.host(in_values);
        } else {
            Env env;
            for (std::size_t i = 0; i < tr.inputs.size(); ++i)
                env.emplace(tr.inputs[i], to_value(in_values[i]));
            Value v = eval_expr(tr.expression, env);
            ValueList parts = v.is_tuple() ? v.as_tuple() : ValueList{v};
            for (const auto& p : parts) {
                auto sv = to_signal_value(p);
                if (!sv)
                    throw TileError("TransitionRangeError",
                                    "transition on '" + t.name + "' produced a " + type_name(p) +
                                        "; signal values are ints or strings",
                                    tr.pos);
                out_values.push_back(*sv);
            }
        }
        if (out_values.size() != tr.outputs.size())
            throw TileError("TransitionRangeError",
                            "transition on '" + t.name + "' produced " + std::to_string(out_values.size()) +
                                " values for " + std::to_string(tr.outputs.size()) + " outputs",
                            tr.pos);
        // Out-of-domain values surface as OutputNotCoveredByJoin when the
        // side's glue is assembled; tables are range-checked statically.
        for (std::size_t i = 0; i < out_values.size(); ++i) computed[tr.outputs[i]] = out_values[i];
    }
    return computed;
}

inline TileType instantiate(const TileSetTemplate& tst, const Scenario& sc) {
    const TileTemplate& t = tst.tmpl(sc.node);

    Assignment received = sc.aux;
    for (const auto& [side, rest] : sc.per_side)
        for (const auto& [n, v] : rest.second) received.emplace(n, v);

    std::map<std::string, SignalValue> computed = run_transitions(tst, sc, received);

    TileType tile;
    tile.name = tile_name_for(tst, sc);

    // Input glues, from each side's incoming join.
    for (const auto& [side, rest] : sc.per_side) {
        const auto& [join_idx, assignment] = rest;
        const Join& j = tst.joins()[join_idx];
        tile.glue(side) = Glue(glue_label(tst.node_name(j.from), j.direction, assignment), j.strength);
    }

    // Output glues, from the computed (or constant) signal values.
    for (Direction d : all_directions) {
        auto out_joins = tst.joins_out_of(sc.node, d);
        if (out_joins.empty()) continue;
        Assignment values;
        for (const auto& sig : tst.output_signal_names(sc.node, d)) {
            auto it = computed.find(sig);
            if (it != computed.end()) {
                values.emplace(sig, it->second);
            } else {
                SignalValues dom = tst.output_domain(sc.node, sig);
                // validate_static guarantees multi-valued signals are computed
                values.emplace(sig, dom.front());
            }
        }
        bool covered = false;
        for (std::size_t ji : out_joins) {
            const Join& j = tst.joins()[ji];
            bool all_in = true;
            for (const auto& [n, v] : values) {
                auto it = j.signals.find(n);
                if (it == j.signals.end() || !std::binary_search(it->second.begin(), it->second.end(), v))
                    all_in = false;
            }
            if (all_in) covered = true;
        }
        if (!covered) {
            std::string tuple;
            for (const auto& [n, v] : values) tuple += (tuple.empty() ? "" : ", ") + n + "=" + to_string(v);
            throw TileError("OutputNotCoveredByJoin",
                            "template '" + t.name + "' computed (" + tuple + ") on side " +
                                direction_letter(d) + ", which no join leaving that side allows",
                            t.pos);
        }
        tile.glue(d) = Glue(glue_label(t.name, d, values), tst.joins()[out_joins[0]].strength);
    }

    // Properties. The environment is the received signals plus the computed
    // outputs; outputs shadow inputs of the same name.
    Env prop_env;
    for (const auto& [n, v] : received) prop_env[n] = to_value(v);
    for (const auto& [n, v] : computed) prop_env[n] = to_value(v);
    // Constant output signals are visible to properties too.
    for (Direction d : all_directions)
        for (const auto& sig : tst.output_signal_names(sc.node, d))
            if (!prop_env.count(sig)) {
                SignalValues dom = tst.output_domain(sc.node, sig);
                if (dom.size() == 1) prop_env[sig] = to_value(dom.front());
            }

    auto eval_property = [&](PropertyKind kind) -> std::optional<Value> {
        auto it = t.properties.find(kind);
        if (it == t.properties.end()) return std::nullopt;
        try {
            return eval_expr(it->second, prop_env);
        } catch (const TileError& e) {
            throw TileError("PropertyEvalError",
                            std::string("property '") + property_name(kind) + "' of template '" + t.name +
                                "' failed for tile '" + tile.name + "': " + e.diag().message,
                            e.diag().pos);
        }
    };
    auto want_string = [&](PropertyKind kind, const std::string& fallback) -> std::string {
        auto v = eval_property(kind);
        if (!v) return fallback;
        if (!v->is_str())
            throw TileError("TypeMismatch",
                            std::string("property '") + property_name(kind) + "' of template '" + t.name +
                                "' must evaluate to a string, got " + type_name(*v),
                            t.pos);
        return v->as_str();
    };

    tile.display_label = want_string(PropertyKind::Label, t.name);
    tile.tile_color = want_string(PropertyKind::TileColor, "white");
    tile.text_color = want_string(PropertyKind::TextColor, "black");
    if (auto v = eval_property(PropertyKind::Concentration)) {
        if (!v->is_int() || v->as_int() <= 0)
            throw TileError("TypeMismatch",
                            "concentration of template '" + t.name + "' must be a positive integer, got " +
                                to_string(*v),
                            t.pos);
        tile.concentration = Rational{v->as_int(), 1};
    }
    return tile;
}

inline TileType instantiate_hard(const TileSetTemplate& tst, NodeId id) {
    const HardTile& h = tst.hard(id);
    TileType tile;
    tile.name = h.name;
    tile.display_label = h.display_label;
    tile.tile_color = h.tile_color;
    tile.text_color = h.text_color;
    for (const auto& [d, g] : h.manual_glues) tile.glue(d) = g;
    for (Direction d : all_directions) {
        auto outs = tst.joins_out_of(id, d);
        if (!outs.empty()) {
            const Join& j = tst.joins()[outs[0]];
            Assignment a;
            for (const auto& [n, vs] : j.signals) a.emplace(n, vs.front());
            tile.glue(d) = Glue(glue_label(h.name, d, a), j.strength);
        }
        auto ins = tst.joins_into(id, d);
        if (!ins.empty()) {
            const Join& j = tst.joins()[ins[0]];
            Assignment a;
            for (const auto& [n, vs] : j.signals) a.emplace(n, vs.front());
            tile.glue(d) = Glue(glue_label(tst.node_name(j.from), j.direction, a), j.strength);
        }
    }
    return tile;
}

}  // namespace expand_detail

// Full pipeline: static validation, scenario enumeration, group resolution,
// tile generation. Warnings are passed through; any error suppresses the
// tile set.
inline ExpansionResult expand(const TileSetTemplate& tst) {
    ExpansionResult result;
    result.diagnostics = validate_static(tst);
    if (has_errors(result.diagnostics)) return result;

    std::map<NodeId, std::vector<Scenario>> scenarios;
    for (NodeId id : tst.node_order())
        if (tst.is_template(id)) scenarios.emplace(id, enumerate_scenarios(tst, id));

    result.resolution = resolve_groups(tst, scenarios);
    for (const auto& d : result.resolution.diagnostics) result.diagnostics.push_back(d);
    if (has_errors(result.diagnostics)) return result;

    TileSet tiles;
    tiles.temperature = tst.temperature;
    try {
        for (NodeId id : tst.node_order()) {
            std::size_t before = tiles.size();
            if (tst.is_hard(id)) {
                tiles.add(expand_detail::instantiate_hard(tst, id));
            } else {
                for (const auto& sc : scenarios.at(id)) {
                    const auto& group = result.resolution.groups.at(signature_key(tst, sc));
                    if (std::find(group.chosen.begin(), group.chosen.end(), id) == group.chosen.end())
                        continue;  // ceded to another template by a chooser
                    tiles.add(expand_detail::instantiate(tst, sc));
                }
            }
            result.tiles_per_node[tst.node_name(id)] = tiles.size() - before;
        }
    } catch (const TileError& e) {
        result.diagnostics.push_back(e.diag());
        return result;
    }
    result.tiles = std::move(tiles);
    return result;
}

// Builds and checks the seed assembly declared by the template against the
// generated tile set.
inline Assembly build_seed(const TileSetTemplate& tst, const TileSet& tiles) {
    if (tst.seed().empty()) throw TileError("EmptySeed", "program declares no seed");
    Assembly seed;
    for (const auto& p : tst.seed()) {
        auto idx = tiles.find(p.tile);
        if (!idx) throw TileError("UnknownTile", "seed references unknown tile '" + p.tile + "'", p.pos);
        seed.place(p.at, *idx);
    }
    if (!is_tau_stable(seed, tiles, tst.temperature))
        throw TileError("SeedUnstable", "the declared seed assembly is not stable at temperature " +
                                            std::to_string(tst.temperature));
    return seed;
}

}  // namespace tilelang
