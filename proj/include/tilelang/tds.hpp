#pragma once

// Tile-set (.tds) and seed (.seed) file formats.
//
// A .tds file is a sequence of blocks, one per tile, each a fixed keyword
// sequence ending in CREATE:
//
//   TILENAME <name>
//   LABEL <display label>
//   TILECOLOR <color>
//   TEXTCOLOR <color>
//   NORTHBIND <strength> / EASTBIND / SOUTHBIND / WESTBIND
//   NORTHLABEL <glue label> / EASTLABEL / SOUTHLABEL / WESTLABEL
//   CONCENTRATION <n or n/d>      (only when set)
//   CREATE
//
// LABEL lines carry their value verbatim; a null glue renders as the bare
// keyword. Files are UTF-8 with LF line endings and a trailing newline.
//
// A .seed file is `temperature <tau>` followed by one `<x> <y> <tilename>`
// line per placement, sorted by (y, x).

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tilelang/core.hpp"

namespace tilelang {

namespace tds_detail {

inline const std::vector<std::pair<std::string, Direction>>& bind_keys() {
    static const std::vector<std::pair<std::string, Direction>> k = {
        {"NORTHBIND", Direction::N},
        {"EASTBIND", Direction::E},
        {"SOUTHBIND", Direction::S},
        {"WESTBIND", Direction::W},
    };
    return k;
}
inline const std::vector<std::pair<std::string, Direction>>& label_keys() {
    static const std::vector<std::pair<std::string, Direction>> k = {
        {"NORTHLABEL", Direction::N},
        {"EASTLABEL", Direction::E},
        {"SOUTHLABEL", Direction::S},
        {"WESTLABEL", Direction::W},
    };
    return k;
}

inline void check_serializable(const std::string& field, const std::string& value) {
    for (unsigned char c : value)
        if (c < 0x20)
            throw TileError("UnserializableField",
                            field + " contains a control character and cannot be serialized");
}

inline void emit(std::string& out, const std::string& keyword, const std::string& value) {
    out += keyword;
    if (!value.empty()) {
        out += ' ';
        out += value;
    }
    out += '\n';
}

}  // namespace tds_detail

inline std::string write_tds(const TileSet& ts) {
    using namespace tds_detail;
    std::string out;
    bool first = true;
    for (const auto& t : ts.tiles()) {
        if (!first) out += '\n';
        first = false;
        if (t.name.empty()) throw TileError("UnserializableField", "tile name must be nonempty");
        check_serializable("tile name", t.name);
        if (t.name.find(' ') != std::string::npos)
            throw TileError("UnserializableField", "tile name '" + t.name + "' contains a space");
        check_serializable("display label", t.display_label);
        check_serializable("tile color", t.tile_color);
        check_serializable("text color", t.text_color);
        for (Direction d : all_directions) check_serializable("glue label", t.glue(d).label);

        emit(out, "TILENAME", t.name);
        emit(out, "LABEL", t.display_label);
        emit(out, "TILECOLOR", t.tile_color);
        emit(out, "TEXTCOLOR", t.text_color);
        for (const auto& [kw, d] : bind_keys()) emit(out, kw, std::to_string(t.glue(d).strength));
        for (const auto& [kw, d] : label_keys()) emit(out, kw, t.glue(d).label);
        if (t.concentration) emit(out, "CONCENTRATION", to_string(*t.concentration));
        out += "CREATE\n";
    }
    return out;
}

inline TileSet read_tds(const std::string& text) {
    using namespace tds_detail;
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    auto fail = [](std::size_t line_no, const std::string& msg) -> TileError {
        return TileError("FormatError", msg, SourcePos{static_cast<int>(line_no + 1), 1});
    };
    auto parse_line = [&](std::size_t i, const std::string& keyword) -> std::string {
        if (i >= lines.size()) throw fail(lines.size(), "unexpected end of file, expected " + keyword);
        const std::string& line = lines[i];
        if (line == keyword) return "";
        if (line.rfind(keyword + " ", 0) == 0) return line.substr(keyword.size() + 1);
        throw fail(i, "expected '" + keyword + "', got '" + line + "'");
    };

    TileSet ts;
    std::size_t i = 0;
    while (true) {
        while (i < lines.size() && lines[i].empty()) ++i;
        if (i >= lines.size()) break;

        TileType t;
        t.name = parse_line(i, "TILENAME");
        if (t.name.empty()) throw fail(i, "TILENAME must be nonempty");
        ++i;
        t.display_label = parse_line(i++, "LABEL");
        t.tile_color = parse_line(i++, "TILECOLOR");
        t.text_color = parse_line(i++, "TEXTCOLOR");

        std::array<int, 4> strengths{};
        for (const auto& [kw, d] : bind_keys()) {
            std::string v = parse_line(i, kw);
            try {
                std::size_t used = 0;
                int s = std::stoi(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                strengths[static_cast<int>(d)] = s;
            } catch (const std::exception&) {
                throw fail(i, kw + " must carry an integer strength, got '" + v + "'");
            }
            ++i;
        }
        for (const auto& [kw, d] : label_keys()) {
            std::string label = parse_line(i, kw);
            try {
                t.glue(d) = Glue(label, strengths[static_cast<int>(d)]);
            } catch (const TileError& e) {
                throw fail(i, "tile '" + t.name + "': " + e.diag().message);
            }
            ++i;
        }
        if (i < lines.size() && lines[i].rfind("CONCENTRATION", 0) == 0) {
            std::string v = parse_line(i, "CONCENTRATION");
            Rational r;
            auto slash = v.find('/');
            try {
                if (slash == std::string::npos) {
                    r = {std::stoll(v), 1};
                } else {
                    r = {std::stoll(v.substr(0, slash)), std::stoll(v.substr(slash + 1))};
                }
            } catch (const std::exception&) {
                throw fail(i, "CONCENTRATION must be an integer or n/d fraction, got '" + v + "'");
            }
            if (r.num <= 0 || r.den <= 0) throw fail(i, "CONCENTRATION must be positive");
            t.concentration = r;
            ++i;
        }
        if (i >= lines.size() || lines[i] != "CREATE")
            throw fail(std::min(i, lines.size() - 1), "expected 'CREATE' to finish tile '" + t.name + "'");
        ++i;

        if (ts.find(t.name))
            throw TileError("DuplicateTileName", "duplicate tile name '" + t.name + "'",
                            SourcePos{static_cast<int>(i), 1});
        ts.add(std::move(t));
    }
    return ts;
}

// ---------------------------------------------------------------------------
// Seed files

inline std::string write_seed(const Assembly& assembly, const TileSet& tiles, int temperature) {
    std::string out = "temperature " + std::to_string(temperature) + "\n";
    std::vector<std::pair<Coord, std::size_t>> rows(assembly.placements().begin(),
                                                    assembly.placements().end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.y, a.first.x) < std::tie(b.first.y, b.first.x);
    });
    for (const auto& [c, t] : rows) {
        const std::string& name = tiles.at(t).name;
        tds_detail::check_serializable("tile name", name);
        out += std::to_string(c.x) + " " + std::to_string(c.y) + " " + name + "\n";
    }
    return out;
}

// Parses a seed file and validates it against the tile set: every referenced
// tile must exist and the loaded assembly must be tau-stable.
inline std::pair<Assembly, int> read_seed(const std::string& text, const TileSet& tiles) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg, const std::string& code = "FormatError") -> TileError {
        return TileError(code, msg, SourcePos{static_cast<int>(line_no), 1});
    };

    if (!std::getline(in, line)) throw fail("empty seed file");
    ++line_no;
    int temperature = 0;
    {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw >> temperature) || kw != "temperature" || temperature < 1)
            throw fail("first line must be 'temperature <tau>', got '" + line + "'");
    }

    Assembly assembly;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::int64_t x, y;
        if (!(ls >> x >> y)) throw fail("expected '<x> <y> <tilename>', got '" + line + "'");
        std::string name;
        std::getline(ls, name);
        while (!name.empty() && name.front() == ' ') name.erase(name.begin());
        if (name.empty()) throw fail("missing tile name in '" + line + "'");
        auto idx = tiles.find(name);
        if (!idx) throw fail("seed references unknown tile '" + name + "'", "UnknownTile");
        if (assembly.occupied({x, y}))
            throw fail("two tiles placed at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        assembly.place({x, y}, *idx);
    }
    if (assembly.empty()) throw TileError("FormatError", "seed file places no tiles");
    if (!is_tau_stable(assembly, tiles, temperature))
        throw TileError("SeedUnstable",
                        "seed assembly is not stable at temperature " + std::to_string(temperature));
    return {std::move(assembly), temperature};
}

}  // namespace tilelang
