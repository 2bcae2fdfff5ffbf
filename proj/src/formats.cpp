#include "kakeya/formats.hpp"

#include "kakeya/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace kakeya {

namespace {

struct TextLine {
    int number;
    std::string text;
};

std::vector<TextLine> split_lines(const std::string& text) {
    std::vector<TextLine> out;
    std::size_t start = 0;
    int number = 1;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (end < text.size() || !line.empty()) out.push_back({number, std::move(line)});
        ++number;
        start = end + 1;
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (sep == ' ') {
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
            if (i >= s.size()) break;
            std::size_t j = i;
            while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
            out.push_back(s.substr(i, j - i));
            i = j;
        }
        return out;
    }
    std::size_t i = 0;
    while (true) {
        const std::size_t j = s.find(sep, i);
        out.push_back(s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
        if (j == std::string_view::npos) break;
        i = j + 1;
    }
    return out;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

std::int64_t parse_int(std::string_view tok, int line) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
    return v;
}

double parse_double(std::string_view tok, int line) {
    double v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
    return v;
}

std::string cell_text(const Cell& c, int n, const char* sep) {
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (i) s += sep;
        s += std::to_string(c[i]);
    }
    return s;
}

Resolution parse_resolution(std::string_view n_tok, std::string_view k_tok, int line) {
    const Resolution res{static_cast<int>(parse_int(k_tok, line)), static_cast<int>(parse_int(n_tok, line))};
    try {
        validate(res);
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
    return res;
}

// cells on lines [begin, end), strictly increasing
CellSet parse_cells(const std::vector<TextLine>& lines, std::size_t begin, std::size_t end, const Resolution& res,
                    char sep) {
    std::vector<Cell> cells;
    for (std::size_t i = begin; i < end; ++i) {
        const auto& l = lines[i];
        if (sep == ' ' && blank(l.text)) continue;
        const auto toks = split(l.text, sep);
        if (static_cast<int>(toks.size()) != res.n)
            throw ParseError(l.number, "expected " + std::to_string(res.n) + " coordinates");
        Cell c{0, 0, 0};
        for (int j = 0; j < res.n; ++j) {
            const auto v = parse_int(toks[static_cast<std::size_t>(j)], l.number);
            if (v < INT32_MIN || v > INT32_MAX) throw ParseError(l.number, "coordinate overflows");
            c[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(v);
        }
        if (!in_range(c, res))
            throw ParseError(l.number, "cell (" + cell_text(c, res.n, ", ") + ") out of range at k=" +
                                           std::to_string(res.k));
        if (!cells.empty()) {
            if (c == cells.back()) throw ParseError(l.number, "duplicate cell (" + cell_text(c, res.n, ", ") + ")");
            if (c < cells.back()) throw ParseError(l.number, "cells are not sorted");
        }
        cells.push_back(c);
    }
    return CellSet(res, std::move(cells));
}

Line parse_line_record(const std::vector<std::string_view>& toks, std::size_t first, int n, int line) {
    if (toks.size() != first + static_cast<std::size_t>(2 * n - 1))
        throw ParseError(line, "line record needs " + std::to_string(2 * n - 1) + " numbers");
    Line l;
    l.n = n;
    l.p = Vec3::Zero();
    l.v = Vec3::Zero();
    for (int i = 0; i < n - 1; ++i) l.p[i] = parse_double(toks[first + static_cast<std::size_t>(i)], line);
    for (int i = 0; i < n; ++i) l.v[i] = parse_double(toks[first + static_cast<std::size_t>(n - 1 + i)], line);
    if (std::abs(l.v.norm() - 1) > 1e-9) throw ParseError(line, "direction is not a unit vector");
    if (!(l.v[n - 1] > 0)) throw ParseError(line, "direction must have a positive last coordinate");
    return l;
}

void add_tube(TubeFamily& fam, const Line& l, CellSet shading, int line) {
    try {
        fam.add(l, std::move(shading));
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

std::string line_record(const Line& l, const char* sep) {
    std::string s;
    for (int i = 0; i < l.n - 1; ++i) s += sep + format_fixed(l.p[i]);
    for (int i = 0; i < l.n; ++i) s += sep + format_fixed(l.v[i]);
    return s;
}

std::string edge_text(const hypergraph::Edge& e, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(e[i]);
    }
    return s;
}

hypergraph::KPartiteHypergraph build_hypergraph(const std::vector<std::uint32_t>& parts,
                                                const std::vector<std::pair<hypergraph::Edge, int>>& edges) {
    const hypergraph::KPartiteHypergraph empty(parts);
    std::vector<std::uint64_t> keys;
    for (const auto& [e, line] : edges) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] >= parts[i]) throw ParseError(line, "edge (" + edge_text(e, ", ") + ") out of range");
        keys.push_back(empty.pack(e));
    }
    std::vector<std::size_t> order(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b] || (keys[a] == keys[b] && a < b); });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (keys[order[i]] == keys[order[i - 1]])
            throw ParseError(edges[order[i]].second, "duplicate edge (" + edge_text(edges[order[i]].first, ", ") + ")");
    std::sort(keys.begin(), keys.end());
    return hypergraph::KPartiteHypergraph::from_keys(parts, std::move(keys));
}

std::vector<std::uint32_t> parse_parts(const std::vector<std::string_view>& toks, int k, int line) {
    if (static_cast<int>(toks.size()) != k) throw ParseError(line, "expected " + std::to_string(k) + " part sizes");
    std::vector<std::uint32_t> parts;
    for (auto t : toks) {
        const auto v = parse_int(t, line);
        if (v < 1 || v > hypergraph::max_part_size) throw ParseError(line, "part size out of range");
        parts.push_back(static_cast<std::uint32_t>(v));
    }
    return parts;
}

int parse_arity(std::string_view tok, int line) {
    const auto k = parse_int(tok, line);
    if (k < 1 || k > hypergraph::max_arity) throw ParseError(line, "hypergraph arity must lie in [1, 4]");
    return static_cast<int>(k);
}

hypergraph::Edge parse_edge(const std::vector<std::string_view>& toks, int k, int line) {
    if (static_cast<int>(toks.size()) != k) throw ParseError(line, "edge needs " + std::to_string(k) + " indices");
    hypergraph::Edge e;
    for (auto t : toks) {
        const auto v = parse_int(t, line);
        if (v < 0 || v > UINT32_MAX) throw ParseError(line, "edge index out of range");
        e.push_back(static_cast<std::uint32_t>(v));
    }
    return e;
}

void expect_version(std::string_view tok, int version, const char* name, int line) {
    if (parse_int(tok, line) != version) throw ParseError(line, std::string("unsupported ") + name + " version");
}

// key=value fields of a CSV comment line
std::string field(const std::vector<std::string_view>& toks, const std::string& key, int line) {
    for (auto t : toks)
        if (t.substr(0, key.size() + 1) == key + "=") return std::string(t.substr(key.size() + 1));
    throw ParseError(line, "missing field '" + key + "'");
}

std::vector<std::string_view> csv_header(const std::vector<TextLine>& lines, const char* kind) {
    if (lines.empty()) throw ParseError(1, "empty input");
    const auto toks = split(lines[0].text, ' ');
    if (toks.size() < 2 || toks[0] != "#" || toks[1] != kind)
        throw ParseError(1, std::string("expected '# ") + kind + " ...' header");
    if (lines.size() < 2) throw ParseError(2, "missing column header");
    return toks;
}

} // namespace

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_fixed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", x);
    std::string s = buf;
    if (s == "-0.000000000000") s = "0.000000000000";
    return s;
}

std::string write_kgs(const CellSet& e) {
    std::string out = "kgs " + std::to_string(kgs_version) + " " + std::to_string(e.dim()) + " " +
                      std::to_string(e.k()) + "\n";
    for (const auto& c : e) out += cell_text(c, e.dim(), " ") + "\n";
    return out;
}

CellSet read_kgs(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty input");
    const auto toks = split(lines[0].text, ' ');
    if (toks.size() != 4 || toks[0] != "kgs") throw ParseError(1, "expected 'kgs 1 <n> <k>'");
    expect_version(toks[1], kgs_version, "KGS", 1);
    return parse_cells(lines, 1, lines.size(), parse_resolution(toks[2], toks[3], 1), ' ');
}

std::string write_ktf(const TubeFamily& f) {
    const auto& res = f.resolution();
    std::string out = "ktf " + std::to_string(ktf_version) + " " + std::to_string(res.n) + " " +
                      std::to_string(res.k) + " " + std::to_string(f.size()) + "\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += "line" + line_record(f.line(i), " ") + "\n";
        out += write_kgs(f.shading(i));
    }
    return out;
}

TubeFamily read_ktf(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty input");
    const auto head = split(lines[0].text, ' ');
    if (head.size() != 5 || head[0] != "ktf") throw ParseError(1, "expected 'ktf 1 <n> <k> <count>'");
    expect_version(head[1], ktf_version, "KTF", 1);
    const Resolution res = parse_resolution(head[2], head[3], 1);
    const auto count = parse_int(head[4], 1);
    if (count < 0) throw ParseError(1, "negative tube count");
    if (res.n < 2) throw ParseError(1, "tube families need n >= 2");

    TubeFamily fam(res);
    std::size_t i = 1;
    for (std::int64_t t = 0; t < count; ++t) {
        while (i < lines.size() && blank(lines[i].text)) ++i;
        if (i >= lines.size()) throw ParseError(lines.back().number + 1, "missing tube record");
        const auto toks = split(lines[i].text, ' ');
        if (toks.empty() || toks[0] != "line") throw ParseError(lines[i].number, "expected 'line' record");
        const int line_no = lines[i].number;
        const Line l = parse_line_record(toks, 1, res.n, line_no);
        ++i;
        if (i >= lines.size()) throw ParseError(line_no + 1, "missing shading block");
        const auto kh = split(lines[i].text, ' ');
        if (kh.size() != 4 || kh[0] != "kgs") throw ParseError(lines[i].number, "expected 'kgs 1 <n> <k>'");
        expect_version(kh[1], kgs_version, "KGS", lines[i].number);
        if (!(parse_resolution(kh[2], kh[3], lines[i].number) == res))
            throw ParseError(lines[i].number, "shading resolution differs from the family");
        const std::size_t begin = ++i;
        while (i < lines.size() && lines[i].text.rfind("line", 0) != 0) ++i;
        add_tube(fam, l, parse_cells(lines, begin, i, res, ' '), line_no);
    }
    for (; i < lines.size(); ++i)
        if (!blank(lines[i].text)) throw ParseError(lines[i].number, "trailing content after the last tube");
    return fam;
}

std::string write_khg(const hypergraph::KPartiteHypergraph& g) {
    std::string out = "khg " + std::to_string(khg_version) + " " + std::to_string(g.arity()) + "\n";
    for (std::size_t i = 0; i < g.parts().size(); ++i) out += (i ? " " : "") + std::to_string(g.parts()[i]);
    out += "\n";
    for (std::size_t i = 0; i < g.size(); ++i) out += edge_text(g.edge(i), " ") + "\n";
    return out;
}

hypergraph::KPartiteHypergraph read_khg(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty input");
    const auto head = split(lines[0].text, ' ');
    if (head.size() != 3 || head[0] != "khg") throw ParseError(1, "expected 'khg 1 <k>'");
    expect_version(head[1], khg_version, "KHG", 1);
    const int k = parse_arity(head[2], 1);
    if (lines.size() < 2) throw ParseError(2, "missing part sizes");
    const auto parts = parse_parts(split(lines[1].text, ' '), k, lines[1].number);
    std::vector<std::pair<hypergraph::Edge, int>> edges;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (blank(lines[i].text)) continue;
        edges.emplace_back(parse_edge(split(lines[i].text, ' '), k, lines[i].number), lines[i].number);
    }
    return build_hypergraph(parts, edges);
}

std::string write_krf(const NestedRectangleFamily& fam) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "krf %d %d %d %.17g\n", krf_version, fam.N, fam.k, fam.eta);
    std::string out = buf;
    for (std::size_t j = 0; j < fam.levels.size(); ++j)
        for (const auto& r : fam.levels[j]) {
            std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %.17g %d\n", j + 1, r.cx, r.cy, r.slope, r.parent);
            out += buf;
        }
    return out;
}

NestedRectangleFamily read_krf(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty input");
    const auto head = split(lines[0].text, ' ');
    if (head.size() != 5 || head[0] != "krf") throw ParseError(1, "expected 'krf 1 <N> <k> <eta>'");
    expect_version(head[1], krf_version, "KRF", 1);
    NestedRectangleFamily fam;
    fam.N = static_cast<int>(parse_int(head[2], 1));
    fam.k = static_cast<int>(parse_int(head[3], 1));
    fam.eta = parse_double(head[4], 1);
    if (fam.N < 1 || fam.k < 1) throw ParseError(1, "N and k must be positive");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i].text)) continue;
        const auto toks = split(lines[i].text, ' ');
        const int ln = lines[i].number;
        if (toks.size() != 5) throw ParseError(ln, "expected 'level cx cy slope parent'");
        const auto level = parse_int(toks[0], ln);
        if (level < 1 || level > fam.N) throw ParseError(ln, "level out of range");
        if (level > static_cast<std::int64_t>(fam.levels.size()) + 1) throw ParseError(ln, "levels must appear in order");
        if (level < static_cast<std::int64_t>(fam.levels.size())) throw ParseError(ln, "levels must appear in order");
        if (level == static_cast<std::int64_t>(fam.levels.size()) + 1) fam.levels.emplace_back();
        fam.levels.back().push_back({parse_double(toks[1], ln), parse_double(toks[2], ln), parse_double(toks[3], ln),
                                     static_cast<int>(parse_int(toks[4], ln))});
    }
    return fam;
}

std::string kgs_to_csv(const CellSet& e) {
    std::string out = "# kgs n=" + std::to_string(e.dim()) + " k=" + std::to_string(e.k()) + "\n";
    for (int i = 0; i < e.dim(); ++i) out += (i ? ",c" : "c") + std::to_string(i);
    out += "\n";
    for (const auto& c : e) out += cell_text(c, e.dim(), ",") + "\n";
    return out;
}

std::string khg_to_csv(const hypergraph::KPartiteHypergraph& g) {
    std::string out = "# khg k=" + std::to_string(g.arity()) + " parts=";
    for (std::size_t i = 0; i < g.parts().size(); ++i) out += (i ? ";" : "") + std::to_string(g.parts()[i]);
    out += "\n";
    for (int i = 0; i < g.arity(); ++i) out += (i ? ",v" : "v") + std::to_string(i);
    out += "\n";
    for (std::size_t i = 0; i < g.size(); ++i) out += edge_text(g.edge(i), ",") + "\n";
    return out;
}

std::string ktf_to_csv(const TubeFamily& f) {
    const auto& res = f.resolution();
    std::string out = "# ktf n=" + std::to_string(res.n) + " k=" + std::to_string(res.k) +
                      " count=" + std::to_string(f.size()) + "\ntube,kind,values\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += std::to_string(i) + ",line" + line_record(f.line(i), ",") + "\n";
        for (const auto& c : f.shading(i)) out += std::to_string(i) + ",cell," + cell_text(c, res.n, ",") + "\n";
    }
    return out;
}

CellSet csv_to_kgs(const std::string& text) {
    const auto lines = split_lines(text);
    const auto toks = csv_header(lines, "kgs");
    const Resolution res = parse_resolution(field(toks, "n", 1), field(toks, "k", 1), 1);
    return parse_cells(lines, 2, lines.size(), res, ',');
}

hypergraph::KPartiteHypergraph csv_to_khg(const std::string& text) {
    const auto lines = split_lines(text);
    const auto toks = csv_header(lines, "khg");
    const std::string kt = field(toks, "k", 1), pt = field(toks, "parts", 1);
    const int k = parse_arity(kt, 1);
    const auto parts = parse_parts(split(pt, ';'), k, 1);
    std::vector<std::pair<hypergraph::Edge, int>> edges;
    for (std::size_t i = 2; i < lines.size(); ++i)
        edges.emplace_back(parse_edge(split(lines[i].text, ','), k, lines[i].number), lines[i].number);
    return build_hypergraph(parts, edges);
}

TubeFamily csv_to_ktf(const std::string& text) {
    const auto lines = split_lines(text);
    const auto toks = csv_header(lines, "ktf");
    const Resolution res = parse_resolution(field(toks, "n", 1), field(toks, "k", 1), 1);
    const auto count = parse_int(field(toks, "count", 1), 1);
    if (res.n < 2) throw ParseError(1, "tube families need n >= 2");
    TubeFamily fam(res);
    std::size_t i = 2;
    for (std::int64_t t = 0; t < count; ++t) {
        if (i >= lines.size()) throw ParseError(lines.back().number + 1, "missing tube record");
        const auto row = split(lines[i].text, ',');
        const int ln = lines[i].number;
        if (row.size() < 2 || parse_int(row[0], ln) != t || row[1] != "line")
            throw ParseError(ln, "expected line record for tube " + std::to_string(t));
        const Line l = parse_line_record(row, 2, res.n, ln);
        std::vector<Cell> cells;
        ++i;
        const std::size_t begin = i;
        while (i < lines.size()) {
            const auto r = split(lines[i].text, ',');
            if (r.size() < 2 || r[1] != "cell") break;
            if (parse_int(r[0], lines[i].number) != t) throw ParseError(lines[i].number, "cell row names the wrong tube");
            ++i;
        }
        std::vector<TextLine> stripped;
        for (std::size_t j = begin; j < i; ++j) {
            const auto& s = lines[j].text;
            const auto second = s.find(',', s.find(',') + 1);
            stripped.push_back({lines[j].number, s.substr(second + 1)});
        }
        add_tube(fam, l, parse_cells(stripped, 0, stripped.size(), res, ','), ln);
    }
    if (i < lines.size()) throw ParseError(lines[i].number, "trailing content after the last tube");
    return fam;
}

std::string convert_text(const std::string& text, const std::string& from, const std::string& to) {
    auto known = [](const std::string& f) { return f == "kgs" || f == "ktf" || f == "khg" || f == "csv"; };
    if (!known(from)) throw Error("unknown source format '" + from + "'");
    if (!known(to)) throw Error("unknown target format '" + to + "'");
    std::string kind = from;
    if (from == "csv") {
        const auto first = text.substr(0, text.find('\n'));
        const auto toks = split(first, ' ');
        if (toks.size() < 2 || toks[0] != "#") throw ParseError(1, "CSV input lacks a '# <kind>' header");
        kind = std::string(toks[1]);
    }
    if (to != "csv" && to != kind) throw Error("cannot convert " + kind + " to " + to);
    if (kind == "kgs") {
        const CellSet e = from == "csv" ? csv_to_kgs(text) : read_kgs(text);
        return to == "csv" ? kgs_to_csv(e) : write_kgs(e);
    }
    if (kind == "ktf") {
        const TubeFamily f = from == "csv" ? csv_to_ktf(text) : read_ktf(text);
        return to == "csv" ? ktf_to_csv(f) : write_ktf(f);
    }
    if (kind == "khg") {
        const auto g = from == "csv" ? csv_to_khg(text) : read_khg(text);
        return to == "csv" ? khg_to_csv(g) : write_khg(g);
    }
    throw ParseError(1, "unknown CSV payload '" + kind + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write to '" + path + "' failed");
}

} // namespace kakeya
