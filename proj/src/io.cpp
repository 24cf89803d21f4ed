#include "traceform/io.hpp"

#include "traceform/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#ifndef TRACEFORM_VERSION
#define TRACEFORM_VERSION "0.0.0"
#endif

namespace traceform {

namespace fs = std::filesystem;

const char* version() { return TRACEFORM_VERSION; }

std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json real_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double real_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
    }
    throw ValidationError("expected a real number, got " + j.dump());
}

namespace {

Interval pair_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw ValidationError(std::string(what) + ": expected [lo, hi]");
    return {real_from_json(j[0]), real_from_json(j[1])};
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double parse_real(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("line " + std::to_string(line) + ": \"" + s + "\" is not a number");
    }
}

Json optional_real(const std::optional<double>& x) { return x ? real_to_json(*x) : Json(nullptr); }

}  // namespace

Json to_json(const IntervalSet& set) {
    Json j;
    j["window"] = {set.window().lo, set.window().hi};
    Json comps = Json::array();
    for (const auto& c : set.components()) comps.push_back({c.lo, c.hi});
    j["components"] = std::move(comps);
    j["tail_left"] = to_string(set.tails().left);
    j["tail_right"] = to_string(set.tails().right);
    if (set.period()) j["period"] = *set.period();
    return j;
}

IntervalSet interval_set_from_json(const Json& j) {
    const auto window = pair_from_json(field(j, "window"), "window");
    std::vector<Interval> comps;
    const auto& arr = field(j, "components");
    if (!arr.is_array()) throw ValidationError("components: expected an array");
    for (const auto& c : arr) comps.push_back(pair_from_json(c, "component"));
    Tails tails;
    if (j.contains("tail_left")) tails.left = tail_from_string(j.at("tail_left").get<std::string>());
    if (j.contains("tail_right")) tails.right = tail_from_string(j.at("tail_right").get<std::string>());
    std::optional<double> period;
    if (j.contains("period") && !j.at("period").is_null()) period = real_from_json(j.at("period"));
    return IntervalSet::build(std::move(comps), tails, window, period);
}

Json to_json(const SpeedMeasure& m) {
    Json j;
    j["carrier"] = {m.carrier().lo, m.carrier().hi};
    Json pieces = Json::array();
    for (const auto& p : m.pieces()) pieces.push_back({p.lo, p.hi, p.density});
    j["density_pieces"] = std::move(pieces);
    Json atoms = Json::array();
    for (const auto& a : m.atoms()) atoms.push_back({real_to_json(a.location), real_to_json(a.mass)});
    j["atoms"] = std::move(atoms);
    return j;
}

SpeedMeasure speed_measure_from_json(const Json& j) {
    const auto carrier = pair_from_json(field(j, "carrier"), "carrier");
    std::vector<DensityPiece> pieces;
    if (j.contains("density_pieces")) {
        for (const auto& p : j.at("density_pieces")) {
            if (!p.is_array() || p.size() != 3) throw ValidationError("density_pieces: expected [x0, x1, c]");
            pieces.push_back({real_from_json(p[0]), real_from_json(p[1]), real_from_json(p[2])});
        }
    }
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            const auto pm = pair_from_json(a, "atom");
            atoms.push_back({pm.lo, pm.hi});
        }
    }
    return SpeedMeasure::make(carrier, std::move(pieces), std::move(atoms));
}

Json to_json(const ValidationReport& r) {
    Json j;
    j["delta"] = r.delta;
    j["ok"] = r.ok();
    j["measure_dense"] = r.measure_dense;
    j["sorted"] = r.sorted;
    j["inside_window"] = r.inside_window;
    j["no_overlaps"] = r.no_overlaps;
    j["no_shared_endpoints"] = r.no_shared_endpoints;
    j["no_isolated_f_points"] = r.no_isolated_f_points;
    j["tails_consistent"] = r.tails_consistent;
    Json sparse = Json::array();
    for (const auto& s : r.sparse_subintervals) sparse.push_back({s.lo, s.hi});
    j["sparse_subintervals"] = std::move(sparse);
    j["problems"] = r.problems;
    return j;
}

Json to_json(const EnergyReport& r, bool with_breakdown) {
    Json j;
    j["form"] = to_string(r.tag);
    j["value"] = r.value;
    if (with_breakdown) {
        Json cells = Json::array();
        for (const auto& t : r.breakdown) {
            Json c{{"lo", t.lo}, {"hi", t.hi}, {"value", t.value}};
            if (t.jump) c["jump"] = true;
            cells.push_back(std::move(c));
        }
        j["breakdown"] = std::move(cells);
    }
    return j;
}

Json to_json(const EstimatorResult& r) {
    Json j{{"target", r.target}, {"estimate", r.estimate}, {"se", r.se}, {"n", r.n}};
    if (r.warning) j["warning"] = true;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json to_json(const DarnedSpaceReport& r) {
    Json samples = Json::array();
    auto pair = [](const MetricPair& p) {
        return Json{{"line", real_to_json(p.line)}, {"darned", real_to_json(p.darned)},
                    {"relative_gap", real_to_json(p.relative_gap())}};
    };
    for (const auto& s : r.samples) {
        samples.push_back({{"sup", pair(s.sup)},
                           {"l2_squared", pair(s.l2_sq)},
                           {"energy", pair(s.energy)},
                           {"trace_side_identical", s.trace_side_identical}});
    }
    return Json{{"all_agree", r.all_agree()}, {"samples", std::move(samples)}};
}

Json to_json(const DarningImage& img) {
    Json collapsed = Json::array();
    for (const auto& p : img.collapsed) {
        collapsed.push_back({{"p", p.location}, {"component", p.component}, {"mass", p.width}});
    }
    return Json{{"window_image", {img.window_image.lo, img.window_image.hi}},
                {"collapsed", std::move(collapsed)},
                {"p_minus", optional_real(img.p_minus)},
                {"p_plus", optional_real(img.p_plus)},
                {"left_unbounded", img.left_unbounded},
                {"right_unbounded", img.right_unbounded}};
}

Json to_json(const Decomposition& d) {
    const auto& k = d.constants;
    Json c;
    if (k.c0) c["C0"] = *k.c0;
    if (k.m_minus_inf) c["M_minus_inf"] = *k.m_minus_inf;
    if (k.m_plus_inf) c["M_plus_inf"] = *k.m_plus_inf;
    if (k.c1) c["C1"] = *k.c1;
    if (k.c2) c["C2"] = *k.c2;
    if (c.is_null()) c = Json::object();
    return Json{{"case", to_string(d.case_tag)}, {"constants", std::move(c)}};
}

std::string grid_function_csv(const GridFunction& u) {
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += format_real(u.nodes()[i]);
        out += ',';
        out += format_real(u.values()[i]);
        out += '\n';
    }
    return out;
}

GridFunction grid_function_from_csv(const std::string& text, const IntervalSet* set) {
    std::stringstream ss(text);
    std::string line;
    std::vector<double> x;
    std::vector<double> y;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("x,", 0) == 0) continue;
        const auto cells = split_line(line);
        if (cells.size() != 2) throw ValidationError("line " + std::to_string(line_no) + ": expected \"x,value\"");
        x.push_back(parse_real(cells[0], line_no));
        y.push_back(parse_real(cells[1], line_no));
    }
    GridFunction u(std::move(x), std::move(y));
    if (set) require_adapted(u, *set, "grid function CSV");
    return u;
}

std::string path_csv(const PathSample& p) {
    std::string out = "t,x,flag\n";
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        out += format_real(p.times[i]);
        out += ',';
        out += format_real(p.states[i]);
        out += ',';
        out += std::to_string(static_cast<int>(p.flags[i]));
        out += '\n';
    }
    return out;
}

std::string jump_table_csv(const std::vector<JumpRow>& rows) {
    std::string out = "a_n,b_n,d_n,weight\n";
    for (const auto& r : rows) {
        out += format_real(r.a) + ',' + format_real(r.b) + ',' + format_real(r.d) + ',' + format_real(r.weight) + '\n';
    }
    return out;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read error on " + path.string());
    return ss.str();
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write error on " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " into place as " + path.string());
    }
}

}  // namespace traceform
