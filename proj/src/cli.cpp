#include "udc/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "udc/discrete.hpp"
#include "udc/error.hpp"
#include "udc/lift.hpp"
#include "udc/tropcorr.hpp"
#include "udc/ultra.hpp"

namespace udc::cli {

using udc::to_string;

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void bad(const std::string& msg) {
    throw Error(ErrorCode::InvalidArgument, msg);
}

const char* kAutonomous = R"(# w_{n+1} w_{n-1} = w_n + 1
vars: w0, w1
w0' = w1
w1' = (1 + w1)/w0
)";

const char* kUdAutonomous = R"(# W_{n+1} + W_{n-1} = max(W_n, 0)
kind: tropical
vars: W0, W1
W0' = W1
W1' = max(0, W1) - W0
)";

std::optional<long> sigma_suffix(std::string_view name, std::string_view prefix) {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::string_view k = name.substr(prefix.size());
    if (k.empty() || k.size() > 6 || !std::all_of(k.begin(), k.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
    return std::stol(std::string(k));
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"autonomous", "ud-autonomous", "qp1-sigma0", "qp1-sigma1", "qp1-sigma2", "udp1-sigma0", "udp1-sigma1", "udp1-sigma2"};
}

std::optional<std::string> builtin_text(std::string_view name) {
    if (name == "autonomous") return std::string(kAutonomous);
    if (name == "ud-autonomous") return std::string(kUdAutonomous);
    if (auto k = sigma_suffix(name, "qp1-sigma")) {
        std::string K = std::to_string(*k);
        return "# w_{n-1} w_n^" + K + " w_{n+1} = a t_n w_n + 1, t_{n+1} = q t_n\n"
               "vars: x, y, t\n"
               "params: a -> A, q -> Q\n"
               "x' = y\n"
               "y' = (a*t*y + 1)/(x*y^" + K + ")\n"
               "t' = q*t\n";
    }
    if (auto k = sigma_suffix(name, "udp1-sigma")) {
        std::string K = std::to_string(*k);
        return "# W_{n+1} + " + K + " W_n + W_{n-1} = max(A + T_n + W_n, 0)\n"
               "kind: tropical\n"
               "vars: X, Y, T\n"
               "params: A, Q\n"
               "X' = Y\n"
               "Y' = max(A + T + Y, 0) - X - " + K + "*Y\n"
               "T' = T + Q\n";
    }
    return std::nullopt;
}

void validate_builtins() {
    for (const auto& n : builtin_names()) {
        std::string text = *builtin_text(n);
        try {
            if (is_tropical_map_text(text))
                parse_tropical_map(text);
            else
                ultradiscretize(parse_map(text));
        } catch (const Error& e) {
            throw Error(e.code(), "builtin '" + n + "': " + e.what());
        }
    }
}

TropicalMap LoadedMap::as_tropical() const {
    if (tropical) return *tropical;
    return ultradiscretize(*rational);
}

LoadedMap load_map(const std::string& source, const std::string& base_dir) {
    LoadedMap lm;
    lm.source = source;
    std::string text;
    if (auto b = builtin_text(source)) {
        text = *b;
    } else {
        std::string path = source;
        if (!base_dir.empty() && !path.empty() && path[0] != '/') path = base_dir + "/" + path;
        std::ifstream in(path);
        if (!in) bad("no builtin or readable map file named '" + source + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    if (is_tropical_map_text(text))
        lm.tropical = parse_tropical_map(text);
    else
        lm.rational = parse_map(text);
    return lm;
}

// ---------------------------------------------------------------------------

std::string to_string(Analysis a) {
    switch (a) {
        case Analysis::Orbit: return "orbit";
        case Analysis::ConfineDiscrete: return "confine-discrete";
        case Analysis::ConfineUltra: return "confine-ultra";
        case Analysis::Correspond: return "correspond";
        case Analysis::Lemma3: return "lemma3";
    }
    return "?";
}

Analysis parse_analysis(std::string_view text) {
    for (auto a : {Analysis::Orbit, Analysis::ConfineDiscrete, Analysis::ConfineUltra, Analysis::Correspond, Analysis::Lemma3})
        if (to_string(a) == text) return a;
    bad("unknown analysis '" + std::string(text) + "'");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    for (const auto& s : out)
        if (s.empty()) bad("empty item in list '" + std::string(text) + "'");
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_assignments(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& item : split_list(text)) {
        auto eq = item.find('=');
        if (eq == std::string::npos) bad("expected NAME=VALUE, got '" + item + "'");
        std::string k = trim(std::string_view(item).substr(0, eq));
        std::string v = trim(std::string_view(item).substr(eq + 1));
        if (k.empty() || v.empty()) bad("expected NAME=VALUE, got '" + item + "'");
        out.emplace_back(k, v);
    }
    return out;
}

Scenario parse_scenario(std::string_view text, const std::string& base_dir) {
    Scenario s;
    s.base_dir = base_dir;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (trim(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) bad("line " + std::to_string(number) + ": expected 'key = value'");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!seen.insert(key).second) bad("line " + std::to_string(number) + ": repeated key '" + key + "'");
        auto count = [&](const std::string& v) -> std::size_t {
            try {
                std::size_t pos = 0;
                long n = std::stol(v, &pos);
                if (pos != v.size() || n < 0) throw 0;
                return static_cast<std::size_t>(n);
            } catch (...) {
                bad("line " + std::to_string(number) + ": '" + key + "' needs a non-negative integer");
            }
        };
        if (key == "map") s.map = value;
        else if (key == "analysis") s.analysis = parse_analysis(value);
        else if (key == "perturb") s.perturb = value;
        else if (key == "free") s.free = value;
        else if (key == "samples") s.samples = value;
        else if (key == "steps") s.steps = count(value);
        else if (key == "depth") s.depth = value;
        else if (key == "format") {
            if (value == "md" || value == "markdown") s.format = Format::Markdown;
            else if (value == "csv") s.format = Format::Csv;
            else bad("line " + std::to_string(number) + ": format must be md or csv");
        } else if (key == "sigma") s.sigma = static_cast<long>(count(value));
        else if (key == "A") s.A = value;
        else if (key == "Q") s.Q = value;
        else if (key == "T0") s.T0 = value;
        else if (key == "init") s.init = value;
        else if (key == "lift") s.lift = value;
        else if (key == "fixed") s.fixed = value;
        else bad("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (s.map.empty()) bad("scenario has no 'map'");
    return s;
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else out += c;
    }
    return out;
}

}  // namespace

std::string emit_table(const Table& t, Format format) {
    std::string out;
    if (format == Format::Csv) {
        out = "step,coordinate,branch,value,flag\n";
        for (const auto& r : t.rows)
            out += csv_field(r.step) + "," + csv_field(r.coordinate) + "," + csv_field(r.branch) + "," +
                   csv_field(r.value) + "," + csv_field(r.flag) + "\n";
        return out;
    }

    if (!t.title.empty()) out += "## " + t.title + "\n\n";
    std::vector<std::string> branches;
    std::set<std::string> coords;
    for (const auto& r : t.rows) {
        if (std::find(branches.begin(), branches.end(), r.branch) == branches.end()) branches.push_back(r.branch);
        coords.insert(r.coordinate);
    }
    bool show_coord = coords.size() > 1;

    if (t.rows.empty()) {
        out += "(no rows)\n";
    } else {
        out += "| n |";
        if (show_coord) out += " coordinate |";
        for (const auto& b : branches) out += " " + md_cell(b) + " |";
        out += " flags |\n|---|";
        if (show_coord) out += "---|";
        for (std::size_t i = 0; i < branches.size(); ++i) out += "---|";
        out += "---|\n";

        // Group consecutive rows by (step, coordinate), keeping first-seen order.
        std::vector<std::pair<std::string, std::string>> keys;
        std::map<std::pair<std::string, std::string>, std::vector<const TableRow*>> groups;
        for (const auto& r : t.rows) {
            auto k = std::make_pair(r.step, r.coordinate);
            if (!groups.count(k)) keys.push_back(k);
            groups[k].push_back(&r);
        }
        for (const auto& k : keys) {
            const auto& g = groups[k];
            out += "| " + k.first + " |";
            if (show_coord) out += " " + md_cell(k.second) + " |";
            std::vector<std::string> flags;
            for (const auto& b : branches) {
                std::string v;
                for (const auto* r : g)
                    if (r->branch == b) v = r->value;
                out += " " + md_cell(v) + " |";
            }
            for (const auto* r : g)
                if (!r->flag.empty() && std::find(flags.begin(), flags.end(), r->flag) == flags.end())
                    flags.push_back(r->flag);
            std::string f;
            for (std::size_t i = 0; i < flags.size(); ++i) f += (i ? "; " : "") + flags[i];
            out += " " + md_cell(f) + " |\n";
        }
    }
    if (!t.notes.empty()) {
        out += "\n";
        for (const auto& n : t.notes) out += "Note: " + n + "\n";
    }
    if (!t.verdict.empty()) out += "\nVerdict: " + t.verdict + "\n";
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string map_name(const Scenario& s) {
    if (s.sigma && (s.map == "qp1" || s.map == "udp1")) return s.map + "-sigma" + std::to_string(*s.sigma);
    return s.map;
}

// Case-insensitive name lookup against a list.
std::optional<std::size_t> find_name(const std::vector<std::string>& names, const std::string& key) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == key) return i;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (lower(names[i]) == lower(key)) return i;
    return std::nullopt;
}

std::size_t need_coord(const std::vector<std::string>& names, const std::string& key) {
    auto i = find_name(names, key);
    if (!i) throw Error(ErrorCode::UndeclaredName, "unknown coordinate '" + key + "'");
    return *i;
}

// All NAME=VALUE data of a scenario: init, then the A/Q/T0 keys.
std::vector<std::pair<std::string, std::string>> value_pairs(const Scenario& s, const std::vector<std::string>& state) {
    auto pairs = parse_assignments(s.init);
    auto add = [&](const std::optional<std::string>& v, const std::string& name) {
        if (v) pairs.emplace_back(name, *v);
    };
    add(s.A, "A");
    add(s.Q, "Q");
    if (s.T0) {
        auto t = find_name(state, "T");
        if (!t) bad("T0 given but the map has no T coordinate");
        pairs.emplace_back(state[*t], *s.T0);
    }
    return pairs;
}

struct Perturb {
    std::string coord;
    std::string value;
};

Perturb parse_perturb(const std::string& text) {
    auto at = text.find('@');
    if (at == std::string::npos) bad("perturb must be COORD@VALUE, got '" + text + "'");
    return {trim(std::string_view(text).substr(0, at)), trim(std::string_view(text).substr(at + 1))};
}

struct FreeSpec {
    std::string coord;
    std::vector<std::string> grid;
};

FreeSpec parse_free(const Scenario& s) {
    FreeSpec f;
    auto eq = s.free.find('=');
    if (eq == std::string::npos) {
        f.coord = trim(s.free);
    } else {
        f.coord = trim(std::string_view(s.free).substr(0, eq));
        f.grid = split_list(std::string_view(s.free).substr(eq + 1));
    }
    if (!s.samples.empty()) {
        if (!f.grid.empty()) bad("give samples either in 'free' or in 'samples', not both");
        f.grid = split_list(s.samples);
    }
    return f;
}

const RationalMap& need_rational(const LoadedMap& lm, Analysis a) {
    if (!lm.rational) bad(to_string(a) + " needs a rational map; '" + lm.source + "' is tropical");
    return *lm.rational;
}

TropEnv tropical_params(const TropicalMap& tm, const std::vector<std::pair<std::string, std::string>>& pairs) {
    TropEnv env;
    for (const auto& [k, v] : pairs)
        if (auto i = find_name(tm.params, k)) env[tm.params[*i]] = parse_tropical(v);
    for (const auto& p : tm.params)
        if (!env.count(p)) throw Error(ErrorCode::UnboundVariable, "no value for parameter '" + p + "'");
    return env;
}

std::string tv_text(const std::optional<TropicalValue>& v) {
    return v ? to_string(*v) : std::string("?");
}

// ---------------------------------------------------------------------------

RunResult run_orbit(const Scenario& s, const LoadedMap& lm) {
    RunResult r;
    r.table.title = "orbit of " + lm.source;
    auto pairs = value_pairs(s, lm.rational ? lm.rational->state : lm.tropical->state);

    if (lm.tropical) {
        const TropicalMap& tm = *lm.tropical;
        std::vector<std::optional<TropicalValue>> init(tm.state.size());
        for (const auto& [k, v] : pairs)
            if (auto i = find_name(tm.state, k)) init[*i] = parse_tropical(v);
        std::vector<TropicalValue> start;
        for (std::size_t i = 0; i < init.size(); ++i) {
            if (!init[i]) throw Error(ErrorCode::UnboundVariable, "no initial value for '" + tm.state[i] + "'");
            start.push_back(*init[i]);
        }
        auto orb = orbit(tm, start, tropical_params(tm, pairs), s.steps);
        for (std::size_t n = 0; n < orb.size(); ++n)
            for (std::size_t i = 0; i < tm.state.size(); ++i)
                r.table.rows.push_back({std::to_string(n), tm.state[i], "value", to_string(orb[n][i]), ""});
        r.table.verdict = "computed " + std::to_string(s.steps) + " steps";
        return r;
    }

    const RationalMap& m = *lm.rational;
    if (!s.lift.empty()) {
        std::map<std::string, LiftSpec, std::less<>> assign;
        for (const auto& [k, v] : parse_assignments(s.lift)) assign.emplace(k, parse_puiseux(v));
        Rational depth = s.depth ? parse_rational(*s.depth) : Rational(kDefaultWindowDepth);
        auto lifted = lift(m, assign, depth);
        auto cur = lifted.initial;
        for (std::size_t n = 0;; ++n) {
            for (std::size_t i = 0; i < m.state.size(); ++i) {
                std::string val;
                try {
                    val = to_string(valuation(cur[i]));
                } catch (const Error&) {
                    val = "?";
                }
                r.table.rows.push_back({std::to_string(n), m.state[i], "series", to_string(cur[i]), ""});
                r.table.rows.push_back({std::to_string(n), m.state[i], "valuation", val, ""});
            }
            if (n == s.steps) break;
            cur = lifted.map.step(cur);
        }
        r.table.verdict = "computed " + std::to_string(s.steps) + " lifted steps";
        return r;
    }

    std::map<std::string, Rational, std::less<>> params;
    std::vector<std::optional<Rational>> init(m.state.size());
    for (const auto& [k, v] : pairs) {
        if (auto i = find_name(m.state, k)) {
            init[*i] = parse_rational(v);
            continue;
        }
        bool found = false;
        for (const auto& p : m.params)
            if (lower(p.name) == lower(k) || p.alias == k) {
                params[p.name] = parse_rational(v);
                found = true;
            }
        if (!found) throw Error(ErrorCode::UndeclaredName, "unknown name '" + k + "'");
    }
    std::vector<Rational> start;
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (!init[i]) throw Error(ErrorCode::UnboundVariable, "no initial value for '" + m.state[i] + "'");
        start.push_back(*init[i]);
    }
    auto orb = iterate_exact(m, start, params, s.steps);
    for (std::size_t n = 0; n < orb.size(); ++n)
        for (std::size_t i = 0; i < m.state.size(); ++i)
            r.table.rows.push_back({std::to_string(n), m.state[i], "value", to_string(orb[n][i]), ""});
    r.table.verdict = "computed " + std::to_string(s.steps) + " steps";
    return r;
}

RunResult run_confine_discrete(const Scenario& s, const LoadedMap& lm) {
    const RationalMap& m = need_rational(lm, s.analysis);
    RunResult r;
    r.table.title = "discrete singularity confinement of " + lm.source;

    DiscreteConfinementConfig cfg;
    Perturb p = parse_perturb(s.perturb);
    cfg.perturb = m.state[need_coord(m.state, p.coord)];
    if (lower(p.value) != "inf") cfg.candidate = parse_rational(p.value);
    FreeSpec f = parse_free(s);
    if (f.coord.empty()) bad("confine-discrete needs a free coordinate");
    cfg.free = m.state[need_coord(m.state, f.coord)];
    for (const auto& g : f.grid) cfg.samples.push_back(parse_rational(g));
    cfg.steps = s.steps;

    auto pairs = parse_assignments(s.fixed);
    auto init_pairs = value_pairs(s, m.state);
    pairs.insert(pairs.end(), init_pairs.begin(), init_pairs.end());
    for (const auto& [k, v] : pairs) {
        std::string name;
        if (auto i = find_name(m.state, k)) name = m.state[*i];
        for (const auto& prm : m.params)
            if (prm.name == k || prm.alias == k || lower(prm.name) == lower(k)) name = prm.name;
        if (name.empty()) throw Error(ErrorCode::UndeclaredName, "unknown name '" + k + "'");
        cfg.fixed[name] = parse_rational(v);
    }

    auto rep = run_discrete_confinement(m, cfg);
    for (const auto& st : rep.steps) {
        std::string flag = st.singular ? (st.has_infinity ? "singular (infinite limit)" : "singular (information lost)") : "";
        if (rep.confined_at && st.n == *rep.confined_at) flag = "confined";
        for (std::size_t smp = 0; smp < rep.samples.size(); ++smp)
            for (std::size_t i = 0; i < rep.coordinates.size(); ++i)
                r.table.rows.push_back({std::to_string(st.n), rep.coordinates[i],
                                        cfg.free + "=" + to_string(rep.samples[smp]), to_string(st.limits[smp][i]), flag});
    }
    r.table.verdict = rep.verdict;
    if (rep.entry) r.table.notes.push_back("first singular step: " + std::to_string(*rep.entry));
    r.exit_code = rep.confined() ? 0 : 1;
    return r;
}

RunResult run_confine_ultra(const Scenario& s, const LoadedMap& lm) {
    TropicalMap tm = lm.as_tropical();
    RunResult r;
    r.table.title = "ultradiscrete singularity confinement of " + lm.source;

    Perturb p = parse_perturb(s.perturb);
    std::size_t pi = need_coord(tm.state, p.coord);
    auto pairs = value_pairs(s, tm.state);
    TropEnv base_params;
    std::vector<std::optional<TropicalValue>> point(tm.state.size());
    point[pi] = parse_tropical(p.value);
    for (const auto& [k, v] : pairs)
        if (auto i = find_name(tm.state, k); i && *i != pi) point[*i] = parse_tropical(v);

    FreeSpec f = parse_free(s);
    std::vector<std::optional<TropicalValue>> grid{std::nullopt};
    std::optional<std::size_t> grid_state;
    std::string grid_param;
    if (!f.coord.empty()) {
        if (f.grid.empty()) bad("confine-ultra needs grid values for '" + f.coord + "'");
        grid.clear();
        for (const auto& g : f.grid) grid.push_back(parse_tropical(g));
        if (auto i = find_name(tm.state, f.coord)) {
            if (*i == pi) bad("the grid coordinate is the perturbed coordinate");
            grid_state = *i;
        } else if (auto j = find_name(tm.params, f.coord)) {
            grid_param = tm.params[*j];
        } else {
            throw Error(ErrorCode::UndeclaredName, "unknown coordinate '" + f.coord + "'");
        }
        bool neg = false, zero = false, pos = false;
        for (const auto& g : grid) {
            if (g->is_neg_inf() || sgn(g->value()) < 0) neg = true;
            else if (sgn(g->value()) == 0) zero = true;
            else pos = true;
        }
        if (!(neg && zero && pos))
            r.table.notes.push_back("grid for " + f.coord + " does not cover negative, zero and positive values");
    }

    bool shift = is_shift_map(tm);
    bool all_confined = true;
    std::vector<std::string> verdicts;
    for (const auto& g : grid) {
        auto pt = point;
        TropEnv params;
        if (grid_state) pt[*grid_state] = *g;
        for (const auto& [k, v] : pairs)
            if (auto j = find_name(tm.params, k)) params[tm.params[*j]] = parse_tropical(v);
        if (!grid_param.empty()) params[grid_param] = *g;
        for (const auto& prm : tm.params)
            if (!params.count(prm)) throw Error(ErrorCode::UnboundVariable, "no value for parameter '" + prm + "'");
        std::vector<TropicalValue> start;
        for (std::size_t i = 0; i < pt.size(); ++i) {
            if (!pt[i]) throw Error(ErrorCode::UnboundVariable, "no value for coordinate '" + tm.state[i] + "'");
            start.push_back(*pt[i]);
        }

        auto rep = differentiability_report(tm, start, params, pi, s.steps);
        auto plain = orbit(tm, start, params, s.steps);
        std::string suffix = g ? " (" + f.coord + "=" + to_string(*g) + ")" : "";
        if (!rep.confined()) all_confined = false;
        verdicts.push_back((g ? f.coord + "=" + to_string(*g) + ": " : "") + rep.verdict);

        auto add_row = [&](std::size_t n, const std::string& coord, const TropicalValue& v0, const SignedJet& right,
                           const SignedJet& left) {
            bool nd = !(left.base() == right.base() && left.slope() == right.slope());
            std::string c = coord + suffix;
            std::string flag = nd ? "ND" : "";
            r.table.rows.push_back({std::to_string(n), c, "d=0", to_string(v0), flag});
            r.table.rows.push_back({std::to_string(n), c, "d>0", to_string(right), flag});
            r.table.rows.push_back({std::to_string(n), c, "d<0", to_string(left), flag});
        };
        if (shift) {
            std::vector<JetState> rs, ls;
            for (const auto& st : rep.steps) {
                JetState a, b;
                for (const auto& c : st.coords) {
                    a.push_back(c.right);
                    b.push_back(c.left);
                }
                rs.push_back(a);
                ls.push_back(b);
            }
            auto wr = scalar_sequence(rs);
            auto wl = scalar_sequence(ls);
            auto w0 = scalar_sequence(plain);
            for (std::size_t n = 0; n < wr.size(); ++n) add_row(n, "W", w0[n], wr[n], wl[n]);
        } else {
            for (const auto& st : rep.steps)
                for (std::size_t i = 0; i < tm.state.size(); ++i)
                    add_row(st.n, tm.state[i], plain[st.n][i], st.coords[i].right, st.coords[i].left);
        }
    }

    if (lm.source == "ud-autonomous" || lm.source == "autonomous") {
        r.table.notes.push_back(
            "at W1 = 0 the recurrence makes W3 differentiable iff W0 > 0; the claim that W2 and W3 are both "
            "non-differentiable there holds only for W0 <= 0");
        r.table.notes.push_back("the claim that W3 is differentiable at W1 = 0 when W0 < 0 does not hold for this recurrence");
    }
    if (shift) r.table.notes.push_back("rows are W_n with state n = (W_n, W_{n+1}); verdicts count state steps");
    for (std::size_t i = 0; i < verdicts.size(); ++i) r.table.verdict += (i ? "; " : "") + verdicts[i];
    r.exit_code = all_confined ? 0 : 1;
    return r;
}

std::map<std::string, LiftSpec, std::less<>> lift_assignment(const Scenario& s, const RationalMap& m) {
    std::map<std::string, LiftSpec, std::less<>> assign;
    std::vector<std::string> names;
    for (const auto& st : m.state) names.push_back(st);
    for (const auto& p : m.params) names.push_back(p.name);
    auto canonical = [&](const std::string& k) {
        if (auto i = find_name(names, k)) return names[*i];
        for (const auto& p : m.params)
            if (p.alias == k) return p.name;
        throw Error(ErrorCode::UndeclaredName, "unknown name '" + k + "'");
    };
    for (const auto& [k, v] : value_pairs(s, m.state)) {
        TropicalValue t = parse_tropical(v);
        assign[canonical(k)] = t.is_finite() ? LiftSpec(Monomial{1, t.value()}) : LiftSpec(PuiseuxSeries::zero());
    }
    for (const auto& [k, v] : parse_assignments(s.lift)) assign[canonical(k)] = parse_puiseux(v);
    return assign;
}

RunResult run_correspond(const Scenario& s, const LoadedMap& lm) {
    const RationalMap& m = need_rational(lm, s.analysis);
    RunResult r;
    r.table.title = "valuation of the lifted orbit against the tropical orbit, " + lm.source;
    Rational depth = s.depth ? parse_rational(*s.depth) : Rational(kDefaultWindowDepth);
    auto rep = orbit_compare(m, lift_assignment(s, m), s.steps, depth);

    if (rep.scalar) {
        for (std::size_t n = 0; n < rep.scalar_tropical.size(); ++n) {
            bool eq = rep.scalar_valuations[n] && *rep.scalar_valuations[n] == rep.scalar_tropical[n];
            std::string flag = eq ? "equal" : "DIVERGE";
            r.table.rows.push_back({std::to_string(n), "W", "valuation", tv_text(rep.scalar_valuations[n]), flag});
            r.table.rows.push_back({std::to_string(n), "W", "tropical", to_string(rep.scalar_tropical[n]), flag});
        }
        r.table.notes.push_back("rows are W_n with state n = (W_n, W_{n+1})");
    } else {
        for (const auto& st : rep.steps)
            for (const auto& e : st.entries) {
                std::string flag = e.equal ? "equal" : "DIVERGE";
                if (!e.note.empty()) flag += " (" + e.note + ")";
                r.table.rows.push_back({std::to_string(st.n), e.coordinate, "valuation", tv_text(e.valuation), flag});
                r.table.rows.push_back({std::to_string(st.n), e.coordinate, "tropical", to_string(e.tropical), flag});
            }
    }
    for (const auto& st : rep.steps)
        for (const auto& e : st.entries)
            if (e.note == "window exhausted")
                r.table.notes.push_back("step " + std::to_string(st.n) + ", " + e.coordinate + ": window exhausted");
    for (const auto& n : rep.notes) r.table.notes.push_back(n);
    if (!rep.recurrence_consistent) r.table.notes.push_back("valuations at equal steps do not satisfy the tropical map");
    if (lm.source == "autonomous")
        r.table.notes.push_back("with W1 = d small, W2 = d - W0 for d > 0 and W2 = -W0 for d < 0 (recurrence values)");

    std::optional<std::size_t> div = rep.scalar ? rep.first_scalar_divergence : rep.first_divergence;
    if (div)
        r.table.verdict = "first divergence at n = " + std::to_string(*div);
    else
        r.table.verdict = "equal at every step up to n = " +
                          std::to_string(rep.scalar ? rep.scalar_tropical.size() - 1 : rep.steps.size() - 1);
    r.exit_code = div ? 1 : 0;
    return r;
}

std::string roots_text(const std::vector<TropicalValue>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + "}";
}

RunResult run_lemma3(const Scenario& s, const LoadedMap& lm) {
    const RationalMap& m = need_rational(lm, s.analysis);
    RunResult r;
    r.table.title = "roots and poles against non-differentiable points, " + lm.source;
    FreeSpec f = parse_free(s);
    if (f.coord.empty()) bad("lemma3 needs a free coordinate");
    std::string free = m.state[need_coord(m.state, f.coord)];

    auto steps = lemma3_orbit(m, lift_assignment(s, m), free, s.steps);
    TropicalMap tm = ultradiscretize(m);
    bool shift = is_shift_map(tm);
    bool ok = true;
    for (const auto& st : steps) {
        if (shift && st.coordinate != m.state[0]) continue;
        std::string flag = st.report.passed ? (st.report.shared.empty() ? "ok" : "ok (shared root)") : "FAIL";
        std::string coord = shift ? "W" : st.coordinate;
        std::string n = std::to_string(st.n);
        r.table.rows.push_back({n, coord, "function", to_string(st.tropical), flag});
        r.table.rows.push_back({n, coord, "root valuations", roots_text(st.report.num_newton), flag});
        r.table.rows.push_back({n, coord, "pole valuations", roots_text(st.report.den_newton), flag});
        r.table.rows.push_back({n, coord, "ND points", to_string(nd_points(st.tropical)), flag});
        if (!st.report.passed) ok = false;
        for (const auto& w : st.report.warnings) r.table.notes.push_back("step " + n + ", " + st.coordinate + ": " + w);
    }
    r.table.notes.push_back("functions of " + tropical_name(free) + "; numerators and denominators are not reduced");
    r.table.verdict = ok ? "every ND set is accounted for by roots and poles" : "ND sets and roots disagree";
    r.exit_code = ok ? 0 : 1;
    return r;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
    LoadedMap lm = load_map(map_name(s), s.base_dir);
    switch (s.analysis) {
        case Analysis::Orbit: return run_orbit(s, lm);
        case Analysis::ConfineDiscrete: return run_confine_discrete(s, lm);
        case Analysis::ConfineUltra: return run_confine_ultra(s, lm);
        case Analysis::Correspond: return run_correspond(s, lm);
        case Analysis::Lemma3: return run_lemma3(s, lm);
    }
    bad("unknown analysis");
}

int run_and_print(const Scenario& s, std::string& out, std::string& err) {
    try {
        RunResult r = run_scenario(s);
        out += emit_table(r.table, s.format);
        if (s.format == Format::Csv) {
            for (const auto& n : r.table.notes) err += "note: " + n + "\n";
            if (!r.table.verdict.empty()) err += "verdict: " + r.table.verdict + "\n";
        }
        return r.exit_code;
    } catch (const Error& e) {
        err += std::string("error: ") + e.what() + "\n";
        return 2;
    } catch (const std::exception& e) {
        err += std::string("error: ") + e.what() + "\n";
        return 2;
    }
}

}  // namespace udc::cli
