#include "cli.hpp"

#include "tmq/parallel.hpp"
#include "tmq/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tmq::cli {

namespace {

using json = nlohmann::json;

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(trim_copy(cur));
    return out;
}

Rational parse_rational_or_usage(const std::string& s) {
    try {
        return parse_rational(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

QuasicrystalParams params_of(const RunConfig& cfg) {
    try {
        return QuasicrystalParams::parse(cfg.a, cfg.b);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad tile lengths: ") + e.what());
    }
}

unsigned jobs_of(const RunConfig& cfg) { return cfg.jobs == 0 ? default_jobs() : cfg.jobs; }

Cell text(std::string s) { return Cell{std::move(s)}; }
Cell integer(std::int64_t v) { return Cell{v}; }
Cell real(double v, int digits = 0) { return Cell{Real{v, digits}}; }

std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const Real& r) const { return format_real(r.value, r.digits); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

json cell_json(const Cell& c) {
    struct Visitor {
        json operator()(std::monostate) const { return nullptr; }
        json operator()(const std::string& s) const { return s; }
        json operator()(std::int64_t v) const { return v; }
        json operator()(const Real& r) const {
            if (!std::isfinite(r.value)) return format_real(r.value);
            if (r.digits == 0) return r.value;
            return std::stod(format_real(r.value, r.digits));
        }
        json operator()(bool b) const { return b; }
    };
    return std::visit(Visitor{}, c);
}

WeightFn weights_of(const RunConfig& cfg) {
    const std::string& w = cfg.weights;
    auto is_square = [](std::uint64_t n) {
        auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
        while (r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r * r == n;
    };
    if (w == "ones") return unit_weight;
    if (w == "zeros") return [](std::uint64_t) { return 0.0; };
    if (w == "squares") return [is_square](std::uint64_t n) { return n >= 1 && is_square(n) ? 1.0 : 0.0; };
    if (w == "flip-squares")
        return [is_square](std::uint64_t n) { return n >= 1 ? (is_square(n) ? -1.0 : 1.0) : 0.0; };
    if (w == "random") {
        WeightFn r = random_weights(cfg.seed);
        return [r](std::uint64_t n) { return n >= 1 ? r(n) : 0.0; };
    }
    throw UsageError("unknown weights '" + w + "' (ones, zeros, squares, random, flip-squares)");
}

}  // namespace

std::string format_real(double value, int digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    if (digits > 0) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, value);
        return buf;
    }
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::vector<Rational> parse_grid(const std::string& text) {
    std::vector<Rational> out;
    std::string t = trim_copy(text);
    if (t.empty()) return out;
    if (t.find(':') != std::string::npos) {
        auto parts = split(t, ':');
        if (parts.size() != 3) throw UsageError("grid range must be start:step:count");
        Rational start = parse_rational_or_usage(parts[0]);
        Rational step = parse_rational_or_usage(parts[1]);
        Rational count = parse_rational_or_usage(parts[2]);
        if (count.get_den() != 1 || count < 0) throw UsageError("grid count must be a nonnegative integer");
        if (count > 10000000) throw UsageError("grid count too large");
        long c = count.get_num().get_si();
        for (long i = 0; i < c; ++i) out.push_back(start + step * i);
        return out;
    }
    for (const auto& tok : split(t, ',')) {
        if (tok.empty()) throw UsageError("empty grid entry");
        out.push_back(parse_rational_or_usage(tok));
    }
    return out;
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (const auto& tok : split(trim_copy(text), ',')) {
        if (tok.empty()) continue;
        Rational v = parse_rational_or_usage(tok);
        if (v.get_den() != 1 || v < 1 || !v.get_num().fits_ulong_p()) throw UsageError("size '" + tok + "' is not a positive integer");
        out.push_back(v.get_num().get_ui());
    }
    return out;
}

std::string render_csv(const Table& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
        os << '\n';
    }
    for (const auto& [key, value] : table.summary) os << "# " << key << '=' << cell_text(value) << '\n';
    return os.str();
}

std::string render_json(const Table& table) {
    json doc;
    doc["command"] = table.command;
    doc["columns"] = table.columns;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
        rows.push_back(obj);
    }
    doc["rows"] = rows;
    json summary = json::object();
    for (const auto& [key, value] : table.summary) summary[key] = cell_json(value);
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
}

std::string render(const Table& table, Format format) {
    return format == Format::Json ? render_json(table) : render_csv(table);
}

CommandResult cmd_sequence(const RunConfig& cfg) {
    QuasicrystalParams params = params_of(cfg);
    CommandResult res;
    res.table.command = "sequence";
    res.table.columns = {"n", "s", "eta", "f"};
    for (std::uint64_t n = 0; n <= cfg.n; ++n) {
        res.table.rows.push_back({integer(static_cast<std::int64_t>(n)), integer(digit_sum(n)), integer(tm_sign(n)),
                                  text(to_string(point(static_cast<std::int64_t>(n), params)))});
    }
    return res;
}

CommandResult cmd_diffract(const RunConfig& cfg) {
    QuasicrystalParams params = params_of(cfg);
    auto grid = parse_grid(cfg.grid);
    auto sizes = cfg.sizes.empty() ? std::vector<std::uint64_t>{16, 256, 4096} : parse_sizes(cfg.sizes);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    CommandResult res;
    res.table.command = "diffract";
    res.table.columns = {"q", "k", "l", "nu", "alpha_l"};
    auto per_q = ordered_map(
        grid,
        [&](const Rational& q) {
            std::vector<std::vector<Cell>> rows;
            for (const auto& v : approximant_densities(sizes, q, params)) {
                Cell alpha;
                if (v.l >= 2)
                    alpha = density_is_zero(v.density, v.l)
                                ? real(-std::numeric_limits<double>::infinity())
                                : real(std::log(v.density) / std::log(static_cast<double>(v.l)));
                rows.push_back({text(to_string(q)), real(v.k), integer(static_cast<std::int64_t>(v.l)),
                                real(v.density, 12), alpha});
            }
            return rows;
        },
        jobs_of(cfg));
    for (auto& rows : per_q)
        for (auto& r : rows) res.table.rows.push_back(std::move(r));
    return res;
}

CommandResult cmd_classify_primes(const RunConfig& cfg) {
    if (cfg.limit < 3) throw UsageError("--limit must be >= 3");
    auto primes = odd_primes_below(cfg.limit + 1);
    CommandResult res;
    res.table.command = "classify-primes";
    res.table.columns = {"p", "s", "class", "h", "epsilon", "beta", "regime"};
    auto recs = ordered_map(primes, [](std::uint64_t p) { return prime_record_with_eigen_beta(p); }, jobs_of(cfg));
    for (const auto& r : recs) {
        Cell h, eps, beta, regime;
        if (r.h) h = integer(static_cast<std::int64_t>(*r.h));
        if (r.epsilon) eps = text(r.epsilon->to_string());
        if (r.beta) {
            beta = real(*r.beta);
            regime = text(to_string(growth_regime(2.0 * *r.beta - 1.0)));
        }
        if (r.class_number_drift) res.exit_code = 2;
        res.table.rows.push_back({integer(static_cast<std::int64_t>(r.p)), integer(static_cast<std::int64_t>(r.s)),
                                  text(to_string(r.cls)), h, eps, beta, regime});
    }
    return res;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
    QuasicrystalParams params = params_of(cfg);
    std::vector<std::string> tokens;
    std::string g = trim_copy(cfg.grid);
    if (g.find(':') != std::string::npos) {
        for (const auto& q : parse_grid(g)) tokens.push_back(to_string(q));
    } else if (!g.empty()) {
        tokens = split(g, ',');
    }
    CommandResult res;
    res.table.command = "spectrum";
    res.table.columns = {"q", "t", "h", "p", "kind", "alpha", "beta", "source", "kappa_eta_re", "kappa_eta_im",
                         "coset_alpha", "flags", "error"};
    struct Row {
        std::vector<Cell> cells;
        bool parse_error = false;
        bool boundary = false;
    };
    auto rows = ordered_map(
        tokens,
        [&](const std::string& tok) {
            Row row;
            std::vector<Cell> cells(13);
            cells[0] = text(tok);
            try {
                SpectralVerdict v;
                if (!tok.empty() && tok[0] == '~') {
                    double k = std::stod(tok.substr(1));
                    v = classify_irrational(k, params);
                } else {
                    v = classify(parse_rational(tok), params);
                }
                if (v.wave) {
                    cells[1] = text(v.wave->t.get_str());
                    cells[2] = integer(v.wave->h);
                    cells[3] = text(v.wave->p.get_str());
                }
                cells[4] = text(to_string(v.kind));
                if (v.alpha) cells[5] = real(*v.alpha);
                if (v.beta) cells[6] = real(*v.beta);
                cells[7] = text(to_string(v.source));
                cells[8] = real(v.kappa_eta.real());
                cells[9] = real(v.kappa_eta.imag());
                if (v.coset_alpha) cells[10] = real(*v.coset_alpha);
                std::string flags;
                if (v.exponent_unproven) flags += "exponent-unproven;";
                if (v.conjectural) flags += "conjectural;";
                if (v.kappa_eta_boundary) flags += "kappa-eta-boundary;";
                if (v.kind == VerdictKind::AlmostSureNull) flags += "null-set-undecided;";
                if (!flags.empty()) flags.pop_back();
                cells[11] = text(flags);
                row.boundary = v.kappa_eta_boundary;
            } catch (const std::exception& e) {
                cells[4] = text("error");
                cells[12] = text(e.what());
                row.parse_error = true;
            }
            row.cells = std::move(cells);
            return row;
        },
        jobs_of(cfg));
    for (auto& r : rows) {
        if (r.parse_error) res.exit_code = 1;
        else if (r.boundary && res.exit_code == 0) res.exit_code = 2;
        res.table.rows.push_back(std::move(r.cells));
    }
    return res;
}

CommandResult cmd_profile(const RunConfig& cfg) {
    if (cfg.p < 3 || !is_prime(cfg.p)) throw UsageError("--p must be an odd prime");
    if (cfg.j >= cfg.p) throw UsageError("--j must lie in [0, p)");
    if (cfg.horizon > 4096) throw UsageError("--horizon exceeds the compute budget");
    FractalProfile prof;
    try {
        prof = fractal_profile(cfg.p, cfg.j, cfg.horizon, cfg.resolution);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    CommandResult res;
    res.table.command = "profile";
    res.table.columns = {"x", "n", "psi", "raw"};
    for (const auto& s : prof.samples)
        res.table.rows.push_back({real(s.x), text(s.n.get_str()), real(s.value), real(s.raw)});
    res.table.summary = {{"p", integer(static_cast<std::int64_t>(prof.p))},
                         {"j", integer(static_cast<std::int64_t>(prof.j))},
                         {"r", integer(prof.r)},
                         {"s", integer(static_cast<std::int64_t>(prof.s))},
                         {"beta", real(prof.beta)},
                         {"inf", real(prof.inf)},
                         {"sup", real(prof.sup)},
                         {"raw_inf", real(prof.raw_inf)},
                         {"raw_sup", real(prof.raw_sup)},
                         {"error_constant", real(prof.error_constant)},
                         {"sign_change", Cell{prof.sign_change}}};
    return res;
}

CommandResult cmd_rarefy(const RunConfig& cfg) {
    if (cfg.p < 3 || cfg.p % 2 == 0) throw UsageError("--p must be an odd integer >= 3");
    std::vector<Rational> ns = cfg.grid.empty() ? std::vector<Rational>{Rational(Integer(static_cast<unsigned long>(cfg.n)))}
                                                : parse_grid(cfg.grid);
    for (const auto& n : ns)
        if (n.get_den() != 1 || n < 0) throw UsageError("rarefy grid entries must be nonnegative integers");
    CommandResult res;
    res.table.command = "rarefy";
    res.table.columns = {"n", "j", "S"};
    auto vecs = ordered_map(ns, [&](const Rational& n) { return rarefied_vector(cfg.p, n.get_num()); }, jobs_of(cfg));
    for (const auto& v : vecs)
        for (std::uint64_t j = 0; j < cfg.p; ++j)
            res.table.rows.push_back({text(v.n.get_str()), integer(static_cast<std::int64_t>(j)), text(v.entries[j].get_str())});
    return res;
}

CommandResult cmd_marcinkiewicz(const RunConfig& cfg) {
    QuasicrystalParams params = params_of(cfg);
    WeightFn w = weights_of(cfg);
    Rational q = parse_rational_or_usage(cfg.q);
    if (cfg.horizon < 1 || cfg.horizon > 30) throw UsageError("--horizon must lie in [1, 30]");
    std::vector<std::uint64_t> horizons;
    for (unsigned e = 1; e <= cfg.horizon; ++e) horizons.push_back(std::uint64_t{1} << e);
    auto rep = class_invariance_check(w, w, q, params, horizons);
    CommandResult res;
    res.table.command = "marcinkiewicz";
    res.table.columns = {"L", "norm", "intensity", "bound_ok"};
    for (const auto& row : rep.rows)
        res.table.rows.push_back({integer(static_cast<std::int64_t>(row.horizon)), real(row.norm1),
                                  real(row.intensity1, 12), Cell{row.bound1}});
    if (!rep.bounds_hold) res.exit_code = 2;
    return res;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
    if (name == "sequence") return cmd_sequence(cfg);
    if (name == "diffract") return cmd_diffract(cfg);
    if (name == "classify-primes") return cmd_classify_primes(cfg);
    if (name == "spectrum") return cmd_spectrum(cfg);
    if (name == "profile") return cmd_profile(cfg);
    if (name == "rarefy") return cmd_rarefy(cfg);
    if (name == "marcinkiewicz") return cmd_marcinkiewicz(cfg);
    throw UsageError("unknown command '" + name + "'");
}

namespace {

void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& app) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed config file: ") + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    auto given = [&](const std::string& flag) { return app.count("--" + flag) > 0; };
    auto str = [&](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    try {
        for (const auto& [key, v] : doc.items()) {
            if (given(key)) continue;  // flags override the file
            if (key == "a") cfg.a = str(v);
            else if (key == "b") cfg.b = str(v);
            else if (key == "format") {
                std::string f = v.get<std::string>();
                if (f != "csv" && f != "json") throw UsageError("format must be csv or json");
                cfg.format = f == "json" ? Format::Json : Format::Csv;
            } else if (key == "out") cfg.out = v.get<std::string>();
            else if (key == "limit") cfg.limit = v.get<std::uint64_t>();
            else if (key == "horizon") cfg.horizon = v.get<unsigned>();
            else if (key == "grid") cfg.grid = str(v);
            else if (key == "sizes") cfg.sizes = str(v);
            else if (key == "jobs") cfg.jobs = v.get<unsigned>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "p") cfg.p = v.get<std::uint64_t>();
            else if (key == "j") cfg.j = v.get<std::uint64_t>();
            else if (key == "n") cfg.n = v.get<std::uint64_t>();
            else if (key == "resolution") cfg.resolution = v.get<unsigned>();
            else if (key == "weights") cfg.weights = v.get<std::string>();
            else if (key == "q") cfg.q = str(v);
            else throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
}

}  // namespace

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thue-Morse quasicrystal spectra"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::string format = "csv";
    std::string config;
    app.add_option("--a", cfg.a, "long tile length (rational)");
    app.add_option("--b", cfg.b, "short tile length (rational)");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--limit", cfg.limit, "prime limit (inclusive)");
    app.add_option("--horizon", cfg.horizon, "horizon exponent");
    app.add_option("--grid", cfg.grid, "comma list or start:step:count");
    app.add_option("--sizes", cfg.sizes, "comma list of approximant sizes");
    app.add_option("--jobs", cfg.jobs, "worker threads (0: all cores)");
    app.add_option("--seed", cfg.seed, "seed for randomized weights");
    app.add_option("--p", cfg.p, "odd modulus");
    app.add_option("--j", cfg.j, "residue");
    app.add_option("--n", cfg.n, "index bound");
    app.add_option("--resolution", cfg.resolution, "profile samples per period");
    app.add_option("--weights", cfg.weights, "ones, zeros, squares, random, flip-squares");
    app.add_option("--q", cfg.q, "reduced wave vector q");
    app.add_option("--config", config, "JSON file with the same keys as the flags");
    const char* names[] = {"sequence", "diffract", "classify-primes", "spectrum", "profile", "rarefy", "marcinkiewicz"};
    for (const char* name : names) app.add_subcommand(name);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    }
    try {
        cfg.format = format == "json" ? Format::Json : Format::Csv;
        if (!config.empty()) apply_config_file(config, cfg, app);
        std::string name = app.get_subcommands().front()->get_name();
        CommandResult res = run_command(name, cfg);
        std::string body = render(res.table, cfg.format);
        if (cfg.out.empty()) {
            out << body;
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) throw UsageError("cannot write '" + cfg.out + "'");
            file << body;
        }
        return res.exit_code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace tmq::cli
