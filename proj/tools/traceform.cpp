// traceform: command-line front end for the traceform library.

#include "traceform/traceform.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace traceform;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitIo = 4;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

Interval as_pair(const std::vector<double>& v, const char* name) {
    if (v.size() != 2) throw ValidationError(std::string(name) + ": expected two comma-separated numbers");
    return {v[0], v[1]};
}

// ---- shared option groups --------------------------------------------------------------

struct SetArgs {
    std::string file;
    int svc_depth = -1;
    int periodic_depth = -1;
    double period = 2.0;
    std::vector<double> window{0.0, 1.0};
    std::string tail_left = "AllF";
    std::string tail_right = "AllF";
    int max_depth = 20;
};

void add_set_options(CLI::App* app, SetArgs& a) {
    app->add_option("--set", a.file, "IntervalSet JSON file");
    app->add_option("--svc-depth", a.svc_depth, "build the Smith-Volterra-Cantor complement of this depth");
    app->add_option("--periodic-depth", a.periodic_depth, "build one period of the periodic fat Cantor layout");
    app->add_option("--period", a.period, "period for --periodic-depth")->capture_default_str();
    app->add_option("--window", a.window, "window lo,hi for --svc-depth")->delimiter(',')->capture_default_str();
    app->add_option("--tail-left", a.tail_left, "AllG | AllF | Periodic")->capture_default_str();
    app->add_option("--tail-right", a.tail_right, "AllG | AllF | Periodic")->capture_default_str();
    app->add_option("--max-depth", a.max_depth, "depth bound for generators")->capture_default_str();
}

std::shared_ptr<const IntervalSet> load_set(const SetArgs& a) {
    const int sources = int{!a.file.empty()} + int{a.svc_depth >= 0} + int{a.periodic_depth >= 0};
    if (sources != 1) throw ValidationError("give exactly one of --set, --svc-depth, --periodic-depth");
    if (!a.file.empty()) {
        Json j;
        try {
            j = Json::parse(read_text(a.file));
        } catch (const Json::parse_error& e) {
            throw ValidationError(a.file + ": " + e.what());
        }
        return std::make_shared<const IntervalSet>(interval_set_from_json(j));
    }
    if (a.svc_depth >= 0) {
        const Tails tails{tail_from_string(a.tail_left), tail_from_string(a.tail_right)};
        return std::make_shared<const IntervalSet>(
            svc_complement(a.svc_depth, as_pair(a.window, "--window"), tails, a.max_depth));
    }
    return std::make_shared<const IntervalSet>(periodic_fat_cantor(a.periodic_depth, a.period, a.max_depth));
}

Json parse_json_file(const std::string& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

GridFunction load_function(const std::string& path, const IntervalSet* set) {
    return grid_function_from_csv(read_text(path), set);
}

Boundary boundary_from(const std::string& s) {
    if (s == "reflect") return Boundary::Reflect;
    if (s == "absorb") return Boundary::Absorb;
    throw ValidationError("boundary must be reflect or absorb, got " + s);
}

Holding holding_from(const std::string& s) {
    if (s == "exponential") return Holding::Exponential;
    if (s == "deterministic") return Holding::Deterministic;
    throw ValidationError("holding must be exponential or deterministic, got " + s);
}

ExitCorrection correction_from(const std::string& s) {
    if (s == "none") return ExitCorrection::None;
    if (s == "bridge") return ExitCorrection::BrownianBridge;
    throw ValidationError("correction must be none or bridge, got " + s);
}

// ---- output handling -------------------------------------------------------------------

class Output {
public:
    explicit Output(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        write_text_atomic(dir_ / name, content);
        files_.push_back(name);
    }
    void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

    const fs::path& dir() const { return dir_; }
    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

Json describe_options(const CLI::App* app) {
    Json j = Json::object();
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_name();
        if (name == "--help" || name == "-h" || name == "--out" || name == "--workers") continue;
        if (opt->count() > 0) {
            const auto& res = opt->results();
            j[name] = res.size() == 1 ? Json(res.front()) : Json(res);
        } else if (!opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

// ---- the application -------------------------------------------------------------------

class Cli {
public:
    Cli();
    int run(const std::vector<std::string>& args);

private:
    using Action = std::function<void(Output&)>;
    CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& help, Action action);

    CLI::App app_{"traceform: scale functions, traces and darning for Brownian motion on fat Cantor sets"};
    std::string out_dir_;
    unsigned workers_ = 1;
    Action action_;
    CLI::App* selected_ = nullptr;
    std::vector<std::string> argv_;

    SetArgs set_;
    double delta_ = 0.1;
    std::vector<double> xs_;
    std::vector<double> ys_;
    double anchor_ = 0.0;
    std::optional<double> z_;
    std::string u_file_;
    std::string v_file_;
    std::vector<double> interval_;
    std::string region_;
    bool inverse_ = false;
    bool harmonic_ = false;
    double d_ = 1.0;
    std::vector<double> alpha_ladder_;
    std::vector<std::string> sample_files_;
    std::size_t n_ = 100000;
    double dt_ = 0.0;
    double horizon_ = 1.0;
    double x0_ = 0.0;
    std::uint64_t seed_ = 0;
    bool seed_given_ = false;
    std::vector<double> gap_;
    double alpha_ = 1.0;
    std::string correction_ = "none";
    std::string speed_file_;
    double h_ = 0.01;
    std::string left_ = "reflect";
    std::string right_ = "reflect";
    std::string holding_ = "exponential";
    std::vector<double> targets_;
    double burn_in_ = 0.0;
    std::size_t batches_ = 20;
    std::size_t paths_ = 1;
    std::string manifest_file_;
};

CLI::App* Cli::leaf(CLI::App* parent, const std::string& name, const std::string& help, Action action) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->callback([this, sub, action] {
        selected_ = sub;
        action_ = action;
    });
    return sub;
}

void require_seed(bool given) {
    if (!given) throw ValidationError("--seed is required for stochastic commands");
}

Cli::Cli() {
    app_.fallthrough();
    app_.require_subcommand(1);
    const char* env_out = std::getenv("TRACEFORM_OUT");
    out_dir_ = env_out ? env_out : "traceform-out";
    app_.add_option("--out,-o", out_dir_, "output directory (default: $TRACEFORM_OUT or ./traceform-out)");
    app_.add_option("--workers", workers_, "worker threads for path generation")->capture_default_str();
    app_.set_version_flag("--version", std::string(version()));

    auto seed_opt = [this](CLI::App* s) {
        s->add_option("--seed", seed_, "random seed (required)")->each([this](const std::string&) {
            seed_given_ = true;
        });
    };

    // set
    auto* set_cmd = app_.add_subcommand("set", "build or validate an interval set");
    set_cmd->require_subcommand(1);
    {
        auto* s = leaf(set_cmd, "build", "materialize an IntervalSet as JSON", [this](Output& out) {
            const auto set = load_set(set_);
            out.write_json("set.json", to_json(*set));
        });
        add_set_options(s, set_);
    }
    {
        auto* s = leaf(set_cmd, "validate", "structural checks and delta-measure density", [this](Output& out) {
            const auto set = load_set(set_);
            const auto rep = validate(*set, delta_);
            out.write_json("validation.json", to_json(rep));
            std::cout << "delta-measure-dense: " << (rep.measure_dense ? "true" : "false")
                      << "\nstructurally valid: " << (rep.structurally_valid() ? "true" : "false") << "\n";
        });
        add_set_options(s, set_);
        s->add_option("--delta", delta_, "test interval length")->capture_default_str();
    }

    // scale
    auto* scale_cmd = app_.add_subcommand("scale", "scale function s with ds = 1_G dx");
    scale_cmd->require_subcommand(1);
    {
        auto* s = leaf(scale_cmd, "eval", "s(x), set-valued inverses and the boundary case", [this](Output& out) {
            const auto set = load_set(set_);
            ScaleFunction sf(set, anchor_);
            Json j;
            j["case"] = to_string(classify_case(sf));
            j["image"] = {sf.image().lo, sf.image().hi};
            Json values = Json::array();
            for (double x : xs_) values.push_back({{"x", x}, {"s", sf(x)}});
            j["values"] = std::move(values);
            Json inverses = Json::array();
            for (double y : ys_) {
                const auto pre = sf.inverse(y);
                inverses.push_back({{"y", y}, {"preimage", {pre.lo, pre.hi}}});
            }
            j["inverses"] = std::move(inverses);
            out.write_json("scale.json", j);
        });
        add_set_options(s, set_);
        s->add_option("--x", xs_, "points to evaluate")->delimiter(',');
        s->add_option("--y", ys_, "values to invert")->delimiter(',');
        s->add_option("--anchor", anchor_, "s(anchor) = 0")->capture_default_str();
    }

    // darn
    auto* darn_cmd = app_.add_subcommand("darn", "darning map j with dj = 1_F dx");
    darn_cmd->require_subcommand(1);
    {
        auto* s = leaf(darn_cmd, "map", "j(x), the image and m_j", [this](Output& out) {
            const auto set = load_set(set_);
            DarningMap dm(set, z_);
            Json j;
            j["z"] = dm.z();
            j["image"] = to_json(darning_image(dm));
            Json values = Json::array();
            for (double x : xs_) values.push_back({{"x", x}, {"j", dm(x)}});
            j["values"] = std::move(values);
            j["m_j"] = to_json(pushforward_speed(dm, SpeedSource::Lebesgue));
            j["trace_pushforward"] = to_json(pushforward_speed(dm, trace_measure(*set).measure));
            out.write_json("darning.json", j);
        });
        add_set_options(s, set_);
        s->add_option("--x", xs_, "points to map")->delimiter(',');
        s->add_option("--z", z_, "anchor z in F minus H");
    }
    {
        auto* s = leaf(darn_cmd, "function", "darn (or with --inverse undarn) a grid function", [this](Output& out) {
            const auto set = load_set(set_);
            DarningMap dm(set, z_);
            if (inverse_) {
                out.write("undarned.csv", grid_function_csv(undarn_function(load_function(u_file_, nullptr), dm)));
            } else {
                out.write("darned.csv", grid_function_csv(darn_function(load_function(u_file_, set.get()), dm)));
            }
        });
        add_set_options(s, set_);
        s->add_option("--u", u_file_, "grid function CSV")->required();
        s->add_option("--z", z_, "anchor z in F minus H");
        s->add_flag("--inverse", inverse_, "undarn a function given on the image");
    }

    // energy
    auto* energy_cmd = app_.add_subcommand("energy", "window energies of piecewise-linear functions");
    energy_cmd->require_subcommand(1);
    auto energy_leaf = [&](const std::string& name, const std::string& help,
                           std::function<EnergyReport(const GridFunction&, const GridFunction&, const IntervalSet&)>
                               form) {
        auto* s = leaf(energy_cmd, name, help, [this, form](Output& out) {
            const auto set = load_set(set_);
            const auto u = load_function(u_file_, set.get());
            const auto v = v_file_.empty() ? u : load_function(v_file_, set.get());
            out.write_json("energy.json", to_json(form(u, v, *set)));
        });
        add_set_options(s, set_);
        s->add_option("--u", u_file_, "grid function CSV")->required();
        s->add_option("--v", v_file_, "second argument (default: u)");
    };
    energy_leaf("full", "1/2 integral of u'v'",
                [](const GridFunction& u, const GridFunction& v, const IntervalSet&) { return dirichlet_energy(u, v); });
    energy_leaf("subspace", "1/2 integral of u'v' 1_G (u' = 0 on F required)",
                [](const GridFunction& u, const GridFunction& v, const IntervalSet& set) {
                    return subspace_energy(u, v, set);
                });
    energy_leaf("part", "energy of functions vanishing on F",
                [](const GridFunction& u, const GridFunction& v, const IntervalSet& set) {
                    return part_energy(u, v, set);
                });
    {
        auto* s = leaf(energy_cmd, "measure", "integral of u'^2 over an interval or region", [this](Output& out) {
            const auto set = load_set(set_);
            const auto u = load_function(u_file_, set.get());
            Json j;
            if (!interval_.empty()) {
                const auto a = as_pair(interval_, "--interval");
                j["interval"] = {a.lo, a.hi};
                j["energy_measure"] = energy_measure(u, a);
                j["subspace_energy_measure"] = subspace_energy_measure(u, *set, a);
            } else {
                const Region r = region_ == "F" ? Region::F : Region::G;
                if (region_ != "F" && region_ != "G") throw ValidationError("--region must be G or F");
                j["region"] = region_;
                j["energy_measure"] = energy_measure(u, *set, r);
            }
            out.write_json("energy_measure.json", j);
        });
        add_set_options(s, set_);
        s->add_option("--u", u_file_, "grid function CSV")->required();
        s->add_option("--interval", interval_, "a,b")->delimiter(',');
        s->add_option("--region", region_, "G or F (used without --interval)")->default_str("G");
        region_ = "G";
    }

    // decompose
    {
        auto* s = leaf(&app_, "decompose", "u = u1 + u2 with u1 in the subspace and u2 in its complement",
                       [this](Output& out) {
                           const auto set = load_set(set_);
                           ScaleFunction sf(set, anchor_);
                           const auto u = load_function(u_file_, set.get());
                           const auto d = harmonic_ ? decompose_harmonic(u, sf) : project_subspace(u, sf);
                           Json j = to_json(d);
                           j["energy_u"] = dirichlet_energy(u, u).value;
                           j["energy_u1"] = dirichlet_energy(d.u1, d.u1).value;
                           j["energy_u2"] = dirichlet_energy(d.u2, d.u2).value;
                           j["energy_u1_u2"] = dirichlet_energy(d.u1, d.u2).value;
                           out.write("u1.csv", grid_function_csv(d.u1));
                           out.write("u2.csv", grid_function_csv(d.u2));
                           out.write_json("decomposition.json", j);
                       });
        add_set_options(s, set_);
        s->add_option("--u", u_file_, "grid function CSV")->required();
        s->add_option("--anchor", anchor_, "scale anchor (pins u1(anchor) = 0 in the recurrent case)")
            ->capture_default_str();
        s->add_flag("--harmonic", harmonic_, "require u linear on every component of G");
    }

    // trace
    auto* trace_cmd = app_.add_subcommand("trace", "trace forms on F");
    trace_cmd->require_subcommand(1);
    auto trace_phi = [this](const IntervalSet& set) {
        const auto g = load_function(u_file_, nullptr);
        return TraceFunction::make({g.nodes().begin(), g.nodes().end()}, {g.values().begin(), g.values().end()}, set);
    };
    {
        auto* s = leaf(trace_cmd, "energy", "local plus jump trace energy", [this, trace_phi](Output& out) {
            const auto set = load_set(set_);
            const auto rep = trace_energy(trace_phi(*set), *set);
            Json j = to_json(rep);
            const auto parts = split(rep);
            j["local"] = parts.local;
            j["jump"] = parts.jump;
            out.write_json("trace_energy.json", j);
        });
        add_set_options(s, set_);
        s->add_option("--phi", u_file_, "trace function CSV (nodes in F)")->required();
    }
    {
        auto* s = leaf(trace_cmd, "subspace", "jump part only (phi' = 0 on F)", [this, trace_phi](Output& out) {
            const auto set = load_set(set_);
            out.write_json("trace_subspace_energy.json", to_json(trace_subspace_energy(trace_phi(*set), *set)));
        });
        add_set_options(s, set_);
        s->add_option("--phi", u_file_, "trace function CSV (nodes in F)")->required();
    }
    {
        auto* s = leaf(trace_cmd, "jump-table", "jump pairs and weights 1/(2 d_n)", [this](Output& out) {
            const auto set = load_set(set_);
            out.write("jump_table.csv", jump_table_csv(jump_table(*set)));
        });
        add_set_options(s, set_);
    }
    {
        auto* s = leaf(trace_cmd, "measure", "1_F dx plus atoms d_n/2 at the endpoints", [this](Output& out) {
            const auto set = load_set(set_);
            out.write_json("trace_measure.json", to_json(trace_measure(*set).measure));
        });
        add_set_options(s, set_);
    }

    // feller
    {
        auto* s = leaf(&app_, "feller", "jump weight limit along an alpha ladder", [this](Output& out) {
            std::string csv = "alpha,feller_numeric,feller_weight,relative_gap\n";
            const double w = feller_weight(d_);
            for (double a : alpha_ladder_) {
                const double f = feller_numeric(d_, a);
                csv += format_real(a) + ',' + format_real(f) + ',' + format_real(w) + ',' +
                       format_real(std::abs(f - w) / w) + '\n';
            }
            out.write("feller.csv", csv);
        });
        s->add_option("--d", d_, "gap length")->capture_default_str();
        s->add_option("--alpha-ladder", alpha_ladder_, "comma-separated alpha values")->delimiter(',')->required();
    }

    // equivalence
    {
        auto* s = leaf(&app_, "equivalence", "sup, L2 and energy preserved by darning", [this](Output& out) {
            const auto set = load_set(set_);
            DarningMap dm(set, z_);
            ScaleFunction sf(set, anchor_);
            std::vector<GridFunction> samples;
            for (const auto& f : sample_files_) samples.push_back(load_function(f, set.get()));
            const auto rep = equivalence_report(samples, dm, sf);
            out.write_json("equivalence.json", to_json(rep));
        });
        add_set_options(s, set_);
        s->add_option("--u", sample_files_, "complement members as grid function CSVs")->delimiter(',')->required();
        s->add_option("--z", z_, "anchor z in F minus H");
    }

    // simulate
    auto* sim_cmd = app_.add_subcommand("simulate", "sample paths");
    sim_cmd->require_subcommand(1);
    {
        auto* s = leaf(sim_cmd, "bm", "Brownian motion paths", [this](Output& out) {
            require_seed(seed_given_);
            const auto paths = bm_paths(paths_, dt_, horizon_, x0_, seed_, workers_);
            for (std::size_t i = 0; i < paths.size(); ++i) {
                out.write("path_" + std::to_string(i) + ".csv", path_csv(paths[i]));
            }
        });
        s->add_option("--n", paths_, "number of paths")->capture_default_str();
        s->add_option("--dt", dt_, "time step")->required();
        s->add_option("--horizon", horizon_, "time horizon")->capture_default_str();
        s->add_option("--x0", x0_, "start")->capture_default_str();
        seed_opt(s);
    }
    auto walk_options = [this](CLI::App* s) {
        s->add_option("--step", h_, "grid step h in natural scale")->capture_default_str();
        s->add_option("--horizon", horizon_, "time horizon")->capture_default_str();
        s->add_option("--x0", x0_, "start")->capture_default_str();
        s->add_option("--left", left_, "reflect | absorb")->capture_default_str();
        s->add_option("--right", right_, "reflect | absorb")->capture_default_str();
        s->add_option("--holding", holding_, "exponential | deterministic")->capture_default_str();
    };
    auto walk_opts = [this] {
        WalkOptions o;
        o.h = h_;
        o.left = boundary_from(left_);
        o.right = boundary_from(right_);
        o.holding = holding_from(holding_);
        return o;
    };
    {
        auto* s = leaf(sim_cmd, "walk", "time-changed walk for a speed measure", [this, walk_opts](Output& out) {
            require_seed(seed_given_);
            const auto speed = speed_measure_from_json(parse_json_file(speed_file_));
            out.write("path.csv", path_csv(walk_paths(speed, walk_opts(), x0_, horizon_, seed_)));
        });
        s->add_option("--speed", speed_file_, "SpeedMeasure JSON")->required();
        walk_options(s);
        seed_opt(s);
    }
    {
        auto* s = leaf(sim_cmd, "xs", "subspace diffusion reported on the line", [this, walk_opts](Output& out) {
            require_seed(seed_given_);
            const auto set = load_set(set_);
            ScaleFunction sf(set, anchor_);
            out.write("path.csv", path_csv(simulate_xs(sf, walk_opts(), x0_, horizon_, seed_)));
        });
        add_set_options(s, set_);
        walk_options(s);
        seed_opt(s);
    }
    {
        auto* s = leaf(sim_cmd, "darning", "darning process on the image of j", [this, walk_opts](Output& out) {
            require_seed(seed_given_);
            const auto set = load_set(set_);
            DarningMap dm(set, z_);
            const auto speed = darning_speed_measure(darning_image(dm));
            out.write("path.csv", path_csv(walk_paths(speed, walk_opts(), x0_, horizon_, seed_)));
            out.write_json("speed.json", to_json(speed));
        });
        add_set_options(s, set_);
        s->add_option("--z", z_, "anchor z in F minus H");
        walk_options(s);
        seed_opt(s);
    }

    // estimate
    auto* est_cmd = app_.add_subcommand("estimate", "Monte Carlo estimators");
    est_cmd->require_subcommand(1);
    auto exit_gap = [this]() -> Interval {
        if (!gap_.empty()) return as_pair(gap_, "--gap");
        const auto set = load_set(set_);
        for (const auto& c : set->components()) {
            if (c.lo < x0_ && x0_ < c.hi) return c;
        }
        throw PreconditionError("x0 = " + format_real(x0_) +
                                " lies in F; the start must be inside a bounded component of G");
    };
    auto exit_opts = [this] {
        ExitOptions o;
        o.n = n_;
        o.seed = seed_;
        o.dt = dt_;
        o.workers = workers_;
        o.correction = correction_from(correction_);
        return o;
    };
    auto exit_options = [this](CLI::App* s) {
        s->add_option("--gap", gap_, "a,b (instead of a set)")->delimiter(',');
        s->add_option("--x0", x0_, "start inside the gap")->required();
        s->add_option("--n", n_, "number of paths")->capture_default_str();
        s->add_option("--dt", dt_, "time step (default (gap/50)^2)")->capture_default_str();
        s->add_option("--correction", correction_, "none | bridge")->capture_default_str();
    };
    {
        auto* s = leaf(est_cmd, "hitting", "exit-side probabilities", [this, exit_gap, exit_opts](Output& out) {
            require_seed(seed_given_);
            const auto gap = exit_gap();
            const auto est = estimate_hitting(gap, x0_, exit_opts());
            Json j{{"gap", {gap.lo, gap.hi}}, {"x0", x0_}, {"dt", est.dt},
                   {"left", to_json(est.left)}, {"right", to_json(est.right)}};
            out.write_json("hitting.json", j);
        });
        add_set_options(s, set_);
        exit_options(s);
        seed_opt(s);
    }
    {
        auto* s = leaf(est_cmd, "laplace", "E[exp(-alpha sigma); exit side] at dt and dt/4",
                       [this, exit_gap, exit_opts](Output& out) {
                           require_seed(seed_given_);
                           const auto gap = exit_gap();
                           const auto est = estimate_laplace(gap, x0_, alpha_, exit_opts());
                           Json j{{"gap", {gap.lo, gap.hi}},
                                  {"x0", x0_},
                                  {"alpha", alpha_},
                                  {"dt_coarse", est.dt_coarse},
                                  {"dt_fine", est.dt_fine},
                                  {"left", to_json(est.left)},
                                  {"right", to_json(est.right)},
                                  {"left_coarse", to_json(est.left_coarse)},
                                  {"right_coarse", to_json(est.right_coarse)},
                                  {"bias_band_left", est.bias_band_left},
                                  {"bias_band_right", est.bias_band_right}};
                           out.write_json("laplace.json", j);
                       });
        add_set_options(s, set_);
        exit_options(s);
        s->add_option("--alpha", alpha_, "Laplace parameter")->capture_default_str();
        seed_opt(s);
    }
    {
        auto* s = leaf(est_cmd, "occupation", "time-weighted occupation of a walk", [this, walk_opts](Output& out) {
            require_seed(seed_given_);
            const auto speed = speed_measure_from_json(parse_json_file(speed_file_));
            const auto chain = build_walk_chain(speed, walk_opts());
            if (targets_.empty() || targets_.size() % 2 != 0) {
                throw ValidationError("--target needs pairs lo,hi");
            }
            std::vector<OccupationTarget> targets;
            for (std::size_t i = 0; i < targets_.size(); i += 2) {
                targets.push_back({{targets_[i], targets_[i + 1]},
                                   "[" + format_real(targets_[i]) + ", " + format_real(targets_[i + 1]) + "]"});
            }
            const auto res =
                walk_occupation(chain, x0_, horizon_, seed_, holding_from(holding_), targets, burn_in_, batches_);
            Json arr = Json::array();
            for (const auto& r : res) arr.push_back(to_json(r));
            out.write_json("occupation.json", Json{{"h", chain.h}, {"horizon", horizon_}, {"targets", arr}});
        });
        s->add_option("--speed", speed_file_, "SpeedMeasure JSON")->required();
        walk_options(s);
        s->add_option("--target", targets_, "lo,hi[,lo,hi...] closed target intervals")->delimiter(',')->required();
        s->add_option("--burn-in", burn_in_, "discarded initial time")->capture_default_str();
        s->add_option("--batches", batches_, "batch count for standard errors")->capture_default_str();
        seed_opt(s);
    }

    // replay
    {
        auto* s = app_.add_subcommand("replay", "re-run the command recorded in a manifest");
        s->add_option("manifest", manifest_file_, "manifest.json")->required();
        s->callback([this, s] {
            selected_ = s;
            action_ = nullptr;
        });
    }
}

int Cli::run(const std::vector<std::string>& args) {
    argv_ = args;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app_.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app_.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app_.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app_.exit(e);
    } catch (const CLI::ParseError& e) {
        app_.exit(e);
        return kExitValidation;
    }

    try {
        if (selected_ && selected_->get_name() == "replay") {
            const Json m = parse_json_file(manifest_file_);
            if (!m.contains("argv") || !m.at("argv").is_array()) throw ValidationError("manifest has no argv");
            std::vector<std::string> replay_args;
            const auto recorded = m.at("argv").get<std::vector<std::string>>();
            for (std::size_t i = 0; i < recorded.size(); ++i) {
                if (recorded[i] == "--out" || recorded[i] == "-o") {
                    ++i;
                    continue;
                }
                replay_args.push_back(recorded[i]);
            }
            replay_args.push_back("--out");
            replay_args.push_back(out_dir_);
            Cli again;
            return again.run(replay_args);
        }

        Output out(out_dir_);
        action_(out);

        std::string command;
        Json config = Json::object();
        std::vector<const CLI::App*> chain;
        for (const CLI::App* a = selected_; a && a->get_parent(); a = a->get_parent()) chain.insert(chain.begin(), a);
        for (const auto* a : chain) {
            command += (command.empty() ? "" : " ") + a->get_name();
            const Json opts = describe_options(a);
            for (const auto& [k, v] : opts.items()) config[k] = v;
        }
        const std::string canonical = Json{{"command", command}, {"config", config}}.dump();
        Json manifest{{"tool", "traceform"},
                      {"version", version()},
                      {"command", command},
                      {"argv", argv_},
                      {"config", config},
                      {"config_hash", hex(fnv1a(canonical))},
                      {"outputs", out.files()}};
        write_text_atomic(out.dir() / "manifest.json", manifest.dump(2) + "\n");
        return 0;
    } catch (const Error& e) {
        std::cerr << "traceform: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Validation: return kExitValidation;
            case ErrorKind::Precondition: return kExitPrecondition;
            case ErrorKind::Io: return kExitIo;
        }
    } catch (const Json::exception& e) {
        std::cerr << "traceform: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "traceform: " << e.what() << "\n";
        return kExitIo;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    Cli cli;
    return cli.run(args);
}
