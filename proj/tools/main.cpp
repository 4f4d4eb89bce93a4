// Command-line front end: validate, ladder, simulate, price, imply, arb.
// Every artifact embeds the tool version, the resolved configuration, the
// seed, and the RNG identity, so any output can be reproduced exactly.
// Thread count is an execution knob, never part of the artifact.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxcorr/arbitrage.hpp"
#include "maxcorr/bounds.hpp"
#include "maxcorr/copula.hpp"
#include "maxcorr/errors.hpp"
#include "maxcorr/implied.hpp"
#include "maxcorr/io.hpp"
#include "maxcorr/ladder.hpp"
#include "maxcorr/pricing.hpp"
#include "maxcorr/version.hpp"

using json = nlohmann::ordered_json;
using namespace maxcorr;

namespace {

struct CommonOpts {
    std::string portfolio_path;
    std::string output_path; // empty = stdout
    std::string format = "json";
    std::uint64_t seed = 0;
    int threads = 0; // 0 = env/hardware
};

int env_threads() {
    if (const char* env = std::getenv("MAXCORR_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--portfolio", opts.portfolio_path, "Portfolio CSV file")
        ->required();
    cmd->add_option("-o,--output", opts.output_path, "Output path (default stdout)");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "Random seed");
    cmd->add_option("--threads", opts.threads,
                    "Worker threads (default MAXCORR_THREADS or hardware)");
}

Portfolio load_portfolio(const CommonOpts& opts) {
    Portfolio p = read_portfolio_csv_file(opts.portfolio_path);
    const double total = p.total_notional();
    if (std::abs(total - 1.0) > 1e-9) {
        std::cerr << "warning: notionals sum to " << format_double(total)
                  << ", not 1; values remain fractions of total portfolio notional\n";
    }
    return p;
}

json make_meta(const std::string& command, const CommonOpts& opts) {
    json meta;
    meta["tool"] = "maxcorr";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["portfolio"] = opts.portfolio_path;
    meta["seed"] = opts.seed;
    meta["rng"] = kRngAlgorithm;
    return meta;
}

void meta_to_csv(std::ostream& out, const json& meta) {
    for (const auto& [key, value] : meta.items()) {
        out << "# " << key << "=";
        if (value.is_string()) {
            out << value.get<std::string>();
        } else {
            out << value.dump();
        }
        out << '\n';
    }
}

void write_output(const CommonOpts& opts, const std::string& payload) {
    if (opts.output_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(opts.output_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file '" + opts.output_path + "'");
    out << payload;
}

void write_file(const std::string& path, const std::string& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file '" + path + "'");
    out << payload;
}

std::string scenario_bits(std::uint64_t mask, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) s[i] = '1';
    }
    return s;
}

json valuation_json(const Valuation& v) {
    json j;
    j["value"] = v.value;
    j["std_error"] = v.std_error;
    j["method"] = v.method_name();
    if (v.method == Valuation::Method::MonteCarlo) {
        j["draws"] = v.draws;
        j["seed"] = v.seed;
    }
    return j;
}

// ---------------------------------------------------------------- validate

int run_validate(const CommonOpts& opts, const std::string& matrix_path,
                 const std::string& saturated_path) {
    const Portfolio p = load_portfolio(opts);
    json out;
    out["meta"] = make_meta("validate", opts);
    json pj = json::array();
    for (const auto& o : p.names()) {
        pj.push_back({{"label", o.label},
                      {"default_prob", o.default_prob},
                      {"recovery", o.recovery},
                      {"lgd", o.lgd},
                      {"notional", o.notional}});
    }
    out["portfolio"] = pj;
    out["total_notional"] = p.total_notional();
    out["total_loss_capacity"] = p.total_loss_capacity();
    out["expected_loss"] = p.expected_loss();

    bool ok = true;
    if (!matrix_path.empty()) {
        const DefaultCorrelationMatrix matrix(read_matrix_csv_file(matrix_path));
        const MatrixValidationReport report = validate_matrix(p, matrix);
        json mj;
        mj["file"] = matrix_path;
        mj["bounds_ok"] = report.bounds_ok();
        mj["positive_semi_definite"] = report.positive_semi_definite;
        mj["min_eigenvalue"] = report.min_eigenvalue;
        mj["valid"] = report.valid();
        json viols = json::array();
        for (const auto& v : report.violations) {
            viols.push_back({{"i", v.i + 1},
                             {"j", v.j + 1},
                             {"value", v.value},
                             {"bound", v.bound}});
        }
        mj["violations"] = viols;
        out["matrix"] = mj;
        ok = report.valid();
    }
    if (!saturated_path.empty()) {
        std::ostringstream sat;
        write_matrix_csv(sat, saturated_matrix(p).entries());
        write_file(saturated_path, sat.str());
        out["saturated_matrix_written"] = saturated_path;
    }
    write_output(opts, out.dump(2) + "\n");
    return ok ? 0 : 1;
}

// ------------------------------------------------------------------ ladder

int run_ladder(const CommonOpts& opts, const std::string& plot_path) {
    const Portfolio p = load_portfolio(opts);
    const LadderProcess ladder = build_ladder(p);
    const LossDistribution dist = ladder_loss_distribution(ladder);
    const std::size_t n = p.size();

    // Per-scenario losses, suffix sums as in the pricer.
    std::vector<double> losses(n + 1, 0.0);
    double suffix = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        suffix += p.name(k).loss_capacity();
        losses[k] = suffix;
    }

    const json meta = make_meta("ladder", opts);
    std::string payload;
    if (opts.format == "csv") {
        std::ostringstream out;
        meta_to_csv(out, meta);
        out << "# scenario table\n";
        out << "survivors,indicators,probability,loss\n";
        for (std::size_t k = n + 1; k-- > 0;) {
            out << k << ',' << scenario_bits(ladder.scenario_mask(k), n) << ','
                << format_double(ladder.scenario_prob(k)) << ','
                << format_double(losses[k]) << '\n';
        }
        out << "# loss distribution\n";
        out << "loss,probability\n";
        for (const auto& pt : dist.points()) {
            out << format_double(pt.loss) << ',' << format_double(pt.probability) << '\n';
        }
        payload = out.str();
    } else {
        json out;
        out["meta"] = meta;
        json table = json::array();
        for (std::size_t k = n + 1; k-- > 0;) {
            table.push_back({{"survivors", k},
                             {"indicators", scenario_bits(ladder.scenario_mask(k), n)},
                             {"probability", ladder.scenario_prob(k)},
                             {"loss", losses[k]}});
        }
        out["scenario_table"] = table;
        json dj = json::array();
        for (const auto& pt : dist.points()) {
            dj.push_back({{"loss", pt.loss}, {"probability", pt.probability}});
        }
        out["loss_distribution"] = dj;
        payload = out.dump(2) + "\n";
    }
    write_output(opts, payload);

    if (!plot_path.empty()) {
        std::ostringstream out;
        meta_to_csv(out, meta);
        out << "loss,probability\n";
        for (const auto& pt : dist.points()) {
            out << format_double(pt.loss) << ',' << format_double(pt.probability) << '\n';
        }
        write_file(plot_path, out.str());
    }
    return 0;
}

// ---------------------------------------------------------------- simulate

struct LawOpts {
    double flat_rho = -1.0; // <0 = unset
    std::string matrix_path;
    bool use_ladder = false;
};

AssetCorrelationSpec law_to_spec(const LawOpts& law) {
    if (!law.matrix_path.empty()) {
        return AssetCorrelationSpec::full(read_matrix_csv_file(law.matrix_path));
    }
    return AssetCorrelationSpec::flat(law.flat_rho);
}

int run_simulate(const CommonOpts& opts, const LawOpts& law, std::uint64_t draws,
                 const std::string& family_name) {
    const Portfolio p = load_portfolio(opts);
    SimOptions sim;
    sim.threads = opts.threads;
    if (family_name == "logistic") sim.family = &logistic_family();

    const AssetCorrelationSpec spec = law_to_spec(law);
    const auto counts = simulate_copula_counts(p, spec, draws, opts.seed, sim);

    json meta = make_meta("simulate", opts);
    meta["draws"] = draws;
    meta["family"] = family_name;
    if (!law.matrix_path.empty()) {
        meta["corr_matrix"] = law.matrix_path;
    } else {
        meta["flat_rho"] = law.flat_rho;
    }

    std::string payload;
    if (opts.format == "csv") {
        std::ostringstream out;
        meta_to_csv(out, meta);
        out << "scenario,count\n";
        for (const auto& [mask, count] : counts) {
            out << scenario_bits(mask, p.size()) << ',' << count << '\n';
        }
        payload = out.str();
    } else {
        json out;
        out["meta"] = meta;
        json rows = json::array();
        for (const auto& [mask, count] : counts) {
            rows.push_back({{"scenario", scenario_bits(mask, p.size())}, {"count", count}});
        }
        out["counts"] = rows;
        payload = out.dump(2) + "\n";
    }
    write_output(opts, payload);
    return 0;
}

// ------------------------------------------------------------------- price

int run_price(const CommonOpts& opts, const LawOpts& law, double attachment,
              const std::string& kind, std::uint64_t draws, const std::string& grid_path,
              int grid_points) {
    const Portfolio p = load_portfolio(opts);
    const TrancheSpec tranche = kind == "equity" ? TrancheSpec::equity(attachment)
                                                 : TrancheSpec::supersenior(attachment);

    json meta = make_meta("price", opts);
    meta["attachment"] = attachment;
    meta["kind"] = kind;

    Valuation valuation;
    if (law.use_ladder) {
        meta["law"] = "ladder";
        valuation = price_tranche_exhaustive(p, tranche, build_ladder(p));
    } else if (!law.matrix_path.empty()) {
        meta["law"] = "corr-matrix";
        meta["corr_matrix"] = law.matrix_path;
        if (draws == 0) {
            throw ValidationError(
                "full-matrix pricing is Monte Carlo only: pass --draws");
        }
        meta["draws"] = draws;
        valuation = price_tranche_mc(p, tranche, law_to_spec(law), draws, opts.seed,
                                     opts.threads);
    } else {
        meta["law"] = "flat-rho";
        meta["flat_rho"] = law.flat_rho;
        if (draws > 0) {
            meta["draws"] = draws;
            valuation = price_tranche_mc(p, tranche, law_to_spec(law), draws, opts.seed,
                                         opts.threads);
        } else {
            valuation =
                price_tranche_exhaustive(p, tranche, copula_scenario_table(p, law.flat_rho));
        }
    }

    json out;
    out["meta"] = meta;
    out["valuation"] = valuation_json(valuation);
    write_output(opts, out.dump(2) + "\n");

    if (!grid_path.empty()) {
        if (law.use_ladder || !law.matrix_path.empty()) {
            throw ValidationError("--grid requires a flat-rho law");
        }
        if (grid_points < 2) throw ValidationError("--grid-points must be >= 2");
        std::ostringstream gout;
        meta_to_csv(gout, meta);
        gout << "rho,value\n";
        for (int k = 0; k < grid_points; ++k) {
            const double rho =
                static_cast<double>(k) / static_cast<double>(grid_points - 1);
            // The endpoint is the analytic degenerate limit, exact by
            // construction; interior points use the quadrature table.
            const double value =
                rho == 1.0
                    ? price_tranche_exhaustive(p, tranche, degenerate_max_correlation(p))
                          .value
                    : price_tranche_exhaustive(p, tranche, copula_scenario_table(p, rho))
                          .value;
            gout << format_double(rho) << ',' << format_double(value) << '\n';
        }
        write_file(grid_path, gout.str());
    }
    return 0;
}

// ------------------------------------------------------------------- imply

int run_imply(const CommonOpts& opts, double attachment, double market_price,
              std::uint64_t draws, bool force_mc) {
    const Portfolio p = load_portfolio(opts);
    ImpliedConfig config;
    config.force_mc = force_mc;
    if (draws > 0) config.mc_draws = draws;
    config.seed = opts.seed;
    config.threads = opts.threads;

    const BreakdownReport report = breakdown_report(
        p, TrancheSpec::supersenior(attachment), market_price, config);
    const CalibrationResult& cal = report.calibration;

    json out;
    json meta = make_meta("imply", opts);
    meta["attachment"] = attachment;
    meta["market_price"] = market_price;
    meta["interior_method"] = cal.interior_method == Valuation::Method::MonteCarlo
                                  ? "monte-carlo"
                                  : "exhaustive";
    if (cal.interior_method == Valuation::Method::MonteCarlo) {
        meta["draws"] = config.mc_draws;
    }
    out["meta"] = meta;
    json cj;
    cj["status"] = to_string(cal.status);
    if (cal.status == CalibrationStatus::Solved) cj["rho"] = cal.rho;
    cj["price_at_zero"] = cal.price_at_zero;
    cj["price_at_one"] = cal.price_at_one;
    cj["market_price"] = cal.market_price;
    cj["iterations"] = cal.iterations;
    cj["excess_premium"] = report.excess_premium;
    out["calibration"] = cj;
    out["diagnosis"] = report.diagnosis;
    write_output(opts, out.dump(2) + "\n");
    return 0; // breakdown is a finding, not a failure
}

// --------------------------------------------------------------------- arb

int run_arb(const CommonOpts& opts, double attachment, double market_price,
            bool stress_lgd) {
    const Portfolio p = load_portfolio(opts);
    const ArbitrageCertificate cert =
        arbitrage_certificate(p, attachment, market_price, stress_lgd, opts.threads);

    json out;
    json meta = make_meta("arb", opts);
    meta["attachment"] = attachment;
    meta["market_price"] = market_price;
    meta["stress_lgd"] = stress_lgd;
    out["meta"] = meta;

    json dj;
    dj["pivot"] = cert.portfolio.decomposition.pivot;
    dj["epsilon"] = cert.portfolio.decomposition.epsilon;
    out["decomposition"] = dj;

    json legs = json::array();
    legs.push_back({{"position", "sell protection"},
                    {"instrument", "supersenior[" + format_double(attachment) + "]"},
                    {"units", 1.0}});
    for (const auto& leg : cert.portfolio.cds_legs) {
        legs.push_back({{"position", "buy protection"},
                        {"instrument", "cds:" + p.name(leg.name_index).label},
                        {"units", leg.units}});
    }
    out["legs"] = legs;

    out["cds_leg_cost"] = cert.cds_leg_cost;
    out["break_even_price"] = cert.break_even_price;
    out["initial_value"] = cert.initial_value;

    json mj;
    mj["min_value"] = cert.maturity.min_value;
    mj["min_scenario"] = scenario_bits(cert.maturity.min_scenario, p.size());
    mj["max_value"] = cert.maturity.max_value;
    mj["max_scenario"] = scenario_bits(cert.maturity.max_scenario, p.size());
    mj["profitable_scenarios"] = cert.maturity.profitable_scenarios;
    mj["total_scenarios"] = cert.maturity.total_scenarios;
    mj["non_negative"] = cert.maturity.non_negative();
    out["maturity"] = mj;

    out["certificate"] = cert.issued;
    out["guaranteed_profit"] = cert.guaranteed_profit;
    write_output(opts, out.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxcorr: maximal-correlation credit engine: tranche pricing, "
                 "implied correlation, breakdown diagnosis, arbitrage construction"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    CommonOpts opts;
    opts.threads = env_threads();

    // validate
    auto* c_validate = app.add_subcommand("validate", "Validate a portfolio and optionally "
                                                      "a default correlation matrix");
    std::string matrix_path;
    std::string saturated_path;
    add_common(c_validate, opts);
    c_validate->add_option("--matrix", matrix_path,
                           "Default correlation matrix CSV (N x N, no header)");
    c_validate->add_option("--emit-saturated", saturated_path,
                           "Write the portfolio's saturated correlation matrix as CSV");

    // ladder
    auto* c_ladder =
        app.add_subcommand("ladder", "Maximal-correlation scenario table and loss "
                                     "distribution");
    std::string plot_path;
    add_common(c_ladder, opts);
    c_ladder->add_option("--plot", plot_path, "Write the loss distribution as 2-column CSV");

    // simulate
    auto* c_simulate = app.add_subcommand("simulate", "Draw correlated default scenarios");
    LawOpts sim_law;
    std::uint64_t sim_draws = 100000;
    std::string family_name = "gaussian";
    add_common(c_simulate, opts);
    auto* sim_flat = c_simulate->add_option("--flat-rho", sim_law.flat_rho,
                                            "Flat asset correlation in [0,1]");
    auto* sim_matrix = c_simulate->add_option("--corr-matrix", sim_law.matrix_path,
                                              "Asset correlation matrix CSV");
    sim_flat->excludes(sim_matrix);
    c_simulate->add_option("--draws", sim_draws, "Number of draws")->required();
    c_simulate->add_option("--family", family_name,
                           "Latent family (logistic allowed at rho = 1 only)")
        ->check(CLI::IsMember({"gaussian", "logistic"}));

    // price
    auto* c_price = app.add_subcommand("price", "Risk-neutral tranche valuation");
    LawOpts price_law;
    double attachment = 0.0;
    std::string kind = "supersenior";
    std::uint64_t price_draws = 0;
    std::string grid_path;
    int grid_points = 11;
    add_common(c_price, opts);
    c_price->add_option("--attachment", attachment, "Attachment point")->required();
    c_price->add_option("--kind", kind, "Tranche kind")
        ->check(CLI::IsMember({"supersenior", "equity"}));
    auto* pl = c_price->add_flag("--ladder", price_law.use_ladder,
                                 "Price under the maximal-correlation law");
    auto* pf = c_price->add_option("--flat-rho", price_law.flat_rho,
                                   "Flat asset correlation in [0,1]");
    auto* pm = c_price->add_option("--corr-matrix", price_law.matrix_path,
                                   "Asset correlation matrix CSV (Monte Carlo)");
    pl->excludes(pf);
    pl->excludes(pm);
    pf->excludes(pm);
    c_price->add_option("--draws", price_draws,
                        "Monte Carlo draws (flat law prices exactly when omitted)");
    c_price->add_option("--grid", grid_path, "Write a correlation-vs-price CSV grid");
    c_price->add_option("--grid-points", grid_points, "Points in the --grid output");

    // imply
    auto* c_imply = app.add_subcommand("imply", "Implied flat correlation for a quote");
    double market_price = 0.0;
    double imply_attachment = 0.0;
    std::uint64_t imply_draws = 0;
    bool force_mc = false;
    add_common(c_imply, opts);
    c_imply->add_option("--attachment", imply_attachment, "Attachment point")->required();
    c_imply->add_option("--market-price", market_price, "Quoted up-front premium")
        ->required();
    c_imply->add_option("--draws", imply_draws, "Monte Carlo draws for interior pricing");
    c_imply->add_flag("--force-mc", force_mc, "Force Monte Carlo interior pricing");

    // arb
    auto* c_arb = app.add_subcommand("arb", "Construct and certify the arbitrage portfolio");
    double arb_attachment = 0.0;
    double arb_market = 0.0;
    bool stress_lgd = false;
    add_common(c_arb, opts);
    c_arb->add_option("--attachment", arb_attachment, "Attachment point")->required();
    c_arb->add_option("--market-price", arb_market, "Quoted supersenior premium")
        ->required();
    c_arb->add_flag("--stress-lgd", stress_lgd,
                    "Decompose against unit-LGD capacities (recovery stress)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_validate->parsed()) return run_validate(opts, matrix_path, saturated_path);
        if (c_ladder->parsed()) return run_ladder(opts, plot_path);
        if (c_simulate->parsed()) {
            if (sim_law.matrix_path.empty() && sim_law.flat_rho < 0.0) {
                throw ValidationError("pass --flat-rho or --corr-matrix");
            }
            return run_simulate(opts, sim_law, sim_draws, family_name);
        }
        if (c_price->parsed()) {
            if (!price_law.use_ladder && price_law.matrix_path.empty() &&
                price_law.flat_rho < 0.0) {
                throw ValidationError("pass --ladder, --flat-rho or --corr-matrix");
            }
            return run_price(opts, price_law, attachment, kind, price_draws, grid_path,
                             grid_points);
        }
        if (c_imply->parsed()) {
            return run_imply(opts, imply_attachment, market_price, imply_draws, force_mc);
        }
        if (c_arb->parsed()) return run_arb(opts, arb_attachment, arb_market, stress_lgd);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
