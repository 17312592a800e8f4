// Command-line front end: solves the trading-game equilibria, runs parameter
// sweeps to CSV, and re-verifies solutions against the Monte Carlo and
// brute-force oracles.
//
// Exit codes: 0 success, 1 configuration error, 2 solver non-convergence,
// 3 verification failure.

#include <clocale>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cursedknight/cursedknight.hpp"

namespace ck = cursedknight;
using nlohmann::json;

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

struct BandOptions {
    std::string family;
    double param = 0.0;
    std::string band_file;
    std::string builtin;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "band family: contamination | triangle | epsilon");
        cmd->add_option("--param", param, "family parameter (kappa, a, or eps)");
        cmd->add_option("--band-file", band_file, "JSON band specification file");
        cmd->add_option("--builtin", builtin,
                        "built-in band: multi-equilibrium | nonmono-narrow | nonmono-wide");
    }

    ck::DistributionBand make() const {
        if (!band_file.empty()) {
            std::ifstream in(band_file);
            if (!in) throw std::invalid_argument("cannot open band file: " + band_file);
            json spec = json::parse(in);
            return ck::band_from_json(spec);
        }
        if (!builtin.empty()) {
            if (builtin == "multi-equilibrium") return ck::multi_equilibrium_band();
            if (builtin == "nonmono-narrow") return ck::nonmonotonicity_band_pair().first;
            if (builtin == "nonmono-wide") return ck::nonmonotonicity_band_pair().second;
            throw std::invalid_argument("unknown builtin band: " + builtin);
        }
        if (!family.empty()) {
            if (family == "contamination") return ck::make_contamination_band(param);
            if (family == "triangle") return ck::make_triangle_band(param);
            if (family == "epsilon") return ck::make_epsilon_band(param);
            throw std::invalid_argument("unknown band family: " + family);
        }
        return ck::make_uniform_band();
    }
};

json result_to_json(const ck::EquilibriumResult& r) {
    json j;
    j["concept"] = r.concept_tag;
    j["band"] = r.band;
    j["method"] = ck::method_name(r.method);
    j["trivial_included"] = r.trivial_included;
    j["profiles"] = r.profiles;
    j["residuals"] = r.residuals;
    j["grid_warning"] = r.grid_warning;
    j["notes"] = r.notes;
    return j;
}

struct ConceptPair {
    ck::Concept player1, player2;
};

ConceptPair concept_pair_for(const std::string& tag, double chi1, double chi2) {
    using K = ck::ConceptKind;
    if (tag == "bne") return {{K::rational, 0.0}, {K::rational, 0.0}};
    if (tag == "cursed") return {{K::cursed, 1.0}, {K::cursed, 1.0}};
    if (tag == "knight-nash") return {{K::maxmin_rational, 1.0}, {K::maxmin_rational, 1.0}};
    if (tag == "symmetric-ckne" || tag == "all-ckne")
        return {{K::maxmin_cursed_under_center, 1.0}, {K::maxmin_cursed_under_center, 1.0}};
    if (tag == "cursed-uncursed")
        return {{K::maxmin_cursed_under_center, 1.0}, {K::maxmin_rational, 1.0}};
    if (tag == "ambiguous-ckne")
        return {{K::ambiguous_cursed, 1.0}, {K::ambiguous_cursed, 1.0}};
    if (tag == "ambiguous-cursed-uncursed")
        return {{K::ambiguous_cursed, 1.0}, {K::maxmin_rational, 1.0}};
    if (tag == "partial") return {{K::partial, chi1}, {K::partial, chi2}};
    throw std::invalid_argument("unknown concept: " + tag);
}

bool needs_normalized_band(const std::string& tag) {
    return tag == "knight-nash" || tag == "symmetric-ckne" || tag == "all-ckne" ||
           tag == "cursed-uncursed" || tag == "ambiguous-ckne" ||
           tag == "ambiguous-cursed-uncursed";
}

ck::EquilibriumResult solve_concept(const std::string& tag, const ck::DistributionBand& raw_band,
                                    double chi1, double chi2, int grid_n) {
    ck::DistributionBand band = raw_band;
    if (needs_normalized_band(tag) && !band.normalized) {
        band = ck::normalize_band(band);  // uncertainty concepts work in quantile space
        std::cerr << "band normalized: " << band.description << "\n";
    }
    if (tag == "bne") return ck::solve_bne();
    if (tag == "cursed") return ck::solve_cursed_no_uncertainty(band.center);
    if (tag == "knight-nash") return ck::solve_knight_nash_cutoff(band);
    if (tag == "symmetric-ckne") return ck::solve_symmetric_ckne(band);
    if (tag == "all-ckne") return ck::solve_all_ckne(band, grid_n);
    if (tag == "cursed-uncursed") return ck::solve_cursed_uncursed(band);
    if (tag == "ambiguous-ckne") return ck::solve_ambiguous_ckne(band);
    if (tag == "ambiguous-cursed-uncursed") return ck::solve_ambiguous_cursed_uncursed(band);
    if (tag == "partial") return ck::solve_partial(chi1, chi2, band.center);
    throw std::invalid_argument("unknown concept: " + tag);
}

// --------------------------------------------------------------------------
int run_solve(const BandOptions& band_opts, const std::string& tag, double chi1, double chi2,
              int grid_n, const std::string& output) {
    const auto band = band_opts.make();
    auto result = solve_concept(tag, band, chi1, chi2, grid_n);
    if (result.band == "any" || result.band.empty()) result.band = band.description;
    std::cerr << "solve: band=" << band.description << " concept=" << tag
              << " method=" << ck::method_name(result.method) << "\n";
    json j = result_to_json(result);
    j["command"] = "solve";
    write_output(output, j.dump(2) + "\n");
    return 0;
}

// --------------------------------------------------------------------------
int run_sweep(const BandOptions& band_opts, const std::string& tag, double start, double stop,
              int steps, double chi_other, const std::string& output) {
    if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
    std::ostringstream csv;
    if (tag == "welfare") {
        csv << "chi,U,V\n";
        for (int i = 0; i < steps; ++i) {
            const double chi = start + (stop - start) * i / (steps - 1);
            const auto w = ck::welfare_report(chi, chi_other);
            csv << format_number(chi) << ',' << format_number(w.U1) << ','
                << format_number(w.V1) << '\n';
        }
        std::cerr << "sweep: welfare chi in [" << start << ", " << stop << "] with opponent chi "
                  << chi_other << "\n";
        write_output(output, csv.str());
        return 0;
    }

    csv << "param,threshold\n";
    for (int i = 0; i < steps; ++i) {
        const double p = start + (stop - start) * i / (steps - 1);
        BandOptions opts = band_opts;
        opts.param = p;
        const auto band = opts.make();
        double threshold = 0.0;
        if (tag == "symmetric-ckne")
            threshold = ck::symmetric_ckne_threshold(band);
        else if (tag == "ambiguous-ckne")
            threshold = ck::ambiguous_ckne_threshold(band);
        else
            throw std::invalid_argument("sweep supports symmetric-ckne, ambiguous-ckne, welfare");
        csv << format_number(p) << ',' << format_number(threshold) << '\n';
    }
    std::cerr << "sweep: " << tag << " over " << band_opts.family << " in [" << start << ", "
              << stop << "], method=bisection\n";
    write_output(output, csv.str());
    return 0;
}

// --------------------------------------------------------------------------
struct CheckList {
    json checks = json::array();
    bool all_pass = true;
    void add(const std::string& name, bool pass, double measured, double limit) {
        checks.push_back({{"name", name}, {"pass", pass}, {"measured", measured}, {"limit", limit}});
        all_pass = all_pass && pass;
    }
};

int run_verify(const BandOptions& band_opts, const std::string& tag, double chi1, double chi2,
               long long n, std::uint64_t seed, int grid_n, double perturb,
               const std::string& output) {
    auto band = band_opts.make();
    if (needs_normalized_band(tag) && !band.normalized) band = ck::normalize_band(band);
    CheckList checks;

    if (tag == "welfare") {
        const auto q = ck::partial_equilibrium_quantiles(chi1, chi2);
        const double expected = ck::actual_utility_1(chi1, chi2);
        const auto sim = ck::simulate_game(ck::GeneralStrategy::cutoff(q[0]),
                                           ck::GeneralStrategy::cutoff(q[1]), band.center, n, seed);
        const double gap = std::abs(sim.mean_payoff1 - expected);
        checks.add("monte-carlo payoff within 3 standard errors of the closed form", gap < 3.0 * sim.std_error,
                   gap, 3.0 * sim.std_error);
        const auto pair = concept_pair_for("partial", chi1, chi2);
        if (q[0] > 0.0 || q[1] > 0.0) {
            const auto cert = ck::verify_equilibrium(ck::GeneralStrategy::cutoff(q[0]),
                                                     ck::GeneralStrategy::cutoff(q[1]), pair.player1,
                                                     pair.player2, band, grid_n);
            checks.add("equilibrium certificate", cert.certified, cert.max_improvement, cert.tolerance);
        }
    } else {
        auto result = solve_concept(tag, band, chi1, chi2, grid_n);
        const auto profiles = result.non_trivial_profiles();
        double t1 = 0.0, t2 = 0.0;
        if (!profiles.empty()) {
            t1 = profiles.front()[0];
            t2 = profiles.front()[1];
        }
        t1 = std::min(1.0, std::max(0.0, t1 + perturb));
        t2 = std::min(1.0, std::max(0.0, t2 + perturb));
        const auto pair = concept_pair_for(tag, chi1, chi2);
        const auto cert =
            ck::verify_equilibrium(ck::GeneralStrategy::cutoff(t1), ck::GeneralStrategy::cutoff(t2),
                                   pair.player1, pair.player2, band, grid_n);
        checks.add("equilibrium certificate", cert.certified, cert.max_improvement, cert.tolerance);

        const bool maxmin = pair.player1.kind == ck::ConceptKind::maxmin_rational ||
                            pair.player1.kind == ck::ConceptKind::maxmin_cursed_under_center ||
                            pair.player1.kind == ck::ConceptKind::ambiguous_cursed;
        if (maxmin && (t1 > 0.0 || t2 > 0.0)) {
            ck::ValueQuery q{t1, ck::Action::trade, ck::CutoffStrategy{t2}, band, 1.0};
            const double closed = ck::value(pair.player1, q);
            const double brute = ck::bruteforce_min_value(pair.player1, q, 500, 33, seed);
            checks.add("brute-force minimum matches the closed-form value",
                       std::abs(brute - closed) < 1e-6, std::abs(brute - closed), 1e-6);
        }
        if (std::abs(t1 - t2) < 1e-12) {
            const auto sim = ck::simulate_game(ck::GeneralStrategy::cutoff(t1),
                                               ck::GeneralStrategy::cutoff(t2), band.center, n, seed);
            const double gap = std::abs(sim.mean_payoff1 - 0.5);
            checks.add("symmetric profile pays one half within 3 standard errors",
                       gap < 3.0 * sim.std_error, gap, 3.0 * sim.std_error);
        }
    }

    json j;
    j["command"] = "verify";
    j["scenario"] = tag;
    j["band"] = band.description;
    j["seed"] = seed;
    j["games"] = n;
    j["checks"] = checks.checks;
    j["pass"] = checks.all_pass;
    std::cerr << "verify: band=" << band.description << " scenario=" << tag
              << (checks.all_pass ? " -> pass" : " -> FAIL") << "\n";
    write_output(output, j.dump(2) + "\n");
    return checks.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"equilibria of a two-player trading game under distribution-band uncertainty"};
    app.require_subcommand(1);

    BandOptions solve_band, sweep_band, verify_band;
    std::string solve_concept_tag, sweep_concept_tag = "symmetric-ckne", verify_concept_tag;
    std::string solve_output = "-", sweep_output = "-", verify_output = "-";
    double chi1 = 1.0, chi2 = 1.0, vchi1 = 1.0, vchi2 = 1.0;
    int solve_grid_n = 256, verify_grid_n = 10000;
    double sweep_start = 0.0, sweep_stop = 0.99, sweep_chi_other = 1.0;
    int sweep_steps = 50;
    long long verify_n = 1000000;
    std::uint64_t verify_seed = 12345;
    double verify_perturb = 0.0;

    auto* solve = app.add_subcommand("solve", "solve one equilibrium concept");
    solve_band.attach(solve);
    solve->add_option("--concept", solve_concept_tag,
                      "bne | cursed | knight-nash | symmetric-ckne | all-ckne | cursed-uncursed | "
                      "ambiguous-ckne | ambiguous-cursed-uncursed | partial")
        ->required();
    solve->add_option("--chi1", chi1, "player 1 cursedness (partial concept)");
    solve->add_option("--chi2", chi2, "player 2 cursedness (partial concept)");
    solve->add_option("--grid-n", solve_grid_n, "lattice resolution for all-ckne");
    solve->add_option("--output,-o", solve_output, "output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "sweep a parameter, write CSV");
    sweep_band.attach(sweep);
    sweep->add_option("--concept", sweep_concept_tag, "symmetric-ckne | ambiguous-ckne | welfare");
    sweep->add_option("--start", sweep_start, "first parameter value")->required();
    sweep->add_option("--stop", sweep_stop, "last parameter value")->required();
    sweep->add_option("--steps", sweep_steps, "number of rows (>= 2)");
    sweep->add_option("--chi-other", sweep_chi_other, "opponent cursedness for welfare sweeps");
    sweep->add_option("--output,-o", sweep_output, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "re-verify a solution against the oracles");
    verify_band.attach(verify);
    verify->add_option("--concept", verify_concept_tag, "concept or 'welfare'")->required();
    verify->add_option("--chi1", vchi1, "player 1 cursedness");
    verify->add_option("--chi2", vchi2, "player 2 cursedness");
    verify->add_option("--n", verify_n, "Monte Carlo games");
    verify->add_option("--seed", verify_seed, "Monte Carlo seed");
    verify->add_option("--grid-n", verify_grid_n, "certification grid");
    verify->add_option("--perturb", verify_perturb, "offset added to the solved thresholds");
    verify->add_option("--output,-o", verify_output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 1;      // flag mistakes are configuration errors
    }

    try {
        if (solve->parsed())
            return run_solve(solve_band, solve_concept_tag, chi1, chi2, solve_grid_n, solve_output);
        if (sweep->parsed())
            return run_sweep(sweep_band, sweep_concept_tag, sweep_start, sweep_stop, sweep_steps,
                             sweep_chi_other, sweep_output);
        if (verify->parsed())
            return run_verify(verify_band, verify_concept_tag, vchi1, vchi2, verify_n, verify_seed,
                              verify_grid_n, verify_perturb, verify_output);
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
