#include "conelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conelab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& v, int line) {
    const auto caret = v.find('^');
    if (caret != std::string::npos) {
        const std::string base = trim(v.substr(0, caret));
        const std::string exp = trim(v.substr(caret + 1));
        if (base != "2") parse_fail(line, "only powers of two are supported in '" + v + "'");
        try {
            return std::ldexp(1.0, std::stoi(exp));
        } catch (const std::exception&) {
            parse_fail(line, "bad exponent in '" + v + "'");
        }
    }
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) parse_fail(line, "trailing characters in number '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        parse_fail(line, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line, "number out of range: '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_number(item, line));
    }
    if (out.empty()) parse_fail(line, "empty list");
    return out;
}

DyadicRange parse_dyadic_range(const std::string& v, int line, const std::string& name) {
    const auto dots = v.find("..");
    double lo_value = 0.0, hi_value = 0.0;
    if (dots == std::string::npos) {
        lo_value = hi_value = parse_number(trim(v), line);
    } else {
        lo_value = parse_number(trim(v.substr(0, dots)), line);
        hi_value = parse_number(trim(v.substr(dots + 2)), line);
    }
    if (!is_dyadic(lo_value) || !is_dyadic(hi_value)) parse_fail(line, name + " must be dyadic");
    DyadicRange range{dyadic_log2(lo_value), dyadic_log2(hi_value)};
    if (range.lo_log2 > range.hi_log2) parse_fail(line, name + " range is reversed");
    return range;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    parse_fail(line, "expected a boolean, got '" + v + "'");
}

const char* const kCommands[] = {"bessel-check", "extension-eval", "dyadic-sweep", "schur",
                                 "lorentz-check", "hy-check", "weighted-bessel", "band",
                                 "global-check", "report", "none"};

}  // namespace

RunConfig parse_config(const std::string& text, bool strict) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    bool r_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) parse_fail(line_no, "expected 'key = value'");

        auto unknown = [&]() {
            if (strict) parse_fail(line_no, "unknown key '" + key + "' in section [" + section + "]");
        };

        if (section == "run") {
            if (key == "command") {
                cfg.command = value;
                if (std::find(std::begin(kCommands), std::end(kCommands), cfg.command) == std::end(kCommands))
                    parse_fail(line_no, "unknown command '" + value + "'");
            } else if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
            } else if (key == "workers") {
                cfg.workers = std::max(1, static_cast<int>(parse_number(value, line_no)));
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "csv") {
                cfg.csv_name = value;
            } else if (key == "json") {
                cfg.json_name = value;
            } else if (key == "input") {
                cfg.input_csv = value;
            } else if (key == "strict") {
                cfg.strict = parse_bool(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "exponents") {
            if (key == "n") {
                cfg.n = static_cast<int>(parse_number(value, line_no));
                if (cfg.n < 2) parse_fail(line_no, "n must be >= 2");
            } else if (key == "p") {
                cfg.p = value == "inf" ? std::numeric_limits<double>::infinity() : parse_number(value, line_no);
            } else if (key == "q") {
                cfg.q = parse_number(value, line_no);
            } else if (key == "q_grid") {
                cfg.q_grid = parse_list(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "profile") {
            if (key == "shape") {
                if (value != "constant" && value != "power" && value != "smooth_bump" &&
                    value != "band_indicator" && value != "sampled")
                    parse_fail(line_no, "unknown profile shape '" + value + "'");
                cfg.profile_shape = value;
            } else if (key == "a") {
                cfg.profile_a = parse_number(value, line_no);
            } else if (key == "b") {
                cfg.profile_b = parse_number(value, line_no);
            } else if (key == "exponent") {
                cfg.profile_exponent = parse_number(value, line_no);
            } else if (key == "delta") {
                cfg.profile_delta = parse_number(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "sweep") {
            if (key == "R") {
                cfg.r_range = parse_dyadic_range(value, line_no, "R");
                r_seen = true;
            } else if (key == "M") {
                cfg.m_range = parse_dyadic_range(value, line_no, "M");
            } else if (key == "term") {
                if (value != "full" && value != "main" && value != "error")
                    parse_fail(line_no, "term must be one of full, main, error");
                cfg.term = value;
            } else if (key == "mass_exponent") {
                cfg.mass_exponent = parse_number(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "band") {
            if (key == "deltas") {
                cfg.deltas = parse_list(value, line_no);
                for (double d : cfg.deltas)
                    if (!is_dyadic(d) || d > 1.0) parse_fail(line_no, "band deltas must be dyadic and <= 1");
            } else if (key == "j_max") {
                cfg.band_j_max = static_cast<int>(parse_number(value, line_no));
            } else {
                unknown();
            }
        } else if (section == "schur") {
            if (key == "range") {
                cfg.schur_range = static_cast<int>(parse_number(value, line_no));
            } else {
                unknown();
            }
        } else if (section == "weighted-bessel") {
            if (key == "s") {
                cfg.wb_s = parse_number(value, line_no);
            } else if (key == "r_max") {
                cfg.wb_r_max = parse_number(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "points") {
            if (key == "t") {
                cfg.eval_t = parse_list(value, line_no);
            } else if (key == "r") {
                cfg.eval_r = parse_list(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "tolerances") {
            if (key == "slope") {
                cfg.slope_tolerance = parse_number(value, line_no);
            } else if (key == "tail") {
                cfg.tail_tol = parse_number(value, line_no);
            } else {
                unknown();
            }
        } else if (section == "corpus") {
            if (key == "trials") {
                cfg.trials = static_cast<int>(parse_number(value, line_no));
            } else {
                unknown();
            }
        } else {
            if (strict) parse_fail(line_no, "unknown section [" + section + "]");
        }
    }
    for (double tol : {cfg.slope_tolerance, cfg.tail_tol})
        if (!(tol > 0.0)) throw std::invalid_argument("config: tolerances must be positive");
    if (cfg.command.empty()) cfg.command = "none";
    (void)r_seen;
    return cfg;
}

RunConfig parse_config_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), strict);
}

RadialProfile profile_from_config(const RunConfig& cfg) {
    if (cfg.profile_shape == "constant") return RadialProfile::constant(1.0, cfg.profile_a, cfg.profile_b);
    if (cfg.profile_shape == "power")
        return RadialProfile::power(cfg.profile_exponent, cfg.profile_a, cfg.profile_b);
    if (cfg.profile_shape == "smooth_bump") return RadialProfile::smooth_bump(cfg.profile_a, cfg.profile_b);
    if (cfg.profile_shape == "band_indicator") return RadialProfile::band_indicator(cfg.profile_delta);
    throw std::invalid_argument("profile shape '" + cfg.profile_shape + "' needs explicit samples");
}

// --- CSV schema ----------------------------------------------------------------

namespace {

const char* const kColumns[] = {"experiment", "n",          "p",         "q",     "R",
                                "M",          "delta",      "term",      "norm_value",
                                "abs_error",  "slope",      "residual",  "flags"};
constexpr int kNumColumns = 13;

const char* const kFlagVocabulary[] = {"divergent", "truncation-unstable", "excluded-from-fit"};

std::string format_number(double x) {
    if (std::isnan(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

std::string csv_header() {
    std::string out;
    for (int i = 0; i < kNumColumns; ++i) {
        if (i) out += ',';
        out += kColumns[i];
    }
    return out;
}

std::string csv_line(const ReportRow& row) {
    std::string flags;
    for (std::size_t i = 0; i < row.flags.size(); ++i) {
        if (i) flags += ';';
        flags += row.flags[i];
    }
    std::string out = row.experiment;
    out += ',' + std::to_string(row.n);
    out += ',' + format_number(row.p);
    out += ',' + format_number(row.q);
    out += ',' + format_number(row.R);
    out += ',' + format_number(row.M);
    out += ',' + format_number(row.delta);
    out += ',' + row.term;
    out += ',' + format_number(row.norm_value);
    out += ',' + format_number(row.abs_error);
    out += ',' + format_number(row.slope);
    out += ',' + format_number(row.residual);
    out += ',' + flags;
    return out;
}

bool validate_csv_line(const std::string& line, std::string* error) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (static_cast<int>(cells.size()) != kNumColumns) {
        if (error) *error = "expected " + std::to_string(kNumColumns) + " columns, got " + std::to_string(cells.size());
        return false;
    }
    static const int numeric_cols[] = {1, 2, 3, 4, 5, 6, 8, 9, 10, 11};
    bool flagged = !cells[12].empty();
    for (int c : numeric_cols) {
        const std::string& v = cells[static_cast<std::size_t>(c)];
        if (v.empty()) continue;
        try {
            const double x = std::stod(v);
            if (!std::isfinite(x) && !flagged) {
                if (error) *error = std::string("non-finite unflagged value in column ") + kColumns[c];
                return false;
            }
        } catch (const std::exception&) {
            if (error) *error = std::string("non-numeric value in column ") + kColumns[c];
            return false;
        }
    }
    if (flagged) {
        std::stringstream fs(cells[12]);
        std::string flag;
        while (std::getline(fs, flag, ';')) {
            if (std::find(std::begin(kFlagVocabulary), std::end(kFlagVocabulary), flag) ==
                std::end(kFlagVocabulary)) {
                if (error) *error = "unknown flag '" + flag + "'";
                return false;
            }
        }
    }
    return true;
}

// --- command execution ----------------------------------------------------------

namespace {

struct CommandResult {
    std::vector<ReportRow> rows;
    ordered_json checks = ordered_json::array();
    bool ok = true;
};

ordered_json make_check(const std::string& experiment, ordered_json params, double slope,
                        double expected_slope, double tolerance, bool pass) {
    ordered_json c;
    c["experiment"] = experiment;
    c["params"] = std::move(params);
    if (std::isnan(slope)) c["slope"] = nullptr; else c["slope"] = slope;
    if (std::isnan(expected_slope)) c["expected_slope"] = nullptr; else c["expected_slope"] = expected_slope;
    if (std::isnan(tolerance)) c["tolerance"] = nullptr; else c["tolerance"] = tolerance;
    c["pass"] = pass;
    return c;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ReportRow base_row(const RunConfig& cfg, const std::string& experiment) {
    ReportRow row;
    row.experiment = experiment;
    row.n = cfg.n;
    row.p = cfg.p;
    row.q = cfg.q;
    return row;
}

CommandResult run_bessel_check(const RunConfig& cfg) {
    CommandResult out;
    std::vector<double> grid;
    for (int j = 0; j <= 10; ++j) grid.push_back(std::ldexp(1.0, j));
    const auto products = verify_error_bound(cfg.n, grid);
    double sup = 0.0, sup_refined = 0.0;
    for (const auto& [r, prod] : products) {
        ReportRow row = base_row(cfg, "bessel-check");
        row.R = r;
        row.norm_value = prod;
        const auto refined = error_kernel_refined(cfg.n, r, ErrorKernelSign::kPlus);
        const double prod_ref = std::abs(refined.value) * std::pow(r, 0.5 * (cfg.n + 1));
        row.abs_error = std::abs(prod - prod_ref);
        sup = std::max(sup, prod);
        sup_refined = std::max(sup_refined, prod_ref);
        out.rows.push_back(row);
    }
    bool pass = true;
    if (cfg.n == 3) {
        pass = sup == 0.0;
    } else {
        pass = std::isfinite(sup) && std::abs(sup - sup_refined) <= 0.01 * std::max(sup, 1e-300);
    }
    out.ok = pass;
    out.checks.push_back(make_check("bessel-check", {{"n", cfg.n}, {"sup", sup}}, kNaN, kNaN, 0.01, pass));
    return out;
}

CommandResult run_extension_eval(const RunConfig& cfg) {
    CommandResult out;
    const RadialProfile F = profile_from_config(cfg);
    std::vector<double> ts = cfg.eval_t.empty() ? std::vector<double>{0.0, 1.5, -3.0} : cfg.eval_t;
    std::vector<double> rs = cfg.eval_r.empty() ? std::vector<double>{2.0, 4.0} : cfg.eval_r;
    double worst = 0.0;
    for (double r : rs) {
        for (double t : ts) {
            const SpacetimePoint pt{t, r, cfg.n};
            const ExtensionValue direct = extension_direct(F, pt);
            ReportRow row = base_row(cfg, "extension-eval");
            row.R = r;
            row.delta = t;
            row.term = "full";
            row.norm_value = std::abs(direct.value);
            row.abs_error = direct.abs_error;
            out.rows.push_back(row);
            if (r >= 1.0) {
                const ExtensionValue main = main_term(F, pt);
                const ExtensionValue err = error_term(F, pt);
                for (const auto& [term, v] : {std::pair{"main", main}, std::pair{"error", err}}) {
                    ReportRow tr = base_row(cfg, "extension-eval");
                    tr.R = r;
                    tr.delta = t;
                    tr.term = term;
                    tr.norm_value = std::abs(v.value);
                    tr.abs_error = v.abs_error;
                    out.rows.push_back(tr);
                }
                worst = std::max(worst, std::abs(direct.value - main.value - err.value) /
                                            (1.0 + std::abs(direct.value)));
            }
        }
    }
    const bool pass = worst <= 1e-7;
    out.ok = pass;
    out.checks.push_back(
        make_check("extension-eval", {{"n", cfg.n}, {"identity_residual", worst}}, kNaN, kNaN, 1e-7, pass));
    return out;
}

ExtensionTerm term_from_string(const std::string& term) {
    if (term == "full") return ExtensionTerm::kFull;
    if (term == "main") return ExtensionTerm::kMain;
    return ExtensionTerm::kError;
}

CommandResult run_dyadic_sweep(const RunConfig& cfg) {
    CommandResult out;
    const RadialProfile F = profile_from_config(cfg);
    const ExponentTriple exps(cfg.n, cfg.p, cfg.q);
    const ExtensionTerm term = term_from_string(cfg.term);
    NormOptions opt;
    opt.tail_rel_tol = cfg.tail_tol;
    const auto sweep = dyadic_sweep(F, exps, cfg.r_range, term, opt, cfg.workers);

    for (const auto& pt : sweep) {
        ReportRow row = base_row(cfg, "dyadic-sweep");
        row.R = pt.R;
        row.M = F.dyadic_level();
        row.term = cfg.term;
        row.norm_value = pt.norm.value;
        row.abs_error = pt.norm.abs_error;
        if (pt.flagged) row.flags.push_back("truncation-unstable");
        if (pt.flagged || !(pt.norm.value > 0.0)) row.flags.push_back("excluded-from-fit");
        out.rows.push_back(row);
    }

    double expected = kNaN;
    bool one_sided = false;
    if (cfg.r_range.lo_log2 >= 1) {
        expected = term == ExtensionTerm::kError ? exps.alpha_error() : exps.alpha_far();
        one_sided = term == ExtensionTerm::kError;
    } else if (cfg.r_range.hi_log2 <= 0) {
        expected = exps.alpha_near();
    }

    bool pass = true;
    double slope = kNaN, residual = kNaN;
    if (term == ExtensionTerm::kError && cfg.n == 3) {
        for (const auto& pt : sweep) pass = pass && pt.norm.value == 0.0;
    } else {
        try {
            const SlopeFit fit = fit_slope(sweep);
            slope = fit.slope;
            residual = fit.max_residual;
            if (!std::isnan(expected))
                pass = one_sided ? slope <= expected + cfg.slope_tolerance
                                 : std::abs(slope - expected) <= cfg.slope_tolerance;
        } catch (const std::exception&) {
            pass = false;
        }
        ReportRow srow = base_row(cfg, "dyadic-sweep");
        srow.term = cfg.term;
        srow.slope = slope;
        srow.residual = residual;
        out.rows.push_back(srow);
    }
    out.ok = pass;
    out.checks.push_back(make_check(
        "dyadic-sweep",
        {{"n", cfg.n}, {"p", cfg.p}, {"q", cfg.q}, {"term", cfg.term}, {"profile", cfg.profile_shape}},
        slope, expected, cfg.slope_tolerance, pass));
    return out;
}

CommandResult run_schur(const RunConfig& cfg) {
    CommandResult out;
    const ExponentTriple exps(cfg.n, cfg.p, cfg.q);
    const SchurSum sum = schur_sum(exps, cfg.schur_range);
    for (std::size_t j = 0; j < sum.partial_sums.size(); ++j) {
        ReportRow row = base_row(cfg, "schur");
        row.R = std::ldexp(1.0, static_cast<int>(j));
        row.norm_value = sum.partial_sums[j];
        if (j + 1 == sum.partial_sums.size() && sum.divergent) row.flags.push_back("divergent");
        out.rows.push_back(row);
    }
    const bool expect_divergent = exps.q <= exps.critical_q() + 1e-12;
    const bool pass = sum.divergent == expect_divergent;
    out.ok = pass;
    out.checks.push_back(make_check("schur",
                                    {{"n", cfg.n}, {"q", cfg.q}, {"divergent", sum.divergent}, {"value", sum.value}},
                                    kNaN, kNaN, kNaN, pass));
    return out;
}

StepFunction random_step_function(SplitMix64& rng, int max_pieces = 10) {
    const int count = rng.uniform_int(1, max_pieces);
    std::vector<StepPiece> pieces;
    pieces.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        pieces.push_back({std::exp(rng.uniform(-3.0, 3.0)), std::exp(rng.uniform(-2.0, 2.0))});
    return StepFunction(std::move(pieces));
}

CommandResult run_lorentz_check(const RunConfig& cfg) {
    CommandResult out;
    SplitMix64 rng(cfg.seed);
    const double p_list[] = {1.0, 1.5, 2.0, 3.0};
    double lpp_dev = 0.0, dilation_dev = 0.0;
    int monotonicity_violations = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const StepFunction f = random_step_function(rng);
        const double p = p_list[trial % 4];
        const double direct = f.lp_norm(p);
        const double viaL = lorentz_norm(f, LorentzExponents(p, p));
        lpp_dev = std::max(lpp_dev, std::abs(direct - viaL) / std::max(direct, 1e-300));
        const double lam = std::exp(rng.uniform(-2.0, 2.0));
        const double lhs = lorentz_norm(f.scaled_measures(lam), LorentzExponents(p, 2.0 * p));
        const double rhs = std::pow(lam, 1.0 / p) * lorentz_norm(f, LorentzExponents(p, 2.0 * p));
        dilation_dev = std::max(dilation_dev, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
        // pointwise domination on a shared decomposition
        std::vector<StepPiece> upper = f.pieces();
        for (auto& piece : upper) piece.value += rng.uniform(0.0, 1.0);
        if (lorentz_norm(StepFunction(upper), LorentzExponents(p, 1.5 * p)) <
            lorentz_norm(f, LorentzExponents(p, 1.5 * p)) * (1.0 - 1e-12))
            ++monotonicity_violations;
    }
    double holder_max = 0.0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const StepFunction f = random_step_function(rng);
        std::vector<StepPiece> gp = f.pieces();
        for (auto& piece : gp) piece.value = std::exp(rng.uniform(-2.0, 2.0));
        const auto rep = holder_lorentz_check(f, StepFunction(std::move(gp)), LorentzExponents(3.0, 2.0),
                                              LorentzExponents(6.0, 3.0));
        holder_max = std::max(holder_max, rep.ratio);
    }

    auto push_stat = [&](const std::string& term, double value) {
        ReportRow row = base_row(cfg, "lorentz-check");
        row.term = term;
        row.norm_value = value;
        out.rows.push_back(row);
    };
    push_stat("lpp-identity-max-dev", lpp_dev);
    push_stat("dilation-max-dev", dilation_dev);
    push_stat("monotonicity-violations", monotonicity_violations);
    push_stat("holder-corpus-max-ratio", holder_max);

    const bool pass = lpp_dev <= 1e-12 && dilation_dev <= 1e-12 && monotonicity_violations == 0 &&
                      std::isfinite(holder_max);
    out.ok = pass;
    out.checks.push_back(make_check("lorentz-check",
                                    {{"trials", cfg.trials},
                                     {"seed", cfg.seed},
                                     {"note", "corpus restricted to p, q >= 1"},
                                     {"holder_max_ratio", holder_max}},
                                    kNaN, kNaN, 1e-12, pass));
    return out;
}

CommandResult run_hy_check(const RunConfig& cfg) {
    CommandResult out;
    SplitMix64 rng(cfg.seed);
    const double p = std::min(cfg.p, 2.0) > 1.0 ? std::min(cfg.p, 2.0) : 1.5;
    double max_ratio = 0.0;
    bool all_adequate = true;
    const int trials = std::min(cfg.trials, 12);
    for (int trial = 0; trial < trials; ++trial) {
        std::function<double(double)> g;
        double lo = -4.0, hi = 4.0;
        if (trial % 3 == 0) {
            const double c = rng.uniform(-2.0, 1.0), w = rng.uniform(0.5, 2.0);
            g = [c, w](double x) { return (x >= c && x <= c + w) ? 1.0 : 0.0; };
        } else if (trial % 3 == 1) {
            struct Box { double lo, hi, v; };
            std::vector<Box> boxes;
            for (int b = 0; b < 3; ++b) {
                const double c = rng.uniform(-3.0, 2.0);
                boxes.push_back({c, c + rng.uniform(0.25, 1.0), rng.uniform(0.5, 2.0)});
            }
            g = [boxes](double x) {
                double v = 0.0;
                for (const auto& box : boxes)
                    if (x >= box.lo && x <= box.hi) v += box.v;
                return v;
            };
        } else {
            const double c = rng.uniform(-1.0, 1.0), w = rng.uniform(1.0, 2.5);
            g = [c, w](double x) {
                const double u = (x - c) / w;
                return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
            };
        }
        const auto rep = hausdorff_young_check(g, lo, hi, p);
        ReportRow row = base_row(cfg, "hy-check");
        row.p = p;
        row.delta = trial;
        row.norm_value = rep.ratio;
        row.abs_error = rep.grid_points;
        if (!rep.grid_adequate) row.flags.push_back("truncation-unstable");
        out.rows.push_back(row);
        max_ratio = std::max(max_ratio, rep.ratio);
        all_adequate = all_adequate && rep.grid_adequate;
    }
    out.ok = all_adequate && std::isfinite(max_ratio);
    out.checks.push_back(make_check(
        "hy-check", {{"p", p}, {"seed", cfg.seed}, {"max_ratio", max_ratio}}, kNaN, kNaN, kNaN, out.ok));
    return out;
}

CommandResult run_weighted_bessel(const RunConfig& cfg) {
    CommandResult out;
    std::vector<double> qs = cfg.q_grid.empty() ? std::vector<double>{cfg.q} : cfg.q_grid;
    const double critical = 2.0 * cfg.n / (cfg.n - 1.0);
    bool pass = true;
    for (double q : qs) {
        const auto res = weighted_bessel_norm(cfg.n, q, cfg.wb_s, cfg.wb_r_max);
        ReportRow row = base_row(cfg, "weighted-bessel");
        row.q = q;
        row.norm_value = res.norm.value;
        row.abs_error = res.norm.abs_error;
        if (res.divergent) row.flags.push_back("divergent");
        out.rows.push_back(row);
        const bool expect_divergent = q <= critical + 1e-12;
        pass = pass && (res.divergent == expect_divergent);
        if (!res.divergent) {
            const auto res2 = weighted_bessel_norm(cfg.n, q, 2.0 * cfg.wb_s, cfg.wb_r_max);
            const double measured = res2.norm.value / res.norm.value;
            const double expected = std::pow(2.0, 0.5 * (cfg.n - 2.0) - cfg.n / q);
            ReportRow srow = base_row(cfg, "weighted-bessel");
            srow.q = q;
            srow.term = "scaling";
            srow.norm_value = measured;
            srow.residual = std::abs(measured / expected - 1.0);
            out.rows.push_back(srow);
            pass = pass && srow.residual <= 1e-3;
        }
    }
    out.ok = pass;
    out.checks.push_back(make_check("weighted-bessel",
                                    {{"n", cfg.n}, {"s", cfg.wb_s}, {"r_max", cfg.wb_r_max}},
                                    kNaN, kNaN, 1e-3, pass));
    return out;
}

CommandResult run_band(const RunConfig& cfg) {
    CommandResult out;
    const ExponentTriple exps(cfg.n, cfg.p, cfg.q);
    std::vector<double> deltas = cfg.deltas;
    if (deltas.empty())
        for (int j = 1; j <= 5; ++j) deltas.push_back(std::ldexp(1.0, -j));
    NormOptions opt;
    opt.tail_rel_tol = cfg.tail_tol;
    const auto res = band_sharpness(deltas, exps, cfg.band_j_max, opt, cfg.workers);
    for (const auto& pt : res.points) {
        ReportRow lhs = base_row(cfg, "band");
        lhs.delta = pt.delta;
        lhs.term = "lhs";
        lhs.norm_value = pt.lhs;
        if (pt.flagged) lhs.flags.push_back("truncation-unstable");
        out.rows.push_back(lhs);
        ReportRow rhs = base_row(cfg, "band");
        rhs.delta = pt.delta;
        rhs.term = "rhs";
        rhs.norm_value = pt.rhs;
        out.rows.push_back(rhs);
    }
    ReportRow fit = base_row(cfg, "band");
    fit.term = "lhs-fit";
    fit.slope = res.lhs_fit.points_used > 0 ? res.lhs_fit.slope : kNaN;
    fit.residual = res.lhs_fit.points_used > 0 ? res.lhs_fit.max_residual : kNaN;
    out.rows.push_back(fit);

    // The LHS delta-exponent is pinned empirically; necessity of q >= p' shows
    // as LHS exponent >= RHS exponent (= 1/p).
    const bool fit_ok = res.lhs_fit.points_used >= 4;
    const bool pass = fit_ok && !res.cutoff_flagged &&
                      res.lhs_fit.slope >= res.rhs_exponent - cfg.slope_tolerance;
    out.ok = pass;
    out.checks.push_back(make_check("band",
                                    {{"n", cfg.n}, {"p", cfg.p}, {"q", cfg.q}, {"j_max", cfg.band_j_max},
                                     {"rhs_exponent", res.rhs_exponent}},
                                    fit_ok ? res.lhs_fit.slope : kNaN, kNaN, cfg.slope_tolerance, pass));
    return out;
}

CommandResult run_global_check(const RunConfig& cfg) {
    CommandResult out;
    const ExponentTriple exps(cfg.n, cfg.p, cfg.q);
    const RadialProfile base = profile_from_config(cfg);
    std::vector<RadialProfile> bands;
    const double base_mass = profile_lp_norm(base, cfg.p, cfg.n);
    for (int i = 0; i < cfg.m_range.count(); ++i) {
        const double M = cfg.m_range.value(i);
        RadialProfile level = rescale_profile(base, M);
        const double mass = profile_lp_norm(level, cfg.p, cfg.n);
        level = level.scaled_by(base_mass / mass * std::pow(M, cfg.mass_exponent));
        bands.push_back(std::move(level));
    }
    NormOptions opt;
    opt.tail_rel_tol = cfg.tail_tol;
    const auto res = global_restriction_check(bands, exps, cfg.r_range, opt, cfg.workers);
    bool all_ok = true;
    for (const auto& pt : res.per_annulus) {
        ReportRow row = base_row(cfg, "global-check");
        row.R = pt.R;
        row.norm_value = pt.norm.value;
        row.abs_error = pt.norm.abs_error;
        if (pt.flagged) {
            row.flags.push_back("truncation-unstable");
            all_ok = false;
        }
        out.rows.push_back(row);
    }
    for (std::size_t i = 0; i < bands.size(); ++i) {
        ReportRow row = base_row(cfg, "global-check");
        row.M = cfg.m_range.value(static_cast<int>(i));
        row.term = "band-mass";
        row.norm_value = profile_lp_norm(bands[i], cfg.p, cfg.n);
        out.rows.push_back(row);
    }
    ReportRow ratio = base_row(cfg, "global-check");
    ratio.term = "ratio";
    ratio.norm_value = res.ratio;
    out.rows.push_back(ratio);
    const bool pass = all_ok && std::isfinite(res.ratio) && res.ratio > 0.0;
    out.ok = pass;
    out.checks.push_back(make_check("global-check",
                                    {{"n", cfg.n},
                                     {"p", cfg.p},
                                     {"q", cfg.q},
                                     {"lhs", res.lhs_norm},
                                     {"rhs", res.rhs_norm},
                                     {"ratio", res.ratio}},
                                    kNaN, kNaN, kNaN, pass));
    return out;
}

CommandResult run_report(const RunConfig& cfg) {
    CommandResult out;
    if (cfg.input_csv.empty()) throw std::invalid_argument("report command needs [run] input = <csv path>");
    std::ifstream in(cfg.input_csv);
    if (!in) throw std::invalid_argument("report: cannot open " + cfg.input_csv);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::invalid_argument("report: bad or missing CSV header in " + cfg.input_csv);
    int rows = 0, bad = 0;
    std::string first_error;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::string err;
        if (!validate_csv_line(line, &err)) {
            ++bad;
            if (first_error.empty()) first_error = err;
        }
    }
    const bool pass = bad == 0;
    out.ok = pass;
    out.checks.push_back(make_check(
        "report", {{"input", cfg.input_csv}, {"rows", rows}, {"invalid", bad}, {"first_error", first_error}},
        kNaN, kNaN, kNaN, pass));
    return out;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
    CommandResult result;
    if (cfg.command == "bessel-check") result = run_bessel_check(cfg);
    else if (cfg.command == "extension-eval") result = run_extension_eval(cfg);
    else if (cfg.command == "dyadic-sweep") result = run_dyadic_sweep(cfg);
    else if (cfg.command == "schur") result = run_schur(cfg);
    else if (cfg.command == "lorentz-check") result = run_lorentz_check(cfg);
    else if (cfg.command == "hy-check") result = run_hy_check(cfg);
    else if (cfg.command == "weighted-bessel") result = run_weighted_bessel(cfg);
    else if (cfg.command == "band") result = run_band(cfg);
    else if (cfg.command == "global-check") result = run_global_check(cfg);
    else if (cfg.command == "report") result = run_report(cfg);
    else if (cfg.command == "none") result = {};
    else throw std::invalid_argument("unknown command: " + cfg.command);

    std::filesystem::create_directories(cfg.out_dir);
    RunOutcome outcome;
    outcome.csv_path = (std::filesystem::path(cfg.out_dir) / cfg.csv_name).string();
    outcome.json_path = (std::filesystem::path(cfg.out_dir) / cfg.json_name).string();

    {
        std::ofstream csv(outcome.csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + outcome.csv_path);
        csv << csv_header() << '\n';
        for (const auto& row : result.rows) csv << csv_line(row) << '\n';
    }
    {
        ordered_json summary;
        summary["schema_version"] = kSchemaVersion;
        summary["command"] = cfg.command;
        summary["seed"] = cfg.seed;
        summary["checks"] = result.checks;
        std::ofstream js(outcome.json_path, std::ios::binary);
        if (!js) throw std::runtime_error("cannot write " + outcome.json_path);
        js << summary.dump(2) << '\n';
    }
    outcome.exit_status = result.ok ? 0 : 1;
    return outcome;
}

}  // namespace conelab
