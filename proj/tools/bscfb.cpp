// Command-line front end.
//
//   bscfb exponent  --p P [--p1 P1]          asymptotic exponent report
//   bscfb p0-sweep  --p-min A --p-max B      feedback-noise threshold curve
//                   [--points N]
//   bscfb lemma     --p P --t T [--t1 T1]    exact two-constraint tail/point
//                   --m M | --m-ladder ...   probabilities and exponents
//   bscfb oracle    --p P --p1 P1 --t T      exact pair-disagreement event
//                   --m M | --m-ladder ...   probability and exponent
//   bscfb simulate  --scheme S --n N ...     Monte Carlo error estimate
//
// All outputs support --format csv|json and --output FILE (default stdout).
// Exit codes: 0 success, 2 invalid arguments or parameter domain, 3 numerical
// failure (root bracketing/convergence), 4 codebook construction failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bscfb/bscfb.hpp"

namespace {

struct RunConfig {
    std::string command;
    double p = 0.1;
    double p1 = 0.0;
    double t = 0.0;
    double t1 = 0.0;
    double gamma = 0.5;
    double gamma1 = 0.0;
    double slackFraction = 0.05;
    double pMin = 0.01;
    double pMax = 0.49;
    int points = 25;
    int M = 3;
    int n = 0;
    int m = 0;
    std::vector<int> mLadder;
    std::string scheme = "noisy";
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string outputFormat = "csv";
    std::string outputPath;
};

class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::domain_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void emit_json(const RunConfig& cfg, const nlohmann::json& j) {
    OutputSink sink(cfg.outputPath);
    sink.stream() << j.dump(2) << '\n';
}

void emit_csv(const RunConfig& cfg, const std::string& header,
              const std::vector<std::string>& rows) {
    OutputSink sink(cfg.outputPath);
    sink.stream() << header << '\n';
    for (const auto& r : rows) sink.stream() << r << '\n';
}

// ---------------------------------------------------------------------------

int cmd_exponent(const RunConfig& cfg) {
    bscfb::ExponentReport r = bscfb::exponent_F1(cfg.p, cfg.p1);
    bool haveActive = cfg.p1 > 0.0 && cfg.p1 < 0.5;
    bscfb::ActiveExponent a;
    if (haveActive) a = bscfb::exponent_active(cfg.p, cfg.p1);

    if (cfg.outputFormat == "json") {
        nlohmann::json j;
        j["units"] = "nats";
        j["p"] = cfg.p;
        j["p1"] = cfg.p1;
        j["E"] = r.E;
        j["E2"] = r.E2;
        j["F"] = r.F;
        j["F1"] = r.F1;
        j["tStar"] = r.tStar;
        j["gammaStar"] = r.gammaStar;
        j["p0"] = r.p0;
        j["G1AtTStar"] = bscfb::json_real(r.G1AtTStar);
        j["G2AtTStar"] = bscfb::json_real(r.G2AtTStar);
        if (haveActive) {
            j["active"] = {{"value", a.value},
                           {"gamma", a.gamma},
                           {"gamma1", a.gamma1}};
        }
        emit_json(cfg, j);
    } else {
        std::string header =
            "# exponents in nats\n"
            "p,p1,E,E2,F,F1,tStar,gammaStar,p0,G1AtTStar,G2AtTStar,active";
        std::string row = bscfb::fmt12(cfg.p) + ',' + bscfb::fmt12(cfg.p1) + ',' +
                          bscfb::fmt12(r.E) + ',' + bscfb::fmt12(r.E2) + ',' +
                          bscfb::fmt12(r.F) + ',' + bscfb::fmt12(r.F1) + ',' +
                          bscfb::fmt12(r.tStar) + ',' + bscfb::fmt12(r.gammaStar) +
                          ',' + bscfb::fmt12(r.p0) + ',' +
                          bscfb::fmt12(r.G1AtTStar) + ',' +
                          bscfb::fmt12(r.G2AtTStar) + ',';
        if (haveActive) row += bscfb::fmt12(a.value);
        emit_csv(cfg, header, {row});
    }
    return 0;
}

int cmd_p0_sweep(const RunConfig& cfg) {
    if (!(cfg.pMin > 0.0 && cfg.pMax < 0.5 && cfg.pMin <= cfg.pMax))
        throw std::domain_error("p0-sweep: need 0 < p-min <= p-max < 1/2");
    if (cfg.points < 1) throw std::domain_error("p0-sweep: points must be >= 1");

    std::vector<double> grid;
    if (cfg.points == 1) {
        grid.push_back(cfg.pMin);
    } else {
        // Log-spaced grid: the curve spans several decades of p.
        double la = std::log(cfg.pMin), lb = std::log(cfg.pMax);
        for (int i = 0; i < cfg.points; ++i)
            grid.push_back(std::exp(la + (lb - la) * i / (cfg.points - 1)));
    }

    std::vector<std::string> rows;
    nlohmann::json arr = nlohmann::json::array();
    for (double p : grid) {
        double p0 = bscfb::threshold_p0(p);
        if (cfg.outputFormat == "json") {
            arr.push_back({{"p", p}, {"p0", p0}, {"ratio", p0 / p}});
        } else {
            rows.push_back(bscfb::fmt12(p) + ',' + bscfb::fmt12(p0) + ',' +
                           bscfb::fmt12(p0 / p));
        }
    }
    if (cfg.outputFormat == "json") {
        emit_json(cfg, {{"units", "probabilities"}, {"sweep", arr}});
    } else {
        emit_csv(cfg, "# probabilities, dimensionless ratio\np,p0,ratio", rows);
    }
    return 0;
}

std::vector<int> ladder_of(const RunConfig& cfg, const char* who) {
    std::vector<int> ms = cfg.mLadder;
    if (cfg.m > 0) ms.insert(ms.begin(), cfg.m);
    if (ms.empty())
        throw std::domain_error(std::string(who) + ": give --m or --m-ladder");
    return ms;
}

int cmd_lemma(const RunConfig& cfg) {
    std::vector<int> ms = ladder_of(cfg, "lemma");
    double limit = std::log(1.0 / (cfg.p * cfg.p * (1.0 - cfg.p))) -
                   bscfb::lemma_f_max(cfg.t, cfg.t1, cfg.p);

    std::vector<std::string> rows;
    nlohmann::json arr = nlohmann::json::array();
    for (int m : ms) {
        bscfb::ExactProbability point =
            bscfb::lemma_point_probability(m, cfg.t, cfg.t1, cfg.p);
        bscfb::ExactProbability tail =
            bscfb::lemma_tail_probability(m, cfg.t, cfg.t1, cfg.p);
        double gap = tail.normalizedExponent - limit;
        if (cfg.outputFormat == "json") {
            arr.push_back({{"m", m},
                           {"logPoint", bscfb::json_real(point.logP)},
                           {"pointExponent", bscfb::json_real(point.normalizedExponent)},
                           {"logTail", bscfb::json_real(tail.logP)},
                           {"tailExponent", bscfb::json_real(tail.normalizedExponent)},
                           {"gap", bscfb::json_real(gap)}});
        } else {
            rows.push_back(std::to_string(m) + ',' + bscfb::fmt12(point.logP) + ',' +
                           bscfb::fmt12(point.normalizedExponent) + ',' +
                           bscfb::fmt12(tail.logP) + ',' +
                           bscfb::fmt12(tail.normalizedExponent) + ',' +
                           bscfb::fmt12(gap));
        }
    }
    if (cfg.outputFormat == "json") {
        emit_json(cfg, {{"units", "nats"},
                        {"p", cfg.p},
                        {"t", cfg.t},
                        {"t1", cfg.t1},
                        {"limitExponent", limit},
                        {"ladder", arr}});
    } else {
        emit_csv(cfg,
                 "# log-probabilities and exponents in nats; limitExponent " +
                     bscfb::fmt12(limit) +
                     "\nm,logPoint,pointExponent,logTail,tailExponent,gap",
                 rows);
    }
    return 0;
}

int cmd_oracle(const RunConfig& cfg) {
    std::vector<int> ms = ladder_of(cfg, "oracle");
    double limit = bscfb::exponent_G2(cfg.t, cfg.p, cfg.p1);

    std::vector<std::string> rows;
    nlohmann::json arr = nlohmann::json::array();
    for (int m : ms) {
        bscfb::ExactProbability e =
            bscfb::eventA1_probability(m, cfg.t, cfg.p, cfg.p1);
        double gap = e.normalizedExponent - limit;
        if (cfg.outputFormat == "json") {
            arr.push_back({{"m", m},
                           {"logP", bscfb::json_real(e.logP)},
                           {"exponent", bscfb::json_real(e.normalizedExponent)},
                           {"gap", bscfb::json_real(gap)},
                           {"feasible", e.feasible}});
        } else {
            rows.push_back(std::to_string(m) + ',' + bscfb::fmt12(e.logP) + ',' +
                           bscfb::fmt12(e.normalizedExponent) + ',' +
                           bscfb::fmt12(gap) + ',' + (e.feasible ? "1" : "0"));
        }
    }
    if (cfg.outputFormat == "json") {
        emit_json(cfg, {{"units", "nats"},
                        {"p", cfg.p},
                        {"p1", cfg.p1},
                        {"t", cfg.t},
                        {"limitExponent", bscfb::json_real(limit)},
                        {"ladder", arr}});
    } else {
        emit_csv(cfg,
                 "# log-probabilities and exponents in nats; limitExponent " +
                     bscfb::fmt12(limit) + "\nm,logP,exponent,gap,feasible",
                 rows);
    }
    return 0;
}

bscfb::SchemeKind scheme_kind_of(const std::string& name) {
    if (name == "baseline") return bscfb::SchemeKind::NoFeedbackBaseline;
    if (name == "noiseless") return bscfb::SchemeKind::NoiselessSwitch;
    if (name == "noisy") return bscfb::SchemeKind::NoisySwitch;
    if (name == "active") return bscfb::SchemeKind::ActiveFeedback;
    throw std::domain_error("unknown scheme: " + name);
}

int cmd_simulate(const RunConfig& cfg) {
    bscfb::SchemeKind kind = scheme_kind_of(cfg.scheme);
    bscfb::SchemeParams params;
    params.p = cfg.p;
    params.p1 = cfg.p1;
    params.n = cfg.n;
    params.M = cfg.M;
    params.gamma = cfg.gamma;
    params.t = cfg.t;
    params.gamma1 = cfg.gamma1;
    params.slackFraction = cfg.slackFraction;
    bscfb::SimulationSummary s =
        bscfb::estimate(kind, params, cfg.trials, cfg.seed, cfg.threads);
    if (cfg.outputFormat == "json") {
        emit_json(cfg, bscfb::summary_to_json(s));
    } else {
        emit_csv(cfg, bscfb::summary_csv_header(), {bscfb::summary_csv_row(s)});
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Zero-rate error exponents and finite-blocklength simulation "
                 "for the binary symmetric channel with noisy feedback"};
    app.require_subcommand(1);

    auto add_output = [&cfg](CLI::App* sub) {
        sub->add_option("--format", cfg.outputFormat, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--output", cfg.outputPath,
                        "Write to this file instead of stdout");
    };

    CLI::App* exponent =
        app.add_subcommand("exponent", "Asymptotic exponent report for (p, p1)");
    exponent->add_option("--p", cfg.p, "Forward crossover probability")
        ->required()
        ->check(CLI::Range(0.0, 0.5));
    exponent->add_option("--p1", cfg.p1, "Feedback crossover probability")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    add_output(exponent);

    CLI::App* sweep = app.add_subcommand(
        "p0-sweep", "Feedback-noise threshold p0 over a log-spaced grid of p");
    sweep->add_option("--p-min", cfg.pMin, "Smallest p")->capture_default_str();
    sweep->add_option("--p-max", cfg.pMax, "Largest p")->capture_default_str();
    sweep->add_option("--points", cfg.points, "Grid size")->capture_default_str();
    add_output(sweep);

    CLI::App* lemma = app.add_subcommand(
        "lemma", "Exact two-threshold distance-count probabilities");
    lemma->add_option("--p", cfg.p, "Forward crossover probability")
        ->required()
        ->check(CLI::Range(0.0, 0.5));
    lemma->add_option("--t", cfg.t, "First threshold fraction")->required();
    lemma->add_option("--t1", cfg.t1, "Second threshold fraction")
        ->capture_default_str();
    lemma->add_option("--m", cfg.m, "Blocklength (multiple of 3)");
    lemma->add_option("--m-ladder", cfg.mLadder,
                      "Comma-separated blocklengths")
        ->delimiter(',');
    add_output(lemma);

    CLI::App* oracle = app.add_subcommand(
        "oracle", "Exact probability of the pair-disagreement event");
    oracle->add_option("--p", cfg.p, "Forward crossover probability")
        ->required()
        ->check(CLI::Range(0.0, 0.5));
    oracle->add_option("--p1", cfg.p1, "Feedback crossover probability")
        ->required()
        ->check(CLI::Range(0.0, 0.5));
    oracle->add_option("--t", cfg.t, "Threshold fraction")->required();
    oracle->add_option("--m", cfg.m, "Blocklength (multiple of 3)");
    oracle->add_option("--m-ladder", cfg.mLadder,
                       "Comma-separated blocklengths")
        ->delimiter(',');
    add_output(oracle);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo scheme error estimate");
    simulate->add_option("--scheme", cfg.scheme,
                         "baseline | noiseless | noisy | active")
        ->capture_default_str();
    simulate->add_option("--p", cfg.p, "Forward crossover probability")
        ->required()
        ->check(CLI::Range(0.0, 0.5));
    simulate->add_option("--p1", cfg.p1, "Feedback crossover probability")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    simulate->add_option("--n", cfg.n, "Total blocklength")->required();
    simulate->add_option("--m,--M", cfg.M, "Number of messages")
        ->capture_default_str();
    simulate->add_option("--gamma", cfg.gamma, "Phase-I length fraction")
        ->capture_default_str();
    simulate->add_option("--gamma1", cfg.gamma1,
                         "Phase-II length fraction (active scheme)")
        ->capture_default_str();
    simulate->add_option("--t", cfg.t, "Threshold fraction (noisy scheme)")
        ->capture_default_str();
    simulate->add_option("--slack", cfg.slackFraction,
                         "Codebook distance window as a fraction of length")
        ->capture_default_str();
    simulate->add_option("--trials", cfg.trials, "Trial count")
        ->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
    simulate->add_option("--threads", cfg.threads,
                         "Worker threads (0 = hardware)")
        ->capture_default_str();
    add_output(simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (exponent->parsed()) return cmd_exponent(cfg);
        if (sweep->parsed()) return cmd_p0_sweep(cfg);
        if (lemma->parsed()) return cmd_lemma(cfg);
        if (oracle->parsed()) return cmd_oracle(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
    } catch (const bscfb::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const bscfb::CodebookError& e) {
        std::cerr << "codebook failure: " << e.what() << '\n';
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
