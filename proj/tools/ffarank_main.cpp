#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffarank/common.hpp"
#include "ffarank/evaluate.hpp"
#include "ffarank/predict.hpp"
#include "ffarank/simulate.hpp"
#include "ffarank/snapshots.hpp"
#include "ffarank/telemetry.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace ffarank;

struct IngestOptions {
    std::vector<std::string> inputs;
    std::string delimiter = ",";
    std::vector<std::string> column_overrides;  // logical=header
    std::vector<std::string> team_tokens = {"duo", "squad"};
    std::size_t show_errors = 0;
};

void add_ingest_options(CLI::App* cmd, IngestOptions& opt) {
    cmd->add_option("-i,--input", opt.inputs, "telemetry CSV file (repeatable)")->required();
    cmd->add_option("--delimiter", opt.delimiter, "field delimiter (default ',')");
    cmd->add_option("--col", opt.column_overrides,
                    "column remap as logical=header, e.g. --col player_name=nickname");
    cmd->add_option("--team-token", opt.team_tokens,
                    "match_mode substring marking team matches (default: duo, squad)");
    cmd->add_option("--show-errors", opt.show_errors, "print up to N row errors to stderr");
}

CsvSpec make_csv_spec(const IngestOptions& opt) {
    CsvSpec spec;
    if (opt.delimiter.size() != 1) throw DataError("--delimiter must be a single character");
    spec.delimiter = opt.delimiter[0];
    for (const auto& entry : opt.column_overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
            throw DataError("--col expects logical=header, got '" + entry + "'");
        }
        spec.column_map[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    return spec;
}

struct LoadedData {
    std::vector<MatchRecord> matches;
    IngestCounters counters;
    std::vector<RowError> errors;    // parse-level
    std::vector<RowError> warnings;  // assembly-level
};

LoadedData load_matches(const IngestOptions& opt) {
    const CsvSpec spec = make_csv_spec(opt);
    SoloFilter solo;
    solo.team_mode_tokens = opt.team_tokens;

    LoadedData data;
    std::vector<RawRow> rows;
    for (const auto& path : opt.inputs) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open input file: " + path);
        parse_rows(
            in, spec,
            [&](RawRow&& row) {
                if (solo.is_solo(row)) {
                    rows.push_back(std::move(row));
                } else {
                    ++data.counters.non_solo_dropped;
                }
            },
            [&](RowError&& err) { data.errors.push_back(std::move(err)); },
            data.counters);
    }
    data.matches = assemble_matches(rows, data.counters, &data.warnings);
    sort_chronological(data.matches);
    return data;
}

void print_row_errors(const LoadedData& data, std::size_t limit) {
    std::size_t shown = 0;
    for (const auto& err : data.errors) {
        if (shown++ >= limit) break;
        std::cerr << "row error (line " << err.line_no << "): " << err.message << "\n";
    }
    for (const auto& warn : data.warnings) {
        if (shown++ >= limit) break;
        std::cerr << "warning: " << warn.message << "\n";
    }
}

json counters_json(const LoadedData& data) {
    std::size_t players = 0;
    {
        PlayerIndex index;
        for (const auto& match : data.matches) {
            for (const auto& p : match.participants) index.id_of(p.player_id);
        }
        players = index.size();
    }
    return json{{"rows_parsed", data.counters.rows_parsed},
                {"row_errors", data.counters.row_errors},
                {"non_solo_dropped", data.counters.non_solo_dropped},
                {"duplicate_rows", data.counters.duplicate_rows},
                {"bad_rank_dropped", data.counters.bad_rank_dropped},
                {"undersized_matches", data.counters.undersized_matches},
                {"matches", data.matches.size()},
                {"players", players}};
}

int cmd_ingest(const IngestOptions& opt) {
    LoadedData data = load_matches(opt);
    print_row_errors(data, opt.show_errors);
    json stats = counters_json(data);
    if (!data.matches.empty()) {
        stats["first_timestamp"] = data.matches.front().timestamp;
        stats["last_timestamp"] = data.matches.back().timestamp;
    }
    std::cout << stats.dump(2) << "\n";
    return 0;
}

struct RunOptions {
    IngestOptions ingest;
    std::string setup = "every";
    std::string models = "all";
    std::string gain = "linear";
    std::string scoring = "match";
    std::string decomposition = "all_pairs";
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    bool audit_orders = false;
    ExperimentConfig config;
};

std::vector<ModelId> parse_models(const std::string& text) {
    if (text == "all") return {kAllModels.begin(), kAllModels.end()};
    std::vector<ModelId> models;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto begin = token.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        const auto end = token.find_last_not_of(" \t");
        const ModelId m = model_from_name(token.substr(begin, end - begin + 1));
        if (std::find(models.begin(), models.end(), m) == models.end()) models.push_back(m);
    }
    if (models.empty()) throw DataError("--models selected nothing");
    return models;
}

std::vector<Setup> parse_setups(const std::string& text) {
    if (text == "every") return {Setup::all_players, Setup::top_tier, Setup::frequent};
    return {setup_from_name(text)};
}

int cmd_run(RunOptions& opt) {
    opt.config.models = parse_models(opt.models);
    opt.config.gain = gain_from_name(opt.gain);
    opt.config.seed = opt.seed;
    opt.config.audit_orders = opt.audit_orders;
    if (opt.scoring == "match") {
        opt.config.scoring = CohortScoring::match_selection;
    } else if (opt.scoring == "members") {
        opt.config.scoring = CohortScoring::members_only;
    } else {
        throw DataError("--scoring must be 'match' or 'members'");
    }
    if (opt.decomposition == "all_pairs") {
        opt.config.rating.decomposition = PairDecomposition::all_pairs;
    } else if (opt.decomposition == "adjacent") {
        opt.config.rating.decomposition = PairDecomposition::adjacent;
    } else {
        throw DataError("--decomposition must be 'all_pairs' or 'adjacent'");
    }
    const std::vector<Setup> setups = parse_setups(opt.setup);

    LoadedData data = load_matches(opt.ingest);
    print_row_errors(data, opt.ingest.show_errors);
    std::cerr << "ingest: " << counters_json(data).dump() << "\n";
    if (data.matches.empty()) throw DataError("no usable matches after ingestion");

    fs::create_directories(opt.out_dir);
    const fs::path out_dir(opt.out_dir);

    std::ofstream scores_out(out_dir / "scores.jsonl");
    if (!scores_out) throw DataError("cannot write " + (out_dir / "scores.jsonl").string());
    std::ofstream orders_out;
    if (opt.audit_orders) {
        orders_out.open(out_dir / "orders.jsonl");
        if (!orders_out) throw DataError("cannot write " + (out_dir / "orders.jsonl").string());
    }

    const auto& models = opt.config.models;
    ScoreSink sink = [&](const MatchScores& row) {
        json scores = json::object();
        for (std::size_t s = 0; s < setups.size(); ++s) {
            if (row.scores[s].empty()) continue;
            json per_model = json::object();
            for (std::size_t m = 0; m < models.size(); ++m) {
                per_model[std::string(model_name(models[m]))] = row.scores[s][m];
            }
            scores[std::string(setup_name(setups[s]))] = std::move(per_model);
        }
        scores_out << json{{"match_id", row.match_id},
                           {"index", row.match_index},
                           {"n", row.field_size},
                           {"scores", std::move(scores)}}
                          .dump()
                   << '\n';
        if (opt.audit_orders) {
            json orders = json::object();
            for (std::size_t m = 0; m < models.size(); ++m) {
                json names = json::array();
                for (std::uint32_t pos : row.orderings[m]) {
                    names.push_back(row.match->participants[pos].player_id);
                }
                orders[std::string(model_name(models[m]))] = std::move(names);
            }
            orders_out << json{{"match_id", row.match_id},
                               {"seed", opt.seed},
                               {"orders", std::move(orders)}}
                              .dump()
                       << '\n';
        }
    };

    EngineResult result = run_setups(data.matches, setups, opt.config, sink);
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
    if (result.ts_nonconverged > 0) {
        std::cerr << "warning: trueskill update hit max_iterations on " << result.ts_nonconverged
                  << " matches\n";
    }

    const std::string table = summary_csv(result.reports);
    std::cout << table;
    {
        std::ofstream f(out_dir / "summary.csv");
        if (!f) throw DataError("cannot write " + (out_dir / "summary.csv").string());
        f << table;
    }
    for (const auto& report : result.reports) {
        const auto path = out_dir / ("trajectories_" + std::string(setup_name(report.setup)) +
                                     ".csv");
        std::ofstream f(path);
        if (!f) throw DataError("cannot write " + path.string());
        f << trajectory_csv(report);
    }
    {
        std::ofstream f(out_dir / "profiles.jsonl");
        if (!f) throw DataError("cannot write profiles.jsonl");
        write_profiles_jsonl(f, result.final_states.index, result.final_states.profiles);
    }
    {
        std::ofstream f(out_dir / "ratings.jsonl");
        if (!f) throw DataError("cannot write ratings.jsonl");
        write_ratings_jsonl(f, result.final_states);
    }

    json summary{{"gain", std::string(gain_name(opt.config.gain))},
                 {"seed", opt.seed},
                 {"scoring", opt.scoring == "match" ? "match_selection" : "members_only"},
                 {"matches_processed", result.matches_processed},
                 {"causality_violations", result.causality_violations},
                 {"ts_nonconverged", result.ts_nonconverged},
                 {"warnings", result.warnings}};
    json setups_json = json::array();
    for (const auto& report : result.reports) {
        json per_model = json::object();
        for (const auto& m : report.models) {
            per_model[std::string(model_name(m.model))] =
                json{{"mean_ndcg", m.mean_ndcg},
                     {"mean_ndcg_pct", m.mean_ndcg * 100.0},
                     {"match_count", m.match_count}};
        }
        setups_json.push_back(json{{"setup", std::string(setup_name(report.setup))},
                                   {"cohort_size", report.cohort_size},
                                   {"contributing_matches", report.contributing_matches},
                                   {"empty", report.empty},
                                   {"display_players", report.display_players},
                                   {"models", std::move(per_model)}});
    }
    summary["setups"] = std::move(setups_json);
    {
        std::ofstream f(out_dir / "summary.json");
        if (!f) throw DataError("cannot write summary.json");
        f << summary.dump(2) << "\n";
    }
    return 0;
}

struct SimulateOptions {
    SyntheticSpec spec;
    std::string out_path = "synthetic.csv";
    std::string skills_path;
};

int cmd_simulate(const SimulateOptions& opt) {
    SyntheticDataset dataset = generate_synthetic(opt.spec);
    {
        std::ofstream f(opt.out_path);
        if (!f) throw DataError("cannot write " + opt.out_path);
        f << dataset.csv;
    }
    if (!opt.skills_path.empty()) {
        std::ofstream f(opt.skills_path);
        if (!f) throw DataError("cannot write " + opt.skills_path);
        f << "player_id,latent_skill\n";
        for (std::size_t i = 0; i < dataset.player_names.size(); ++i) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.10g", dataset.latent_skill[i]);
            f << dataset.player_names[i] << ',' << buf << '\n';
        }
    }
    std::cerr << "wrote " << opt.spec.n_matches << " matches, " << opt.spec.n_players
              << " players to " << opt.out_path << "\n";
    return 0;
}

struct ReportOptions {
    std::string scores_path;
    std::string out_path;
};

int cmd_report(const ReportOptions& opt) {
    std::ifstream in(opt.scores_path);
    if (!in) throw DataError("cannot open " + opt.scores_path);

    // mean per (setup, model) recomputed from the score log
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError("scores line " + std::to_string(line_no) + ": " + e.what());
        }
        for (const auto& [setup, models] : row.at("scores").items()) {
            for (const auto& [model, value] : models.items()) {
                auto& cell = acc[setup][model];
                cell.first += value.get<double>();
                cell.second += 1;
            }
        }
    }

    std::string table = "setup";
    for (ModelId m : kAllModels) {
        table += ',';
        table += model_name(m);
    }
    table += '\n';
    for (const char* setup : {"all", "top_tier", "frequent"}) {
        auto it = acc.find(setup);
        if (it == acc.end()) continue;
        table += setup;
        for (ModelId m : kAllModels) {
            table += ',';
            auto cell = it->second.find(std::string(model_name(m)));
            if (cell == it->second.end() || cell->second.second == 0) continue;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.1f",
                          100.0 * cell->second.first / static_cast<double>(cell->second.second));
            table += buf;
        }
        table += '\n';
    }
    std::cout << table;
    if (!opt.out_path.empty()) {
        std::ofstream f(opt.out_path);
        if (!f) throw DataError("cannot write " + opt.out_path);
        f << table;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"battle-royale rank-prediction benchmark"};
    app.require_subcommand(1);

    IngestOptions ingest_opt;
    CLI::App* ingest = app.add_subcommand("ingest", "validate telemetry and print stream stats");
    add_ingest_options(ingest, ingest_opt);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "run the prediction experiment");
    run->set_config("--config");
    add_ingest_options(run, run_opt.ingest);
    run->add_option("--setup", run_opt.setup, "all | top_tier | frequent | every (default)");
    run->add_option("--models", run_opt.models,
                    "comma-separated model list, or 'all' (default)");
    run->add_option("--gain", run_opt.gain, "linear (default) | exponential");
    run->add_option("--seed", run_opt.seed, "tie-break seed (default 0)");
    run->add_option("--scoring", run_opt.scoring,
                    "cohort scoring: match (default) | members");
    run->add_option("--decomposition", run_opt.decomposition,
                    "elo/glicko pair decomposition: all_pairs (default) | adjacent");
    run->add_option("--out", run_opt.out_dir, "output directory (default 'out')");
    run->add_flag("--audit-orders", run_opt.audit_orders,
                  "also write every predicted ordering to orders.jsonl");
    run->add_option("--elo-k", run_opt.config.rating.elo_k, "Elo K factor (default 32)");
    run->add_option("--elo-scale", run_opt.config.rating.elo_scale,
                    "Elo logistic scale (default 400)");
    run->add_option("--ts-beta", run_opt.config.rating.ts_beta,
                    "TrueSkill performance stddev (default 25/6)");
    run->add_option("--ts-tau", run_opt.config.rating.ts_tau,
                    "TrueSkill dynamics stddev (default 25/300)");
    run->add_option("--ts-draw-prob", run_opt.config.rating.ts_draw_prob,
                    "TrueSkill draw probability (default 0.10)");
    run->add_option("--tol", run_opt.config.rating.convergence_tol,
                    "message-passing convergence tolerance (default 1e-4)");
    run->add_option("--max-iter", run_opt.config.rating.max_iterations,
                    "message-passing iteration cap (default 100)");
    run->add_option("--top-k", run_opt.config.cohort.top_k,
                    "top-tier cohort size (default 500)");
    run->add_option("--min-games-top", run_opt.config.cohort.min_games_top,
                    "top-tier eligibility: games strictly greater (default 10)");
    run->add_option("--window-top", run_opt.config.cohort.window_top,
                    "top-tier scoring window (default 10)");
    run->add_option("--min-games-freq", run_opt.config.cohort.min_games_freq,
                    "frequent eligibility: games strictly greater (default 100)");
    run->add_option("--window-freq", run_opt.config.cohort.window_freq,
                    "frequent scoring window (default 100)");
    run->add_option("--window-all", run_opt.config.window_all,
                    "trajectory window for the all-players setup (default 100)");
    run->add_option("--display-players", run_opt.config.display_players,
                    "players tracked per setup for trajectories (default 5)");

    SimulateOptions sim_opt;
    CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
    simulate->set_config("--config");
    simulate->add_option("--players", sim_opt.spec.n_players, "player count (default 1000)");
    simulate->add_option("--matches", sim_opt.spec.n_matches, "match count (default 5000)");
    simulate->add_option("--per-match", sim_opt.spec.players_per_match,
                         "players per match (default 20)");
    simulate->add_option("--skill-stddev", sim_opt.spec.latent_skill_stddev,
                         "latent skill stddev (default 1.0)");
    simulate->add_option("--noise", sim_opt.spec.performance_noise,
                         "per-match performance noise stddev (default 1.0)");
    simulate->add_option("--seed", sim_opt.spec.seed, "generator seed (default 0)");
    simulate->add_option("--out", sim_opt.out_path, "output CSV path (default synthetic.csv)");
    simulate->add_option("--skills-out", sim_opt.skills_path,
                         "also write player latent skills as CSV");

    ReportOptions report_opt;
    CLI::App* report = app.add_subcommand("report", "re-render the summary table from a score log");
    report->add_option("--scores", report_opt.scores_path, "scores.jsonl from a previous run")
        ->required();
    report->add_option("--out", report_opt.out_path, "also write the table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_opt);
        if (*run) return cmd_run(run_opt);
        if (*simulate) return cmd_simulate(sim_opt);
        if (*report) return cmd_report(report_opt);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
