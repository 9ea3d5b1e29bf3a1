// Experiment driver. Exit codes: 0 success, 1 failed check, 2 usage error.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sprcal/analysis/constants.hpp"
#include "sprcal/calib/adversaries.hpp"
#include "sprcal/calib/forecaster.hpp"
#include "sprcal/experiments.hpp"
#include "sprcal/spr/game.hpp"
#include "sprcal/spr/pointers.hpp"
#include "sprcal/spr/transcript_io.hpp"
#include "sprcal/verify.hpp"

using namespace sprcal;

namespace {

// "1-20" or "1,5,9" or "7".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::smatch m;
    if (std::regex_match(text, m, std::regex(R"((\d+)-(\d+))"))) {
        const auto a = std::stoull(m[1]), b = std::stoull(m[2]);
        if (b < a) throw UsageError("empty seed range " + text);
        for (auto s = a; s <= b; ++s) out.push_back(s);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!std::regex_match(tok, std::regex(R"(\d+)"))) throw UsageError("bad seed '" + tok + "'");
        out.push_back(std::stoull(tok));
    }
    if (out.empty()) throw UsageError("no seeds given");
    return out;
}

// "2^7..2^12" (powers of two) or "128,256,512".
std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> out;
    std::smatch m;
    if (std::regex_match(text, m, std::regex(R"(2\^(\d+)\.\.2\^(\d+))"))) {
        const int a = std::stoi(m[1]), b = std::stoi(m[2]);
        if (b < a || b > 30) throw UsageError("bad exponent range " + text);
        for (int e = a; e <= b; ++e) out.push_back(1 << e);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!std::regex_match(tok, std::regex(R"(\d+)"))) throw UsageError("bad grid value '" + tok + "'");
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw UsageError("empty grid");
    return out;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) out.push_back(tok);
    return out;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void print_fit(const char* label, const analysis::SlopeFit& f) {
    std::fprintf(stderr, "%s slope %.4f +- %.4f over %d points\n", label, f.slope, f.stderr_slope, f.points);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sign-preservation game and calibration experiments"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0: all cores)");

    // spr-scaling
    auto* sc = app.add_subcommand("spr-scaling", "preserved signs vs n for t = n, with a log-log fit");
    std::string sc_grid = "2^7..2^12", sc_pointers = "random;greedy;tree", sc_seeds = "1-20", sc_labeler = "ab",
                sc_out;
    sc->add_option("--n", sc_grid, "grid: 2^a..2^b or comma list");
    sc->add_option("--pointer", sc_pointers, "pointer ids separated by ';'");
    sc->add_option("--seeds", sc_seeds, "seed range a-b or comma list");
    sc->add_option("--labeler", sc_labeler, "ab | always-plus | always-minus");
    sc->add_option("--out", sc_out, "CSV path (default stdout)");

    // calib-run
    auto* cr = app.add_subcommand("calib-run", "one calibration game; CSV row on stdout");
    cr->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    std::string cr_f = "spr", cr_a = "bernoulli:37/100", cr_pointer = "tree", cr_transcript, cr_diag;
    int cr_T = 1 << 10, cr_h = 0;
    double cr_gamma = -1.0, cr_alpha = 1.0, cr_beta = 1.0;
    std::uint64_t cr_seed = 1;
    cr->add_option("--forecaster", cr_f, "spr | spr-ab | constant:P | empirical-mean | cheating-rounded");
    cr->add_option("--adversary", cr_a,
                   "bernoulli:P | bernoulli-hidden:P | alternating | oblivious:tree:d,k | adaptive | adaptive:N");
    cr->add_option("--T", cr_T, "horizon (rounded down to a power of two)");
    cr->add_option("--seed", cr_seed);
    cr->add_option("--h", cr_h, "depth of the forecaster's time levels (0: tau/3)");
    cr->add_option("--gamma", cr_gamma, "derive h from gamma in [0, 3/4)");
    cr->add_option("--alpha", cr_alpha, "adaptive adversary alpha");
    cr->add_option("--beta", cr_beta, "adaptive adversary beta");
    cr->add_option("--pointer", cr_pointer, "pointer of the adaptive adversary");
    cr->add_option("--transcript", cr_transcript, "write the JSONL transcript here");
    cr->add_option("--diagnostics", cr_diag, "write forecaster/adversary diagnostics JSON here");

    // calib-scaling
    auto* cs = app.add_subcommand("calib-scaling", "mean calibration error vs T with a log-log fit");
    std::string cs_grid = "2^10..2^14", cs_f = "spr", cs_a = "bernoulli:37/100", cs_seeds = "1-10", cs_out;
    cs->add_option("--T", cs_grid, "grid: 2^a..2^b or comma list");
    cs->add_option("--forecaster", cs_f);
    cs->add_option("--adversary", cs_a);
    cs->add_option("--seeds", cs_seeds);
    cs->add_option("--out", cs_out, "CSV path (default stdout)");

    // opt-table
    auto* ot = app.add_subcommand("opt-table", "exact opt(n, s) table");
    int ot_n = 3, ot_s = 4;
    long ot_budget = 2187;
    ot->add_option("--n-max", ot_n);
    ot->add_option("--s-max", ot_s);
    ot->add_option("--max-states", ot_budget, "state budget 3^n (s+1)");

    // constants-gen
    auto* cg = app.add_subcommand("constants-gen", "certified constants as JSON");
    std::string cg_out;
    double cg_lambda = 1.5, cg_delta = 0.01;
    int cg_points = 2000;
    cg->add_option("--out", cg_out, "path (default stdout)");
    cg->add_option("--lambda", cg_lambda);
    cg->add_option("--delta", cg_delta);
    cg->add_option("--search-points", cg_points);

    // verify-all
    auto* va = app.add_subcommand("verify-all", "run the acceptance criteria");
    std::vector<int> va_only;
    va->add_option("--only", va_only, "criterion ids")->delimiter(',');

    // spr-play
    auto* sp = app.add_subcommand("spr-play", "one sign-preservation game as JSONL");
    int sp_n = 16, sp_s = 16;
    std::uint64_t sp_seed = 1;
    std::string sp_pointer = "random", sp_labeler = "ab", sp_out;
    sp->add_option("--n", sp_n);
    sp->add_option("--s", sp_s, "rounds");
    sp->add_option("--seed", sp_seed);
    sp->add_option("--pointer", sp_pointer);
    sp->add_option("--labeler", sp_labeler);
    sp->add_option("--out", sp_out);

    // tree-sample
    auto* ts = app.add_subcommand("tree-sample", "one draw of the tree pointer's cell sequence");
    int ts_d = 4, ts_k = 2;
    std::uint64_t ts_seed = 1;
    ts->add_option("--d", ts_d);
    ts->add_option("--k", ts_k);
    ts->add_option("--seed", ts_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sc) {
            auto res = spr_scaling(parse_grid(sc_grid), split(sc_pointers), parse_seeds(sc_seeds), sc_labeler, threads);
            emit(res.csv(), sc_out);
            for (const auto& f : res.fits) print_fit(f.pointer.c_str(), f.fit);
        } else if (*cr) {
            const int T = floor_pow2(cr_T);
            auto f = make_forecaster(cr_f, cr_h, cr_gamma);
            auto a = make_adversary(cr_a, T, cr_alpha, cr_beta, cr_pointer);
            const auto start = std::chrono::steady_clock::now();
            auto tr = calib::run_calibration(*f, *a, T, cr_seed);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            nlohmann::ordered_json diag;
            diag["T_requested"] = cr_T;
            diag["T"] = T;
            if (auto* spf = dynamic_cast<calib::SignPreservationForecaster*>(f.get())) {
                diag["forecaster"] = nlohmann::json::parse(spf->diagnostics_json());
                auto rep = spf->check_reduced_transcripts();
                diag["reduced_transcripts"] = {{"ok", rep.ok()},
                                               {"call_cap_violations", rep.call_cap_violations},
                                               {"cell_gap_violations", rep.cell_gap_violations},
                                               {"instance_gap_violations", rep.instance_gap_violations}};
            }
            if (auto* ad = dynamic_cast<calib::AdaptiveAdversary*>(a.get())) {
                ad->settle();
                const auto& p = ad->params();
                diag["adversary"] = {{"n", p.n},
                                     {"theta", p.theta},
                                     {"epochs_played", ad->epochs().size()},
                                     {"finished", ad->finished()},
                                     {"preserved", spr::preserved_counts(ad->board()).total()},
                                     {"epoch_checks_clean", ad->checks().clean()}};
            }
            std::cout << calib::csv_header() << '\n' << calib::csv_row(tr, ms) << '\n';
            if (!cr_transcript.empty()) emit(calib::to_jsonl(tr), cr_transcript);
            if (!cr_diag.empty()) emit(diag.dump(2) + "\n", cr_diag);
        } else if (*cs) {
            auto res = calib_scaling(parse_grid(cs_grid), cs_f, cs_a, parse_seeds(cs_seeds), threads);
            emit(res.csv(), cs_out);
            for (const auto& p : res.points)
                std::fprintf(stderr, "T=%d mean calerr %.3f +- %.3f (%d runs)\n", p.T, p.mean_calerr, p.stderr_calerr,
                             p.runs);
            print_fit("calerr", res.fit);
        } else if (*ot) {
            std::cout << opt_table_csv(ot_n, ot_s, ot_budget);
        } else if (*cg) {
            auto cert = analysis::find_beta_epsilon(cg_lambda, cg_delta, cg_points);
            emit(analysis::constants_json(cert, analysis::entropy_exponent()) + "\n", cg_out);
            return cert.verified ? 0 : 1;
        } else if (*va) {
            auto results = verify::verify_all(va_only, threads, [](const verify::CriterionResult& r) {
                std::printf("%s\n", r.line().c_str());
                std::fflush(stdout);
            });
            for (const auto& r : results)
                if (!r.pass) return 1;
            return 0;
        } else if (*sp) {
            auto pointer = make_pointer(sp_pointer, sp_n);
            auto labeler = make_labeler(sp_labeler, sp_n);
            emit(spr::to_jsonl(spr::play_game(sp_n, sp_s, *pointer, *labeler, sp_seed)), sp_out);
        } else if (*ts) {
            spr::TreeParams p{ts_d, ts_k};
            p.validate();
            std::cout << spr::tree_sample_json(p, spr::tree_sample(p, ts_seed)) << '\n';
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
