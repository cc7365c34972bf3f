// Command-line front end: a_p tables, the three candidate scans, family
// evaluation and rank certificates, with resumable checkpoints for the long
// scans.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistscan/twistscan.hpp"

using namespace twistscan;

namespace {

// exit codes: 0 success, 1 usage, 2 data/fixture error, 3 budget exhausted
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBudget = 3;

struct CurveSource {
    std::string curve;  // bracket form
    int degree = -1;
    unsigned row = 0;
};

void add_curve_source(CLI::App* cmd, CurveSource& src) {
    auto* c = cmd->add_option("--curve", src.curve, "curve as [a1,a2,a3,a4,a6]");
    auto* d = cmd->add_option("--degree", src.degree, "isogeny degree of an embedded table row");
    cmd->add_option("--row", src.row, "row index within the chosen degree (default 0)");
    c->excludes(d);
    d->excludes(c);
}

WeierstrassModel resolve_curve(const CurveSource& src) {
    if (!src.curve.empty()) return parse_model(src.curve);
    if (src.degree < 0) throw Error("one of --curve or --degree is required");
    auto entries = curves_for_degree(src.degree);
    if (entries.empty())
        throw DataError("no embedded curves for degree " + std::to_string(src.degree));
    if (src.row >= entries.size())
        throw Error("--row out of range: degree " + std::to_string(src.degree) + " has " +
                    std::to_string(entries.size()) + " rows");
    return entries[src.row].model;
}

ScanControl make_control(unsigned threads, const std::string& checkpoint, std::uint64_t every,
                         const std::string& resume) {
    ScanControl ctl;
    ctl.threads = threads;
    ctl.checkpoint_every = every;
    if (!resume.empty()) {
        if (!checkpoint.empty() && checkpoint != resume)
            throw Error("--checkpoint and --resume point at different snapshots");
        ctl.checkpoint_path = resume;
        ctl.resume = std::filesystem::exists(resume);  // fresh start otherwise
    } else {
        ctl.checkpoint_path = checkpoint;
    }
    return ctl;
}

void write_report(const std::string& path, const std::string& content, ReportKind kind) {
    validate_report(content, kind);
    atomic_write(path, content);
    std::cout << "wrote " << path << "\n";
}

std::pair<long long, long long> parse_range(const std::string& s) {
    auto colon = s.find(':', 1);  // position 0 may be a minus sign
    if (colon == std::string::npos) throw Error("range must be lo:hi, got '" + s + "'");
    try {
        long long lo = std::stoll(s.substr(0, colon));
        long long hi = std::stoll(s.substr(colon + 1));
        if (lo > hi) throw Error("empty range '" + s + "'");
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw Error("range must be lo:hi, got '" + s + "'");
    }
}

std::vector<RationalPoint> parse_points(const std::string& s) {
    std::vector<RationalPoint> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        auto comma = tok.find(',');
        if (comma == std::string::npos) throw Error("point must be x,y (got '" + tok + "')");
        out.push_back(RationalPoint::affine(parse_rat(tok.substr(0, comma)),
                                            parse_rat(tok.substr(comma + 1))));
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"search toolkit for high-rank quadratic twists of curves with isogenies"};
    app.require_subcommand(1);

    // ---- invariants ----
    auto* inv_cmd = app.add_subcommand("invariants", "print invariants and j of a curve");
    CurveSource inv_src;
    bool inv_json = false;
    add_curve_source(inv_cmd, inv_src);
    inv_cmd->add_flag("--json", inv_json, "emit JSON");

    // ---- tables ----
    auto* tab_cmd = app.add_subcommand("tables", "list the embedded isogeny-class rows");
    int tab_degree = -1;
    tab_cmd->add_option("--degree", tab_degree, "restrict to one degree");

    // ---- ap-table ----
    auto* ap_cmd = app.add_subcommand("ap-table", "build an a_p table and save the cache file");
    CurveSource ap_src;
    add_curve_source(ap_cmd, ap_src);
    std::uint64_t ap_bound = 10000;
    std::string ap_out = "ap.cache";
    unsigned ap_threads = 1;
    std::uint64_t ap_seed = 0;
    std::uint64_t ap_crossover = 1u << 14;
    ap_cmd->add_option("--bound", ap_bound, "tabulate all primes <= bound");
    ap_cmd->add_option("--out", ap_out, "cache file path");
    ap_cmd->add_option("--threads", ap_threads, "worker count (0 = hardware)");
    ap_cmd->add_option("--seed", ap_seed, "extra seed for the BSGS point draws");
    ap_cmd->add_option("--crossover", ap_crossover, "use BSGS for p >= this");

    // ---- rogers ----
    auto* ro_cmd = app.add_subcommand("rogers", "squarefree-class frequency scan");
    CurveSource ro_src;
    add_curve_source(ro_cmd, ro_src);
    std::uint64_t ro_H = 100;
    std::size_t ro_top = 100;
    std::string ro_out = "rogers.csv";
    unsigned ro_threads = 1;
    std::string ro_ck;
    std::uint64_t ro_every = 4;
    std::string ro_resume;
    std::uint64_t ro_trial = 1'000'000;
    ro_cmd->add_option("--H", ro_H, "height bound for the scanned rationals");
    ro_cmd->add_option("--top", ro_top, "rows to report");
    ro_cmd->add_option("--out", ro_out, "CSV path");
    ro_cmd->add_option("--threads", ro_threads, "worker count (0 = hardware)");
    ro_cmd->add_option("--checkpoint", ro_ck, "snapshot path");
    ro_cmd->add_option("--every", ro_every, "chunks per snapshot");
    ro_cmd->add_option("--resume", ro_resume,
                       "snapshot path; resumes when it already exists");
    ro_cmd->add_option("--trial-bound", ro_trial, "trial-division bound for the factoring budget");

    // ---- mazur ----
    auto* mz_cmd = app.add_subcommand("mazur", "sign-bias scan over a twist family");
    CurveSource mz_src;
    add_curve_source(mz_cmd, mz_src);
    std::uint64_t mz_t = 10000;
    std::string mz_range = "-1000:1000";
    std::size_t mz_top = 100;
    std::string mz_out = "mazur.csv";
    unsigned mz_threads = 1;
    std::string mz_ck;
    std::uint64_t mz_every = 4;
    std::string mz_resume;
    std::uint64_t mz_seed = 0;
    mz_cmd->add_option("--t", mz_t, "bias cutoff t (primes <= t)");
    mz_cmd->add_option("--D-range", mz_range, "twist range lo:hi (squarefree D only)");
    mz_cmd->add_option("--top", mz_top, "rows to report");
    mz_cmd->add_option("--out", mz_out, "CSV path");
    mz_cmd->add_option("--threads", mz_threads, "worker count (0 = hardware)");
    mz_cmd->add_option("--checkpoint", mz_ck, "snapshot path");
    mz_cmd->add_option("--every", mz_every, "chunks per snapshot");
    mz_cmd->add_option("--resume", mz_resume,
                       "snapshot path; resumes when it already exists");
    mz_cmd->add_option("--seed", mz_seed, "extra seed for the BSGS point draws");

    // ---- nagao ----
    auto* ng_cmd = app.add_subcommand(
        "nagao", "truncated L-score of one curve, or a Nagao-ranked genus-zero family scan");
    CurveSource ng_src;
    add_curve_source(ng_cmd, ng_src);
    std::string ng_family;
    std::uint64_t ng_N = 10000;
    std::uint64_t ng_family_H = 0;
    std::size_t ng_top = 100;
    std::string ng_out = "nagao.csv";
    unsigned ng_threads = 1;
    std::string ng_ck;
    std::uint64_t ng_every = 4;
    std::string ng_resume;
    ng_cmd->add_option("--family", ng_family, "family spec file (overrides --degree lookup)");
    ng_cmd->add_option("--N", ng_N, "truncation bound of the score");
    ng_cmd->add_option("--family-H", ng_family_H,
                       "height bound on h; presence selects the family scan");
    ng_cmd->add_option("--top", ng_top, "rows to report");
    ng_cmd->add_option("--out", ng_out, "CSV path");
    ng_cmd->add_option("--threads", ng_threads, "worker count (0 = hardware)");
    ng_cmd->add_option("--checkpoint", ng_ck, "snapshot path");
    ng_cmd->add_option("--every", ng_every, "chunks per snapshot");
    ng_cmd->add_option("--resume", ng_resume,
                       "snapshot path; resumes when it already exists");

    // ---- certify ----
    auto* ce_cmd = app.add_subcommand("certify", "rank lower bound from points");
    CurveSource ce_src;
    add_curve_source(ce_cmd, ce_src);
    std::string ce_points;
    bool ce_search = false;
    std::uint64_t ce_xb = 100, ce_db = 4;
    double ce_tol = 1e-6, ce_eps = 0.0;
    std::uint64_t ce_budget_bits = 1ull << 30;
    std::string ce_out = "certificate.json";
    ce_cmd->add_option("--points", ce_points, "semicolon-joined x,y pairs on the curve");
    ce_cmd->add_flag("--search", ce_search, "also run the sieved point search");
    ce_cmd->add_option("--x-bound", ce_xb, "point search |x| bound (on the reduced short model)");
    ce_cmd->add_option("--denom-bound", ce_db, "point search denominator bound e");
    ce_cmd->add_option("--tol", ce_tol, "Gram minor tolerance");
    ce_cmd->add_option("--eps", ce_eps, "height precision (default tol/16)");
    ce_cmd->add_option("--height-budget-bits", ce_budget_bits,
                       "big-integer budget for the height doubling");
    ce_cmd->add_option("--out", ce_out, "certificate JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (inv_cmd->parsed()) {
        WeierstrassModel m = resolve_curve(inv_src);
        CurveInvariants inv = compute_invariants(m);
        ShortModel s = short_form(m);
        if (inv_json) {
            nlohmann::json j;
            j["model"] = model_str(m);
            j["c4"] = inv.c4.get_str();
            j["c6"] = inv.c6.get_str();
            j["disc"] = inv.disc.get_str();
            j["j"] = rat_str(inv.j);
            j["short"] = {s.A.get_str(), s.B.get_str()};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "model " << model_str(m) << "\n"
                      << "c4    " << inv.c4 << "\n"
                      << "c6    " << inv.c6 << "\n"
                      << "disc  " << inv.disc << "\n"
                      << "j     " << rat_str(inv.j) << "\n"
                      << "short y^2 = x^3 + (" << s.A << ")x + (" << s.B << ")\n";
        }
        return kExitOk;
    }

    if (tab_cmd->parsed()) {
        auto entries = load_isogeny_curves();
        std::cout << "table\tn\tj\tmodel\tH\tD\trank\tstatus\n";
        for (const auto& e : entries) {
            if (tab_degree >= 0 && e.n != tab_degree) continue;
            std::cout << e.table << "\t" << e.n << "\t" << e.j_printed << "\t"
                      << model_str(e.model) << "\t"
                      << (e.H_used ? std::to_string(*e.H_used) : "-") << "\t"
                      << (e.record_D ? e.record_D->get_str() : "-") << "\t"
                      << (e.record_rank ? std::to_string(*e.record_rank) : "-") << "\t"
                      << e.status << "\n";
        }
        return kExitOk;
    }

    if (ap_cmd->parsed()) {
        WeierstrassModel m = resolve_curve(ap_src);
        ApTableOptions opts;
        opts.threads = ap_threads;
        opts.count.seed = ap_seed;
        opts.count.naive_crossover = ap_crossover;
        ApTable t = ap_table(m, ap_bound, opts);
        save_ap_table(t, ap_out);
        std::cout << "wrote " << ap_out << " (" << t.records.size() << " primes)\n";
        return kExitOk;
    }

    if (ro_cmd->parsed()) {
        WeierstrassModel m = resolve_curve(ro_src);
        ShortModel s = reduced_short_form(m).model;
        FactorBudget budget;
        budget.trial_bound = ro_trial;
        RogersResult res =
            rogers_scan(s, ro_H, budget, make_control(ro_threads, ro_ck, ro_every, ro_resume));
        if (!res.completed) {
            std::cout << "scan interrupted; snapshot at " << ro_ck << "\n";
            return kExitOk;
        }
        if (!res.table.unresolved.empty())
            std::cerr << "note: " << res.table.unresolved.size()
                      << " values exhausted the factoring budget\n";
        write_report(ro_out, rogers_csv(res.table, ro_top), ReportKind::Rogers);
        return kExitOk;
    }

    if (mz_cmd->parsed()) {
        WeierstrassModel m = minimal_model(resolve_curve(mz_src));
        auto [lo, hi] = parse_range(mz_range);
        ApTableOptions opts;
        opts.threads = mz_threads;
        opts.count.seed = mz_seed;
        ApTable base = ap_table(m, std::max<std::uint64_t>(mz_t, 2), opts);
        MazurScanResult res = mazur_twist_scan(
            base, lo, hi, mz_t, make_control(mz_threads, mz_ck, mz_every, mz_resume));
        if (!res.completed) {
            std::cout << "scan interrupted; snapshot at " << mz_ck << "\n";
            return kExitOk;
        }
        write_report(mz_out, mazur_csv(res.records, mz_top), ReportKind::Mazur);
        return kExitOk;
    }

    if (ng_cmd->parsed()) {
        bool family_mode = ng_family_H > 0 || !ng_family.empty();
        if (!family_mode) {
            WeierstrassModel m = minimal_model(resolve_curve(ng_src));
            ApTable t =
                ap_table(m, std::max<std::uint64_t>(ng_N, 2), ApTableOptions{ng_threads, {}});
            NagaoScore sc = nagao_score(t, ng_N);
            write_report(ng_out, nagao_csv({{model_str(m), sc.value}}, ng_N), ReportKind::Nagao);
            return kExitOk;
        }
        if (ng_family_H == 0) throw Error("family scans need --family-H >= 1");
        GenusZeroFamily fam =
            ng_family.empty() ? builtin_family(ng_src.degree) : load_family(ng_family);
        FamilyScanResult res = family_scan(fam, ng_family_H, ng_N, {},
                                           make_control(ng_threads, ng_ck, ng_every, ng_resume));
        if (!res.completed) {
            std::cout << "scan interrupted; snapshot at " << ng_ck << "\n";
            return kExitOk;
        }
        for (auto& [h, why] : res.failures)
            std::cerr << "note: h = " << rat_str(h) << " skipped: " << why << "\n";
        std::vector<std::pair<std::string, double>> rows;
        for (std::size_t i = 0; i < res.ranked.size() && i < ng_top; ++i)
            rows.emplace_back(rat_str(res.ranked[i].first), res.ranked[i].second);
        write_report(ng_out, nagao_csv(rows, ng_N), ReportKind::Nagao);
        return kExitOk;
    }

    if (ce_cmd->parsed()) {
        WeierstrassModel m = resolve_curve(ce_src);
        CurveInvariants inv = compute_invariants(m);
        std::vector<RationalPoint> pts;
        if (!ce_points.empty()) pts = parse_points(ce_points);
        if (ce_search || pts.empty()) {
            ReducedShort rs = reduced_short_form(m);
            PointSearchConfig cfg;
            cfg.x_bound = ce_xb;
            cfg.denom_bound = ce_db;
            for (const auto& P : point_search(rs.model, cfg)) {
                // map back: reduced model -> c-form -> original model
                RationalPoint pc = RationalPoint::affine(P.x * Rat(rs.u * rs.u),
                                                         P.y * Rat(rs.u * rs.u * rs.u));
                pts.push_back(from_c_short_point(m, inv, pc));
            }
        }
        RankCertificate cert = rank_lower_bound(m, pts, ce_tol, ce_eps, ce_budget_bits);
        atomic_write(ce_out, certificate_json(cert).dump(2) + "\n");
        std::cout << "rank(" << model_str(m) << ") >= " << cert.lower_bound
                  << "; certificate in " << ce_out << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const FactorizationIncomplete& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const PrecisionUnreachable& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
