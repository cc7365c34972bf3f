#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twistscan/ap_table.hpp"
#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/fnv.hpp"
#include "twistscan/heuristics.hpp"
#include "twistscan/minimal.hpp"
#include "twistscan/polyq.hpp"
#include "twistscan/rational.hpp"
#include "twistscan/scan.hpp"

namespace twistscan {

// Degrees n admitting a rational n-isogeny (Mazur, Kenku).
inline const std::vector<int>& isogeny_degrees() {
    static const std::vector<int> degrees = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13,
                                             14, 15, 16, 17, 18, 19, 21, 25, 27, 37, 43, 67, 163};
    return degrees;
}

inline bool is_isogeny_degree(int n) {
    for (int d : isogeny_degrees())
        if (d == n) return true;
    return false;
}

inline std::string data_dir() {
    if (const char* env = std::getenv("TWISTSCAN_DATA")) return env;
#ifdef TWISTSCAN_DATA_DIR
    return TWISTSCAN_DATA_DIR;
#else
    return "data";
#endif
}

// Fixture files open with "# fnv1a64 <hex>" over everything after that line.
inline std::string load_checked(const std::string& path) {
    std::string all = read_all(path);
    const std::string tag = "# fnv1a64 ";
    if (all.rfind(tag, 0) != 0) throw DataError("'" + path + "' is missing its checksum line");
    auto nl = all.find('\n');
    if (nl == std::string::npos) throw DataError("'" + path + "' is truncated");
    std::string hex = all.substr(tag.size(), nl - tag.size());
    std::string body = all.substr(nl + 1);
    if (fnv1a64_hex(body) != hex)
        throw DataError("checksum mismatch in '" + path + "' (file corrupted or edited)");
    return body;
}

// ---- printed j-values --------------------------------------------------------

// Parses the factored form the tables print: "[-]b1^e1*b2^e2[/b3^e3*...]".
inline Rat parse_j_expr(const std::string& s) {
    if (s.empty()) throw ParseError("empty j expression");
    std::string t = s;
    bool neg = false;
    if (t[0] == '-') {
        neg = true;
        t = t.substr(1);
    }
    auto parse_prod = [](const std::string& prod) {
        Int acc = 1;
        std::istringstream ss(prod);
        std::string factor;
        while (std::getline(ss, factor, '*')) {
            if (factor.empty()) throw ParseError("empty factor in j expression");
            auto caret = factor.find('^');
            try {
                Int base(caret == std::string::npos ? factor : factor.substr(0, caret), 10);
                unsigned long e = 1;
                if (caret != std::string::npos) e = std::stoul(factor.substr(caret + 1));
                Int pw;
                mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), e);
                acc *= pw;
            } catch (const std::invalid_argument&) {
                throw ParseError("bad factor '" + factor + "' in j expression");
            }
        }
        return acc;
    };
    auto slash = t.find('/');
    Int num = parse_prod(slash == std::string::npos ? t : t.substr(0, slash));
    Int den = slash == std::string::npos ? Int(1) : parse_prod(t.substr(slash + 1));
    if (neg) num = -num;
    return make_rat(num, den);
}

// ---- embedded table rows -----------------------------------------------------

struct IsogenyClassEntry {
    int table = 0;  // which table the row was printed in
    int n = 0;
    std::string j_printed;
    Rat j;
    WeierstrassModel model;
    std::optional<std::uint64_t> H_used;
    std::optional<Int> record_D;
    std::optional<int> record_rank;
    std::string status;  // "ok" or "paper-erratum-excluded"
};

inline std::vector<IsogenyClassEntry> load_isogeny_curves(const std::string& path = data_dir() +
                                                                                    "/isogeny_curves.tsv") {
    std::istringstream in(load_checked(path));
    std::vector<IsogenyClassEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, '\t')) f.push_back(tok);
        if (f.size() != 12) throw DataError("bad isogeny table row '" + line + "'");
        IsogenyClassEntry e;
        e.table = std::stoi(f[0]);
        e.n = std::stoi(f[1]);
        e.j_printed = f[2];
        e.j = parse_j_expr(f[2]);
        e.model = WeierstrassModel{Int(f[3], 10), Int(f[4], 10), Int(f[5], 10), Int(f[6], 10),
                                   Int(f[7], 10)};
        if (f[8] != "-") e.H_used = std::stoull(f[8]);
        if (f[9] != "-") e.record_D = Int(f[9], 10);
        if (f[10] != "-") e.record_rank = std::stoi(f[10]);
        e.status = f[11];
        if (e.status != "ok" && e.status != "paper-erratum-excluded")
            throw DataError("unknown row status '" + e.status + "'");
        out.push_back(std::move(e));
    }
    if (out.empty()) throw DataError("no rows in '" + path + "'");
    return out;
}

// All embedded rows for degree n; empty when n only has a genus-zero family
// or is not an isogeny degree at all.
inline std::vector<IsogenyClassEntry> curves_for_degree(
    int n, const std::vector<IsogenyClassEntry>& entries) {
    std::vector<IsogenyClassEntry> out;
    if (!is_isogeny_degree(n)) return out;
    for (const auto& e : entries)
        if (e.n == n) out.push_back(e);
    return out;
}

inline std::vector<IsogenyClassEntry> curves_for_degree(int n) {
    return curves_for_degree(n, load_isogeny_curves());
}

// ---- reference curves (standard-database fixtures) ----------------------------

struct ReferenceCurve {
    std::string label;
    int rank = 0;
    WeierstrassModel model;
    std::vector<RationalPoint> generators;
};

inline std::vector<ReferenceCurve> load_reference_curves(const std::string& path = data_dir() +
                                                                                    "/reference_curves.tsv") {
    std::istringstream in(load_checked(path));
    std::vector<ReferenceCurve> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, '\t')) f.push_back(tok);
        if (f.size() != 9) throw DataError("bad reference curve row '" + line + "'");
        ReferenceCurve c;
        c.label = f[0];
        c.rank = std::stoi(f[1]);
        c.model = WeierstrassModel{Int(f[2], 10), Int(f[3], 10), Int(f[4], 10), Int(f[5], 10),
                                   Int(f[6], 10)};
        if (f[7] != "-") {
            std::istringstream xs(f[7]), ys(f[8]);
            std::string xv, yv;
            while (std::getline(xs, xv, ';')) {
                if (!std::getline(ys, yv, ';'))
                    throw DataError("generator coordinate mismatch in '" + line + "'");
                c.generators.push_back(RationalPoint::affine(parse_rat(xv), parse_rat(yv)));
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline ReferenceCurve reference_curve(const std::string& label) {
    for (auto& c : load_reference_curves())
        if (c.label == label) return c;
    throw DataError("no reference curve labelled '" + label + "'");
}

// ---- genus-zero rows (Table of Nagao-ranked hits) ------------------------------

struct NagaoZeroRow {
    int n = 0;
    Rat r;
    WeierstrassModel model;
    int rank = 0;
};

inline std::vector<NagaoZeroRow> load_nagao_rows(const std::string& path = data_dir() +
                                                                           "/nagao_zero_case.tsv") {
    std::istringstream in(load_checked(path));
    std::vector<NagaoZeroRow> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, '\t')) f.push_back(tok);
        if (f.size() != 8) throw DataError("bad genus-zero row '" + line + "'");
        out.push_back(NagaoZeroRow{std::stoi(f[0]), parse_rat(f[1]),
                                   WeierstrassModel{Int(f[2], 10), Int(f[3], 10), Int(f[4], 10),
                                                    Int(f[5], 10), Int(f[6], 10)},
                                   std::stoi(f[7])});
    }
    return out;
}

// ---- genus-zero families -------------------------------------------------------

// j_n : X_0(n) = P^1 -> Q as a ratio of integer polynomials in h, low-to-high
// coefficients.
struct GenusZeroFamily {
    int n = 0;
    std::vector<Int> num, den;
};

namespace detail {

inline PolyQ to_polyq(const std::vector<Int>& c) {
    std::vector<Rat> q;
    q.reserve(c.size());
    for (const Int& v : c) q.emplace_back(v);
    return PolyQ(std::move(q));
}

inline bool poly_is_zero(const std::vector<Int>& c) {
    for (const Int& v : c)
        if (v != 0) return false;
    return true;
}

}  // namespace detail

inline void validate_family(const GenusZeroFamily& fam) {
    if (detail::poly_is_zero(fam.den))
        throw DegenerateMap("family denominator is identically zero");
    if (detail::poly_is_zero(fam.num))
        throw DegenerateMap("family numerator is identically zero");
    PolyQ g = poly_gcd(detail::to_polyq(fam.num), detail::to_polyq(fam.den));
    if (g.degree() > 0)
        throw DegenerateMap("family numerator and denominator share a factor");
}

inline Rat eval_poly(const std::vector<Int>& c, const Rat& h) {
    Rat acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * h + Rat(*it);
    return acc;
}

inline Rat eval_family(const GenusZeroFamily& fam, const Rat& h) {
    Rat d = eval_poly(fam.den, h);
    if (d == 0) throw PoleOfMap();
    return eval_poly(fam.num, h) / d;
}

// Line format: "family <n>" / "num <coeffs low-to-high>" / "den <coeffs>".
inline GenusZeroFamily parse_family(std::istream& in) {
    GenusZeroFamily fam;
    bool have_n = false, have_num = false, have_den = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "family") {
            if (!(ls >> fam.n)) throw ParseError("bad family degree line '" + line + "'");
            have_n = true;
        } else if (key == "num" || key == "den") {
            std::vector<Int>& dst = key == "num" ? fam.num : fam.den;
            std::string tok;
            while (ls >> tok) {
                try {
                    dst.emplace_back(tok, 10);
                } catch (const std::invalid_argument&) {
                    throw ParseError("bad coefficient '" + tok + "'");
                }
            }
            (key == "num" ? have_num : have_den) = true;
        } else {
            throw ParseError("unknown family spec line '" + line + "'");
        }
        if (have_n && have_num && have_den) break;
    }
    if (!have_n || !have_num || !have_den)
        throw ParseError("family spec needs 'family', 'num' and 'den' lines");
    validate_family(fam);
    return fam;
}

inline GenusZeroFamily load_family(const std::string& path) {
    std::string all = read_all(path);
    if (all.rfind("# fnv1a64 ", 0) == 0) all = load_checked(path);
    std::istringstream in(all);
    return parse_family(in);
}

inline std::string family_string(const GenusZeroFamily& fam) {
    std::string out = "family " + std::to_string(fam.n) + "\nnum";
    for (const Int& c : fam.num) out += " " + c.get_str();
    out += "\nden";
    for (const Int& c : fam.den) out += " " + c.get_str();
    out += "\n";
    return out;
}

// The family the tables print (j_13); other degrees are user-supplied specs.
inline GenusZeroFamily builtin_family(int n) {
    if (!is_isogeny_degree(n))
        throw DataError(std::to_string(n) + " is not an isogeny degree");
    std::string all = load_checked(data_dir() + "/families.txt");
    std::istringstream in(all);
    while (in) {
        GenusZeroFamily fam;
        try {
            fam = parse_family(in);
        } catch (const ParseError&) {
            break;
        }
        if (fam.n == n) return fam;
    }
    throw DataError("no built-in family for degree " + std::to_string(n));
}

// ---- family scan -------------------------------------------------------------

struct FamilyItem {
    Rat h;
    bool ok = true;
    double score = 0.0;
    std::string error;
};

// For each h of height <= H away from poles: realize the class with
// j = j_n(h), reduce the twist content, minimize, table a_p to N and take the
// Nagao score.
struct FamilyScan {
    using Item = FamilyItem;

    GenusZeroFamily fam;
    std::uint64_t H = 1;
    std::uint64_t N = 2;
    FactorBudget budget;
    CountOptions count;

    std::string config_string() const {
        return "family|" + std::to_string(fam.n) + "|" + fnv1a64_hex(family_string(fam)) + "|H" +
               std::to_string(H) + "|N" + std::to_string(N);
    }
    std::uint64_t num_chunks() const { return H; }

    std::vector<Item> run_chunk(std::uint64_t chunk) const {
        std::vector<Item> out;
        long b = static_cast<long>(chunk) + 1;
        long bound = static_cast<long>(H);
        for (long a = -bound; a <= bound; ++a) {
            if (b > 1 && (a == 0 || std::gcd(std::abs(a), b) != 1)) continue;
            Rat h = make_rat(Int(a), Int(b));
            Rat j;
            try {
                j = eval_family(fam, h);
            } catch (const PoleOfMap&) {
                continue;  // poles are skipped, not reported
            }
            try {
                ShortModel s = reduce_twist_content(curve_from_j(j, budget), budget);
                WeierstrassModel m = minimal_model(to_weierstrass(s), budget);
                ApTable t = ap_table(m, std::max<std::uint64_t>(N, 2), ApTableOptions{1, count});
                out.push_back(Item{h, true, nagao_score(t, N).value, ""});
            } catch (const Error& e) {
                out.push_back(Item{h, false, 0.0, e.what()});
            }
        }
        return out;
    }

    static std::string encode_item(const Item& it) {
        if (!it.ok) return "e " + rat_str(it.h) + " " + it.error;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%a", it.score);  // exact round-trip
        return "s " + rat_str(it.h) + " " + buf;
    }
    static Item decode_item(const std::string& line) {
        std::istringstream ls(line);
        std::string tag, h;
        if (!(ls >> tag >> h) || (tag != "s" && tag != "e"))
            throw DataError("bad family snapshot item '" + line + "'");
        Item it;
        it.h = parse_rat(h);
        if (tag == "s") {
            std::string v;
            ls >> v;
            it.score = std::strtod(v.c_str(), nullptr);
        } else {
            it.ok = false;
            std::getline(ls, it.error);
            if (!it.error.empty() && it.error[0] == ' ') it.error = it.error.substr(1);
        }
        return it;
    }
};

struct FamilyScanResult {
    std::vector<std::pair<Rat, double>> ranked;  // score descending
    std::vector<std::pair<Rat, std::string>> failures;
    bool completed = true;
};

inline FamilyScanResult family_scan(const GenusZeroFamily& fam, std::uint64_t H, std::uint64_t N,
                                    const FactorBudget& budget = {}, const ScanControl& ctl = {},
                                    const CountOptions& count = {}) {
    if (H < 1) throw Error("family scan needs H >= 1");
    if (N < 2) throw Error("family scan needs N >= 2");
    validate_family(fam);
    FamilyScan scan{fam, H, N, budget, count};
    auto run = run_scan(scan, ctl);
    FamilyScanResult res;
    res.completed = run.completed();
    for (auto& it : run.items) {
        if (it.ok)
            res.ranked.emplace_back(it.h, it.score);
        else
            res.failures.emplace_back(it.h, it.error);
    }
    if (res.completed) {
        std::sort(res.ranked.begin(), res.ranked.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second > y.second;
            return key_tie_less(x.first, y.first);
        });
    }
    return res;
}

}  // namespace twistscan
