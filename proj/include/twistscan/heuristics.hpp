#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "twistscan/ap_table.hpp"
#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/factor.hpp"
#include "twistscan/primes.hpp"
#include "twistscan/rational.hpp"
#include "twistscan/scan.hpp"

namespace twistscan {

// The unique squarefree integer representing q modulo rational squares.
// Equals the squarefree part of num*den; sign preserved.
inline Int squarefree_class(const Rat& q, const FactorBudget& budget = {}) {
    if (q == 0) throw ZeroInput();
    return squarefree_part(Int(q.get_num() * q.get_den()), budget);
}

// ---- Rogers frequency scan ---------------------------------------------------

struct FrequencyEntry {
    std::uint64_t count = 0;
    std::vector<Rat> witnesses;  // in canonical scan order
};

struct FrequencyTable {
    ShortModel model;
    std::uint64_t H = 0;
    std::map<Int, FrequencyEntry> classes;
    std::vector<std::pair<Rat, Int>> unresolved;  // (r, partially reduced value)
};

// One scan outcome per recorded r.
struct RogersItem {
    Rat r;
    bool resolved = true;
    Int value;  // D_r when resolved, else the partially reduced value
};

// Chunk c handles denominator b = c + 1.  For each r = a/b in lowest terms
// with |a| <= H, records the squarefree class of f(r) = (a^3 + A a b^2 +
// B b^3) / b^3, skipping roots of f.  N b has the same class as num*den of
// f(r), so no rational reduction is needed.
struct RogersScan {
    using Item = RogersItem;

    ShortModel model;
    std::uint64_t H;
    FactorBudget budget;

    std::string config_string() const {
        return "rogers|" + model.A.get_str() + "|" + model.B.get_str() + "|" +
               std::to_string(H) + "|tb" + std::to_string(budget.trial_bound) + "|rr" +
               std::to_string(budget.rho_tries) + "|ri" + std::to_string(budget.rho_iters);
    }
    std::uint64_t num_chunks() const { return H; }

    std::vector<Item> run_chunk(std::uint64_t chunk) const {
        std::vector<Item> out;
        long b = static_cast<long>(chunk) + 1;
        Int bz(b), b2z(b * b), b3z;
        b3z = b2z * b;
        long bound = static_cast<long>(H);
        for (long a = -bound; a <= bound; ++a) {
            if (b > 1 && (a == 0 || std::gcd(std::abs(a), b) != 1)) continue;
            Int az(a);
            Int N = az * az * az + model.A * az * b2z + model.B * b3z;
            if (N == 0) continue;  // r is a root of f
            Rat r = make_rat(az, bz);
            try {
                out.push_back(Item{r, true, squarefree_part(Int(N * bz), budget)});
            } catch (const FactorizationIncomplete& e) {
                out.push_back(Item{r, false, e.partial});
            }
        }
        return out;
    }

    static std::string encode_item(const Item& it) {
        return std::string(it.resolved ? "c " : "u ") + rat_str(it.r) + " " + it.value.get_str();
    }
    static Item decode_item(const std::string& line) {
        std::istringstream ls(line);
        std::string tag, r, v;
        if (!(ls >> tag >> r >> v) || (tag != "c" && tag != "u"))
            throw DataError("bad rogers snapshot item '" + line + "'");
        return Item{parse_rat(r), tag == "c", Int(v, 10)};
    }
};

struct RogersResult {
    FrequencyTable table;
    bool completed = true;
};

inline RogersResult rogers_scan(const ShortModel& model, std::uint64_t H,
                                const FactorBudget& budget = {}, const ScanControl& ctl = {}) {
    if (H < 1) throw Error("rogers scan needs H >= 1");
    RogersScan scan{model, H, budget};
    auto run = run_scan(scan, ctl);
    RogersResult res;
    res.completed = run.completed();
    res.table.model = model;
    res.table.H = H;
    for (auto& it : run.items) {
        if (it.resolved) {
            auto& e = res.table.classes[it.value];
            ++e.count;
            e.witnesses.push_back(it.r);
        } else {
            res.table.unresolved.emplace_back(it.r, it.value);
        }
    }
    return res;
}

// ---- Mazur sign bias -----------------------------------------------------------

struct BiasTrace {
    std::vector<std::pair<std::uint64_t, long long>> trace;  // (p, partial sum)
    long long min_bias = 0;   // includes the empty prefix, so always <= 0
    long long final_bias = 0;
};

inline BiasTrace mazur_bias(const ApTable& table, std::uint64_t t_max) {
    if (table.bound < t_max)
        throw InsufficientTable("table bound " + std::to_string(table.bound) +
                                " < t_max " + std::to_string(t_max));
    BiasTrace out;
    long long run = 0;
    for (const auto& rec : table.records) {
        if (rec.p > t_max) break;
        run += rec.ap > 0 ? 1 : (rec.ap < 0 ? -1 : 0);
        out.trace.emplace_back(rec.p, run);
        out.min_bias = std::min(out.min_bias, run);
    }
    out.final_bias = run;
    return out;
}

struct BiasRecord {
    long long D = 1;
    long long min_bias = 0;
    long long final_bias = 0;
    std::uint64_t t_max = 0;
    // |D| shares a factor with 2*disc: the kronecker transfer is approximate
    // at those primes and the twist should be recomputed exactly before any
    // certification.
    bool approx = false;
};

// Bias of E^(D) from the base table alone: kronecker-composed signs away from
// p | D, zero at p | D.  No point counting happens here; the per-twist cost is
// one kronecker evaluation per tabulated prime.
inline BiasRecord bias_of_twist(const ApTable& base, long long D, std::uint64_t t_max,
                                const Int& two_abs_disc) {
    BiasRecord rec;
    rec.D = D;
    rec.t_max = t_max;
    rec.approx = gcd(Int(static_cast<long>(D)), two_abs_disc) != 1;
    long long run = 0, minv = 0;
    for (const auto& r : base.records) {
        if (r.p > t_max) break;
        run += twisted_sign(r, D);
        if (run < minv) minv = run;
    }
    rec.min_bias = minv;
    rec.final_bias = run;
    return rec;
}

struct MazurScan {
    using Item = BiasRecord;

    const ApTable* base = nullptr;
    std::vector<long long> candidates;  // squarefree D values, ascending
    std::uint64_t t_max = 0;
    Int two_abs_disc;
    std::uint64_t chunk_size = 512;

    std::string config_string() const {
        std::string s = "mazur|" + model_str(base->model) + "|t" + std::to_string(t_max) + "|c" +
                        std::to_string(chunk_size) + "|n" + std::to_string(candidates.size());
        if (!candidates.empty())
            s += "|" + std::to_string(candidates.front()) + ":" + std::to_string(candidates.back());
        return s;
    }
    std::uint64_t num_chunks() const { return (candidates.size() + chunk_size - 1) / chunk_size; }

    std::vector<Item> run_chunk(std::uint64_t chunk) const {
        std::vector<Item> out;
        std::uint64_t lo = chunk * chunk_size;
        std::uint64_t hi = std::min<std::uint64_t>(lo + chunk_size, candidates.size());
        out.reserve(hi - lo);
        for (std::uint64_t i = lo; i < hi; ++i)
            out.push_back(bias_of_twist(*base, candidates[i], t_max, two_abs_disc));
        return out;
    }

    static std::string encode_item(const Item& it) {
        return std::to_string(it.D) + " " + std::to_string(it.min_bias) + " " +
               std::to_string(it.final_bias) + " " + std::to_string(it.t_max) + " " +
               (it.approx ? "1" : "0");
    }
    static Item decode_item(const std::string& line) {
        std::istringstream ls(line);
        Item it;
        int approx;
        if (!(ls >> it.D >> it.min_bias >> it.final_bias >> it.t_max >> approx))
            throw DataError("bad mazur snapshot item '" + line + "'");
        it.approx = approx != 0;
        return it;
    }
};

// Squarefree integers in [lo, hi], zero excluded, ascending.
inline std::vector<long long> squarefree_range(long long lo, long long hi) {
    if (lo > hi) return {};
    std::uint64_t amax = static_cast<std::uint64_t>(
        std::max(std::llabs(lo), std::llabs(hi)));
    auto sf = squarefree_up_to(amax);
    std::vector<long long> out;
    for (long long d = lo; d <= hi; ++d) {
        if (d == 0) continue;
        if (sf[static_cast<std::uint64_t>(std::llabs(d))]) out.push_back(d);
    }
    return out;
}

struct MazurScanResult {
    std::vector<BiasRecord> records;  // ascending min_bias, then |D|, then sign
    bool completed = true;
};

inline bool bias_record_less(const BiasRecord& a, const BiasRecord& b) {
    if (a.min_bias != b.min_bias) return a.min_bias < b.min_bias;
    long long aa = std::llabs(a.D), ab = std::llabs(b.D);
    if (aa != ab) return aa < ab;
    return a.D < b.D;  // negative twist first
}

inline MazurScanResult mazur_twist_scan(const ApTable& base, long long D_lo, long long D_hi,
                                        std::uint64_t t_max, const ScanControl& ctl = {},
                                        std::uint64_t chunk_size = 512) {
    if (base.bound < t_max)
        throw InsufficientTable("table bound " + std::to_string(base.bound) +
                                " < t_max " + std::to_string(t_max));
    if (chunk_size < 1) throw Error("chunk size must be >= 1");
    CurveInvariants inv = compute_invariants(base.model);
    MazurScan scan;
    scan.base = &base;
    scan.candidates = squarefree_range(D_lo, D_hi);
    scan.t_max = t_max;
    scan.chunk_size = chunk_size;
    scan.two_abs_disc = 2 * abs(inv.disc);
    auto run = run_scan(scan, ctl);
    MazurScanResult res;
    res.completed = run.completed();
    res.records = std::move(run.items);
    if (res.completed) std::sort(res.records.begin(), res.records.end(), bias_record_less);
    return res;
}

// ---- Nagao score ----------------------------------------------------------------

struct NagaoScore {
    double value = 0.0;
    std::uint64_t N = 0;
    WeierstrassModel model;
};

// S(E, N) = sum over p <= N of (2 - a_p) / N_p log p with N_p = p + 1 - a_p
// at every prime, bad ones included (each bad prime perturbs one term only).
inline NagaoScore nagao_score(const ApTable& table, std::uint64_t N) {
    if (table.bound < N)
        throw InsufficientTable("table bound " + std::to_string(table.bound) +
                                " < N " + std::to_string(N));
    double s = 0.0;
    for (const auto& rec : table.records) {
        if (rec.p > N) break;
        double a = static_cast<double>(rec.ap);
        double np = static_cast<double>(rec.p) + 1.0 - a;
        s += (2.0 - a) / np * std::log(static_cast<double>(rec.p));
    }
    return NagaoScore{s, N, table.model};
}

// ---- top-k selection --------------------------------------------------------------

enum class RankDirection { Max, Min };

inline bool key_tie_less(long long a, long long b) {
    long long aa = std::llabs(a), ab = std::llabs(b);
    if (aa != ab) return aa < ab;
    return a < b;
}
inline bool key_tie_less(const Int& a, const Int& b) {
    Int aa = abs(a), ab = abs(b);
    if (aa != ab) return aa < ab;
    return a < b;
}
inline bool key_tie_less(const Rat& a, const Rat& b) {
    Int ha = naive_height(a), hb = naive_height(b);
    if (ha != hb) return ha < hb;
    return a < b;
}

// Deterministic top-k: by score in the requested direction, ties by |key|
// then sign (negative first).
template <class K>
std::vector<K> rank_candidates(std::vector<std::pair<K, double>> scored, std::size_t k,
                               RankDirection dir) {
    std::sort(scored.begin(), scored.end(), [dir](const auto& x, const auto& y) {
        if (x.second != y.second)
            return dir == RankDirection::Max ? x.second > y.second : x.second < y.second;
        return key_tie_less(x.first, y.first);
    });
    if (scored.size() > k) scored.resize(k);
    std::vector<K> out;
    out.reserve(scored.size());
    for (auto& [key, score] : scored) out.push_back(std::move(key));
    return out;
}

}  // namespace twistscan
