#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/jobs.hpp"
#include "twistscan/modp.hpp"
#include "twistscan/numeric.hpp"
#include "twistscan/primes.hpp"

namespace twistscan {

struct ApRecord {
    std::uint64_t p;
    long ap;
    ReductionType type;

    bool operator==(const ApRecord&) const = default;
};

struct ApTable {
    WeierstrassModel model;
    std::uint64_t bound = 0;
    std::vector<ApRecord> records;  // one per prime <= bound, sorted by p
};

struct ApTableOptions {
    unsigned threads = 1;
    CountOptions count;
};

// Complete a_p table for all primes <= bound.  Parallel over primes; the
// merged table is identical for any worker count.  Good records are checked
// against the Hasse bound on the way in.
inline ApTable ap_table(const WeierstrassModel& m, std::uint64_t bound,
                        const ApTableOptions& opts = {}) {
    if (bound < 2) throw Error("ap_table bound must be >= 2");
    CurveInvariants inv = compute_invariants(m);
    auto primes = primes_up_to(bound);
    ApTable table{m, bound, std::vector<ApRecord>(primes.size())};
    parallel_for(primes.size(), opts.threads, [&](std::uint64_t i) {
        std::uint64_t p = primes[i];
        ReductionType t = reduction_type(m, inv, p);
        long a;
        if (t == ReductionType::Good) {
            a = ap(m, inv, p, opts.count);
            if (static_cast<double>(a) * static_cast<double>(a) > 4.0 * static_cast<double>(p))
                throw Error("Hasse bound violated at p = " + std::to_string(p) +
                            " (a_p = " + std::to_string(a) + ")");
        } else if (t == ReductionType::SplitMultiplicative) {
            a = 1;
        } else if (t == ReductionType::NonsplitMultiplicative) {
            a = -1;
        } else {
            a = 0;
        }
        table.records[i] = ApRecord{p, a, t};
    });
    return table;
}

// ---- cache file -------------------------------------------------------------
//
//   apcache 1 [a1,a2,a3,a4,a6] <bound>
//   <p> <a_p> <g|s|n|a>
//   ...
//
// sorted by p, LF endings, no trailing whitespace; round-trips bit-exactly.

inline std::string ap_cache_string(const ApTable& t) {
    std::string out = "apcache 1 " + model_str(t.model) + " " + std::to_string(t.bound) + "\n";
    for (const auto& r : t.records) {
        out += std::to_string(r.p);
        out += ' ';
        out += std::to_string(r.ap);
        out += ' ';
        out += static_cast<char>(r.type);
        out += '\n';
    }
    return out;
}

inline void save_ap_table(const ApTable& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f << ap_cache_string(t);
}

inline ApTable parse_ap_cache(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty a_p cache");
    std::istringstream hs(header);
    std::string magic, version, model;
    std::uint64_t bound;
    if (!(hs >> magic >> version >> model >> bound) || magic != "apcache" || version != "1")
        throw DataError("bad a_p cache header '" + header + "'");
    ApTable t;
    t.model = parse_model(model);
    t.bound = bound;
    std::string line;
    std::uint64_t last_p = 0;
    while (std::getline(in, line)) {
        if (line.empty()) throw DataError("blank line in a_p cache");
        std::istringstream ls(line);
        std::uint64_t p;
        long a;
        char code;
        std::string rest;
        if (!(ls >> p >> a >> code) || (ls >> rest))
            throw DataError("bad a_p cache record '" + line + "'");
        if (p <= last_p) throw DataError("a_p cache records out of order at p = " + std::to_string(p));
        if (code != 'g' && code != 's' && code != 'n' && code != 'a')
            throw DataError("bad reduction-type code in '" + line + "'");
        t.records.push_back(ApRecord{p, a, static_cast<ReductionType>(code)});
        last_p = p;
    }
    return t;
}

inline ApTable load_ap_table(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open a_p cache '" + path + "'");
    return parse_ap_cache(f);
}

// ---- twist transfer ---------------------------------------------------------

// a_p of the quadratic twist by squarefree D, valid off 2 D disc:
// a_p(E^(D)) = (D|p) a_p(E).
inline long twisted_ap(const ApRecord& rec, const Int& D) {
    if (rec.type != ReductionType::Good)
        throw TransferNotApplicable("twist transfer needs good reduction at p = " +
                                    std::to_string(rec.p));
    if (rec.p == 2 || mpz_divisible_ui_p(D.get_mpz_t(), rec.p))
        throw TransferNotApplicable("twist transfer undefined at p = " + std::to_string(rec.p) +
                                    " (p | 2D)");
    Int p(static_cast<unsigned long>(rec.p));
    return kronecker(D, p) * rec.ap;
}

// Total companion used by the scans: 0 where the twist is (taken to be)
// additive, the kronecker-composed value elsewhere.  At p | 2*disc this is
// the documented approximation; callers flag such twists for exact recheck.
inline int twisted_sign(const ApRecord& rec, long long D) {
    if (D % static_cast<long long>(rec.p) == 0) return 0;
    int s = rec.ap > 0 ? 1 : (rec.ap < 0 ? -1 : 0);
    if (s == 0) return 0;
    return kronecker(D, static_cast<long long>(rec.p)) * s;
}

}  // namespace twistscan
