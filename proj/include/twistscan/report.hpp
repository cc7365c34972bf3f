#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistscan/factor.hpp"
#include "twistscan/heuristics.hpp"
#include "twistscan/ranklb.hpp"
#include "twistscan/scan.hpp"

namespace twistscan {

inline std::string format_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---- CSV reports (UTF-8, LF endings) -----------------------------------------

// Rogers: "D,count,witnesses", rows by count descending, ties by |D| then sign.
inline std::string rogers_csv(const FrequencyTable& t, std::size_t top) {
    std::vector<std::pair<Int, double>> scored;
    scored.reserve(t.classes.size());
    for (const auto& [D, e] : t.classes) scored.emplace_back(D, static_cast<double>(e.count));
    auto keys = rank_candidates(std::move(scored), top, RankDirection::Max);
    std::string out = "D,count,witnesses\n";
    for (const Int& D : keys) {
        const auto& e = t.classes.at(D);
        out += D.get_str() + "," + std::to_string(e.count) + ",";
        for (std::size_t i = 0; i < e.witnesses.size(); ++i) {
            if (i) out += ";";
            out += rat_str(e.witnesses[i]);
        }
        out += "\n";
    }
    return out;
}

// Mazur: "D,min_bias,final_bias,t_max" in scan order (min_bias ascending).
inline std::string mazur_csv(const std::vector<BiasRecord>& records, std::size_t top) {
    std::string out = "D,min_bias,final_bias,t_max\n";
    std::size_t n = std::min(top, records.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        out += std::to_string(r.D) + "," + std::to_string(r.min_bias) + "," +
               std::to_string(r.final_bias) + "," + std::to_string(r.t_max) + "\n";
    }
    return out;
}

// RFC-4180 quoting for fields that embed commas (curve keys do).
inline std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Nagao: "key,score,N", rows by score descending.
inline std::string nagao_csv(const std::vector<std::pair<std::string, double>>& rows,
                             std::uint64_t N) {
    std::string out = "key,score,N\n";
    for (const auto& [key, score] : rows)
        out += csv_field(key) + "," + format_score(score) + "," + std::to_string(N) + "\n";
    return out;
}

// ---- report self-validation ----------------------------------------------------

enum class ReportKind { Rogers, Mazur, Nagao };

namespace detail {

// Comma split that honors RFC-4180 double-quoted fields.
inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline bool is_squarefree_checked(const Int& D, const FactorBudget& budget) {
    Factorization f = factor_integer(D, budget);
    for (auto& [p, e] : f.factors)
        if (e > 1) return false;
    if (!f.complete() && mpz_perfect_power_p(f.unfactored.get_mpz_t())) return false;
    return true;  // unsplit non-power cofactors pass on trust, within budget
}

}  // namespace detail

// Schema, sortedness and squarefree-ness checks for an emitted report.
inline void validate_report(const std::string& content, ReportKind kind,
                            const FactorBudget& budget = {}) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw DataError("report is empty");
    const char* want = kind == ReportKind::Rogers ? "D,count,witnesses"
                       : kind == ReportKind::Mazur ? "D,min_bias,final_bias,t_max"
                                                   : "key,score,N";
    if (line != want) throw DataError("report header '" + line + "' != '" + want + "'");
    bool first = true;
    Int prev_key_abs;
    long long prev_count = 0, prev_min = 0;
    double prev_score = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) throw DataError("blank report line");
        auto f = detail::split(line, ',');
        switch (kind) {
            case ReportKind::Rogers: {
                if (f.size() != 3) throw DataError("bad rogers row '" + line + "'");
                Int D(f[0], 10);
                if (!detail::is_squarefree_checked(D, budget))
                    throw DataError("non-squarefree class " + f[0] + " in report");
                long long c = std::stoll(f[1]);
                if (!first && c > prev_count) throw DataError("rogers counts out of order");
                prev_count = c;
                break;
            }
            case ReportKind::Mazur: {
                if (f.size() != 4) throw DataError("bad mazur row '" + line + "'");
                Int D(f[0], 10);
                if (!detail::is_squarefree_checked(D, budget))
                    throw DataError("non-squarefree twist " + f[0] + " in report");
                long long mb = std::stoll(f[1]);
                if (std::stoll(f[1]) > std::stoll(f[2]))
                    throw DataError("min_bias above final_bias in '" + line + "'");
                if (!first && mb < prev_min) throw DataError("mazur rows out of order");
                prev_min = mb;
                break;
            }
            case ReportKind::Nagao: {
                if (f.size() != 3) throw DataError("bad nagao row '" + line + "'");
                double s = std::stod(f[1]);
                if (!first && s > prev_score) throw DataError("nagao scores out of order");
                prev_score = s;
                break;
            }
        }
        first = false;
    }
    (void)prev_key_abs;
}

// ---- rank certificates -------------------------------------------------------

inline nlohmann::json certificate_json(const RankCertificate& cert) {
    nlohmann::json j;
    j["model"] = model_str(cert.model);
    j["lower_bound"] = cert.lower_bound;
    j["tolerance"] = cert.tol;
    j["eps"] = cert.eps;
    j["points"] = nlohmann::json::array();
    for (const auto& P : cert.points)
        j["points"].push_back({rat_str(P.x), rat_str(P.y)});
    j["gram"] = cert.gram;
    return j;
}

}  // namespace twistscan
