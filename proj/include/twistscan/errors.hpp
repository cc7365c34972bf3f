#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace twistscan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ec-core
struct SingularModel : Error {
    SingularModel() : Error("model is singular (discriminant = 0)") {}
};
struct ZeroTwist : Error {
    ZeroTwist() : Error("quadratic twist by 0 is undefined") {}
};
struct PointNotOnCurve : Error {
    PointNotOnCurve() : Error("point does not satisfy the curve equation") {}
};

// modp
struct BadReduction : Error {
    unsigned long p;
    explicit BadReduction(unsigned long p_)
        : Error("bad reduction at p = " + std::to_string(p_)), p(p_) {}
};
struct NonMinimalModel : Error {
    unsigned long p;
    explicit NonMinimalModel(unsigned long p_)
        : Error("model is not minimal at p = " + std::to_string(p_)), p(p_) {}
};
struct TransferNotApplicable : Error {
    explicit TransferNotApplicable(const std::string& what) : Error(what) {}
};

// heuristics
struct InsufficientTable : Error {
    explicit InsufficientTable(const std::string& what) : Error(what) {}
};
struct ZeroInput : Error {
    ZeroInput() : Error("operation undefined at 0") {}
};
struct FactorizationIncomplete : Error {
    mpz_class partial;    // squarefree-so-far times the unfactored cofactor
    mpz_class cofactor;   // composite part the budget could not split
    FactorizationIncomplete(mpz_class partial_, mpz_class cofactor_)
        : Error("factoring budget exhausted; unfactored cofactor has " +
                std::to_string(mpz_sizeinbase(cofactor_.get_mpz_t(), 10)) + " digits"),
          partial(std::move(partial_)),
          cofactor(std::move(cofactor_)) {}
};

// families
struct PoleOfMap : Error {
    PoleOfMap() : Error("rational map evaluated at a pole") {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};
struct DegenerateMap : Error {
    explicit DegenerateMap(const std::string& what) : Error(what) {}
};

// mwrank-lite
struct PrecisionUnreachable : Error {
    explicit PrecisionUnreachable(const std::string& what) : Error(what) {}
};

// fixtures / reports / snapshots
struct DataError : Error {
    explicit DataError(const std::string& what) : Error(what) {}
};

}  // namespace twistscan
