#pragma once

#include <stdexcept>
#include <string>

namespace pdakit {

// Error taxonomy shared by the library and the CLI exit-code mapping.
enum class ErrorKind {
    MalformedArray,   // ragged grid, id out of range
    UnknownSymbol,
    InvalidArray,     // an operation required a validated array
    BadParams,        // construction precondition failed
    Infeasible,       // construction feasibility condition failed
    NotDivisible,
    BlockNotFound,
    NoPerfectMatching,
    PostValidationFailed,
    DimensionMismatch,
    NullSpaceExhausted,
    RankDeficient,
    TooLarge,
    ParseError,       // file/CLI input could not be parsed
    IoError,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::MalformedArray: return "MalformedArray";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::InvalidArray: return "InvalidArray";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::NotDivisible: return "NotDivisible";
        case ErrorKind::BlockNotFound: return "BlockNotFound";
        case ErrorKind::NoPerfectMatching: return "NoPerfectMatching";
        case ErrorKind::PostValidationFailed: return "PostValidationFailed";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NullSpaceExhausted: return "NullSpaceExhausted";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

}  // namespace pdakit
