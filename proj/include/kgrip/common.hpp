#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace kgrip {

using Vertex = int;

/// Unordered vertex pair stored canonically with a < b.
struct Edge {
    Vertex a = 0;
    Vertex b = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex u, Vertex v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Error hierarchy. The CLI maps these onto process exit codes.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    /// Residual (or residual bound) reached before giving up.
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

} // namespace kgrip
