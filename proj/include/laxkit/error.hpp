#pragma once

#include <stdexcept>
#include <string>

namespace laxkit {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: arguments, parameters, file contents.
class UsageError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A resonance whose compatibility condition fails.
class ObstructionError : public Error {
public:
    ObstructionError(int level, const std::string& what)
        : Error("obstruction at level " + std::to_string(level) + ": " + what), level_(level) {}
    int level() const { return level_; }

private:
    int level_;
};

// Numerical integration left the configured bound.
class BlowUpError : public Error {
public:
    BlowUpError(double time, const std::string& what) : Error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

// A numerical routine met a value it cannot continue from; level is -1 when not applicable.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, int level = -1) : Error(what), level_(level) {}
    int level() const { return level_; }

private:
    int level_;
};

}  // namespace laxkit
