#pragma once

#include <stdexcept>
#include <string>

namespace pme {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PME_DEFINE_ERROR(Name)                \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

PME_DEFINE_ERROR(BracketError);
PME_DEFINE_ERROR(DomainError);
PME_DEFINE_ERROR(ShapeError);
PME_DEFINE_ERROR(EmptyRegionError);
PME_DEFINE_ERROR(ParameterError);
PME_DEFINE_ERROR(UnknownModelError);
PME_DEFINE_ERROR(MissingParamError);
PME_DEFINE_ERROR(PartitionError);
PME_DEFINE_ERROR(DimensionError);
PME_DEFINE_ERROR(NumericalError);
PME_DEFINE_ERROR(SchemaError);
PME_DEFINE_ERROR(IoError);

#undef PME_DEFINE_ERROR

class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& what, long iteration)
        : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}
    long iteration() const noexcept { return iteration_; }

private:
    long iteration_;
};

/// CSV parse failure with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class RaggedRowError : public Error {
public:
    RaggedRowError(std::size_t line, std::size_t got, std::size_t expected)
        : Error("ragged row at line " + std::to_string(line) + ": " + std::to_string(got) +
                " fields, expected " + std::to_string(expected)),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace pme
