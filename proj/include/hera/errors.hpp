#pragma once

#include <stdexcept>
#include <string>

namespace hera {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyDocument : Error {
    EmptyDocument() : Error("document contains no word tokens") {}
};

struct DatasetNotFound : Error {
    explicit DatasetNotFound(const std::string& path)
        : Error("dataset not found: " + path) {}
};

struct DatasetEmpty : Error {
    explicit DatasetEmpty(const std::string& path)
        : Error("dataset has zero valid records: " + path) {}
};

struct BackendUnreachable : Error {
    using Error::Error;
};

struct BackendRejected : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(long budget)
        : Error("backend call budget exhausted (" + std::to_string(budget) + ")") {}
};

struct MissingEvent : Error {
    MissingEvent() : Error("RankParagraphs prompt requires an event") {}
};

struct NoEventsParsed : Error {
    NoEventsParsed() : Error("no events parsed from model response") {}
};

struct EmptyResponse : Error {
    EmptyResponse() : Error("model response is empty") {}
};

struct IdMismatch : Error {
    using Error::Error;
};

}  // namespace hera
