#pragma once

#include <stdexcept>
#include <string>

namespace augbias {

// Every failure raised by the library derives from Error so callers (and the
// grid runner's per-cell error log) can catch one type and read kind().
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& what) : Error("invalid_input", what) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& what) : Error("invalid_spec", what) {}
};

struct TrainingDiverged : Error {
    explicit TrainingDiverged(const std::string& what) : Error("training_diverged", what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error("schema_error", what) {}
};

struct PlanInfeasible : Error {
    explicit PlanInfeasible(const std::string& what) : Error("plan_infeasible", what) {}
};

struct InsufficientSamples : Error {
    explicit InsufficientSamples(const std::string& what) : Error("insufficient_samples", what) {}
};

struct UndefinedRatio : Error {
    explicit UndefinedRatio(const std::string& what) : Error("undefined_ratio", what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

}  // namespace augbias
