#pragma once

#include <stdexcept>
#include <string>

namespace bta {

// Error taxonomy shared by the library and the CLI exit codes:
// config_error -> 2, data_error -> 3, numeric_error -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : error {
    using error::error;
};

struct data_error : error {
    using error::error;
};

struct numeric_error : error {
    using error::error;
};

// Shape conflicts between operands. A config_error for exit-code purposes.
struct dimension_error : config_error {
    using config_error::config_error;
};

// Metric is mathematically undefined on the given input (e.g. AUC with a
// single class present).
struct undefined_metric_error : data_error {
    using data_error::data_error;
};

}  // namespace bta
