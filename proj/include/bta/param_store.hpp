#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "bta/matrix.hpp"
#include "bta/tape.hpp"

namespace bta {

/// Named parameter tensors with parallel gradient buffers. Iteration order is
/// insertion order, so optimizer sweeps and serialization replay identically.
/// Entries flagged non-trainable (batch-norm running statistics) are carried
/// in checkpoints but skipped by the optimizer and the gradient checker.
class ParameterStore {
public:
    struct Entry {
        std::string name;
        Matrix value;
        Matrix grad;
        bool trainable = true;
    };

    Matrix& add(const std::string& name, Matrix value, bool trainable = true);

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    Matrix& value(const std::string& name);
    const Matrix& value(const std::string& name) const;
    Matrix& grad(const std::string& name);
    bool trainable(const std::string& name) const;

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    void zero_grads();

    /// Bind a parameter as a tape leaf; bound gradients flow back with
    /// collect_grads().
    Tape::Node use(Tape& tape, const std::string& name);
    /// Add each bound leaf's tape gradient into the store's gradient buffer.
    void collect_grads(Tape& tape);

    bool operator==(const ParameterStore& o) const;

private:
    Entry& at(const std::string& name);
    const Entry& at(const std::string& name) const;

    std::vector<Entry> entries_;
    std::unordered_map<std::string, size_t> index_;
    std::vector<std::pair<size_t, Tape::Node>> bindings_;
    const Tape* bound_tape_ = nullptr;
};

}  // namespace bta
