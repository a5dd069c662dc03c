#include "bta/param_store.hpp"

namespace bta {

Matrix& ParameterStore::add(const std::string& name, Matrix value, bool trainable) {
    if (has(name)) throw config_error("ParameterStore: duplicate parameter '" + name + "'");
    index_[name] = entries_.size();
    entries_.push_back(Entry{name, std::move(value), Matrix(), trainable});
    Entry& e = entries_.back();
    e.grad = Matrix(e.value.rows(), e.value.cols());
    return e.value;
}

ParameterStore::Entry& ParameterStore::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end())
        throw config_error("ParameterStore: unknown parameter '" + name + "'");
    return entries_[it->second];
}

const ParameterStore::Entry& ParameterStore::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw config_error("ParameterStore: unknown parameter '" + name + "'");
    return entries_[it->second];
}

Matrix& ParameterStore::value(const std::string& name) { return at(name).value; }
const Matrix& ParameterStore::value(const std::string& name) const { return at(name).value; }
Matrix& ParameterStore::grad(const std::string& name) { return at(name).grad; }
bool ParameterStore::trainable(const std::string& name) const { return at(name).trainable; }

void ParameterStore::zero_grads() {
    for (Entry& e : entries_) e.grad = Matrix(e.value.rows(), e.value.cols());
}

Tape::Node ParameterStore::use(Tape& tape, const std::string& name) {
    if (bound_tape_ != &tape) {
        bindings_.clear();
        bound_tape_ = &tape;
    }
    auto it = index_.find(name);
    if (it == index_.end())
        throw config_error("ParameterStore: unknown parameter '" + name + "'");
    Tape::Node n = tape.leaf(entries_[it->second].value);
    bindings_.emplace_back(it->second, n);
    return n;
}

void ParameterStore::collect_grads(Tape& tape) {
    if (bound_tape_ != &tape)
        throw config_error("ParameterStore: collect_grads on a tape with no bindings");
    for (auto& [idx, node] : bindings_) {
        const Matrix& g = tape.grad(node);
        Matrix& buf = entries_[idx].grad;
        for (size_t i = 0; i < buf.size(); ++i) buf[i] += g[i];
    }
    bindings_.clear();
    bound_tape_ = nullptr;
}

bool ParameterStore::operator==(const ParameterStore& o) const {
    if (entries_.size() != o.entries_.size()) return false;
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name != o.entries_[i].name) return false;
        if (!(entries_[i].value == o.entries_[i].value)) return false;
    }
    return true;
}

}  // namespace bta
