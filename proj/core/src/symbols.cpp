#include "lbeq/symbols.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lbeq {

namespace {

struct ParamTable {
    std::mutex mu;
    std::vector<std::string> names;
    std::map<std::string, int> index;
};

ParamTable& params() {
    static ParamTable t;
    return t;
}

// A deque keeps references to interned keys stable while the table grows.
struct JetVarTable {
    std::mutex mu;
    std::deque<JetVarKey> keys;
    std::map<std::pair<int, std::vector<int>>, int> index;
};

JetVarTable& jetvars() {
    static JetVarTable t;
    return t;
}

}  // namespace

int param_intern(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("parameter name must not be empty");
    auto& t = params();
    std::lock_guard lock(t.mu);
    auto it = t.index.find(name);
    if (it != t.index.end()) return it->second;
    int id = static_cast<int>(t.names.size());
    t.names.push_back(name);
    t.index.emplace(name, id);
    return id;
}

int param_lookup(const std::string& name) {
    auto& t = params();
    std::lock_guard lock(t.mu);
    auto it = t.index.find(name);
    return it == t.index.end() ? -1 : it->second;
}

const std::string& param_name(int id) {
    auto& t = params();
    std::lock_guard lock(t.mu);
    if (id < 0 || id >= static_cast<int>(t.names.size()))
        throw std::out_of_range("unknown parameter id " + std::to_string(id));
    return t.names[id];
}

int param_count() {
    auto& t = params();
    std::lock_guard lock(t.mu);
    return static_cast<int>(t.names.size());
}

int jetvar_intern(int field, const std::vector<int>& mu) {
    if (field < 0) throw std::invalid_argument("jet variable field index must be >= 0");
    for (int m : mu)
        if (m < 0) throw std::invalid_argument("jet variable multi-index must be nonnegative");
    auto& t = jetvars();
    std::lock_guard lock(t.mu);
    auto key = std::make_pair(field, mu);
    auto it = t.index.find(key);
    if (it != t.index.end()) return it->second;
    int id = static_cast<int>(t.keys.size());
    t.keys.push_back(JetVarKey{field, mu});
    t.index.emplace(std::move(key), id);
    return id;
}

const JetVarKey& jetvar_key(int id) {
    auto& t = jetvars();
    std::lock_guard lock(t.mu);
    if (id < 0 || id >= static_cast<int>(t.keys.size()))
        throw std::out_of_range("unknown jet variable id " + std::to_string(id));
    return t.keys[id];
}

int jetvar_order(int id) { return jetvar_key(id).order(); }

}  // namespace lbeq
