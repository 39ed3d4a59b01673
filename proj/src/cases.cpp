#include "hw/cases.hpp"

#include <algorithm>

#include "hw/error.hpp"

namespace hw {

namespace {

const CaseScript kCases[] = {
#include "hw_cases.inc"
};

} // namespace

const std::vector<CaseScript>& builtin_cases()
{
    static const std::vector<CaseScript> cases = [] {
        std::vector<CaseScript> v(std::begin(kCases), std::end(kCases));
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    }();
    return cases;
}

const CaseScript* find_case(const std::string& name)
{
    for (const auto& c : builtin_cases())
        if (c.name == name) return &c;
    return nullptr;
}

RunResult run_case(const CaseScript& c, const RunOptions& opts)
{
    RunResult r;
    try {
        r = run_script(c.text, c.name + ".toml", opts);
    } catch (const Error& e) {
        r.error = e.what();
        r.error_kind = e.kind();
        r.ok = false;
    }
    r.name = c.name;
    return r;
}

std::vector<RunResult> run_cases(const std::vector<std::string>& names, const RunOptions& opts)
{
    std::vector<const CaseScript*> todo;
    if (names.empty()) {
        for (const auto& c : builtin_cases()) todo.push_back(&c);
    } else {
        for (const auto& n : names) {
            const CaseScript* c = find_case(n);
            if (!c) throw Error(ErrorKind::InvalidArgument, "unknown case '" + n + "'");
            todo.push_back(c);
        }
    }
    std::vector<RunResult> out(todo.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < todo.size(); ++i) out[i] = run_case(*todo[i], opts);
    return out;
}

} // namespace hw
