#include "diffalg/decls.hpp"

#include <functional>

#include "diffalg/error.hpp"

namespace diffalg {

const std::vector<std::string>& DependencyDecls::function_args(
    const std::string& name) const {
    const auto it = functions.find(name);
    if (it == functions.end())
        throw UnknownFunction("function " + name + " is not declared");
    return it->second;
}

std::optional<std::string> DependencyDecls::parent_of(const std::string& var) const {
    const auto it = depends.find(var);
    if (it == depends.end() || it->second.empty()) return std::nullopt;
    return *it->second.begin();
}

void DependencyDecls::set_base(const std::string& name) {
    if (base) throw DuplicateDeclaration("base is already declared as " + *base);
    if (functions.count(name))
        throw DuplicateDeclaration(name + " is already declared as a function");
    base = name;
    vars.insert(name);
}

void DependencyDecls::declare_var(const std::string& name) {
    if (functions.count(name))
        throw DuplicateDeclaration(name + " is already declared as a function");
    if (!vars.insert(name).second)
        throw DuplicateDeclaration("variable " + name + " is already declared");
}

void DependencyDecls::declare_depends(const std::string& var,
                                      const std::vector<std::string>& parents) {
    if (functions.count(var))
        throw DuplicateDeclaration(var + " is already declared as a function");
    if (depends.count(var))
        throw DuplicateDeclaration("dependencies of " + var + " are already declared");
    auto& set = depends[var];
    for (const auto& p : parents) {
        if (functions.count(p))
            throw DuplicateDeclaration(p + " is already declared as a function");
        set.insert(p);
        vars.insert(p);
    }
    vars.insert(var);
}

void DependencyDecls::declare_function(const std::string& name,
                                       const std::vector<std::string>& formals) {
    if (vars.count(name) || depends.count(name))
        throw DuplicateDeclaration(name + " is already declared as a variable");
    if (functions.count(name))
        throw DuplicateDeclaration("function " + name + " is already declared");
    for (const auto& f : formals) vars.insert(f);
    functions[name] = formals;
}

void DependencyDecls::validate() const {
    // Depth-first walk over the depends edges; a node on the active stack
    // seen again closes a cycle.
    std::map<std::string, int> state;  // 0 new, 1 active, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        const int s = state[v];
        if (s == 1) throw CyclicDependency("dependency cycle through " + v);
        if (s == 2) return;
        state[v] = 1;
        const auto it = depends.find(v);
        if (it != depends.end())
            for (const auto& p : it->second) visit(p);
        state[v] = 2;
    };
    for (const auto& [v, _] : depends) visit(v);
}

}  // namespace diffalg
