#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace diffalg {

/**
 * Declared dependency structure for a problem: which name is the underlying
 * parameter, which variables depend on which, and the formal argument lists
 * of opaque functions. Variables mentioned only inside expressions need no
 * declaration; these records matter for partial differentials (argument
 * lists), derivative chains, and jet composition.
 */
struct DependencyDecls {
    std::optional<std::string> base;
    std::set<std::string> vars;
    std::map<std::string, std::set<std::string>> depends;       // var -> parents
    std::map<std::string, std::vector<std::string>> functions;  // name -> formals

    bool is_function(const std::string& name) const { return functions.count(name) != 0; }

    // Throws UnknownFunction when the name is not declared.
    const std::vector<std::string>& function_args(const std::string& name) const;

    // The unique declared parent of a variable, if any. Throws
    // CyclicDependency via validate() rather than here.
    std::optional<std::string> parent_of(const std::string& var) const;

    // Registration helpers; each throws DuplicateDeclaration on conflicts.
    void set_base(const std::string& name);
    void declare_var(const std::string& name);
    void declare_depends(const std::string& var, const std::vector<std::string>& parents);
    void declare_function(const std::string& name, const std::vector<std::string>& formals);

    // Throws CyclicDependency when the depends graph has a cycle.
    void validate() const;
};

}  // namespace diffalg
