#pragma once

// Frontend for a typed-STRIPS subset of PDDL with conjunctive conditional
// effects: parsing, static predicate detection and grounding.

#include "ff/connectivity.hpp"
#include "ff/task.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ff::pddl {

// Diagnostic with a source location (1-based). `line` is 0 when the problem
// is not tied to a position in the input.
class ParseError : public InputError {
public:
    ParseError(const std::string &file, int line, int column,
               const std::string &message);

    const std::string &file() const { return file_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string &message() const { return message_; }

private:
    std::string file_;
    int line_;
    int column_;
    std::string message_;
};

struct TypedName {
    std::string name;
    std::string type;
    friend bool operator==(const TypedName &, const TypedName &) = default;
};

// Predicate applied to terms. Terms starting with '?' are variables.
struct Atom {
    std::string predicate;
    std::vector<std::string> terms;
    friend bool operator==(const Atom &, const Atom &) = default;
};

struct LiftedEffect {
    std::vector<TypedName> forall;
    std::vector<Atom> condition;
    std::vector<Atom> adds;
    std::vector<Atom> deletes;
};

struct Schema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<Atom> precondition;
    // The first entry collects the unconditional literals.
    std::vector<LiftedEffect> effects;
};

struct PredicateSignature {
    std::string name;
    std::vector<std::string> arg_types;
};

struct LiftedTask {
    std::string domain_name;
    std::string problem_name;
    // (type, parent) in declaration order; "object" is the implicit root.
    std::vector<TypedName> types;
    // Domain constants followed by problem objects.
    std::vector<TypedName> objects;
    std::vector<PredicateSignature> predicates;
    std::vector<Schema> schemata;
    std::vector<Atom> init;
    std::vector<Atom> goal;

    bool is_subtype(const std::string &type, const std::string &ancestor) const;
    const PredicateSignature *find_predicate(const std::string &name) const;
};

using StaticPredicateSet = std::set<std::string>;

struct GroundingResult {
    Task task;
    ConnectivityGraph graph;
};

LiftedTask parse(std::string_view domain_text, std::string_view problem_text,
                 const std::string &domain_file = "domain",
                 const std::string &problem_file = "problem");

LiftedTask parse_files(const std::string &domain_path,
                       const std::string &problem_path);

StaticPredicateSet detect_statics(const LiftedTask &lifted);

// Instantiates the schemata, keeping exactly the actions whose preconditions
// are reachable under delete-relaxed semantics from the initial state.
GroundingResult ground(const LiftedTask &lifted);

} // namespace ff::pddl
