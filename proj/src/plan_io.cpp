#include "ff/plan_io.hpp"

#include <cctype>
#include <sstream>
#include <string>
#include <unordered_map>

using namespace std;

namespace ff {

namespace {

// Lowercase, parentheses split off, single spaces.
string normalize(const string &line) {
    string spaced;
    for (char c : line) {
        if (c == '(' || c == ')') {
            spaced += ' ';
            spaced += c;
            spaced += ' ';
        } else {
            spaced += static_cast<char>(tolower(static_cast<unsigned char>(c)));
        }
    }
    istringstream in(spaced);
    string out, tok;
    while (in >> tok) {
        if (!out.empty())
            out += ' ';
        out += tok;
    }
    return out;
}

} // namespace

void write_plan(ostream &os, const Task &task, const Plan &plan) {
    for (ActionId a : plan.steps) {
        if (a >= task.actions.size())
            throw InputError("plan step references unknown action id " +
                             to_string(a));
        os << task.actions[a].display() << '\n';
    }
}

Plan read_plan(istream &is, const Task &task) {
    unordered_map<string, ActionId> by_name;
    for (const GroundAction &a : task.actions)
        by_name.emplace(normalize(a.display()), a.id);

    Plan plan;
    string line;
    for (size_t number = 1; getline(is, line); ++number) {
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == string::npos || line[first] == ';')
            continue;
        const auto it = by_name.find(normalize(line));
        if (it == by_name.end())
            throw InputError("plan line " + to_string(number) +
                             ": unknown action " + line.substr(first));
        plan.steps.push_back(it->second);
    }
    return plan;
}

} // namespace ff
