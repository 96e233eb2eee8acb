#pragma once

#include "ff/task.hpp"

#include <istream>
#include <ostream>

namespace ff {

// One "(name arg ...)" line per step, LF endings.
void write_plan(std::ostream &os, const Task &task, const Plan &plan);

// Reads the format written by write_plan. Blank lines and lines starting with
// ';' are skipped; matching is case-insensitive and whitespace-tolerant.
// Throws InputError on a line that names no ground action of `task`.
Plan read_plan(std::istream &is, const Task &task);

} // namespace ff
