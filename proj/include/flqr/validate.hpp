#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flqr {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the full acceptance suite with its pinned configurations. Every
// tolerance is fixed here, in code. With line_out set, each criterion's
// pass/fail line is printed as soon as it finishes.
std::vector<CriterionResult> validate_all(int jobs, std::ostream* line_out = nullptr);

void print_criterion_line(std::ostream& out, const CriterionResult& r);

// One line per criterion plus a summary; returns the number of failures.
int validate_report(std::ostream& out, const std::vector<CriterionResult>& results);

int count_failures(const std::vector<CriterionResult>& results);

} // namespace flqr
