// Registry of named reference cases with their oracles.

#pragma once

#include "qtff/dynamics.hpp"
#include "qtff/interconvert.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qtff::scenarios {

class UnknownCaseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Schmidt vectors (squared coefficients) of three 4x4 pure states.
struct SchmidtTriple {
    std::vector<interconvert::ExactProbVec> states;
};

struct ThermalDemo {
    interconvert::GibbsRational gibbs;
    interconvert::ExactProbVec p;
    interconvert::ExactProbVec q;
};

using Payload = std::variant<dynamics::Scenario, SchmidtTriple, ThermalDemo>;

struct NamedCase {
    std::string name;
    std::string description;
    Payload payload;
    // Closed-form state for dynamics cases that have one.
    std::function<QState(double)> closed_form;

    const dynamics::Scenario& scenario() const { return std::get<dynamics::Scenario>(payload); }
    bool is_dynamics() const noexcept { return std::holds_alternative<dynamics::Scenario>(payload); }
};

// Sorted, stable list of case names.
std::vector<std::string> list_cases();
// Throws UnknownCaseError naming the available cases.
const NamedCase& get_case(const std::string& name);

}  // namespace qtff::scenarios
