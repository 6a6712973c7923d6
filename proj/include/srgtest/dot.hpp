#pragma once

#include <string>

#include "srgtest/model.hpp"
#include "srgtest/srg.hpp"
#include "srgtest/tester.hpp"

namespace srgtest {

std::string export_dot(const Mlsts& m);
std::string export_dot(const StochasticRefusalGraph& srg);
std::string export_dot(const Tester& t);

}  // namespace srgtest
